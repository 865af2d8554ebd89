"""Partitions, congruences, congruence lattices, quotients, class algebras.

Partitions are kept in a canonical form throughout: blocks sorted by their
minimum element, elements ascending inside each block.  The text form
`{0,2}{1,3}` serializes exactly that order with no spaces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import Algebra, AlgebraError, OperationTable


class NotACongruenceError(AlgebraError):
    pass


@dataclass(frozen=True)
class Partition:
    size: int
    blocks: tuple  # tuple of tuples, canonical form

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if not b:
                raise AlgebraError("empty block")
            seen.update(b)
        if seen != set(range(self.size)):
            raise AlgebraError(f"blocks do not partition range({self.size})")
        if sum(len(b) for b in self.blocks) != self.size:
            raise AlgebraError("blocks overlap")
        canon = tuple(tuple(sorted(b)) for b in sorted(self.blocks, key=min))
        if canon != self.blocks:
            raise AlgebraError("blocks not in canonical form; use Partition.of()")

    @staticmethod
    def of(size: int, blocks) -> "Partition":
        canon = tuple(tuple(sorted(b)) for b in sorted((set(b) for b in blocks), key=min))
        return Partition(size, canon)

    @staticmethod
    def identity(size: int) -> "Partition":
        return Partition(size, tuple((i,) for i in range(size)))

    @staticmethod
    def full(size: int) -> "Partition":
        return Partition(size, (tuple(range(size)),))

    @staticmethod
    def from_representatives(size: int, rep) -> "Partition":
        blocks = {}
        for x in range(size):
            blocks.setdefault(rep[x], []).append(x)
        return Partition.of(size, blocks.values())

    @staticmethod
    def parse(text: str, size: int) -> "Partition":
        """Parse the `{0,2}{1,3}` form."""
        text = text.strip()
        if not text:
            raise AlgebraError("empty partition text")
        blocks = []
        rest = text
        while rest:
            if not rest.startswith("{"):
                raise AlgebraError(f"bad partition syntax: {text!r}")
            end = rest.find("}")
            if end < 0:
                raise AlgebraError(f"unbalanced braces in {text!r}")
            body = rest[1:end].strip()
            if not body:
                raise AlgebraError(f"empty block in {text!r}")
            try:
                blocks.append([int(t) for t in body.split(",")])
            except ValueError:
                raise AlgebraError(f"bad block {body!r} in {text!r}") from None
            rest = rest[end + 1:]
        return Partition.of(size, blocks)

    def __str__(self):
        return "".join("{" + ",".join(str(x) for x in b) + "}" for b in self.blocks)

    def block_index(self):
        """element -> index of its block, blocks in canonical order."""
        rep = [0] * self.size
        for i, b in enumerate(self.blocks):
            for x in b:
                rep[x] = i
        return rep

    def block_of(self, x: int):
        for b in self.blocks:
            if x in b:
                return b
        raise AlgebraError(f"element {x} out of range")

    def related(self, x: int, y: int) -> bool:
        return self.block_of(x) == self.block_of(y)

    def is_identity(self) -> bool:
        return len(self.blocks) == self.size

    def is_full(self) -> bool:
        return len(self.blocks) == 1

    def refines(self, other: "Partition") -> bool:
        """Every block of self is contained in a block of other."""
        idx = other.block_index()
        return all(len({idx[x] for x in b}) == 1 for b in self.blocks)

    def join(self, other: "Partition") -> "Partition":
        parent = list(range(self.size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for part in (self, other):
            for b in part.blocks:
                for y in b[1:]:
                    parent[find(b[0])] = find(y)
        return Partition.from_representatives(self.size, [find(x) for x in range(self.size)])

    def meet(self, other: "Partition") -> "Partition":
        mine, theirs = self.block_index(), other.block_index()
        return Partition.from_representatives(
            self.size, [(mine[x], theirs[x]) for x in range(self.size)]
        )

    def pairs(self):
        for b in self.blocks:
            for x, y in itertools.combinations(b, 2):
                yield x, y


def is_congruence(alg: Algebra, p: Partition):
    """(True, None) or (False, violation) with a concrete violating instance.

    A violation is (op_name, args1, args2, value1, value2): blockwise-equal
    argument tuples sent to different blocks.
    """
    if p.size != alg.domain:
        raise AlgebraError("partition size does not match algebra domain")
    idx = p.block_index()
    for op in alg.operations:
        r = op.arity
        # one-coordinate perturbations suffice: compatibility is checked
        # coordinatewise and composed transitively
        for args in itertools.product(range(alg.domain), repeat=r):
            v = op.values[op.index(args)]
            for i in range(r):
                for y in p.block_of(args[i]):
                    if y == args[i]:
                        continue
                    args2 = args[:i] + (y,) + args[i + 1:]
                    v2 = op.values[op.index(args2)]
                    if idx[v] != idx[v2]:
                        return False, (op.name, args, args2, v, v2)
    return True, None


def principal_congruence(alg: Algebra, a: int, b: int) -> Partition:
    """Smallest congruence identifying a and b.

    Worklist closure: each newly merged pair is pushed through every basic
    operation with one free coordinate and all others frozen at constants;
    the union-find supplies the reflexive-symmetric-transitive closure.
    """
    n = alg.domain
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return None
        parent[ry] = rx
        return (x, y)

    work = []
    first = union(a, b)
    if first:
        work.append(first)
    while work:
        u, v = work.pop()
        for op in alg.operations:
            r = op.arity
            for i in range(r):
                for rest in itertools.product(range(n), repeat=r - 1):
                    args_u = rest[:i] + (u,) + rest[i:]
                    args_v = rest[:i] + (v,) + rest[i:]
                    pu = op.values[op.index(args_u)]
                    pv = op.values[op.index(args_v)]
                    merged = union(pu, pv)
                    if merged:
                        work.append(merged)
    return Partition.from_representatives(n, [find(x) for x in range(n)])


def all_congruences(alg: Algebra):
    """Every congruence, canonically sorted (identity first, full last).

    Computed as the join closure of the principal congruences; sound and
    complete for finite algebras since every congruence is a join of
    principal ones.
    """
    n = alg.domain
    found = {Partition.identity(n)}
    principals = set()
    for a in range(n):
        for b in range(a + 1, n):
            principals.add(principal_congruence(alg, a, b))
    found |= principals
    frontier = set(found)
    while frontier:
        new = set()
        for p in frontier:
            for q in principals:
                j = p.join(q)
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return sorted(found, key=lambda p: (alg.domain - len(p.blocks), str(p)))


def maximal_congruences(alg: Algebra):
    """Maximal proper congruences under refinement."""
    congs = [p for p in all_congruences(alg) if not p.is_full()]
    return [
        p
        for p in congs
        if not any(q is not p and p.refines(q) and p != q for q in congs)
    ]


def is_simple(alg: Algebra) -> bool:
    """Only the identity and full relations are congruences."""
    if alg.domain == 1:
        return True
    return all(
        principal_congruence(alg, a, b).is_full()
        for a in range(alg.domain)
        for b in range(a + 1, alg.domain)
    )


def quotient_algebra(alg: Algebra, p: Partition, label=None):
    """(quotient Algebra, block labeling).  Blocks are labeled 0.. by
    ascending minimum element; operations act on representatives."""
    ok, violation = is_congruence(alg, p)
    if not ok:
        raise NotACongruenceError(f"not a congruence, violation: {violation}")
    idx = p.block_index()
    reps = [b[0] for b in p.blocks]
    k = len(p.blocks)
    ops = []
    for op in alg.operations:
        vals = tuple(
            idx[op.values[op.index(tuple(reps[a] for a in args))]]
            for args in itertools.product(range(k), repeat=op.arity)
        )
        ops.append(OperationTable(op.name, op.arity, k, vals))
    return Algebra(k, tuple(ops), label=label), p.blocks


def class_algebra(alg: Algebra, p: Partition, block, label=None) -> Algebra:
    """Restriction of the algebra to one congruence block, relabeled."""
    block = tuple(sorted(block))
    if block not in p.blocks:
        raise AlgebraError(f"{block} is not a block of {p}")
    ok, violation = is_congruence(alg, p)
    if not ok:
        raise NotACongruenceError(f"not a congruence, violation: {violation}")
    return alg.restrict(block, label=label)
