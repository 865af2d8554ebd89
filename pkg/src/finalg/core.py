"""Finite operation tables and finite algebras.

An operation table stores a total k-ary operation on {0..n-1} as a flat
row-major value sequence: the tuple (x1,...,xk) lives at index
sum(xi * n**(k-i)), first argument most significant.  This indexing is the
one convention used everywhere (files, hashing, witness replay).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


class AlgebraError(Exception):
    pass


class NotClosedError(AlgebraError):
    """A restriction target is not closed; carries an escaping argument tuple."""

    def __init__(self, subset, witness, value):
        self.subset = tuple(subset)
        self.witness = tuple(witness)
        self.value = value
        super().__init__(
            f"subset {self.subset} not closed: "
            f"op({', '.join(map(str, witness))}) = {value}"
        )


class ParseError(AlgebraError):
    def __init__(self, message, line=None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(message + where)


@dataclass(frozen=True)
class OperationTable:
    name: str
    arity: int
    domain: int
    values: tuple

    def __post_init__(self):
        if self.arity < 1:
            raise AlgebraError(f"arity must be >= 1, got {self.arity}")
        if self.domain < 1:
            raise AlgebraError(f"domain must be >= 1, got {self.domain}")
        if len(self.values) != self.domain**self.arity:
            raise AlgebraError(
                f"operation {self.name}: expected {self.domain ** self.arity} "
                f"values, got {len(self.values)}"
            )
        for v in self.values:
            if not 0 <= v < self.domain:
                raise AlgebraError(f"operation {self.name}: value {v} out of range")

    def index(self, args) -> int:
        """Row-major index of an argument tuple (no range checks)."""
        idx = 0
        for a in args:
            idx = idx * self.domain + a
        return idx

    def eval(self, args) -> int:
        if len(args) != self.arity:
            raise AlgebraError(
                f"operation {self.name}: expected {self.arity} arguments, got {len(args)}"
            )
        idx = 0
        for a in args:
            if not 0 <= a < self.domain:
                raise AlgebraError(f"operation {self.name}: argument {a} out of range")
            idx = idx * self.domain + a
        return self.values[idx]

    def __call__(self, *args) -> int:
        return self.eval(args)

    def all_args(self):
        """Argument tuples in row-major (lexicographic) order."""
        return itertools.product(range(self.domain), repeat=self.arity)


def projection(arity: int, coord: int, domain: int, name=None) -> OperationTable:
    """The coord-th k-ary projection as an ordinary table (0-based coord)."""
    if not 0 <= coord < arity:
        raise AlgebraError(f"projection coordinate {coord} out of range for arity {arity}")
    vals = tuple(t[coord] for t in itertools.product(range(domain), repeat=arity))
    return OperationTable(name or f"p{coord + 1}", arity, domain, vals)


def compose(outer: OperationTable, inners) -> OperationTable:
    """Pointwise composition outer(g1(x),...,gk(x)); inners share arity and domain."""
    inners = list(inners)
    if len(inners) != outer.arity:
        raise AlgebraError(
            f"compose: outer arity {outer.arity} but {len(inners)} inner operations"
        )
    if not inners:
        raise AlgebraError("compose: no inner operations")
    l, n = inners[0].arity, inners[0].domain
    if n != outer.domain:
        raise AlgebraError("compose: domain mismatch between outer and inners")
    for g in inners:
        if g.arity != l or g.domain != n:
            raise AlgebraError("compose: inner operations must share arity and domain")
    vals = []
    for args in itertools.product(range(n), repeat=l):
        idx = 0
        for a in args:
            idx = idx * n + a
        inner_vals = tuple(g.values[idx] for g in inners)
        vals.append(outer.values[outer.index(inner_vals)])
    name = f"{outer.name}({','.join(g.name for g in inners)})"
    return OperationTable(name, l, n, tuple(vals))


def restrict(op: OperationTable, subset) -> OperationTable:
    """Restriction of op to a closed subset, relabeled to 0..|subset|-1.

    Labels follow ascending original order.  Raises NotClosedError with an
    escaping argument tuple if some value leaves the subset.
    """
    subset = sorted(set(subset))
    pos = {a: i for i, a in enumerate(subset)}
    s = len(subset)
    vals = []
    for args in itertools.product(subset, repeat=op.arity):
        v = op.values[op.index(args)]
        if v not in pos:
            raise NotClosedError(subset, args, v)
        vals.append(pos[v])
    return OperationTable(op.name, op.arity, s, tuple(vals))


def is_closed(op: OperationTable, subset) -> bool:
    subset = set(subset)
    return all(
        op.values[op.index(args)] in subset
        for args in itertools.product(sorted(subset), repeat=op.arity)
    )


def is_idempotent(op: OperationTable) -> bool:
    return all(op.values[op.index((x,) * op.arity)] == x for x in range(op.domain))


def is_cyclic(op: OperationTable) -> bool:
    """Invariant under cyclic shift of the arguments."""
    for args in op.all_args():
        shifted = args[1:] + args[:1]
        if op.values[op.index(args)] != op.values[op.index(shifted)]:
            return False
    return True


def is_symmetric(op: OperationTable) -> bool:
    """Invariant under every permutation of the arguments."""
    for args in op.all_args():
        base = op.values[op.index(args)]
        for perm in itertools.permutations(args):
            if op.values[op.index(perm)] != base:
                return False
    return True


def is_commutative(op: OperationTable) -> bool:
    if op.arity != 2:
        raise AlgebraError(f"is_commutative expects a binary operation, got arity {op.arity}")
    return all(op(x, y) == op(y, x) for x, y in op.all_args())


def is_conservative(op: OperationTable) -> bool:
    return all(op.values[op.index(args)] in args for args in op.all_args())


def _require_ternary(op, what):
    if op.arity != 3:
        raise AlgebraError(f"{what} expects a ternary operation, got arity {op.arity}")


def is_majority(op: OperationTable) -> bool:
    _require_ternary(op, "is_majority")
    return all(
        op(x, x, y) == x and op(x, y, x) == x and op(y, x, x) == x
        for x in range(op.domain)
        for y in range(op.domain)
    )


def is_minority(op: OperationTable) -> bool:
    _require_ternary(op, "is_minority")
    return all(
        op(x, y, y) == x and op(y, x, y) == x and op(y, y, x) == x
        for x in range(op.domain)
        for y in range(op.domain)
    )


def is_malcev(op: OperationTable) -> bool:
    _require_ternary(op, "is_malcev")
    return all(
        op(x, y, y) == x and op(y, y, x) == x
        for x in range(op.domain)
        for y in range(op.domain)
    )


@dataclass(frozen=True)
class Algebra:
    domain: int
    operations: tuple
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "operations", tuple(self.operations))
        seen = set()
        for op in self.operations:
            if op.domain != self.domain:
                raise AlgebraError(
                    f"operation {op.name} has domain {op.domain}, algebra has {self.domain}"
                )
            if op.name in seen:
                raise AlgebraError(f"duplicate operation name {op.name!r}")
            seen.add(op.name)

    def op(self, name: str) -> OperationTable:
        for o in self.operations:
            if o.name == name:
                return o
        raise AlgebraError(f"no operation named {name!r}")

    def is_idempotent(self) -> bool:
        return all(is_idempotent(o) for o in self.operations)

    def signature(self):
        return tuple((o.name, o.arity) for o in self.operations)

    def restrict(self, subset, label=None) -> "Algebra":
        """Subalgebra on a closed subset, relabeled by ascending original element."""
        return Algebra(
            len(set(subset)),
            tuple(restrict(o, subset) for o in self.operations),
            label=label,
        )


@dataclass(frozen=True)
class PartialTable:
    """Operation table with unknown entries (None); search-module input only."""

    name: str
    arity: int
    domain: int
    values: tuple  # entries in [0, domain) or None

    def __post_init__(self):
        if len(self.values) != self.domain**self.arity:
            raise AlgebraError(
                f"partial table {self.name}: expected {self.domain ** self.arity} "
                f"entries, got {len(self.values)}"
            )
        for v in self.values:
            if v is not None and not 0 <= v < self.domain:
                raise AlgebraError(f"partial table {self.name}: value {v} out of range")

    @staticmethod
    def from_entries(name, arity, domain, entries) -> "PartialTable":
        """Build from {args: value}; unspecified cells stay unknown."""
        vals = [None] * domain**arity
        for args, v in entries.items():
            idx = 0
            for a in args:
                idx = idx * domain + a
            vals[idx] = v
        return PartialTable(name, arity, domain, tuple(vals))


def product(algebras, label=None) -> Algebra:
    """Direct product; elements encoded mixed-radix, first factor most significant."""
    algebras = list(algebras)
    if not algebras:
        raise AlgebraError("product of no algebras")
    sig = algebras[0].signature()
    for a in algebras[1:]:
        if a.signature() != sig:
            raise AlgebraError("product: operation signatures do not match")
    sizes = [a.domain for a in algebras]
    n = 1
    for s in sizes:
        n *= s

    def decode(e):
        coords = []
        for s in reversed(sizes):
            coords.append(e % s)
            e //= s
        return tuple(reversed(coords))

    def encode(coords):
        e = 0
        for c, s in zip(coords, sizes):
            e = e * s + c
        return e

    ops = []
    for oi, (name, arity) in enumerate(sig):
        factor_ops = [a.operations[oi] for a in algebras]
        vals = []
        for args in itertools.product(range(n), repeat=arity):
            cols = [decode(a) for a in args]
            res = tuple(
                f.values[f.index(tuple(col[j] for col in cols))]
                for j, f in enumerate(factor_ops)
            )
            vals.append(encode(res))
        ops.append(OperationTable(name, arity, n, tuple(vals)))
    return Algebra(n, tuple(ops), label=label)


def parse_algebra(text: str, label=None) -> Algebra:
    """Parse the algebra file format.

    Format: line `domain <n>`, then per operation a line `op <name> <arity>`
    followed by exactly n**arity whitespace-separated integers (line breaks
    arbitrary).  `#` starts a comment.  ASCII only.
    """
    tokens = []  # (token, line_number)
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for tok in line.split():
            tokens.append((tok, ln))
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take(what):
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError(f"unexpected end of input, expected {what}",
                             tokens[-1][1] if tokens else None)
        tok, ln = tokens[pos]
        pos += 1
        return tok, ln

    def take_int(what):
        tok, ln = take(what)
        try:
            return int(tok), ln
        except ValueError:
            raise ParseError(f"expected {what}, got {tok!r}", ln) from None

    kw, ln = take("'domain'")
    if kw != "domain":
        raise ParseError(f"expected 'domain', got {kw!r}", ln)
    n, ln = take_int("domain size")
    if n < 1:
        raise ParseError(f"domain size must be positive, got {n}", ln)

    ops = []
    while peek() is not None:
        kw, ln = take("'op'")
        if kw != "op":
            raise ParseError(f"expected 'op', got {kw!r}", ln)
        name, _ = take("operation name")
        arity, ln = take_int("arity")
        if arity < 1:
            raise ParseError(f"arity must be positive, got {arity}", ln)
        count = n**arity
        vals = []
        for _ in range(count):
            v, ln = take_int(f"value for op {name}")
            if not 0 <= v < n:
                raise ParseError(f"value {v} out of range for domain {n}", ln)
            vals.append(v)
        ops.append(OperationTable(name, arity, n, tuple(vals)))
    return Algebra(n, tuple(ops), label=label)


def serialize_algebra(alg: Algebra) -> str:
    """Canonical text form: declaration order, row-major values, one op per block."""
    lines = [f"domain {alg.domain}"]
    for op in alg.operations:
        lines.append(f"op {op.name} {op.arity}")
        row = alg.domain ** max(op.arity - 1, 0)
        vals = op.values
        for start in range(0, len(vals), row):
            lines.append(" ".join(str(v) for v in vals[start:start + row]))
    return "\n".join(lines) + "\n"
