"""Closure computation inside finite powers A^m.

This is the engine behind subuniverse generation, free algebras / clone
membership, cyclic-term search and the binary relation Sg{(a,b),(b,a)}.

Power tuples are stored as `bytes`, one byte per coordinate.  When
n**arity <= 256 an operation is applied pointwise with byte-lane integer
arithmetic plus bytes.translate, which keeps the hot loop in C: the lanes
hold the row-major cell index of each coordinate's argument tuple, and the
translation table maps cell index to value.

The closure order is canonical: breadth-first rounds, operations in
declaration order, argument index tuples in lexicographic order restricted
to those using at least one element of the current frontier.  Witness links
always reference strictly earlier elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import Algebra, AlgebraError, OperationTable

DEFAULT_CAP = 5_000_000


@dataclass(frozen=True)
class TermTree:
    """Term over an algebra's basic operations; leaves are variable indices."""

    op: str | None  # operation name, None for a variable leaf
    children: tuple = ()
    var: int = -1

    @staticmethod
    def variable(i: int) -> "TermTree":
        return TermTree(None, (), i)

    @staticmethod
    def node(op_name: str, children) -> "TermTree":
        return TermTree(op_name, tuple(children), -1)

    def is_variable(self) -> bool:
        return self.op is None


def render_term(tree: TermTree, names) -> str:
    """Fully parenthesized prefix form, e.g. g(x, g(x, y, z), z)."""
    if tree.is_variable():
        return names[tree.var]
    inner = ", ".join(render_term(c, names) for c in tree.children)
    return f"{tree.op}({inner})"


def term_depth(tree: TermTree) -> int:
    if tree.is_variable():
        return 0
    return 1 + max(term_depth(c) for c in tree.children)


def eval_term(tree: TermTree, alg: Algebra, args) -> int:
    """Evaluate a term tree on domain elements."""
    if tree.is_variable():
        return args[tree.var]
    op = alg.op(tree.op)
    return op.eval([eval_term(c, alg, args) for c in tree.children])


def eval_term_table(tree: TermTree, alg: Algebra, arity: int) -> OperationTable:
    """The term operation's full table (row-major)."""
    vals = tuple(
        eval_term(tree, alg, args)
        for args in itertools.product(range(alg.domain), repeat=arity)
    )
    return OperationTable("t", arity, alg.domain, vals)


class _Applier:
    """Pointwise application of one basic operation to power elements."""

    __slots__ = ("arity", "fast", "coeffs", "lut", "values", "domain")

    def __init__(self, op: OperationTable):
        self.arity = op.arity
        self.values = op.values
        self.domain = op.domain
        cells = op.domain**op.arity
        self.fast = cells <= 256
        if self.fast:
            self.coeffs = tuple(op.domain ** (op.arity - 1 - j) for j in range(op.arity))
            lut = bytearray(256)
            lut[:cells] = bytes(op.values)
            self.lut = bytes(lut)
        else:
            self.coeffs = ()
            self.lut = b""

    def apply(self, arg_ints, m: int) -> bytes:
        acc = 0
        for c, v in zip(self.coeffs, arg_ints):
            acc += c * v
        return acc.to_bytes(m, "big").translate(self.lut)

    def apply_slow(self, arg_bytes, m: int) -> bytes:
        n, vals = self.domain, self.values
        idx = [0] * m
        for b in arg_bytes:
            for i, x in enumerate(b):
                idx[i] = idx[i] * n + x
        return bytes(vals[i] for i in idx)


@dataclass
class GeneratedSet:
    """Fixpoint (or truncated prefix) of closure inside a finite power."""

    base: Algebra
    exponent: int
    elements: list = field(default_factory=list)  # bytes, insertion order
    position: dict = field(default_factory=dict)  # bytes -> index
    witnesses: list = field(default_factory=list)  # per element: None or (op_i, parent idxs)
    generators: list = field(default_factory=list)  # bytes
    truncated: bool = False
    stop_reason: str | None = None  # "cap" | "targets" | "region" | "predicate"

    def __len__(self):
        return len(self.elements)

    def tuples(self):
        """Elements as plain int tuples, in canonical order."""
        return [tuple(e) for e in self.elements]

    def contains(self, tup):
        """True / False / None (inconclusive: absent but the closure was cut short)."""
        if len(tup) != self.exponent:
            raise AlgebraError(
                f"tuple length {len(tup)} does not match exponent {self.exponent}"
            )
        if bytes(tup) in self.position:
            return True
        return None if self.truncated else False

    def witness_term(self, tup) -> TermTree:
        """A term evaluating to `tup` on the generators (coordinatewise)."""
        key = bytes(tup)
        if key not in self.position:
            raise AlgebraError(f"tuple {tuple(tup)} is not a member")
        gen_pos = {}
        for j, g in enumerate(self.generators):
            gen_pos.setdefault(g, j)
        memo = {}

        def build(i):
            if i in memo:
                return memo[i]
            w = self.witnesses[i]
            if w is None:
                t = TermTree.variable(gen_pos[self.elements[i]])
            else:
                op_i, parents = w
                t = TermTree.node(
                    self.base.operations[op_i].name, [build(p) for p in parents]
                )
            memo[i] = t
            return t

        return build(self.position[key])

    def export_text(self) -> str:
        lines = [f"exponent {self.exponent}", f"count {len(self.elements)}"]
        for e in self.elements:
            lines.append(" ".join(str(v) for v in e))
        return "\n".join(lines) + "\n"


def generate(
    base: Algebra,
    m: int,
    generators,
    cap: int | None = None,
    targets=None,
    region=None,
    stop_predicate=None,
    max_steps: int | None = None,
) -> GeneratedSet:
    """Deterministic BFS closure of generator tuples in the power A^m.

    Early exits (all flagged via `truncated` + `stop_reason`):
      - targets: iterable of tuples; stop once every target has appeared;
      - region: set of allowed values; stop once some element lies entirely
        inside it (used for absorption-style tests);
      - stop_predicate: bytes -> bool, stop once it accepts a new element;
      - cap: element-count budget ("cap" is a reported state, not an error);
      - max_steps: budget on operation applications, for closures whose
        element count stays modest while the combination count explodes.
        Deterministic, so truncation points are reproducible.
    """
    if cap is None:
        cap = DEFAULT_CAP
    n = base.domain
    gen_list = []
    for g in generators:
        g = tuple(g)
        if len(g) != m:
            raise AlgebraError(f"generator {g} has length {len(g)}, expected {m}")
        for v in g:
            if not 0 <= v < n:
                raise AlgebraError(f"generator entry {v} out of range")
        gen_list.append(bytes(g))
    if not gen_list:
        raise AlgebraError("no generators")

    gset = GeneratedSet(base=base, exponent=m, generators=list(gen_list))
    elements = gset.elements
    position = gset.position
    witnesses = gset.witnesses
    ints = []

    target_set = {bytes(t) for t in targets} if targets is not None else None
    region_set = frozenset(region) if region is not None else None

    def stop_for(e: bytes):
        if target_set is not None:
            target_set.discard(e)
            if not target_set:
                return "targets"
        if region_set is not None and set(e) <= region_set:
            return "region"
        if stop_predicate is not None and stop_predicate(e):
            return "predicate"
        return None

    stop = None
    for g in gen_list:
        if g not in position:
            position[g] = len(elements)
            elements.append(g)
            ints.append(int.from_bytes(g, "big"))
            witnesses.append(None)
            stop = stop or stop_for(g)
    if not stop and len(elements) > cap:
        stop = "cap"
    if stop:
        gset.truncated = True
        gset.stop_reason = stop
        return gset

    appliers = [_Applier(op) for op in base.operations]

    def insert(res, op_i, parents):
        nonlocal stop
        if res in position:
            return False
        position[res] = len(elements)
        elements.append(res)
        ints.append(int.from_bytes(res, "big"))
        witnesses.append((op_i, parents))
        reason = stop_for(res)
        if reason:
            stop = reason
        elif len(elements) > cap:
            stop = "cap"
        return True

    steps_left = max_steps if max_steps is not None else None
    fstart = 0
    while fstart < len(elements) and not stop:
        size = len(elements)
        for op_i, ap in enumerate(appliers):
            if stop:
                break
            k = ap.arity
            if ap.fast:
                c = ap.coeffs
                lut = ap.lut
                if k == 1:
                    c0 = c[0]
                    for i in range(fstart, size):
                        res = (c0 * ints[i]).to_bytes(m, "big").translate(lut)
                        if insert(res, op_i, (i,)) and stop:
                            break
                    if steps_left is not None:
                        steps_left -= max(size - fstart, 0)
                elif k == 2:
                    c0, c1 = c
                    for i in range(size):
                        a = c0 * ints[i]
                        jlo = 0 if i >= fstart else fstart
                        for j in range(jlo, size):
                            res = (a + c1 * ints[j]).to_bytes(m, "big").translate(lut)
                            if insert(res, op_i, (i, j)) and stop:
                                break
                        if stop:
                            break
                        if steps_left is not None:
                            steps_left -= size - jlo
                            if steps_left <= 0:
                                stop = "steps"
                                break
                elif k == 3:
                    c0, c1, c2 = c
                    for i in range(size):
                        a = c0 * ints[i]
                        fi = i >= fstart
                        for j in range(size):
                            ab = a + c1 * ints[j]
                            klo = 0 if (fi or j >= fstart) else fstart
                            for kk in range(klo, size):
                                res = (ab + c2 * ints[kk]).to_bytes(m, "big").translate(lut)
                                if insert(res, op_i, (i, j, kk)) and stop:
                                    break
                            if stop:
                                break
                            if steps_left is not None:
                                steps_left -= size - klo
                                if steps_left <= 0:
                                    stop = "steps"
                                    break
                        if stop:
                            break
                else:
                    nsteps = 0
                    for args in _frontier_tuples(size, fstart, k):
                        acc = 0
                        for cc, idx in zip(c, args):
                            acc += cc * ints[idx]
                        res = acc.to_bytes(m, "big").translate(lut)
                        if insert(res, op_i, args) and stop:
                            break
                        nsteps += 1
                        if steps_left is not None and nsteps >= steps_left:
                            stop = "steps"
                            break
                    if steps_left is not None:
                        steps_left -= nsteps
            else:
                nsteps = 0
                for args in _frontier_tuples(size, fstart, k):
                    res = ap.apply_slow([elements[idx] for idx in args], m)
                    if insert(res, op_i, args) and stop:
                        break
                    nsteps += 1
                    if steps_left is not None and nsteps >= steps_left:
                        stop = "steps"
                        break
                if steps_left is not None:
                    steps_left -= nsteps
        fstart = size

    if stop:
        gset.truncated = True
        gset.stop_reason = stop
    return gset


def _frontier_tuples(size, fstart, k):
    """Index tuples over range(size) with >= 1 index in [fstart, size), lex order."""

    def rec(prefix, used_frontier, depth):
        if depth == k - 1:
            lo = 0 if used_frontier else fstart
            for i in range(lo, size):
                yield prefix + (i,)
        else:
            for i in range(size):
                yield from rec(prefix + (i,), used_frontier or i >= fstart, depth + 1)

    return rec((), False, 0)


def sg(base: Algebra, subset, cap=None) -> GeneratedSet:
    """Subuniverse generated by a set of domain elements (power m = 1)."""
    return generate(base, 1, [(x,) for x in subset], cap=cap)


def sg_closure(base: Algebra, subset, cap=None) -> tuple:
    """Sorted elements of Sg(subset)."""
    g = sg(base, subset, cap=cap)
    return tuple(sorted(e[0] for e in g.elements))


def projection_tuples(n: int, k: int):
    """The k coordinate projections of A^(n^k) feeding free_algebra."""
    cells = list(itertools.product(range(n), repeat=k))
    return [tuple(cell[j] for cell in cells) for j in range(k)]


def free_algebra(base: Algebra, k: int, cap=None, **kw) -> GeneratedSet:
    """Closure of the k projections in A^(n^k); complete => exactly Clo_k(A).

    Each element, read as a value sequence, is the row-major table of a
    k-ary term operation.
    """
    if k < 1:
        raise AlgebraError(f"free_algebra arity must be >= 1, got {k}")
    return generate(base, base.domain**k, projection_tuples(base.domain, k), cap=cap, **kw)


def clone_membership(base: Algebra, op: OperationTable, cap=None, max_steps=None):
    """Is op a term operation of base?  Returns (True, witness) / (False, None)
    / (None, None) when the search was truncated without a hit."""
    if op.domain != base.domain:
        raise AlgebraError("clone_membership: domain mismatch")
    target = tuple(op.values)
    gset = free_algebra(base, op.arity, cap=cap, targets=[target], max_steps=max_steps)
    found = bytes(target) in gset.position
    if found:
        return True, gset.witness_term(target)
    return (None, None) if gset.truncated else (False, None)


def _rotation_permutation(n: int, k: int):
    """Position permutation induced by cyclically shifting arguments."""
    cells = list(itertools.product(range(n), repeat=k))
    pos = {cell: i for i, cell in enumerate(cells)}
    return [pos[cell[1:] + cell[:1]] for cell in cells]


def cyclic_terms(base: Algebra, k: int, cap=None, limit=None, max_steps=None):
    """k-ary cyclic term operations, in generation order.

    Returns (tables, complete).  complete=False means the closure was cut
    short (by cap or limit), so the list is a lower bound only.
    """
    if k < 2:
        raise AlgebraError(f"cyclic_terms arity must be >= 2, got {k}")
    n = base.domain
    perm = _rotation_permutation(n, k)
    rng = range(len(perm))

    hits = []

    def is_cyclic_elem(e):
        return all(e[i] == e[perm[i]] for i in rng)

    if limit is None:
        gset = free_algebra(base, k, cap=cap, max_steps=max_steps)
        for e in gset.elements:
            if is_cyclic_elem(e):
                hits.append(e)
    else:
        def predicate(e):
            if is_cyclic_elem(e):
                hits.append(e)
                return len(hits) >= limit
            return False

        gset = free_algebra(base, k, cap=cap, max_steps=max_steps,
                            stop_predicate=predicate)

    tables = [
        OperationTable(f"c{i}", k, n, tuple(e)) for i, e in enumerate(hits)
    ]
    return tables, not gset.truncated


def has_cyclic_term(base: Algebra, k: int, cap=None, max_steps=None):
    """True / False / None (inconclusive); early exit on the first cyclic term."""
    n = base.domain
    perm = _rotation_permutation(n, k)
    rng = range(len(perm))
    gset = free_algebra(
        base, k, cap=cap, max_steps=max_steps,
        stop_predicate=lambda e: all(e[i] == e[perm[i]] for i in rng),
    )
    if gset.truncated and gset.stop_reason == "predicate":
        return True
    if gset.truncated:
        return None
    return False


@dataclass
class RabReport:
    """Analysis of R = Sg{(a,b),(b,a)} inside A^2."""

    relation: GeneratedSet
    kind: str | None  # "automorphism-graph" | "linked" | "other"; None = inconclusive
    diagonal: list  # [(c, TermTree)] for each (c, c) in R -- loop witnesses
    link_tolerances: tuple  # (tol1, tol2) as sorted tuples of pairs
    link_congruences: tuple  # (blocks1, blocks2) as tuples of sorted-tuple blocks


def rab_analyze(base: Algebra, a: int, b: int, cap=None) -> RabReport:
    """Classify R_ab = Sg{(a,b),(b,a)} and report its diagonal and links."""
    if a == b:
        raise AlgebraError("rab_analyze requires a != b")
    rel = generate(base, 2, [(a, b), (b, a)], cap=cap)
    pairs = [tuple(e) for e in rel.elements]
    left = {}
    right = {}
    for x, y in pairs:
        left.setdefault(x, set()).add(y)
        right.setdefault(y, set()).add(x)

    diagonal = [(x, rel.witness_term((x, x))) for x, y in sorted(pairs) if x == y]

    tol1 = sorted(
        (x1, x2)
        for x1 in left
        for x2 in left
        if x1 != x2 and left[x1] & left[x2]
    )
    tol2 = sorted(
        (y1, y2)
        for y1 in right
        for y2 in right
        if y1 != y2 and right[y1] & right[y2]
    )

    def closure_blocks(universe, tol):
        parent = {x: x for x in universe}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x, y in tol:
            parent[find(x)] = find(y)
        blocks = {}
        for x in universe:
            blocks.setdefault(find(x), []).append(x)
        return tuple(tuple(sorted(bl)) for bl in sorted(blocks.values(), key=min))

    blocks1 = closure_blocks(sorted(left), tol1)
    blocks2 = closure_blocks(sorted(right), tol2)

    if rel.truncated:
        kind = None
    elif all(len(v) == 1 for v in left.values()) and all(
        len(v) == 1 for v in right.values()
    ):
        kind = "automorphism-graph"
    elif len(blocks1) == 1 and len(blocks2) == 1:
        kind = "linked"
    else:
        kind = "other"

    return RabReport(
        relation=rel,
        kind=kind,
        diagonal=diagonal,
        link_tolerances=(tuple(tol1), tuple(tol2)),
        link_congruences=(blocks1, blocks2),
    )
