import itertools

import pytest

from finalg.core import AlgebraError
from finalg.congruence import (
    NotACongruenceError,
    Partition,
    all_congruences,
    class_algebra,
    is_congruence,
    is_simple,
    maximal_congruences,
    principal_congruence,
    quotient_algebra,
)
from finalg import catalog


def test_partition_canonical_form():
    p = Partition.of(4, [{3, 1}, {0, 2}])
    assert p.blocks == ((0, 2), (1, 3))
    assert str(p) == "{0,2}{1,3}"
    with pytest.raises(AlgebraError):
        Partition(4, ((1, 3), (0, 2)))  # not canonical


def test_partition_parse():
    p = Partition.parse("{0,2}{1,3}", 4)
    assert p.blocks == ((0, 2), (1, 3))
    assert Partition.parse("{0}{1}{2}", 3).is_identity()
    assert Partition.parse("{0,1,2}", 3).is_full()
    with pytest.raises(AlgebraError):
        Partition.parse("{0,2}{1)", 4)
    with pytest.raises(AlgebraError):
        Partition.parse("{0,2}", 4)  # does not cover


def test_partition_join_meet():
    a = Partition.parse("{0,1}{2}{3}", 4)
    b = Partition.parse("{0}{1,2}{3}", 4)
    assert str(a.join(b)) == "{0,1,2}{3}"
    assert a.meet(b).is_identity()
    full = Partition.full(4)
    assert a.join(full).is_full()
    assert str(a.meet(full)) == str(a)


def test_partition_refines():
    a = Partition.parse("{0,1}{2}{3}", 4)
    b = Partition.parse("{0,1,2}{3}", 4)
    assert a.refines(b) and not b.refines(a)
    assert Partition.identity(4).refines(a)


def test_is_congruence_identity(entries):
    for entry in entries.values():
        ok, _ = is_congruence(entry.algebra, Partition.identity(entry.algebra.domain))
        assert ok


def test_is_congruence_t410(alg):
    ok, _ = is_congruence(alg("T4,10"), Partition.parse("{0,2}{1,3}", 4))
    assert ok


def test_is_congruence_t47(alg):
    ok, _ = is_congruence(alg("T4,7"), Partition.parse("{0,3}{1}{2}", 4))
    assert ok


def test_is_congruence_violation_reported(alg):
    ok, violation = is_congruence(alg("T4,10"), Partition.parse("{0,1}{2,3}", 4))
    assert not ok
    op_name, args1, args2, v1, v2 = violation
    a = alg("T4,10")
    assert a.op(op_name).eval(args1) == v1
    assert a.op(op_name).eval(args2) == v2


def test_principal_reflexive_is_identity(alg):
    assert principal_congruence(alg("T4,10"), 2, 2).is_identity()


def test_principal_two_element_semilattice(alg):
    assert principal_congruence(alg("S"), 0, 1).is_full()


def test_principal_t410(alg):
    p = principal_congruence(alg("T4,10"), 0, 2)
    assert str(p) == "{0,2}{1,3}"


def test_principal_is_least(entries):
    # every congruence containing (a, b) coarsens the principal congruence
    for name in ("T1N", "T4,7", "T4,10", "T4,14"):
        a = entries[name].algebra
        congs = all_congruences(a)
        for x in range(a.domain):
            for y in range(x + 1, a.domain):
                p = principal_congruence(a, x, y)
                for c in congs:
                    if c.related(x, y):
                        assert p.refines(c)


def test_all_congruences_t1n(alg):
    congs = {str(p) for p in all_congruences(alg("T1N"))}
    assert "{0,1}{2}" in congs and "{0,2}{1}" in congs


def test_all_congruences_join_meet_closed(entries):
    for name in ("T1N", "T4,7", "T4,11"):
        congs = all_congruences(entries[name].algebra)
        cs = set(congs)
        for a, b in itertools.combinations(congs, 2):
            assert a.join(b) in cs
            meet = a.meet(b)
            ok, _ = is_congruence(entries[name].algebra, meet)
            assert ok  # partition meet of congruences is a congruence


def test_is_simple(alg):
    assert is_simple(alg("T5N"))
    assert not is_simple(alg("T4,14"))


def test_maximal_congruences(alg):
    maxi = {str(p) for p in maximal_congruences(alg("T4,7"))}
    assert maxi == {"{0,3}{1}{2}", "{0,1,2}{3}"}


def test_quotient_identity_is_copy(alg):
    a = alg("T1N")
    quo, blocks = quotient_algebra(a, Partition.identity(3))
    assert quo.operations[0].values == a.operations[0].values
    assert blocks == ((0,), (1,), (2,))


def test_quotient_t3n_affine(alg):
    quo, _ = quotient_algebra(alg("T3N"), Partition.parse("{0,1}{2}", 3))
    assert catalog.term_equivalent(quo, catalog.get("Z2aff").algebra) is True


def test_quotient_t1n_majority(alg):
    quo, _ = quotient_algebra(alg("T1N"), Partition.parse("{0,2}{1}", 3))
    assert catalog.term_equivalent(quo, catalog.get("M").algebra) is True


def test_quotient_requires_congruence(alg):
    with pytest.raises(NotACongruenceError):
        quotient_algebra(alg("T4,10"), Partition.parse("{0,1}{2,3}", 4))


def test_quotient_block_labeling_canonical(alg):
    quo, blocks = quotient_algebra(alg("T4,7"), Partition.parse("{0,3}{1}{2}", 4))
    assert blocks == ((0, 3), (1,), (2,))  # labels by ascending minimum


def test_class_algebra_singleton(alg):
    sub = class_algebra(alg("T4,7"), Partition.parse("{0,3}{1}{2}", 4), (1,))
    assert sub.domain == 1


def test_class_algebra_t410(alg):
    sub = class_algebra(alg("T4,10"), Partition.parse("{0,2}{1,3}", 4), (1, 3))
    # g(a, a, a+1) = a on the class {1, 3}: local labels 0=1, 1=3
    g = sub.operations[0]
    assert g(0, 0, 1) == 1 and g(1, 1, 0) == 0
    assert catalog.term_equivalent(sub, catalog.get("Z2aff").algebra) is True


def test_class_algebra_t41_is_t1n(alg):
    sub = class_algebra(alg("T4,1"), Partition.parse("{0,1,2}{3}", 4), (0, 1, 2))
    perm, conclusive = catalog.equivalent_up_to_iso(sub, catalog.get("T1N").algebra)
    assert conclusive and perm is not None


def test_class_algebra_requires_block(alg):
    with pytest.raises(AlgebraError):
        class_algebra(alg("T4,10"), Partition.parse("{0,2}{1,3}", 4), (0, 1))
