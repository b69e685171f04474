import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qamalgam.fusion import (
    AoRing,
    CyclicRing,
    FusionElement,
    FusionError,
    GroupDualRing,
    RingMismatchError,
    TableRing,
    check_axioms,
    conj,
    fuse,
    fuse_elements,
    make_builtin,
)
from qamalgam.groups import FiniteGroup, MalformedTableError, cyclic_group, symmetric_group

from oracles import chebyshev_dims, clebsch_gordan


def el(ring, d):
    return FusionElement({ring.label(k): n for k, n in d.items()})


def test_z2_square_is_unit():
    ring = make_builtin("group", 2)
    g = ring.label("a")
    assert fuse(ring, g, g) == FusionElement.of(ring.unit)


def test_ao_examples():
    a2 = AoRing(2)
    assert fuse(a2, a2.label(1), a2.label(1)) == el(a2, {0: 1, 2: 1})
    prod = fuse(a2, a2.label(2), a2.label(3))
    assert prod == el(a2, {1: 1, 3: 1, 5: 1})
    assert a2.element_dim(prod) == 3 * 4 == 2 + 4 + 6

    a3 = AoRing(3)
    prod = fuse(a3, a3.label(1), a3.label(2))
    assert prod == el(a3, {1: 1, 3: 1})
    assert a3.dim(a3.label(2)) == 8 and a3.dim(a3.label(3)) == 21
    assert a3.element_dim(prod) == 3 * 8 == 3 + 21


def test_cyclic_examples():
    z = CyclicRing()
    assert fuse(z, z.label(2), z.label(-5)) == FusionElement.of(z.label(-3))
    assert conj(z, z.label(4)) == z.label(-4)
    z5 = CyclicRing(5)
    assert fuse(z5, z5.label(3), z5.label(4)) == FusionElement.of(z5.label(2))


def test_group_conj_is_inverse():
    s3 = symmetric_group(3)
    ring = GroupDualRing(s3)
    for g in s3.elements:
        assert conj(ring, ring.label(g)).payload == s3.inv(g)


@pytest.mark.parametrize("k", range(9))
def test_ao_self_conjugate(k):
    ring = AoRing(2)
    v = ring.label(k)
    assert conj(ring, v) == v
    assert fuse(ring, v, v).mult(ring.unit) == 1


def test_ao_dims_d1_2_are_integers():
    ring = AoRing(2)
    assert [ring.dim(ring.label(k)) for k in range(13)] == list(range(1, 14))


@pytest.mark.parametrize("d1", [2, 3, 2.5, 4.25])
def test_ao_dims_match_recursion(d1):
    ring = AoRing(d1)
    ref = chebyshev_dims(d1, 10)
    assert all(abs(ring.dim(ring.label(k)) - ref[k]) <= 1e-9 * ref[k] for k in range(11))


@given(st.integers(0, 15), st.integers(0, 15))
def test_ao_matches_clebsch_gordan(k, l):
    ring = AoRing(2)
    assert fuse(ring, ring.label(k), ring.label(l)) == el(ring, {m: 1 for m in clebsch_gordan(k, l)})


def test_fuse_elements_examples():
    ring = AoRing(2)
    assert fuse_elements(ring, FusionElement(), el(ring, {1: 1})) == FusionElement()
    assert fuse_elements(ring, el(ring, {1: 2}), el(ring, {1: 1})) == el(ring, {0: 2, 2: 2})
    x = el(ring, {1: 1}) + el(ring, {2: 1})
    assert fuse_elements(ring, x, el(ring, {1: 1})) == el(ring, {0: 1, 2: 1}) + el(ring, {1: 1, 3: 1})


@settings(max_examples=60)
@given(
    st.dictionaries(st.integers(0, 5), st.integers(1, 3), max_size=3),
    st.dictionaries(st.integers(0, 5), st.integers(1, 3), max_size=3),
    st.dictionaries(st.integers(0, 5), st.integers(1, 3), max_size=3),
)
def test_fuse_elements_bilinear(a, b, c):
    ring = AoRing(2)
    x, y, z = el(ring, a), el(ring, b), el(ring, c)
    assert fuse_elements(ring, x + y, z) == fuse_elements(ring, x, z) + fuse_elements(ring, y, z)
    assert fuse_elements(ring, z, x + y) == fuse_elements(ring, z, x) + fuse_elements(ring, z, y)


@settings(max_examples=80)
@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
def test_cyclic_associative_and_unit_mult(r, s, t):
    ring = CyclicRing()
    a, b, c = ring.label(r), ring.label(s), ring.label(t)
    left = fuse_elements(ring, fuse(ring, a, b), FusionElement.of(c))
    right = fuse_elements(ring, FusionElement.of(a), fuse(ring, b, c))
    assert left == right
    assert fuse(ring, a, b).mult(ring.unit) == (1 if b == conj(ring, a) else 0)


def test_element_invariants():
    ring = AoRing(2)
    x = FusionElement({ring.label(1): 0, ring.label(2): 2})
    assert dict(x) == {ring.label(2): 2}
    with pytest.raises(ValueError):
        FusionElement({ring.label(1): -1})
    with pytest.raises(ValueError):
        FusionElement({ring.label(1): 1, CyclicRing().label(1): 1})


def test_mixed_rings_rejected():
    a, z = AoRing(2), CyclicRing()
    with pytest.raises(RingMismatchError):
        fuse(a, a.label(1), z.label(1))
    with pytest.raises(FusionError):
        fuse_elements(a, FusionElement.of(a.label(1)), FusionElement.of(z.label(1)))


def test_ao_d1_below_two_rejected():
    with pytest.raises(FusionError):
        AoRing(1)


def test_infinite_rings_need_bound():
    with pytest.raises(FusionError):
        AoRing(2).labels()
    with pytest.raises(FusionError):
        CyclicRing().labels()


@pytest.mark.parametrize(
    "ring,bound",
    [
        (make_builtin("group", 2), None),
        (make_builtin("group", 3), None),
        (make_builtin("group", symmetric_group(3)), None),
        (make_builtin("cyclic"), 8),
        (make_builtin("cyclic", 7), None),
        (make_builtin("ao", 2), 6),
        (make_builtin("ao", 3), 6),
        (make_builtin("ao", 2.5), 5),
    ],
    ids=lambda v: getattr(v, "name", str(v)),
)
def test_axioms_hold(ring, bound):
    rep = check_axioms(ring, bound)
    assert rep.ok, rep.violations[:3]
    assert rep.violation_count == 0 and rep.labels_checked > 0


def test_sampled_axioms_deterministic():
    ring = AoRing(2)
    a = check_axioms(ring, 8, samples=200, seed=5)
    b = check_axioms(ring, 8, samples=200, seed=5)
    assert a.ok and a.to_dict() == b.to_dict()


def corrupted_z3():
    g = cyclic_group(3)
    names = g.elements
    products = {(x, y): {g.mul(x, y): 1} for x in names for y in names}
    # swap two products
    products["a", "a"], products["a", "a^2"] = products["a", "a^2"], products["a", "a"]
    return TableRing("Z3-corrupt", names, "e", products, {x: g.inv(x) for x in names})


def test_corrupted_table_flagged():
    rep = check_axioms(corrupted_z3())
    assert not rep.ok and rep.violation_count > 0
    assert all(v.witness for v in rep.violations)
    kinds = {v.kind for v in rep.violations}
    assert kinds & {"associativity", "frobenius", "unit-multiplicity"}


def test_malformed_group_table_has_witness():
    rows = {"e": {"e": "e", "a": "a", "b": "b"}, "a": {"e": "a", "a": "b", "b": "e"}, "b": {"e": "b", "a": "a", "b": "a"}}
    with pytest.raises(MalformedTableError) as info:
        FiniteGroup.from_rows(rows)
    assert info.value.witness
