import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qamalgam.freeprod import FreeProductRing, WordError, enumerate_words, free_conj, free_fuse, words_not_ending
from qamalgam.fusion import AoRing, CyclicRing, FusionElement, GroupDualRing, check_axioms, dims_close, fuse_elements
from qamalgam.groups import cyclic_group

from oracles import cyclic_table, reduce_word, reduced_words

Z2, Z3 = cyclic_group(2), cyclic_group(3)
FP = FreeProductRing(GroupDualRing(Z2), GroupDualRing(Z3))
RAW = {1: cyclic_table(2), 2: cyclic_table(3)}


def to_word(letters):
    return FP.word((i, FP.factor(i).label(x)) for i, x in letters)


def test_oracle_enumeration_agrees():
    ours = {tuple((i, lab.payload) for i, lab in w.payload) for w in FP.words(4)}
    assert ours == set(reduced_words(RAW, 4))


def test_free_fuse_matches_word_reduction_exhaustive():
    words = reduced_words(RAW, 4)
    checked = 0
    for a, b in itertools.product(words, repeat=2):
        got = free_fuse(FP, to_word(a), to_word(b))
        assert got == FusionElement.of(to_word(reduce_word(RAW, a + b))), (a, b)
        checked += 1
    assert checked == len(words) ** 2


def test_junction_cancellation_example():
    a = to_word([(1, "a"), (2, "a")])
    b = to_word([(2, "a^2"), (1, "a")])
    assert free_fuse(FP, a, b) == FusionElement.of(FP.unit)
    c = to_word([(2, "a")])
    assert free_fuse(FP, c, c) == FusionElement.of(to_word([(2, "a^2")]))


def test_invalid_words_rejected():
    with pytest.raises(WordError):
        to_word([(1, "a"), (1, "a")])
    with pytest.raises(WordError):
        to_word([(1, "e")])
    with pytest.raises(WordError):
        FP.word([(3, FP.factor(1).label("a"))])


AZ = FreeProductRing(AoRing(2), CyclicRing())


def aw(*letters):
    return AZ.word((i, AZ.factor(i).label(k)) for i, k in letters)


def test_ao_z_junction_fusion():
    x = aw((2, 1), (1, 1))
    y = aw((1, 1), (2, -1))
    # v1 (x) v1 = v0 + v2: the unit branch cancels a and a^-1
    out = free_fuse(AZ, x, y)
    assert out == FusionElement({AZ.unit: 1, aw((2, 1), (1, 2), (2, -1)): 1})


def test_conj_reverses():
    x = aw((1, 2), (2, 3), (1, 1))
    assert free_conj(AZ, x) == aw((1, 1), (2, -3), (1, 2))
    assert free_fuse(AZ, free_conj(AZ, x), x).mult(AZ.unit) == 1


def test_words_not_ending():
    ws = enumerate_words(GroupDualRing(Z2), GroupDualRing(Z3), 3)
    kept = words_not_ending(ws, 2)
    assert FP.unit in kept
    assert all(not w.payload or w.payload[-1][0] == 1 for w in kept)


def test_free_product_axioms_bounded():
    rep = check_axioms(AZ, bound=3)
    assert rep.ok, rep.violations[:3]
    rep = check_axioms(FP, bound=4)
    assert rep.ok, rep.violations[:3]


letters = st.lists(st.tuples(st.sampled_from([1, 2]), st.integers(1, 3)), max_size=4)


def alternating(raw):
    out = []
    for i, k in raw:
        if not out or out[-1][0] != i:
            out.append((i, k if i == 1 else (k if k % 2 else -k)))
    return aw(*out)


@settings(max_examples=80)
@given(letters, letters)
def test_free_fusion_dim_additive(a, b):
    x, y = alternating(a), alternating(b)
    out = free_fuse(AZ, x, y)
    assert dims_close(AZ.element_dim(out), AZ.dim(x) * AZ.dim(y))
    assert out.mult(AZ.unit) == (1 if y == free_conj(AZ, x) else 0)


@settings(max_examples=40)
@given(letters, letters, letters)
def test_free_fusion_associative(a, b, c):
    x, y, z = (FusionElement.of(alternating(t)) for t in (a, b, c))
    assert fuse_elements(AZ, fuse_elements(AZ, x, y), z) == fuse_elements(AZ, x, fuse_elements(AZ, y, z))


def test_z2_z2_enumeration():
    g = GroupDualRing(Z2)
    ws = enumerate_words(g, g, 3)
    assert enumerate_words(g, g, 0) == [FreeProductRing(g, g).unit]
    shown = [str(w) for w in ws]
    assert shown == ["()", "a[1]", "a[2]", "a[1].a[2]", "a[2].a[1]", "a[1].a[2].a[1]", "a[2].a[1].a[2]"]
    assert [str(w) for w in words_not_ending(ws, 1)] == ["()", "a[2]", "a[1].a[2]", "a[2].a[1].a[2]"]
    assert [str(w) for w in words_not_ending(ws, 2)] == ["()", "a[1]", "a[2].a[1]", "a[1].a[2].a[1]"]
    counts = [sum(len(w) == n for w in enumerate_words(g, g, 8)) for n in range(1, 9)]
    assert counts == [2] * 8


def test_ao_free_product_mixed_word_irreducible():
    AA = FreeProductRing(AoRing(2), AoRing(2))
    x = AA.word([(1, AA.factor(1).label(1))])
    y = AA.word([(2, AA.factor(2).label(1))])
    assert free_fuse(AA, x, y) == FusionElement.of(AA.word([(1, x.payload[0][1]), (2, y.payload[0][1])]))


def test_group_word_conj_is_inverse():
    w = to_word([(1, "a"), (2, "a")])
    assert free_conj(FP, w) == to_word([(2, "a^2"), (1, "a")])
    assert free_conj(FP, FP.unit) == FP.unit
