import itertools
from collections import Counter

import pytest

from qamalgam.amalgam_oracle import (
    OracleError,
    derive_embedding,
    expand,
    oracle_dim,
    oracle_fuse,
    rewrite,
    v_combination,
    v_power_decomposition,
)
from qamalgam.freeprod import AmalgamRing, amalgam_embed, amalgam_ring, check_dim_mult_claim
from qamalgam.fusion import AoRing, FusionElement, check_axioms, fuse_elements

R = amalgam_ring(2)
BOX = R.box(3, 4)


def lab(k, l):
    return R.label(k, l)


def payloads(x):
    return {r.payload: n for r, n in x.items()}


def test_relation_v_a():
    # v_{1,1} (x) a = a^-1 (x) v_{1,1}
    assert R.fuse(lab(0, 1), lab(1, 0)) == FusionElement.of(lab(-1, 1))


def test_closed_form_examples():
    assert R.fuse(lab(1, 0), lab(-1, 0)) == FusionElement.of(R.unit)
    assert payloads(R.fuse(lab(2, 1), lab(3, 2))) == {(-1, 1): 1, (-1, 3): 1}


def test_closed_form_matches_rewriting_oracle():
    for x, y in itertools.product(BOX, repeat=2):
        assert payloads(R.fuse(x, y)) == oracle_fuse(x.payload, y.payload), (x, y)


def test_conjugate_sign_rule_from_unit_multiplicity():
    # conj is whatever makes the unit occur once in conj(r) (x) r
    for r in BOX:
        hits = [s for s in R.box(4, 4) if R.fuse(s, r).mult(R.unit)]
        assert hits == [R.conj(r)]
        assert R.conj(R.conj(r)) == r


def test_oracle_dims():
    ao = AoRing(3)
    for l in range(8):
        assert oracle_dim(l, 3) == ao.dim(ao.label(l))
    assert R.dim(lab(-5, 3)) == 4


def test_rewrite_moves_a_left():
    v, a, ai = ("v",), ("a", 1), ("a", -1)
    assert rewrite((v, a)) == (-1, 1)
    assert rewrite((v, v, a)) == (1, 2)
    assert rewrite((a, v, ai, v)) == (2, 2)


def test_v_power_decomposition_counts():
    assert v_power_decomposition(3) == {1: 2, 3: 1}
    assert sum(c for _, c in v_combination(4)) != 0


def test_oracle_rejects_negative_multiplicity():
    with pytest.raises(OracleError):
        expand(Counter({(("v",),): -1}))


def test_amalgam_axioms_box():
    rep = check_axioms(R, labels=BOX)
    assert rep.ok, rep.violations[:3]


def test_embedding_examples():
    assert amalgam_embed(R, 2, 1).payload == (-1, 1)
    assert amalgam_embed(R, 2, 3).payload == (-1, 3)
    assert all(amalgam_embed(R, 1, l).payload == (0, l) for l in range(6))
    assert all(amalgam_embed(R, 1, l) == amalgam_embed(R, 2, l) for l in range(0, 8, 2))


def test_embedding_by_induction():
    emb = derive_embedding(8)
    assert all(R.embed(2, l).payload == emb[l] for l in emb)


@pytest.mark.parametrize("i", [1, 2])
def test_embedding_multiplicative(i):
    ao = AoRing(2)
    for k, l in itertools.product(range(5), repeat=2):
        left = R.fuse(R.embed(i, k), R.embed(i, l))
        right = FusionElement({R.embed(i, m.payload): n for m, n in ao.fuse(ao.label(k), ao.label(l)).items()})
        assert left == right


def test_dim_mult_claim_mixed_example():
    verdict = check_dim_mult_claim([(1, 1), (2, 1)])
    assert verdict.equal
    assert verdict.mixed == ((1, 1), (3, 1))
    # the mixed product has a 1-dimensional summand that is not the unit
    x = fuse_elements(R, FusionElement.of(R.embed(1, 1)), FusionElement.of(R.embed(2, 1)))
    small = [r for r in x if R.dim(r) == 1]
    assert small == [lab(1, 0)]  # the generator a itself


def test_dim_mult_claim_sweep():
    letters = [(i, k) for i in (1, 2) for k in (1, 2, 3)]
    for n in range(1, 5):
        for word in itertools.product(letters, repeat=n):
            assert check_dim_mult_claim(word).equal, word


def test_dim_mult_claim_other_d1():
    assert check_dim_mult_claim([(2, 2), (1, 1), (2, 3)], d1=2.5).equal
    assert check_dim_mult_claim([(2, 3)], ring=AmalgamRing(3)).equal
