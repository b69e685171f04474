"""Acceptance criteria 1-9, one test each.

The terminal summary prints one PASS/FAIL line per criterion.
"""

import io
import itertools
import random
from pathlib import Path

import pytest

from qamalgam.amalgam_oracle import oracle_fuse
from qamalgam.catalog import s3_c2_s3, z2_z2, z6_c3_s3
from qamalgam.cli import run
from qamalgam.freeprod import AmalgamRing, FreeProductRing, check_dim_mult_claim
from qamalgam.fusion import AoRing, CyclicRing, FusionElement, GroupDualRing, check_axioms
from qamalgam.groups import cyclic_group, symmetric_group
from qamalgam.ringdef import SpecError, parse_spec, serialize_report
from qamalgam.subcat import Subcategory, even_part, quotient_classes
from qamalgam.tree import (
    build_classical_tree,
    build_quotient_tree,
    commutator_report,
    default_generators,
    fredholm_report,
    homotopy_check,
    julg_valette,
    tree_isomorphism,
)

from oracles import cyclic_table, left_cosets, perm_table, reduce_word, reduced_words

SPECS = Path(__file__).resolve().parent.parent / "specs"
CLASSICAL = {"Z2*Z2": z2_z2, "S3*C2S3": s3_c2_s3, "Z6*C3S3": z6_c3_s3}


@pytest.mark.criterion(1, "fusion axioms")
def test_criterion_1_fusion_axioms():
    cases = [
        (GroupDualRing(cyclic_group(2)), None),
        (GroupDualRing(cyclic_group(3)), None),
        (GroupDualRing(symmetric_group(3)), None),
        (CyclicRing(), 8),
        (AoRing(2), 6),
        (AoRing(3), 6),
    ]
    for ring, bound in cases:
        rep = check_axioms(ring, bound)
        assert rep.violation_count == 0, (ring.name, rep.violations[:3])
        n = len(ring.labels(bound))
        assert rep.triples_checked == n**3, ring.name


@pytest.mark.criterion(2, "quotient structure")
def test_criterion_2_quotient_structure():
    A = AoRing(2)
    assert len(quotient_classes(A, even_part(A, 9), 9)) == 2

    perms, ptable = perm_table()
    s3 = symmetric_group(3)
    cases = [
        (s3, ["e", "(01)"]),
        (cyclic_group(6), ["e", "a^2", "a^4"]),
    ]
    for group, H in cases:
        ring = GroupDualRing(group)
        classes = quotient_classes(ring, Subcategory(ring, [ring.label(h) for h in H]))
        got = {frozenset(m.payload for m in c.members) for c in classes}
        if group is s3:
            names = _s3_names(s3, perms, ptable)
            raw_h = [names[h] for h in H]
            expected = {frozenset(k for k, p in names.items() if p in c) for c in left_cosets(perms, ptable, raw_h)}
        else:
            els, table = cyclic_table(6)
            expected = set(left_cosets(els, table, H))
        assert got == expected
        assert len(got) == len(group) // len(H)


def _s3_names(s3, perms, ptable):
    """Match cycle names to permutation tuples by their action on {0,1,2}."""
    out = {}
    for name in s3.elements:
        p = [0, 1, 2]
        if name != "e":
            cyc = [int(c) for c in name.strip("()")]
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                p[a] = b
        out[name] = tuple(p)
    # the name map must be an isomorphism for the comparison to mean anything
    for a, b in itertools.product(s3.elements, repeat=2):
        assert ptable[out[a], out[b]] == out[s3.mul(a, b)]
    return out


@pytest.mark.criterion(3, "free-fusion oracle equivalence")
def test_criterion_3_free_fusion_oracle():
    fp = FreeProductRing(GroupDualRing(cyclic_group(2)), GroupDualRing(cyclic_group(3)))
    raw = {1: cyclic_table(2), 2: cyclic_table(3)}

    def word(letters):
        return fp.word((i, fp.factor(i).label(x)) for i, x in letters)

    words = reduced_words(raw, 4)
    assert {tuple((i, lab.payload) for i, lab in w.payload) for w in fp.words(4)} == set(words)
    for a, b in itertools.product(words, repeat=2):
        assert fp.fuse(word(a), word(b)) == FusionElement.of(word(reduce_word(raw, a + b)))


@pytest.mark.criterion(4, "amalgam example")
def test_criterion_4_amalgam_example():
    ring = AmalgamRing(2)
    box = ring.box(3, 4)
    for x, y in itertools.product(box, repeat=2):
        assert {r.payload: n for r, n in ring.fuse(x, y).items()} == oracle_fuse(x.payload, y.payload)
    assert ring.fuse(ring.label(0, 1), ring.label(1, 0)) == FusionElement.of(ring.label(-1, 1))
    letters = [(i, k) for i in (1, 2) for k in (1, 2, 3)]
    for n in range(1, 5):
        for w in itertools.product(letters, repeat=n):
            assert check_dim_mult_claim(w, ring=ring).equal, w


@pytest.mark.criterion(5, "Julg-Valette index")
def test_criterion_5_jv_index():
    A = AoRing(2)
    for d in range(6):
        trees = [build_classical_tree(f(), d) for f in CLASSICAL.values()]
        trees.append(build_quotient_tree(A, A, even_part(A, 12), d, degree_bound=6))
        for tree in trees:
            rep = fredholm_report(tree, julg_valette(tree, 1))
            assert (rep.kernel_dim, rep.cokernel_dim, rep.index) == (1, 0, 1), (tree.name, d)


@pytest.mark.criterion(6, "commutator compactness shadow")
def test_criterion_6_commutators():
    for f in CLASSICAL.values():
        spec = f()
        trees = {d: build_classical_tree(spec, d) for d in (3, 4, 5)}
        phis = {d: julg_valette(t, 1) for d, t in trees.items()}
        for g in default_generators(spec):
            reps = [commutator_report(trees[d], phis[d], g, 1) for d in (3, 4, 5)]
            assert all(r.interior_max_entry == 0 for r in reps), (spec.name, g)
            assert len({r.off_interior_rank for r in reps}) == 1, (spec.name, g, [r.off_interior_rank for r in reps])


@pytest.mark.criterion(7, "homotopy")
def test_criterion_7_homotopy():
    for f in CLASSICAL.values():
        spec = f()
        rep = homotopy_check(build_classical_tree(spec, 3))
        assert len(rep.samples) == 9
        for s in rep.samples:
            assert s.unitarity_defect <= 1e-12
            assert s.h_commutes
        end = [s for s in rep.samples if s.endpoint]
        assert len(end) == 1 and end[0].exact_endpoint_defect == 0
        assert rep.control_defect is not None and rep.control_defect > 0


@pytest.mark.criterion(8, "quotient/classical consistency")
def test_criterion_8_consistency():
    cases = [
        (s3_c2_s3(), ["e", "(01)"], ["e", "(01)"]),
        (z6_c3_s3(), ["e", "a^2", "a^4"], ["e", "(012)", "(021)"]),
    ]
    for spec, h1, h2 in cases:
        r1, r2 = GroupDualRing(spec.group(1)), GroupDualRing(spec.group(2))
        D = (Subcategory(r1, [r1.label(h) for h in h1]), Subcategory(r2, [r2.label(h) for h in h2]))
        for d in range(4):
            classical = build_classical_tree(spec, d)
            iso = tree_isomorphism(classical, build_quotient_tree(r1, r2, D, d))
            assert len(iso["vertices"]) == len(classical.vertices)


def _fuzz_inputs(n, seed=0):
    rng = random.Random(seed)
    corpus = [p.read_text() for p in sorted(SPECS.glob("*.qspec"))]
    atoms = list("{}[]:*=,;#()^.-+ \n\t") + ["ring", "subcat", "amalgam", "job", "group", "ao(2)", "cyclic",
                                             "embed", "group1", "in", "bound", "v1", "a^-1", "e", "jv-index"]
    for i in range(n):
        mode = i % 4
        if mode == 0:
            size = int(2 ** rng.uniform(0, 16))
            yield rng.randbytes(size)
        elif mode == 1:
            yield "".join(rng.choice(atoms) for _ in range(rng.randrange(120)))
        else:
            s = rng.choice(corpus)
            for _ in range(rng.randrange(1, 6)):
                p = rng.randrange(len(s) + 1)
                s = s[:p] + rng.choice(atoms + [""]) + s[p + rng.randrange(30):]
            yield s


@pytest.mark.criterion(9, "robustness and determinism")
def test_criterion_9_robustness():
    for data in _fuzz_inputs(10_000):
        try:
            parse_spec(data)
        except SpecError as e:
            assert e.errors and all(d.line >= 1 for d in e.errors)

    for path in sorted(SPECS.glob("*.qspec")):
        outs = []
        for _ in range(2):
            buf = io.StringIO()
            code = run(["all", str(path), "--seed", "11"], stdout=buf, stderr=io.StringIO())
            assert code == 0, path.name
            outs.append(buf.getvalue().encode())
        assert outs[0] == outs[1], path.name
    a = serialize_report(check_axioms(AoRing(2), 8, samples=300, seed=4))
    b = serialize_report(check_axioms(AoRing(2), 8, samples=300, seed=4))
    assert a == b
