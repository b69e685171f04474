"""Run the jobs of a :class:`~qamalgam.ringdef.ProblemSpec`.

Each job returns a :class:`JobResult` whose ``report`` is a plain,
JSON-ready dict; ``ok`` is the verdict. Results only depend on the spec,
the settings and the seed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from .amalgam_oracle import derive_embedding, oracle_conj, oracle_fuse
from .freeprod import AmalgamRing, FreeProductRing, check_dim_mult_claim
from .fusion import FusionError, check_axioms, dims_close
from .ringdef import JOB_KINDS, JobDef, Workspace, format_label, parse_label
from .subcat import InvalidSubcategory, Subcategory, quotient_classes, validate_subcategory
from .tree import (
    build_classical_tree,
    build_quotient_tree,
    check_tree,
    commutator_report,
    default_generators,
    default_t_samples,
    fredholm_report,
    homotopy_check,
    julg_valette,
)

DEFAULTS = {"depth": 3, "bound": 6, "margin": 1, "samples": 9, "seed": 0}


@dataclass(frozen=True)
class JobResult:
    kind: str
    target: str
    ok: bool
    report: dict

    def to_dict(self):
        return {"job": self.kind, "target": self.target, "ok": self.ok, "report": self.report}


@dataclass
class Settings:
    """CLI-level values; ``overrides`` beat job options, ``defaults`` lose to them."""

    overrides: dict = field(default_factory=dict)
    seed: int = 0

    def get(self, job: JobDef, key: str):
        if self.overrides.get(key) is not None:
            return self.overrides[key]
        value = job.option(key)
        return DEFAULTS[key] if value is None else value


class JobFailure(Exception):
    """A job that cannot run on valid input (an input error, exit 2)."""


def default_jobs(ws: Workspace, kind: str) -> list[JobDef]:
    """Jobs of ``kind`` to run when the spec declares none."""
    if kind == "axioms":
        return [JobDef("axioms", (n,)) for n in ws.rings]
    if kind == "quotient":
        return [JobDef("quotient", (n,)) for n in ws.subcats]
    if kind == "amalgam-check":
        return [JobDef("amalgam-check", ())]
    if kind in ("tree", "jv-index", "commutators", "homotopy"):
        return [JobDef(kind, (n,)) for n in ws.amalgams]
    return []


def select_jobs(ws: Workspace, kind: str) -> list[JobDef]:
    if kind == "all":
        if ws.spec.jobs:
            return list(ws.spec.jobs)
        return [j for k in JOB_KINDS for j in default_jobs(ws, k)]
    declared = [j for j in ws.spec.jobs if j.kind == kind]
    return declared or default_jobs(ws, kind)


def run_job(ws: Workspace, job: JobDef, settings: Settings | None = None) -> JobResult:
    settings = settings or Settings()
    handler = _HANDLERS[job.kind]
    return handler(ws, job, settings)


def _axioms(ws, job, st):
    ring = ws.rings[job.args[0]]
    bound = None if ring.finite else st.get(job, "bound")
    samples = job.option("samples")
    rep = check_axioms(ring, bound=bound, samples=samples, seed=st.seed)
    d = rep.to_dict()
    d["seed"] = st.seed
    return JobResult("axioms", job.args[0], rep.ok, d)


def _subcategory(ws, name) -> tuple[Any, Subcategory | None, dict]:
    ring, labels, bound = ws.subcats[name]
    val = validate_subcategory(ring, labels, bound)
    if not val.ok:
        return ring, None, val.to_dict()
    return ring, Subcategory(ring, labels, bound, name=name, validate=False), val.to_dict()


def _quotient(ws, job, st):
    name = job.args[0]
    ring, D, val = _subcategory(ws, name)
    if D is None:
        return JobResult("quotient", name, False, {"kind": "quotient", "subcategory": name, "ring": ring.name, "validation": val})
    bound = st.overrides.get("bound") or job.option("bound") or D.bound or DEFAULTS["bound"]
    if D.bound is not None:
        bound = min(bound, D.bound)
    classes = quotient_classes(ring, D, bound)
    d = {
        "kind": "quotient",
        "ring": ring.name,
        "subcategory": name,
        "bound": bound,
        "class_count": len(classes),
        "classes": [c.to_dict() for c in classes],
        "ok": True,
    }
    return JobResult("quotient", name, True, d)


def _element_dict(ring, x) -> dict:
    return {format_label(ring, r): n for r, n in x.items()}


def _fuse(ws, job, st):
    rname, a, b = job.args
    ring = ws.rings[rname]
    x, y = parse_label(ring, a), parse_label(ring, b)
    out = ring.fuse(x, y)
    d = {"kind": "fuse", "ring": ring.name, "left": a, "right": b, "result": _element_dict(ring, out), "dim_ok": True}
    d["dim_ok"] = bool(dims_close(ring.element_dim(out), ring.dim(x) * ring.dim(y)))
    return JobResult("fuse", f"{rname}:{a}*{b}", d["dim_ok"], d)


def _word_text(fp: FreeProductRing, w) -> str:
    return "[" + ", ".join(f"{i}:{format_label(fp.factor(i), lab)}" for i, lab in w.payload) + "]"


def _freefuse(ws, job, st):
    r1, r2, w1, w2 = job.args
    fp = FreeProductRing(ws.rings[r1], ws.rings[r2])

    def word(spec):
        return fp.word((i, parse_label(fp.factor(i), t)) for i, t in spec[1:])

    a, b = word(w1), word(w2)
    out = fp.fuse(a, b)
    dim_ok = bool(dims_close(fp.element_dim(out), fp.dim(a) * fp.dim(b)))
    d = {
        "kind": "freefuse",
        "ring": fp.name,
        "left": _word_text(fp, a),
        "right": _word_text(fp, b),
        "result": {_word_text(fp, w): n for w, n in out.items()},
        "dim_ok": dim_ok,
    }
    return JobResult("freefuse", f"{r1}*{r2}", dim_ok, d)


def amalgam_check(d1=2, kmax=3, lmax=4, length=4, index=3) -> dict:
    """Closed-form amalgam rules against the rewriting oracle, the defining
    relation, the derived embedding and the dimension/multiplicity claim."""
    ring = AmalgamRing(d1)
    box = ring.box(kmax, lmax)
    fuse_mismatch = []
    conj_mismatch = []
    for x in box:
        if oracle_conj(*x.payload) != ring.conj(x).payload:
            conj_mismatch.append(str(x))
        for y in box:
            closed = {r.payload: n for r, n in ring.fuse(x, y).items()}
            if closed != oracle_fuse(x.payload, y.payload):
                fuse_mismatch.append(f"{x}*{y}")
    rel = {r.payload: n for r, n in ring.fuse(ring.label(0, 1), ring.label(1, 0)).items()}
    relation_ok = rel == {(-1, 1): 1}
    emb = derive_embedding(lmax)
    embed_ok = all(ring.embed(2, l).payload == emb[l] for l in emb)
    words = 0
    claim_fail = []
    for n in range(1, length + 1):
        for letters in itertools.product(((i, k) for i in (1, 2) for k in range(1, index + 1)), repeat=n):
            words += 1
            if not check_dim_mult_claim(letters, ring=ring).equal:
                claim_fail.append(list(letters))
    report = {
        "kind": "amalgam-check",
        "ring": ring.name,
        "box": {"kmax": kmax, "lmax": lmax, "labels": len(box)},
        "fuse_pairs": len(box) ** 2,
        "fuse_mismatches": fuse_mismatch[:20],
        "fuse_mismatch_count": len(fuse_mismatch),
        "conj_mismatches": conj_mismatch[:20],
        "relation": {"product": {f"({k},{l})": n for (k, l), n in sorted(rel.items())}, "ok": relation_ok},
        "embedding_ok": embed_ok,
        "dim_mult_words": words,
        "dim_mult_failures": claim_fail[:20],
        "dim_mult_failure_count": len(claim_fail),
    }
    report["ok"] = not fuse_mismatch and not conj_mismatch and relation_ok and embed_ok and not claim_fail
    return report


def _amalgam_check(ws, job, st):
    d = amalgam_check(
        d1=job.option("d1", 2),
        kmax=job.option("kmax", 3),
        lmax=job.option("lmax", 4),
        length=job.option("length", 4),
        index=job.option("index", 3),
    )
    return JobResult("amalgam-check", d["ring"], d["ok"], d)


def _build_tree(ws, job, st):
    depth = st.get(job, "depth")
    if len(job.args) == 1:
        return build_classical_tree(ws.amalgams[job.args[0]], depth), job.args[0]
    n1, n2 = job.args
    subs = []
    for n in (n1, n2):
        ring, D, val = _subcategory(ws, n)
        if D is None:
            raise JobFailure(f"subcategory {n} is not closed: {val}")
        subs.append((ring, D))
    bound = st.get(job, "bound")
    for _, D in subs:
        if D.bound is not None:
            bound = min(bound, D.bound)
    target = f"{n1}|{n2}"
    try:
        tree = build_quotient_tree(subs[0][0], subs[1][0], (subs[0][1], subs[1][1]), depth, bound, name=target)
    except (FusionError, InvalidSubcategory) as e:
        raise JobFailure(str(e)) from None
    return tree, target


def _tree(ws, job, st):
    tree, target = _build_tree(ws, job, st)
    chk = check_tree(tree)
    d = {
        "kind": "tree",
        "tree": tree.name,
        "tree_kind": tree.kind,
        "depth": tree.depth,
        "edges": chk.edges,
        "vertices": chk.vertices,
        "connected": chk.connected,
        "edge_vertex_relation": chk.edge_vertex_relation,
        "degrees_ok": chk.degrees_ok,
        "alphabet_sizes": [len(a) for a in tree.alphabets],
        "ok": chk.ok,
    }
    return JobResult("tree", target, chk.ok, d)


def _jv_index(ws, job, st):
    tree, target = _build_tree(ws, job, st)
    reps = [fredholm_report(tree, julg_valette(tree, i), operator=i) for i in (1, 2)]
    ok = all(r.ok for r in reps)
    d = {"kind": "jv-index", "tree": tree.name, "depth": tree.depth, "operators": [r.to_dict() for r in reps], "ok": ok}
    return JobResult("jv-index", target, ok, d)


def _commutators(ws, job, st):
    spec = ws.amalgams[job.args[0]]
    depth = st.get(job, "depth")
    margin = st.get(job, "margin")
    depths = [depth, depth + 1, depth + 2]
    gens = default_generators(spec)
    per_gen = []
    ok = True
    for g in gens:
        rows = []
        for dd in depths:
            tree = build_classical_tree(spec, dd)
            rows.append(commutator_report(tree, julg_valette(tree, 1), g, margin))
        ranks = [r.off_interior_rank for r in rows]
        good = all(r.interior_max_entry == 0 for r in rows) and len(set(ranks)) == 1
        ok = ok and good
        per_gen.append({"generator": rows[0].generator, "depths": [r.to_dict() for r in rows], "rank_constant": len(set(ranks)) == 1, "ok": good})
    d = {"kind": "commutators", "amalgam": spec.name, "spec_hash": spec.digest(), "depths": depths, "margin": margin, "generators": per_gen, "ok": ok}
    return JobResult("commutators", job.args[0], ok, d)


def _homotopy(ws, job, st):
    spec = ws.amalgams[job.args[0]]
    depth = st.get(job, "depth")
    margin = st.get(job, "margin")
    n = st.get(job, "samples")
    tree = build_classical_tree(spec, depth)
    rep = homotopy_check(tree, default_t_samples(n), margin=margin)
    d = rep.to_dict()
    d.update({"kind": "homotopy", "amalgam": spec.name, "depth": depth, "margin": margin})
    return JobResult("homotopy", job.args[0], rep.ok, d)


_HANDLERS = {
    "axioms": _axioms,
    "quotient": _quotient,
    "fuse": _fuse,
    "freefuse": _freefuse,
    "amalgam-check": _amalgam_check,
    "tree": _tree,
    "jv-index": _jv_index,
    "commutators": _commutators,
    "homotopy": _homotopy,
}
