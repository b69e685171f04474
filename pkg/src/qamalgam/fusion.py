"""Based rings (fusion rings) of compact quantum groups.

A fusion ring is modelled by its set of irreducible labels, a unit, a
conjugation, a fusion rule ``r (x) s -> {t: N_rs^t}`` and a dimension
function. Infinite rings (the integers, A_o) are enumerated by degree, so
anything that scans labels takes an explicit degree bound.
"""

from __future__ import annotations

import itertools
import math
import random
from abc import ABC, abstractmethod
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Sequence

from .groups import FiniteGroup, cyclic_group

DIM_RTOL = 1e-9


class FusionError(ValueError):
    """Invalid use of a fusion ring (foreign label, bad parameter)."""


class RingMismatchError(FusionError):
    """Labels or elements from different rings were combined."""


# --------------------------------------------------------------------------
# labels and elements


@dataclass(frozen=True, order=True)
class Label:
    """An irreducible object: a ring family tag plus a payload."""

    family: str
    payload: Hashable

    def __str__(self):
        return str(self.payload)

    def __repr__(self):
        return f"<{self.family}:{self}>"


class AoLabel(Label):
    def __str__(self):
        return f"v{self.payload}"


class CyclicLabel(Label):
    def __str__(self):
        return "1" if self.payload == 0 else f"a^{self.payload}"


class GroupLabel(Label):
    pass


class FusionElement(Mapping):
    """Finitely supported map label -> positive multiplicity.

    Zero multiplicities are never stored. Elements are immutable and
    hashable; ``+`` and integer ``*`` act on multiplicities.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = ()):
        d: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for label, n in items:
            if not isinstance(n, int) or n < 0:
                raise ValueError(f"multiplicity of {label} must be a non-negative int, got {n!r}")
            if n:
                d[label] = d.get(label, 0) + n
        families = {lab.family for lab in d}
        if len(families) > 1:
            raise RingMismatchError(f"labels from several rings: {sorted(families)}")
        self._terms = d
        self._hash = None

    @classmethod
    def of(cls, *labels: Label) -> "FusionElement":
        out: dict = {}
        for lab in labels:
            out[lab] = out.get(lab, 0) + 1
        return cls(out)

    def __getitem__(self, label):
        return self._terms[label]

    def __iter__(self) -> Iterator:
        return iter(sorted(self._terms))

    def __len__(self):
        return len(self._terms)

    def mult(self, label) -> int:
        return self._terms.get(label, 0)

    @property
    def family(self) -> str | None:
        return next(iter(self._terms)).family if self._terms else None

    def __add__(self, other: "FusionElement") -> "FusionElement":
        if not isinstance(other, FusionElement):
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return FusionElement(out)

    def __mul__(self, n: int) -> "FusionElement":
        if not isinstance(n, int):
            return NotImplemented
        return FusionElement({k: v * n for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, FusionElement):
            return self._terms == other._terms
        if isinstance(other, Mapping):
            return self._terms == dict(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return "{" + ", ".join(f"{k}:{self._terms[k]}" for k in self) + "}"


# --------------------------------------------------------------------------
# rings


class FusionRing(ABC):
    """Abstract enumerable based ring.

    Subclasses implement the raw rules (``_fuse``, ``_conj``, ``_dim``,
    ``degree``, ``labels``, ``_is_label``); the public methods add
    membership checks.
    """

    name: str
    unit: Label
    finite: bool = False

    @abstractmethod
    def labels(self, bound: int | None = None) -> list[Label]:
        """Labels of degree <= bound in non-decreasing degree order."""

    @abstractmethod
    def degree(self, r: Label) -> int: ...

    @abstractmethod
    def _is_label(self, r) -> bool: ...

    @abstractmethod
    def _fuse(self, r: Label, s: Label) -> Mapping: ...

    @abstractmethod
    def _conj(self, r: Label) -> Label: ...

    @abstractmethod
    def _dim(self, r: Label) -> int | float: ...

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"

    def contains(self, r) -> bool:
        return isinstance(r, Label) and r.family == self.name and self._is_label(r)

    def check(self, *labels) -> None:
        for r in labels:
            if not self.contains(r):
                fam = getattr(r, "family", type(r).__name__)
                raise RingMismatchError(f"{r!r} is not a label of {self.name} (ring {fam})")

    def fuse(self, r: Label, s: Label) -> FusionElement:
        self.check(r, s)
        return FusionElement(self._fuse(r, s))

    def conj(self, r: Label) -> Label:
        self.check(r)
        return self._conj(r)

    def dim(self, r: Label) -> int | float:
        self.check(r)
        return self._dim(r)

    def element_dim(self, x: FusionElement) -> int | float:
        return sum(n * self.dim(lab) for lab, n in x.items())

    def sort_index(self, r: Label) -> tuple:
        """Deterministic ordering key consistent with ``labels``."""
        return (self.degree(r), r.payload)

    def nontrivial_labels(self, bound: int | None = None) -> list[Label]:
        return [r for r in self.labels(bound) if r != self.unit]


class TableRing(FusionRing):
    """A finite ring given by explicit fusion tables.

    No axioms are enforced on construction; use :func:`check_axioms`.
    This is also how deliberately broken rings are built for negative
    controls.
    """

    finite = True
    label_cls = Label

    def __init__(
        self,
        name: str,
        names: Sequence[Hashable],
        unit: Hashable,
        products: Mapping[tuple, Mapping[Hashable, int]],
        conj: Mapping[Hashable, Hashable],
        dims: Mapping[Hashable, int | float] | None = None,
    ):
        self.name = name
        lab = {x: self.label_cls(name, x) for x in names}
        self._order = {x: i for i, x in enumerate(names)}
        self._labels = [lab[x] for x in names]
        self.unit = lab[unit]
        self._products = {
            (lab[a], lab[b]): {lab[c]: n for c, n in out.items()} for (a, b), out in products.items()
        }
        self._conjmap = {lab[a]: lab[b] for a, b in conj.items()}
        self._dims = {lab[a]: d for a, d in (dims or {x: 1 for x in names}).items()}

    def label(self, x) -> Label:
        r = self.label_cls(self.name, x)
        self.check(r)
        return r

    def labels(self, bound=None):
        if bound is None:
            return list(self._labels)
        return [r for r in self._labels if self.degree(r) <= bound]

    def degree(self, r):
        return 0 if r == self.unit else 1

    def sort_index(self, r):
        return (self.degree(r), self._order[r.payload])

    def _is_label(self, r):
        return r.payload in self._order and type(r) is self.label_cls

    def _fuse(self, r, s):
        return self._products[r, s]

    def _conj(self, r):
        return self._conjmap[r]

    def _dim(self, r):
        return self._dims[r]


class GroupDualRing(TableRing):
    """Representation ring of the dual of a finite group: labels are group
    elements, fusion is multiplication, conjugation is inversion."""

    label_cls = GroupLabel

    def __init__(self, group: FiniteGroup, name: str | None = None):
        self.group = group
        els = group.elements
        super().__init__(
            name or f"dual({group.name})",
            els,
            group.identity,
            {(a, b): {group.mul(a, b): 1} for a in els for b in els},
            {a: group.inv(a) for a in els},
        )


class CyclicRing(FusionRing):
    """Dual of the integers (``n is None``) or of Z/n; labels ``a^k``."""

    def __init__(self, n: int | None = None):
        if n is not None and (not isinstance(n, int) or n < 1):
            raise FusionError(f"cyclic order must be a positive integer, got {n!r}")
        self.n = n
        self.finite = n is not None
        self.name = "Z" if n is None else f"Z/{n}"
        self.unit = CyclicLabel(self.name, 0)

    def label(self, k: int) -> CyclicLabel:
        return CyclicLabel(self.name, k if self.n is None else k % self.n)

    def degree(self, r):
        k = r.payload
        return abs(k) if self.n is None else min(k, self.n - k)

    def labels(self, bound=None):
        if self.n is None:
            if bound is None:
                raise FusionError("Z is infinite; a degree bound is required")
            out = [self.unit]
            for k in range(1, bound + 1):
                out += [self.label(k), self.label(-k)]
            return out
        out = sorted((self.label(k) for k in range(self.n)), key=self.sort_index)
        return out if bound is None else [r for r in out if self.degree(r) <= bound]

    def sort_index(self, r):
        k = r.payload
        return (self.degree(r), k < 0 if self.n is None else k)

    def _is_label(self, r):
        k = r.payload
        return isinstance(k, int) and not isinstance(k, bool) and (self.n is None or 0 <= k < self.n)

    def _fuse(self, r, s):
        return {self.label(r.payload + s.payload): 1}

    def _conj(self, r):
        return self.label(-r.payload)

    def _dim(self, r):
        return 1


class AoRing(FusionRing):
    """Free orthogonal quantum group A_o: SU(2)-type fusion
    ``v_k (x) v_l = v_|k-l| + v_|k-l|+2 + ... + v_k+l``.

    ``d1`` is the dimension of the fundamental object; higher dimensions
    follow ``d_{k+1} = d1 d_k - d_{k-1}``. Integral ``d1`` keeps all
    dimensions exact integers.
    """

    def __init__(self, d1: float = 2):
        if isinstance(d1, bool) or not isinstance(d1, (int, float)) or not d1 >= 2:
            raise FusionError(f"A_o needs fundamental dimension d1 >= 2, got {d1!r}")
        if isinstance(d1, float) and d1.is_integer():
            d1 = int(d1)
        self.d1 = d1
        self.name = f"ao({d1})"
        self.unit = AoLabel(self.name, 0)
        self._dims = [1, d1]

    def label(self, k: int) -> AoLabel:
        r = AoLabel(self.name, k)
        self.check(r)
        return r

    def degree(self, r):
        return r.payload

    def labels(self, bound=None):
        if bound is None:
            raise FusionError("A_o is infinite; a degree bound is required")
        return [AoLabel(self.name, k) for k in range(bound + 1)]

    def _is_label(self, r):
        k = r.payload
        return isinstance(k, int) and not isinstance(k, bool) and k >= 0 and type(r) is AoLabel

    def _fuse(self, r, s):
        k, l = r.payload, s.payload
        return {AoLabel(self.name, m): 1 for m in range(abs(k - l), k + l + 1, 2)}

    def _conj(self, r):
        return r

    def dim_index(self, k: int) -> int | float:
        while len(self._dims) <= k:
            self._dims.append(self.d1 * self._dims[-1] - self._dims[-2])
        return self._dims[k]

    def _dim(self, r):
        return self.dim_index(r.payload)


def make_builtin(kind: str, param=None) -> FusionRing:
    """Build one of the built-in rings.

    ``kind`` is ``"ao"`` (``param`` = d1 >= 2), ``"cyclic"`` (``param`` =
    None for Z or the order n), or ``"group"`` (``param`` = a
    :class:`FiniteGroup` or a row mapping accepted by
    :meth:`FiniteGroup.from_rows`, validated on load).
    """
    if kind == "ao":
        return AoRing(2 if param is None else param)
    if kind == "cyclic":
        return CyclicRing(param)
    if kind == "group":
        if isinstance(param, FiniteGroup):
            return GroupDualRing(param)
        if isinstance(param, int):
            return GroupDualRing(cyclic_group(param))
        return GroupDualRing(FiniteGroup.from_rows(param))
    raise FusionError(f"unknown builtin ring {kind!r}")


# --------------------------------------------------------------------------
# operations


def fuse(ring: FusionRing, r: Label, s: Label) -> FusionElement:
    return ring.fuse(r, s)


def conj(ring: FusionRing, r: Label) -> Label:
    return ring.conj(r)


def fuse_elements(ring: FusionRing, x: FusionElement, y: FusionElement) -> FusionElement:
    """Bilinear extension of :func:`fuse`."""
    for fam in (x.family, y.family):
        if fam is not None and fam != ring.name:
            raise RingMismatchError(f"element over {fam} used with ring {ring.name}")
    out: dict = {}
    for r, m in x.items():
        for s, n in y.items():
            for t, k in ring.fuse(r, s).items():
                out[t] = out.get(t, 0) + m * n * k
    return FusionElement(out)


def dims_close(a: float, b: float, rtol: float = DIM_RTOL) -> bool:
    if isinstance(a, int) and isinstance(b, int):
        return a == b
    return math.isclose(a, b, rel_tol=rtol, abs_tol=0.0)


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple[str, ...]
    detail: str = ""

    def to_dict(self):
        return {"kind": self.kind, "witness": list(self.witness), "detail": self.detail}


@dataclass(frozen=True)
class AxiomReport:
    ring: str
    bound: int | None
    labels_checked: int
    triples_checked: int
    violations: tuple[Violation, ...] = ()
    violation_count: int = 0

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def to_dict(self):
        return {
            "kind": "axioms",
            "ring": self.ring,
            "bound": self.bound,
            "labels_checked": self.labels_checked,
            "triples_checked": self.triples_checked,
            "violation_count": self.violation_count,
            "violations": [v.to_dict() for v in self.violations],
            "ok": self.ok,
        }


MAX_REPORTED = 50


def check_axioms(
    ring: FusionRing,
    bound: int | None = None,
    labels: Sequence[Label] | None = None,
    samples: int | None = None,
    seed: int = 0,
) -> AxiomReport:
    """Scan the based-ring axioms on all labels up to ``bound``.

    Checks unit laws, conjugation as an involution fixing the unit,
    ``N_rs^1 = [s = conj r]``, Frobenius reciprocity
    ``N_rs^t = N_{conj r, t}^s = N_{t, conj s}^r``, dimension
    multiplicativity and associativity. With ``samples`` the triple
    scan is replaced by that many random triples drawn with ``seed``.
    """
    labs = list(labels) if labels is not None else ring.labels(bound)
    found: list[Violation] = []
    count = 0

    def bad(kind, *wit, detail=""):
        nonlocal count
        count += 1
        if len(found) < MAX_REPORTED:
            found.append(Violation(kind, tuple(str(w) for w in wit), detail))

    one = ring.unit
    if ring.conj(one) != one:
        bad("unit-conj", one)
    if ring.dim(one) != 1:
        bad("unit-dim", one, detail=str(ring.dim(one)))
    for r in labs:
        single = FusionElement.of(r)
        if ring.fuse(one, r) != single:
            bad("unit-left", r, detail=repr(ring.fuse(one, r)))
        if ring.fuse(r, one) != single:
            bad("unit-right", r, detail=repr(ring.fuse(r, one)))
        if ring.conj(ring.conj(r)) != r:
            bad("conj-involution", r)
        if not ring.dim(r) >= 1 - DIM_RTOL:
            bad("dim-range", r, detail=str(ring.dim(r)))

    products = {}
    for r in labs:
        for s in labs:
            f = ring.fuse(r, s)
            products[r, s] = f
            expect = 1 if s == ring.conj(r) else 0
            if f.mult(one) != expect:
                bad("unit-multiplicity", r, s, detail=f"N^1={f.mult(one)} expected {expect}")
            if not dims_close(ring.element_dim(f), ring.dim(r) * ring.dim(s)):
                bad("dim-multiplicative", r, s, detail=f"{ring.element_dim(f)} != {ring.dim(r) * ring.dim(s)}")
            cr, cs = ring.conj(r), ring.conj(s)
            for t in sorted(set(f) | set(labs), key=ring.sort_index):
                n = f.mult(t)
                a = ring.fuse(cr, t).mult(s)
                b = ring.fuse(t, cs).mult(r)
                if not n == a == b:
                    bad("frobenius", r, s, t, detail=f"{n},{a},{b}")

    if samples is None:
        triples: Iterable = itertools.product(labs, repeat=3)
        n_triples = len(labs) ** 3
    else:
        rng = random.Random(seed)
        triples = [tuple(rng.choice(labs) for _ in range(3)) for _ in range(samples)]
        n_triples = samples
    for r, s, t in triples:
        left = fuse_elements(ring, products[r, s], FusionElement.of(t))
        right = fuse_elements(ring, FusionElement.of(r), products[s, t])
        if left != right:
            bad("associativity", r, s, t, detail=f"{left!r} != {right!r}")

    return AxiomReport(ring.name, bound, len(labs), n_triples, tuple(found), count)
