"""Quantum subgroups as full subcategories, and the quotient set Irr C / D.

``r ~ r'`` iff some member of D occurs in ``conj(r) (x) r'``. When D is
closed (unit, conjugates, constituents of products) this is an
equivalence; the class of the unit is D itself, and projecting onto it is
the combinatorial shadow of the conditional expectation onto the
subgroup algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .fusion import FusionElement, FusionError, FusionRing, Label, Violation


class InvalidSubcategory(FusionError):
    def __init__(self, report: "ValidationReport"):
        first = report.violations[0]
        super().__init__(f"not a subcategory: {first.kind} {', '.join(first.witness)}")
        self.report = report


class BoundExceeded(FusionError):
    """Membership of a label above the subcategory's bound was needed."""


@dataclass(frozen=True)
class ValidationReport:
    ring: str
    bound: int | None
    size: int
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self):
        return {
            "kind": "subcategory",
            "ring": self.ring,
            "bound": self.bound,
            "size": self.size,
            "violations": [v.to_dict() for v in self.violations],
            "ok": self.ok,
        }


def validate_subcategory(ring: FusionRing, labels: Iterable[Label], bound: int | None = None) -> ValidationReport:
    """Check unit membership, conjugate closure and fusion closure.

    Conjugates and constituents of degree above ``bound`` are outside the
    checked window and are not reported.
    """
    members = set(labels)
    ring.check(*members)
    inside = (lambda r: True) if bound is None else (lambda r: ring.degree(r) <= bound)
    found: list[Violation] = []
    if ring.unit not in members:
        found.append(Violation("missing-unit", (str(ring.unit),)))
    order = sorted(members, key=ring.sort_index)
    for r in order:
        c = ring.conj(r)
        if inside(c) and c not in members:
            found.append(Violation("conj", (str(r), str(c)), f"conj({r}) = {c} not in D"))
    for r in order:
        for s in order:
            for t in ring.fuse(r, s):
                if inside(t) and t not in members:
                    found.append(Violation("fusion", (str(r), str(s), str(t)), f"{t} in {r}x{s} not in D"))
    return ValidationReport(ring.name, bound, len(members), tuple(found))


class Subcategory:
    """A validated subcategory of ``ring``.

    Membership is known extensionally for labels of degree <= ``bound``
    (all labels when ``bound`` is None). An optional ``predicate`` decides
    membership everywhere and overrides the stored set.
    """

    def __init__(
        self,
        ring: FusionRing,
        members: Iterable[Label],
        bound: int | None = None,
        predicate: Callable[[Label], bool] | None = None,
        name: str = "D",
        validate: bool = True,
    ):
        self.ring = ring
        self.bound = bound
        self.name = name
        self.predicate = predicate
        members = frozenset(members)
        if bound is not None:
            members = frozenset(r for r in members if ring.degree(r) <= bound)
        self.members = members
        if validate:
            report = validate_subcategory(ring, members, bound)
            if not report.ok:
                raise InvalidSubcategory(report)

    @classmethod
    def generated(cls, ring: FusionRing, generators: Iterable[Label], bound: int | None = None, name: str = "D"):
        """Closure of ``generators`` under conjugation and fusion, truncated at ``bound``."""
        inside = (lambda r: True) if bound is None else (lambda r: ring.degree(r) <= bound)
        members = {ring.unit}
        todo = list(generators)
        while todo:
            r = todo.pop()
            if r in members or not inside(r):
                continue
            members.add(r)
            todo.append(ring.conj(r))
            for s in list(members):
                todo.extend(ring.fuse(r, s))
                todo.extend(ring.fuse(s, r))
        return cls(ring, members, bound, name=name)

    def contains(self, r: Label) -> bool:
        if self.predicate is not None:
            return self.predicate(r)
        if self.bound is None or self.ring.degree(r) <= self.bound:
            return r in self.members
        raise BoundExceeded(f"membership of {r} in {self.name} unknown beyond bound {self.bound}")

    def __contains__(self, r):
        return self.contains(r)

    def sorted_members(self) -> list[Label]:
        return sorted(self.members, key=self.ring.sort_index)

    def __repr__(self):
        return f"Subcategory({self.name} in {self.ring.name}, {len(self.members)} labels, bound={self.bound})"


def even_part(ring, bound: int | None = None) -> Subcategory:
    """The even subcategory ``{v_2k}`` of an A_o ring (the unique
    nontrivial quantum subgroup)."""
    bound = 0 if bound is None else bound
    members = [ring.label(k) for k in range(0, bound + 1, 2)]
    return Subcategory(ring, members, bound, predicate=lambda r: r.payload % 2 == 0, name="even")


def as_subcategory(ring: FusionRing, D, bound=None) -> Subcategory:
    if isinstance(D, Subcategory):
        if D.ring is not ring and D.ring.name != ring.name:
            raise FusionError(f"subcategory {D.name} belongs to {D.ring.name}, not {ring.name}")
        return D
    D = list(D)
    if bound is None and not ring.finite:
        bound = max(ring.degree(r) for r in D)
    return Subcategory(ring, D, bound)


def related(ring: FusionRing, D, r: Label, r2: Label) -> bool:
    """``r ~ r2``: some member of D occurs in ``conj(r) (x) r2``."""
    D = as_subcategory(ring, D)
    unknown = None
    for t in ring.fuse(ring.conj(r), r2):
        try:
            if D.contains(t):
                return True
        except BoundExceeded as e:
            unknown = e
    if unknown is not None:
        raise unknown
    return False


@dataclass(frozen=True)
class QuotientClass:
    """One class of Irr C / D, truncated at a degree bound.

    The least-degree member is the representative and the identifier,
    so classes keep their identity when the bound grows.
    """

    index: int
    representative: Label
    members: tuple[Label, ...]

    @property
    def key(self) -> str:
        return str(self.representative)

    def __contains__(self, r):
        return r in self.members

    def to_dict(self):
        return {"id": self.key, "index": self.index, "members": [str(m) for m in self.members]}


@dataclass(frozen=True)
class QuotientReport:
    ring: str
    subcategory: str
    bound: int | None
    classes: tuple[QuotientClass, ...]

    @property
    def ok(self) -> bool:
        return True

    def to_dict(self):
        return {
            "kind": "quotient",
            "ring": self.ring,
            "subcategory": self.subcategory,
            "bound": self.bound,
            "class_count": len(self.classes),
            "classes": [c.to_dict() for c in self.classes],
            "ok": self.ok,
        }


def quotient_classes(ring: FusionRing, D, bound: int | None = None) -> list[QuotientClass]:
    """Partition the labels of degree <= ``bound`` into classes.

    Refuses (``InvalidSubcategory``) when D is not closed, since the
    relation is then not transitive.
    """
    D = as_subcategory(ring, D, bound)
    remaining = ring.labels(bound)
    classes = []
    while remaining:
        rep = remaining[0]
        members = [r for r in remaining if related(ring, D, rep, r)]
        classes.append(QuotientClass(len(classes), rep, tuple(members)))
        taken = set(members)
        remaining = [r for r in remaining if r not in taken]
    return classes


def class_of(classes: Iterable[QuotientClass], r: Label) -> QuotientClass:
    for c in classes:
        if r in c.members:
            return c
    raise KeyError(r)


def project_trivial_block(ring: FusionRing, D, x: FusionElement) -> FusionElement:
    """Keep the part of ``x`` lying in the class of the unit (that is, in D)."""
    D = as_subcategory(ring, D)
    return FusionElement({r: n for r, n in x.items() if related(ring, D, ring.unit, r)})
