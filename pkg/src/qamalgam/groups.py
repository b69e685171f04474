"""Finite groups given by full multiplication tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class MalformedTableError(ValueError):
    """A multiplication table that does not define a group.

    ``witness`` holds the offending elements, e.g. the triple ``(a, b, c)``
    with ``(ab)c != a(bc)``.
    """

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group on named elements.

    ``table[(a, b)]`` is the product ``a*b``. Construct through
    :meth:`from_rows` or the helpers below, which validate the table.
    """

    elements: tuple[str, ...]
    table: Mapping[tuple[str, str], str] = field(repr=False)
    name: str = "G"
    identity: str = field(init=False, repr=False)
    _inverse: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "identity", _validate(self.elements, self.table))
        inverse = {}
        for a in self.elements:
            for b in self.elements:
                if self.table[a, b] == self.identity:
                    inverse[a] = b
        object.__setattr__(self, "_inverse", inverse)

    def __hash__(self):
        return hash((self.name, self.elements))

    @classmethod
    def from_rows(cls, rows: Mapping[str, Mapping[str, str]], name: str = "G") -> "FiniteGroup":
        """Build from ``rows[g][x] = g*x``; every row must list every element."""
        elements = tuple(rows)
        table = {}
        for g, row in rows.items():
            missing = [x for x in elements if x not in row]
            if missing:
                raise MalformedTableError(f"row {g!r} lacks product with {missing[0]!r}", (g, missing[0]))
            for x, y in row.items():
                if x not in rows:
                    raise MalformedTableError(f"row {g!r} multiplies unknown element {x!r}", (g, x))
                table[g, x] = y
        return cls(elements, table, name)

    def mul(self, a: str, b: str) -> str:
        return self.table[a, b]

    def inv(self, a: str) -> str:
        return self._inverse[a]

    def product(self, word: Iterable[str]) -> str:
        out = self.identity
        for x in word:
            out = self.table[out, x]
        return out

    def __contains__(self, x) -> bool:
        return x in self._inverse

    def __len__(self) -> int:
        return len(self.elements)

    def rows(self) -> dict[str, dict[str, str]]:
        return {g: {x: self.table[g, x] for x in self.elements} for g in self.elements}

    def is_subgroup(self, subset: Iterable[str]) -> bool:
        return subgroup_violation(self, subset) is None

    def left_coset(self, g: str, subset: Iterable[str]) -> frozenset[str]:
        return frozenset(self.table[g, h] for h in subset)

    def left_cosets(self, subset: Iterable[str]) -> list[frozenset[str]]:
        subset = tuple(subset)
        seen: list[frozenset[str]] = []
        for g in self.elements:
            c = self.left_coset(g, subset)
            if c not in seen:
                seen.append(c)
        return seen


def _validate(elements: Sequence[str], table: Mapping[tuple[str, str], str]) -> str:
    if not elements:
        raise MalformedTableError("empty group")
    if len(set(elements)) != len(elements):
        dup = next(x for x in elements if list(elements).count(x) > 1)
        raise MalformedTableError(f"duplicate element {dup!r}", (dup,))
    elset = set(elements)
    for a in elements:
        for b in elements:
            if (a, b) not in table:
                raise MalformedTableError(f"product {a}*{b} undefined", (a, b))
            if table[a, b] not in elset:
                raise MalformedTableError(f"{a}*{b}={table[a, b]} leaves the group", (a, b, table[a, b]))
    identity = None
    for e in elements:
        if all(table[e, x] == x and table[x, e] == x for x in elements):
            identity = e
            break
    if identity is None:
        raise MalformedTableError("no identity element", ())
    for a, b, c in itertools.product(elements, repeat=3):
        if table[table[a, b], c] != table[a, table[b, c]]:
            raise MalformedTableError(f"associativity fails: ({a}{b}){c} != {a}({b}{c})", (a, b, c))
    for a in elements:
        if not any(table[a, b] == identity for b in elements):
            raise MalformedTableError(f"{a} has no inverse", (a,))
    return identity


def subgroup_violation(group: FiniteGroup, subset: Iterable[str]) -> tuple | None:
    """Return a witness that ``subset`` is not a subgroup, or None."""
    subset = list(subset)
    for x in subset:
        if x not in group:
            return ("not-an-element", x)
    if group.identity not in subset:
        return ("missing-identity", group.identity)
    s = set(subset)
    for a in subset:
        if group.inv(a) not in s:
            return ("inverse", a, group.inv(a))
        for b in subset:
            if group.mul(a, b) not in s:
                return ("product", a, b, group.mul(a, b))
    return None


def default_transversal(group: FiniteGroup, subgroup: Iterable[str]) -> tuple[str, ...]:
    """Left transversal of ``subgroup``: the identity for ``H`` itself, the
    lowest element name in every other coset."""
    cosets = group.left_cosets(subgroup)
    reps = []
    for c in cosets:
        reps.append(group.identity if group.identity in c else min(c))
    return tuple(reps)


def cyclic_group(n: int, gen: str = "a", name: str | None = None) -> FiniteGroup:
    def nm(k):
        return "e" if k == 0 else (gen if k == 1 else f"{gen}^{k}")

    els = tuple(nm(k) for k in range(n))
    table = {(nm(i), nm(j)): nm((i + j) % n) for i in range(n) for j in range(n)}
    return FiniteGroup(els, table, name or f"Z/{n}")


def _cycle_name(perm: tuple[int, ...]) -> str:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(str(x))
            x = perm[x]
        cycles.append("(" + "".join(cyc) + ")")
    return "".join(cycles) or "e"


def symmetric_group(n: int, name: str | None = None) -> FiniteGroup:
    """S_n with elements named in cycle notation, e.g. ``(01)``, ``(012)``.

    The product ``p*q`` is the composition ``x -> p(q(x))``.
    """
    perms = sorted(itertools.permutations(range(n)), key=lambda p: (_cycle_name(p) != "e", p))
    names = {p: _cycle_name(p) for p in perms}
    table = {}
    for p in perms:
        for q in perms:
            table[names[p], names[q]] = names[tuple(p[q[x]] for x in range(n))]
    return FiniteGroup(tuple(names[p] for p in perms), table, name or f"S{n}")
