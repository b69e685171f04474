"""Sparse matrices over explicit, named bases.

Integer entries stay exact (ranks by fraction-free elimination over Q);
complex entries only appear through the homotopy unitaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from typing import Callable, Hashable, Iterable, Mapping

import numpy as np


@dataclass(frozen=True)
class Basis:
    name: str
    keys: tuple[Hashable, ...]
    index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        idx = {k: i for i, k in enumerate(self.keys)}
        if len(idx) != len(self.keys):
            raise ValueError(f"basis {self.name} has repeated keys")
        object.__setattr__(self, "index", idx)

    def __len__(self):
        return len(self.keys)

    def __contains__(self, key):
        return key in self.index


class SparseOperator:
    """Linear map ``domain -> codomain`` stored as ``{(row, col): value}``."""

    __slots__ = ("codomain", "domain", "entries")

    def __init__(self, codomain: Basis, domain: Basis, entries: Mapping[tuple[int, int], Number] = ()):
        self.codomain = codomain
        self.domain = domain
        clean = {}
        for (i, j), v in dict(entries).items():
            if not (0 <= i < len(codomain) and 0 <= j < len(domain)):
                raise IndexError(f"entry ({i}, {j}) outside {len(codomain)}x{len(domain)}")
            if v != 0:
                clean[i, j] = v
        self.entries = clean

    @classmethod
    def from_keys(cls, codomain: Basis, domain: Basis, items: Iterable[tuple[Hashable, Hashable, Number]]):
        ent: dict = {}
        for r, c, v in items:
            key = (codomain.index[r], domain.index[c])
            ent[key] = ent.get(key, 0) + v
        return cls(codomain, domain, ent)

    @classmethod
    def identity(cls, basis: Basis, scale: Number = 1):
        return cls(basis, basis, {(i, i): scale for i in range(len(basis))})

    @property
    def shape(self):
        return (len(self.codomain), len(self.domain))

    def __repr__(self):
        return f"SparseOperator({self.codomain.name} <- {self.domain.name}, {self.shape}, nnz={len(self.entries)})"

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        if self.domain != other.codomain:
            raise ValueError(f"cannot compose {self.domain.name} with {other.codomain.name}")
        by_row: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                out[i, j] = out.get((i, j), 0) + a * b
        return SparseOperator(self.codomain, other.domain, out)

    def _same_shape(self, other):
        if self.codomain != other.codomain or self.domain != other.domain:
            raise ValueError("operators act between different bases")

    def __add__(self, other):
        self._same_shape(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return SparseOperator(self.codomain, self.domain, out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, c: Number):
        return SparseOperator(self.codomain, self.domain, {k: v * c for k, v in self.entries.items()})

    __rmul__ = __mul__

    def adjoint(self) -> "SparseOperator":
        return SparseOperator(
            self.domain, self.codomain, {(j, i): (v.conjugate() if isinstance(v, complex) else v) for (i, j), v in self.entries.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return self.codomain == other.codomain and self.domain == other.domain and self.entries == other.entries

    __hash__ = None

    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.entries.values())

    def restrict(self, rows: Callable[[Hashable], bool] | None = None, cols: Callable[[Hashable], bool] | None = None):
        """Zero every entry whose row key or column key fails its predicate."""
        rk, ck = self.codomain.keys, self.domain.keys
        keep = {
            (i, j): v
            for (i, j), v in self.entries.items()
            if (rows is None or rows(rk[i])) and (cols is None or cols(ck[j]))
        }
        return SparseOperator(self.codomain, self.domain, keep)

    def max_abs(self, rows=None, cols=None):
        sub = self.restrict(rows, cols) if (rows or cols) else self
        return max((abs(v) for v in sub.entries.values()), default=0)

    def column(self, key) -> dict:
        j = self.domain.index[key]
        return {self.codomain.keys[i]: v for (i, jj), v in self.entries.items() if jj == j}

    def to_dense(self) -> np.ndarray:
        dtype = complex if any(isinstance(v, complex) for v in self.entries.values()) else float
        m = np.zeros(self.shape, dtype=dtype)
        for (i, j), v in self.entries.items():
            m[i, j] = v
        return m

    def rank(self, tol: float | None = None) -> int:
        if self.is_exact():
            return exact_rank(self.entries)
        if not self.entries:
            return 0
        return int(np.linalg.matrix_rank(self.to_dense(), tol=tol))


def exact_rank(entries: Mapping[tuple[int, int], int | Fraction]) -> int:
    """Rank over Q by Gaussian elimination on sparse rows."""
    rows: dict[int, dict[int, Fraction]] = {}
    for (i, j), v in entries.items():
        if v:
            rows.setdefault(i, {})[j] = Fraction(v)
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows.values():
        r = dict(row)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                break
            f = r[c] / p[c]
            for j, v in p.items():
                nv = r.get(j, 0) - f * v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
    return len(pivots)


def partial_permutation(codomain: Basis, domain: Basis, mapping: Mapping[Hashable, Hashable]) -> SparseOperator:
    """0/1 matrix sending basis vector ``c`` to ``mapping[c]`` where defined."""
    return SparseOperator.from_keys(codomain, domain, ((r, c, 1) for c, r in mapping.items()))
