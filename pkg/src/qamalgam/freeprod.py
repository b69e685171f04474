"""Free products of fusion rings and the amalgamated A_o example.

Irreducibles of a (non-amalgamated) free product are alternating words
``x_1 x_2 ... x_n`` of nontrivial letters taken from the two factors in
turn. Fusion only interacts at the junction of the two words.

The amalgam ``A_o *_T A_o`` over the even part has irreducibles
``a^k (x) v_l`` (``k`` in Z, ``l`` in N); its closed-form rules are
checked against the generator rewriting in :mod:`qamalgam.amalgam_oracle`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .fusion import (
    AoRing,
    FusionElement,
    FusionError,
    FusionRing,
    Label,
    dims_close,
    fuse_elements,
)


class WordError(FusionError):
    """A letter sequence that is not a reduced alternating word."""


# --------------------------------------------------------------------------
# alternating words


class AltWord(Label):
    """Alternating word; payload is a tuple of ``(factor, label)`` letters."""

    @property
    def letters(self) -> tuple[tuple[int, Label], ...]:
        return self.payload

    def __len__(self):
        return len(self.payload)

    def __str__(self):
        if not self.payload:
            return "()"
        return ".".join(f"{lab}[{i}]" for i, lab in self.payload)


class FreeProductRing(FusionRing):
    """Fusion ring of the free product of the duals of ``ring1`` and ``ring2``.

    The degree of a word is the sum of its letter degrees.
    """

    def __init__(self, ring1: FusionRing, ring2: FusionRing):
        self.factors = (ring1, ring2)
        self.name = f"({ring1.name})*({ring2.name})"
        self.unit = AltWord(self.name, ())
        self.finite = False
        self._cache: dict = {}

    def factor(self, i: int) -> FusionRing:
        if i not in (1, 2):
            raise WordError(f"factor index must be 1 or 2, got {i!r}")
        return self.factors[i - 1]

    def word(self, letters: Iterable[tuple[int, Label]] = ()) -> AltWord:
        w = AltWord(self.name, tuple((i, lab) for i, lab in letters))
        problem = self._letter_problem(w.payload)
        if problem:
            raise WordError(problem)
        return w

    def _letter_problem(self, letters) -> str | None:
        prev = None
        for pos, item in enumerate(letters):
            if not (isinstance(item, tuple) and len(item) == 2):
                return f"letter {pos} is not a (factor, label) pair"
            i, lab = item
            if i not in (1, 2):
                return f"letter {pos}: bad factor {i!r}"
            ring = self.factors[i - 1]
            if not ring.contains(lab):
                return f"letter {pos}: {lab!r} is not a label of {ring.name}"
            if lab == ring.unit:
                return f"letter {pos}: unit letters are not allowed"
            if prev == i:
                return f"letters {pos - 1},{pos} both from factor {i}"
            prev = i
        return None

    def _is_label(self, r):
        return isinstance(r, AltWord) and isinstance(r.payload, tuple) and self._letter_problem(r.payload) is None

    def degree(self, w):
        return sum(self.factors[i - 1].degree(lab) for i, lab in w.payload)

    def sort_index(self, w):
        return (len(w.payload), tuple((i, self.factors[i - 1].sort_index(lab)) for i, lab in w.payload))

    def words(self, max_len: int, degree_bound: int | None = None) -> list[AltWord]:
        """Alternating words of length <= max_len with letter degrees <= degree_bound."""
        alphabet = {i: self.factors[i - 1].nontrivial_labels(degree_bound) for i in (1, 2)}
        layer = [()]
        out = [self.unit]
        for _ in range(max_len):
            nxt = []
            for w in layer:
                for i in (1, 2):
                    if w and w[-1][0] == i:
                        continue
                    nxt.extend(w + ((i, lab),) for lab in alphabet[i])
            layer = nxt
            out.extend(AltWord(self.name, w) for w in nxt)
        return sorted(out, key=self.sort_index)

    def labels(self, bound=None):
        if bound is None:
            raise FusionError("a free product is infinite; a degree bound is required")
        if any(ring.degree(r) == 0 for ring in self.factors for r in ring.nontrivial_labels(bound)):
            raise FusionError("nontrivial letters of degree 0 make the degree enumeration infinite")
        out = [w for w in self.words(bound, bound) if self.degree(w) <= bound]
        return sorted(out, key=lambda w: (self.degree(w), self.sort_index(w)))

    def _fuse(self, a, b):
        key = (a.payload, b.payload)
        if key not in self._cache:
            self._cache[key] = _free_fuse_letters(self.factors, a.payload, b.payload)
        return {AltWord(self.name, w): n for w, n in self._cache[key].items()}

    def _conj(self, w):
        return AltWord(self.name, tuple((i, self.factors[i - 1].conj(lab)) for i, lab in reversed(w.payload)))

    def _dim(self, w):
        d = 1
        for i, lab in w.payload:
            d *= self.factors[i - 1].dim(lab)
        return d


def _free_fuse_letters(factors, a: tuple, b: tuple) -> dict:
    if not a:
        return {b: 1}
    if not b:
        return {a: 1}
    (i, x), (j, y) = a[-1], b[0]
    if i != j:
        return {a + b: 1}
    ring = factors[i - 1]
    head, tail = a[:-1], b[1:]
    out: dict = {}
    for c, n in ring.fuse(x, y).items():
        if c == ring.unit:
            for w, m in _free_fuse_letters(factors, head, tail).items():
                out[w] = out.get(w, 0) + n * m
        else:
            w = head + ((i, c),) + tail
            out[w] = out.get(w, 0) + n
    return out


def enumerate_words(ring1: FusionRing, ring2: FusionRing, max_len: int, degree_bound: int | None = None) -> list[AltWord]:
    return FreeProductRing(ring1, ring2).words(max_len, degree_bound)


def words_not_ending(words: Iterable[AltWord], i: int) -> list[AltWord]:
    """The empty word and the words whose last letter is not from factor ``i``."""
    return [w for w in words if not w.payload or w.payload[-1][0] != i]


def free_fuse(fp: FreeProductRing, a: AltWord, b: AltWord) -> FusionElement:
    return fp.fuse(a, b)


def free_conj(fp: FreeProductRing, a: AltWord) -> AltWord:
    return fp.conj(a)


# --------------------------------------------------------------------------
# the amalgamated A_o example


class AmalgamLabel(Label):
    """``a^k (x) v_{1,l}``; payload ``(k, l)``."""

    @property
    def k(self) -> int:
        return self.payload[0]

    @property
    def l(self) -> int:
        return self.payload[1]

    def __str__(self):
        k, l = self.payload
        return f"({k},{l})"


class AmalgamRing(FusionRing):
    """Fusion ring of ``A_o *_T A_o`` with T the even part.

    Closed-form rules, with ``s = (-1)^l``:

    * ``(k, l) (x) (k', l') = sum_m (k + s k', m)``, ``m = |l-l'|, ..., l+l'`` step 2
    * ``conj(k, l) = (-s k, l)``
    * ``dim(k, l) = d_l``
    """

    def __init__(self, d1: float = 2):
        self.ao = AoRing(d1)
        self.d1 = self.ao.d1
        self.name = f"amalgam({self.d1})"
        self.unit = AmalgamLabel(self.name, (0, 0))

    def label(self, k: int, l: int) -> AmalgamLabel:
        r = AmalgamLabel(self.name, (k, l))
        self.check(r)
        return r

    def degree(self, r):
        k, l = r.payload
        return abs(k) + l

    def sort_index(self, r):
        k, l = r.payload
        return (abs(k) + l, l, k < 0)

    def labels(self, bound=None):
        if bound is None:
            raise FusionError("the amalgam ring is infinite; a degree bound is required")
        out = []
        for total in range(bound + 1):
            for l in range(total + 1):
                k = total - l
                out.append(AmalgamLabel(self.name, (k, l)))
                if k:
                    out.append(AmalgamLabel(self.name, (-k, l)))
        return sorted(out, key=self.sort_index)

    def box(self, kmax: int, lmax: int) -> list[AmalgamLabel]:
        """All labels with ``|k| <= kmax`` and ``l <= lmax``."""
        return sorted(
            (AmalgamLabel(self.name, (k, l)) for k in range(-kmax, kmax + 1) for l in range(lmax + 1)),
            key=self.sort_index,
        )

    def _is_label(self, r):
        p = r.payload
        return (
            type(r) is AmalgamLabel
            and isinstance(p, tuple)
            and len(p) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in p)
            and p[1] >= 0
        )

    def _fuse(self, r, s):
        (k, l), (k2, l2) = r.payload, s.payload
        kk = k + (-1) ** l * k2
        return {AmalgamLabel(self.name, (kk, m)): 1 for m in range(abs(l - l2), l + l2 + 1, 2)}

    def _conj(self, r):
        k, l = r.payload
        return AmalgamLabel(self.name, ((-1) ** (l + 1) * k, l))

    def _dim(self, r):
        return self.ao.dim_index(r.payload[1])

    def embed(self, i: int, l: int) -> AmalgamLabel:
        """Image of ``v_{i,l}``: ``(0, l)`` from factor 1; from factor 2,
        ``(0, l)`` for even ``l`` (the shared part) and ``(-1, l)`` for odd."""
        if i not in (1, 2):
            raise FusionError(f"factor must be 1 or 2, got {i!r}")
        if not isinstance(l, int) or l < 0:
            raise FusionError(f"A_o index must be a non-negative int, got {l!r}")
        if i == 1 or l % 2 == 0:
            return AmalgamLabel(self.name, (0, l))
        return AmalgamLabel(self.name, (-1, l))


def amalgam_ring(d1: float = 2) -> AmalgamRing:
    return AmalgamRing(d1)


def amalgam_embed(ring: AmalgamRing, i: int, l: int) -> AmalgamLabel:
    return ring.embed(i, l)


@dataclass(frozen=True)
class DimMultVerdict:
    word: tuple[tuple[int, int], ...]
    equal: bool
    mixed: tuple[tuple[float, int], ...]
    reference: tuple[tuple[float, int], ...]

    def to_dict(self):
        return {
            "word": [list(x) for x in self.word],
            "equal": self.equal,
            "mixed": [list(x) for x in self.mixed],
            "reference": [list(x) for x in self.reference],
        }


def _dim_mult_profile(ring: FusionRing, x: FusionElement) -> tuple:
    return tuple(sorted((ring.dim(r), n) for r, n in x.items()))


def expand_mixed_word(ring: AmalgamRing, word: Sequence[tuple[int, int]]) -> FusionElement:
    x = FusionElement.of(ring.unit)
    for i, k in word:
        x = fuse_elements(ring, x, FusionElement.of(ring.embed(i, k)))
    return x


def check_dim_mult_claim(word: Sequence[tuple[int, int]], d1: float = 2, ring: AmalgamRing | None = None) -> DimMultVerdict:
    """Compare ``v_{i1,k1} (x) ... (x) v_{in,kn}`` in the amalgam with
    ``v_{1,k1} (x) ... (x) v_{1,kn}`` in A_o: same multiset of
    (dimension, multiplicity) pairs over the irreducible constituents."""
    ring = ring or _amalgam_cached(d1)
    word = tuple((int(i), int(k)) for i, k in word)
    for i, k in word:
        if i not in (1, 2) or k < 1:
            raise FusionError(f"letters need factor 1 or 2 and index >= 1, got ({i}, {k})")
    mixed = _dim_mult_profile(ring, expand_mixed_word(ring, word))
    ao = ring.ao
    y = FusionElement.of(ao.unit)
    for _, k in word:
        y = fuse_elements(ao, y, FusionElement.of(ao.label(k)))
    reference = _dim_mult_profile(ao, y)
    equal = len(mixed) == len(reference) and all(
        n == m and dims_close(a, b) for (a, n), (b, m) in zip(mixed, reference)
    )
    return DimMultVerdict(word, equal, mixed, reference)


@lru_cache(maxsize=None)
def _amalgam_cached(d1) -> AmalgamRing:
    return AmalgamRing(d1)
