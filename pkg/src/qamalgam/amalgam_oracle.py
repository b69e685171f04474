"""Generator rewriting for the amalgam ``A_o *_T A_o``.

This is the independent route to the amalgam fusion rules. It only uses

* the cyclic rules for ``a``: ``a^e (x) a^f = a^{e+f}``,
* the A_o rule for the fundamental object ``v = v_{1,1}``:
  ``v_m (x) v = v_{m-1} + v_{m+1}``,
* the relation ``v (x) a = a^{-1} (x) v``; conjugating by ``a`` gives
  ``v (x) a^{-1} = a (x) v``.

An irreducible ``(k, l) = a^k (x) v_l`` is written as a virtual
combination of generator words, ``v_l`` being the Chebyshev-type
combination of powers of ``v`` obtained by peeling lower constituents off
``v^{(x) l}`` (dimension counting). Products are rewritten to
``a^j (x) v^{(x) n}`` and decomposed with the ``v`` rule alone.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache

V = ("v",)


def a_token(e: int) -> tuple:
    return ("a", e)


class OracleError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def v_combination(l: int) -> tuple[tuple[tuple, int], ...]:
    """``v_l`` as a signed combination of generator words ``v^n``."""
    if l == 0:
        return (((), 1),)
    if l == 1:
        return (((V,), 1),)
    out = Counter()
    for w, c in v_combination(l - 1):
        out[w + (V,)] += c
    for w, c in v_combination(l - 2):
        out[w] -= c
    return tuple(sorted((w, c) for w, c in out.items() if c))


def a_power(k: int) -> tuple:
    return tuple(a_token(1 if k > 0 else -1) for _ in range(abs(k)))


def rewrite(word: tuple) -> tuple[int, int]:
    """Rewrite a generator word to ``a^j (x) v^n``; returns ``(j, n)``."""
    tokens = list(word)
    changed = True
    while changed:
        changed = False
        for p in range(len(tokens) - 1):
            if tokens[p] == V and tokens[p + 1][0] == "a":
                tokens[p], tokens[p + 1] = a_token(-tokens[p + 1][1]), V
                changed = True
    j = 0
    n = 0
    for t in tokens:
        if t == V:
            n += 1
        else:
            j += t[1]
    return j, n


@lru_cache(maxsize=None)
def v_power_decomposition(n: int) -> dict[int, int]:
    """Multiplicities of ``v_m`` in ``v^{(x) n}`` from the ``v`` rule only."""
    dec = {0: 1}
    for _ in range(n):
        nxt: dict[int, int] = {}
        for m, c in dec.items():
            for m2 in (m - 1, m + 1):
                if m2 >= 0:
                    nxt[m2] = nxt.get(m2, 0) + c
        dec = nxt
    return dec


def expand(words: Counter) -> dict[tuple[int, int], int]:
    """Decompose a signed combination of generator words into irreducibles."""
    out: Counter = Counter()
    for w, c in words.items():
        j, n = rewrite(w)
        for m, mult in v_power_decomposition(n).items():
            out[j, m] += c * mult
    result = {key: c for key, c in out.items() if c}
    neg = [key for key, c in result.items() if c < 0]
    if neg:
        raise OracleError(f"negative multiplicity at {neg[0]}")
    return result


def label_words(k: int, l: int) -> Counter:
    """``a^k (x) v_l`` as a signed combination of generator words."""
    return Counter({a_power(k) + w: c for w, c in v_combination(l)})


def oracle_fuse(x: tuple[int, int], y: tuple[int, int]) -> dict[tuple[int, int], int]:
    """Fusion of ``(k, l)`` and ``(k', l')`` by rewriting."""
    left, right = label_words(*x), label_words(*y)
    prod: Counter = Counter()
    for w1, c1 in left.items():
        for w2, c2 in right.items():
            prod[w1 + w2] += c1 * c2
    return expand(prod)


def oracle_conj(k: int, l: int) -> tuple[int, int]:
    """Conjugate of ``a^k (x) v_l``, i.e. ``v_l (x) a^{-k}`` rewritten."""
    words = Counter({w + a_power(-k): c for w, c in v_combination(l)})
    out = expand(words)
    if len(out) != 1 or next(iter(out.values())) != 1:
        raise OracleError(f"conjugate of ({k},{l}) is not irreducible: {out}")
    return next(iter(out))


def oracle_dim(l: int, d1) -> int | float:
    """``dim v_l`` from the signed word combination: ``sum c d1^n``."""
    return sum(c * d1 ** len(w) for w, c in v_combination(l))


def derive_embedding(lmax: int) -> dict[int, tuple[int, int]]:
    """Images of ``v_{2,l}`` for ``l <= lmax`` by induction.

    ``v_{2,0}`` is the unit, ``v_{2,1} = a^{-1} (x) v_{1,1}`` (the relation),
    and ``v_{2,1} (x) v_{2,l} = v_{2,l-1} + v_{2,l+1}`` so the image of
    ``v_{2,l+1}`` is the constituent that is not the image of ``v_{2,l-1}``.
    """
    emb = {0: (0, 0), 1: (-1, 1)}
    for l in range(1, lmax):
        prod = oracle_fuse(emb[1], emb[l])
        rest = dict(prod)
        rest[emb[l - 1]] = rest.get(emb[l - 1], 0) - 1
        rest = {key: c for key, c in rest.items() if c}
        if sorted(rest.values()) != [1] or min(prod.values()) < 0:
            raise OracleError(f"v_(2,{l + 1}) not isolated: {prod}")
        emb[l + 1] = next(iter(rest))
    return {l: emb[l] for l in range(lmax + 1)}
