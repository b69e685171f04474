from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qamalgam.sparse import Basis, SparseOperator, exact_rank, partial_permutation


def test_basis_rejects_duplicates():
    with pytest.raises(ValueError):
        Basis("b", ("x", "x"))


def test_compose_and_adjoint():
    a = Basis("a", ("p", "q"))
    b = Basis("b", ("r", "s", "t"))
    m = SparseOperator.from_keys(b, a, [("r", "p", 1), ("t", "q", 2)])
    assert m.shape == (3, 2)
    assert (m.adjoint() @ m).entries == {(0, 0): 1, (1, 1): 4}
    with pytest.raises(ValueError):
        m @ m


def test_complex_adjoint_conjugates():
    a = Basis("a", (0,))
    m = SparseOperator(a, a, {(0, 0): 1 + 2j})
    assert m.adjoint().entries == {(0, 0): 1 - 2j}


def test_zero_entries_dropped_and_bounds():
    a = Basis("a", (0, 1))
    m = SparseOperator(a, a, {(0, 0): 0, (1, 1): 3})
    assert m.entries == {(1, 1): 3}
    with pytest.raises(IndexError):
        SparseOperator(a, a, {(2, 0): 1})


def test_partial_permutation_rank():
    a = Basis("a", tuple(range(5)))
    p = partial_permutation(a, a, {0: 1, 1: 2, 3: 4})
    assert p.rank() == 3 and p.is_exact()


def test_exact_rank_fractions():
    assert exact_rank({(0, 0): Fraction(1, 3), (0, 1): Fraction(2, 3), (1, 0): 1, (1, 1): 2}) == 1


@settings(max_examples=60)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=5))
def test_exact_rank_matches_numpy(rows):
    m = np.array(rows)
    entries = {(i, j): int(v) for (i, j), v in np.ndenumerate(m) if v}
    assert exact_rank(entries) == np.linalg.matrix_rank(m)


def test_restrict_keeps_only_passing_pairs():
    a = Basis("a", ("x", "y"))
    m = SparseOperator(a, a, {(0, 0): 1, (0, 1): 2, (1, 1): 3})
    r = m.restrict(rows=lambda k: k == "x")
    assert r.entries == {(0, 0): 1, (0, 1): 2}
    assert m.max_abs(cols=lambda k: k == "y") == 3
