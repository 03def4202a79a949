from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qspectral.exact_linalg import (RankMismatch, exact_rank, float_rank, rank_rational, rationalize,
                                    solve_rational)
from qspectral.scalars import sqrt


def dict_of(mat):
    return {(r, c): Fraction(int(v)) for (r, c), v in np.ndenumerate(mat) if v}


@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_rank_matches_numpy_on_integer_matrices(n, m, data):
    vals = data.draw(st.lists(st.integers(-2, 2), min_size=n * m, max_size=n * m))
    mat = np.array(vals, dtype=float).reshape(n, m)
    assert rank_rational(dict_of(mat)) == np.linalg.matrix_rank(mat)


def test_rank_of_outer_product():
    u, v = [1, 2, 3], [4, 5]
    entries = {(i, j): Fraction(u[i] * v[j]) for i in range(3) for j in range(2)}
    assert rank_rational(entries) == 1
    assert exact_rank(entries, (3, 2)).rank == 1


def test_rationalize_single_radical_pattern():
    r2, r3 = sqrt(Fraction(2)), sqrt(Fraction(3))
    entries = {(0, 0): r2, (0, 1): r2 * r3, (1, 0): Fraction(1), (1, 1): r3}
    rat = rationalize(entries)
    assert rat is not None and all(isinstance(v, Fraction) for v in rat.values())
    res = exact_rank(entries, (2, 2))
    assert res.method == "exact" and res.rank == 1 == res.float_rank


def test_inconsistent_radical_cycle_falls_back_to_float():
    r2 = sqrt(Fraction(2))
    entries = {(0, 0): r2, (0, 1): Fraction(1), (1, 0): Fraction(1), (1, 1): Fraction(1)}
    assert rationalize(entries) is None
    res = exact_rank(entries, (2, 2))
    assert res.method == "float" and res.rank == 2


def test_mismatch_is_detected():
    # 1 and 1 + 1e-12 are distinct rationally but equal within the float tolerance
    entries = {(0, 0): Fraction(1), (0, 1): Fraction(1), (1, 0): Fraction(1),
               (1, 1): Fraction(10 ** 12 + 1, 10 ** 12)}
    with pytest.raises(RankMismatch):
        exact_rank(entries, (2, 2))


def test_float_rank_empty():
    assert float_rank({}, (3, 3)) == 0


@given(st.integers(1, 5), st.data())
def test_solve_rational_against_numpy(n, data):
    vals = data.draw(st.lists(st.integers(-5, 5), min_size=n * n, max_size=n * n))
    mat = np.array(vals, dtype=float).reshape(n, n) + 11 * np.eye(n)  # diagonally dominant
    rhs = data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n))
    sol = solve_rational([[Fraction(int(x)) for x in row] for row in mat], [Fraction(x) for x in rhs])
    assert np.allclose([float(x) for x in sol], np.linalg.solve(mat, rhs))


def test_solve_singular_raises():
    with pytest.raises(ArithmeticError):
        solve_rational([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], [Fraction(1), Fraction(0)])
