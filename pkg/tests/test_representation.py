from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import dense_generators, dense_monomial
from qspectral.algebra import AlgebraElement, LaurentPoly, element_from_terms, generators, monomial_grid
from qspectral.representation import (InconclusiveProbe, algebraic_rank, equivariance_check, faithfulness_probe,
                                      represent, represent_circle, represent_float, root_x)
from qspectral.truncation import TruncationWindow

Q = Fraction(1, 2)
W = TruncationWindow(8, 8)
monos = st.tuples(st.integers(-2, 2), st.integers(0, 2), st.integers(0, 2))
coeffs = st.fractions(-3, 3, max_denominator=4).filter(lambda c: c != 0)
elements = st.lists(st.tuples(monos, coeffs), min_size=1, max_size=3).map(lambda t: element_from_terms(t, Q))


def test_generator_actions():
    g = generators(Q)
    a = represent(g["a"], W)
    assert a.entry((2, 3), (3, 3)) == root_x(3, Q)
    assert a.entry((0, 0), (0, 0)) == 0
    b = represent(g["b"], W)
    assert b.entry((3, -1), (3, 0)) == Q ** 3
    assert represent(g["1"], W) == represent(AlgebraElement.one(Q), W)


@given(monos)
def test_monomials_match_dense_oracle(m):
    a, b = dense_generators(8, 8, float(Q))
    want = dense_monomial(*m, a, b)
    got = represent(AlgebraElement.monomial(*m, q=Q), W).to_dense()
    margin = sum(abs(v) for v in m)
    keep = [k for k in range(W.dim) if W.distance(W.label(k)) >= margin]
    assert np.allclose(got[np.ix_(keep, keep)], want[np.ix_(keep, keep)], atol=1e-12)


@given(elements, elements)
def test_homomorphism_on_interior(x, y):
    assert (represent(x, W) @ represent(y, W)).equal_on_interior(represent(x * y, W))


@given(elements)
def test_star_preserved(x):
    assert represent(x.adjoint(), W).equal_on_interior(represent(x, W).adjoint())


def test_unitarity_relation_is_exact():
    g = generators(Q)
    a, a_, b, b_ = (represent(g[k], W) for k in ("a", "a*", "b", "b*"))
    one = represent(g["1"], W)
    assert (a_ @ a + b_ @ b).equal_on_interior(one, 1)


def test_float_representation_agrees():
    x = AlgebraElement.monomial(1, 1, 0, Q) + AlgebraElement.monomial(-1, 0, 2, Q, coeff=Fraction(1, 3))
    assert np.allclose(represent_float(x, W).toarray(), represent(x, W).to_dense())


def test_faithfulness_on_small_grid():
    grid = monomial_grid(1, Q)
    assert algebraic_rank(grid) == len(grid)
    assert faithfulness_probe(grid, W)


def test_faithfulness_zero_elements_are_dropped():
    zero = AlgebraElement.zero(Q)
    assert faithfulness_probe([zero, zero], W)


def test_faithfulness_inconclusive_when_window_too_small():
    # b^j are distinguishable only through q^{jn}; a 1x1 window cannot see beyond n = 1
    elems = [AlgebraElement.monomial(0, j, 0, Q) for j in range(8)]
    with pytest.raises(InconclusiveProbe):
        faithfulness_probe(elems, TruncationWindow(1, 1))


@pytest.mark.parametrize("zp,wp", [(1, 0), (0, 1), (1, 1), (2, 3)])
def test_equivariance(zp, wp):
    for x in monomial_grid(1, Q):
        assert equivariance_check(x, TruncationWindow(5, 5), zp, wp)


def test_circle_representation():
    op = represent_circle(LaurentPoly.monomial(2), 6)
    assert op.entry((1,), (3,)) == 1
    assert (represent_circle(LaurentPoly.monomial(1), 6) @ represent_circle(LaurentPoly.monomial(-1), 6)
            ).equal_on_interior(represent_circle(LaurentPoly.monomial(0), 6), 1)
