from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import dense_generators, dense_monomial
from qspectral.algebra import (AlgebraElement, LaurentPoly, Monomial, check_q, defining_relations, element_from_terms,
                               generators, haar_state, haar_state_series, in_ideal_beta, monomial_grid,
                               parse_element, symbol)

Q = Fraction(1, 2)
monos = st.tuples(st.integers(-2, 2), st.integers(0, 2), st.integers(0, 2))
coeffs = st.fractions(-3, 3, max_denominator=4).filter(lambda c: c != 0)
elements = st.lists(st.tuples(monos, coeffs), min_size=1, max_size=3).map(lambda t: element_from_terms(t, Q))
qs = st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(3, 4), Fraction(9, 10)])


@pytest.mark.parametrize("q", [Fraction(1, 2), Fraction(3, 4), Fraction(1, 10)])
def test_defining_relations_vanish(q):
    for name, rel in defining_relations(q).items():
        assert rel.is_zero(), name


def test_paper_style_examples():
    g = generators(Q)
    a, a_, b, b_ = g["a"], g["a*"], g["b"], g["b*"]
    assert a * b == (b * a).scale(Q)
    assert a_ * a == g["1"] - b_ * b
    assert g["1"] * a == a and a * g["1"] == a


def test_adjoint_of_alpha_beta():
    # (ab)* = b* a* = q a* b*
    ab = AlgebraElement.monomial(1, 1, 0, Q)
    assert ab.adjoint() == AlgebraElement.monomial(-1, 0, 1, Q, coeff=Q)


@given(elements, elements, elements)
def test_associativity(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(elements, elements)
def test_involution_is_antimultiplicative(x, y):
    assert (x * y).adjoint() == y.adjoint() * x.adjoint()
    assert x.adjoint().adjoint() == x


@given(elements, elements)
def test_distributivity(x, y):
    z = AlgebraElement.monomial(1, 1, 0, Q)
    assert (x + y) * z == x * z + y * z


@given(monos, monos)
def test_product_matches_operator_oracle(m1, m2):
    """pi is faithful, so a float matrix product is an independent check of normal ordering."""
    a, b = dense_generators(10, 10, float(Q))
    x = AlgebraElement.monomial(*m1, q=Q)
    y = AlgebraElement.monomial(*m2, q=Q)
    lhs = dense_monomial(*m1, a, b) @ dense_monomial(*m2, a, b)
    rhs = sum(float(c) * dense_monomial(m.i, m.j, m.k, a, b) for m, c in (x * y).terms.items())
    margin = sum(abs(v) for v in m1 + m2)
    keep = [k for k in range(a.shape[0]) if k // 21 <= 10 - margin and abs(k % 21 - 10) <= 10 - margin]
    assert np.allclose(lhs[np.ix_(keep, keep)], np.asarray(rhs)[np.ix_(keep, keep)], atol=1e-12)


@given(elements)
def test_text_roundtrip(x):
    assert parse_element(x.text(), Q) == x


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_element("3 * c^2", Q)


@pytest.mark.parametrize("q", [0, 1, Fraction(3, 2), -Fraction(1, 2)])
def test_q_validation(q):
    with pytest.raises(ValueError, match="q must lie in"):
        check_q(q)


def test_monomial_grid_size():
    assert len(monomial_grid(2, Q)) == 5 * 3 * 3


@given(qs, st.integers(0, 4))
def test_haar_state_closed_form(q, j):
    x = AlgebraElement.monomial(0, j, j, q)
    assert haar_state(x) == (1 - q * q) / (1 - q ** (2 * j + 2))
    assert abs(float(haar_state(x)) - haar_state_series(x, 400)) < 1e-12


def test_haar_state_kills_off_diagonal():
    assert haar_state(AlgebraElement.monomial(1, 0, 0, Q)) == 0
    assert haar_state(AlgebraElement.monomial(0, 1, 0, Q)) == 0
    assert haar_state(generators(Q)["1"]) == 1


@given(elements, elements)
def test_symbol_is_a_homomorphism(x, y):
    assert symbol(x * y) == symbol(x) * symbol(y)


def test_ideal_membership():
    g = generators(Q)
    assert in_ideal_beta(g["b"] * g["a"])
    assert not in_ideal_beta(g["a"] + g["b"])


def test_laurent_poly_arithmetic():
    z = LaurentPoly.monomial(1)
    zi = LaurentPoly.monomial(-1)
    assert z * zi == LaurentPoly.monomial(0)
    assert (z + zi).scale(2) - z.scale(2) == zi.scale(2)


def test_monomial_shift_and_ideal():
    assert Monomial(0, 1, 2).in_ideal() and not Monomial(3, 0, 0).in_ideal()
