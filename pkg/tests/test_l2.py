from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, strategies as st

from qspectral.algebra import AlgebraElement, LaurentPoly, element_from_terms, generators
from qspectral.forms import UniversalForm
from qspectral.l2 import (CircleForm, circle_differential_class, kernel_membership, l2_differential_circle,
                          l2_differential_suq2, l2_inner_product, lift, null_decomposition, relation_exact,
                          relation_primitive, relation_reduce, sigma_k, sigma_pushforward_check)

Q = Fraction(1, 2)
nonzero = st.integers(-4, 4).filter(bool)


@st.composite
def circle_forms(draw, min_degree=1, max_degree=3):
    k = draw(st.integers(min_degree, max_degree))
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        key = (draw(st.integers(-4, 4)),) + tuple(draw(nonzero) for _ in range(k))
        terms[key] = draw(st.fractions(-5, 5, max_denominator=4))
    return CircleForm(k, terms)


def brute_pairing(w, v):
    """Oracle: each term z^{n0} dz^{n1}..dz^{nk} acts as (prod n_i) z^{sum}; pair coefficient-wise."""
    def vec(f):
        out = {}
        for key, c in f.terms.items():
            out[sum(key)] = out.get(sum(key), 0) + c * prod(key[1:])
        return out
    a, b = vec(w), vec(v)
    return sum(a.get(r, 0) * b.get(r, 0) for r in set(a) | set(b))


def test_paper_style_examples():
    dz = CircleForm.term(0, 1)
    assert l2_inner_product(dz, dz) == 1
    assert l2_inner_product(CircleForm.term(1, 1), dz) == 0
    assert l2_inner_product(CircleForm.term(0, 2), CircleForm.term(1, 1)) == 2


def test_unit_letters_drop_out():
    assert CircleForm.term(3, 0).terms == {}


@given(circle_forms(), st.data())
def test_pairing_matches_oracle_and_is_positive(w, data):
    v = data.draw(circle_forms(w.degree, w.degree))
    assert l2_inner_product(w, v) == brute_pairing(w, v)
    assert l2_inner_product(w, w) >= 0
    assert l2_inner_product(w, v) == l2_inner_product(v, w)


def test_degree_mismatch():
    with pytest.raises(ValueError):
        l2_inner_product(CircleForm.term(0, 1), CircleForm.term(0, 1, 1))


@given(st.integers(-4, 4), st.lists(nonzero, min_size=1, max_size=3))
def test_reduction_relation_is_null(n0, rest):
    assert kernel_membership(relation_reduce((n0, *rest)))


@pytest.mark.parametrize("r", [-3, -2, -1, 1, 2, 3])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_exact_relation_is_null(r, k):
    assert kernel_membership(relation_exact(r, k))


def test_exact_relation_needs_the_corrected_power():
    # dz^r (dz)^{k-1} pairs like r z^{r-1}(dz)^k, not like r z^r (dz)^k
    wrong = CircleForm(1, {(0, 3): 1}) - CircleForm(1, {(3, 1): 3})
    assert not kernel_membership(wrong)


@pytest.mark.parametrize("r", [-3, -2, 0, 1, 2])
@pytest.mark.parametrize("k", [2, 3])
def test_primitive_relation_is_null(r, k):
    assert kernel_membership(relation_primitive(r, k))
    with pytest.raises(ValueError):
        relation_primitive(-1, k)


@given(circle_forms(2, 4))
def test_null_decomposition(w):
    kappa, eta = null_decomposition(w)
    assert kernel_membership(kappa) and kernel_membership(eta)
    assert kappa + eta.d() == w


def test_null_decomposition_degree_guard():
    with pytest.raises(ValueError):
        null_decomposition(CircleForm.term(0, 1))


@given(st.dictionaries(st.integers(-5, 5), st.fractions(-3, 3, max_denominator=3), max_size=4))
def test_circle_differential(coeffs):
    p = LaurentPoly(coeffs)
    want = LaurentPoly({n: n * c for n, c in coeffs.items()})
    assert l2_differential_circle(p) == want
    assert circle_differential_class(p) == want


def test_suq2_differential_modes():
    g = generators(Q)
    a, b = g["a"], g["b"]
    assert l2_differential_suq2(a) == LaurentPoly({1: -1})
    assert l2_differential_suq2(a * b, "literal") == LaurentPoly({1: -1})
    assert l2_differential_suq2(a * b, "quotiented").is_zero()
    for i in range(-3, 4):
        x = AlgebraElement.monomial(i, 0, 0, Q)
        assert l2_differential_suq2(x, "literal") == l2_differential_suq2(x, "quotiented")
    with pytest.raises(ValueError):
        l2_differential_suq2(a, "other")


def test_sigma_and_lift():
    g = generators(Q)
    w = UniversalForm.from_term(g["a"], [g["a*"] + g["b"]])
    assert sigma_k(w) == CircleForm.term(1, -1)
    assert all(not (m.j or m.k) for key in lift(w).terms for m in key)


@pytest.mark.parametrize("letters,value", [(("1", "a"), 1), (("1", "b"), 0), (("a", "a*"), 1)])
def test_pushforward(letters, value):
    g = generators(Q)
    w = UniversalForm.from_term(g[letters[0]], [g[letters[1]]])
    rep = sigma_pushforward_check(w)
    assert rep.lhs == rep.rhs == value
    assert rep.passed, rep.as_dict()
