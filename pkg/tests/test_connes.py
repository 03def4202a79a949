from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qspectral import connes
from qspectral.algebra import AlgebraElement, element_from_terms, generators, monomial_grid
from qspectral.connes import (CalkinClass, Form1, bimodule_action, classify_mod_compacts, decomposition_matches,
                              differential, leibniz_holds, mu, nu, omega_k, psi, tech_lemma_probe, theta,
                              witness_alpha_beta, witness_alpha_star_beta)
from qspectral.forms import UniversalForm
from qspectral.truncation import TruncationWindow

Q = Fraction(1, 2)
monos = st.tuples(st.integers(-2, 2), st.integers(0, 2), st.integers(0, 2))
coeffs = st.fractions(-3, 3, max_denominator=4).filter(lambda c: c != 0)
elements = st.lists(st.tuples(monos, coeffs), min_size=1, max_size=3).map(lambda t: element_from_terms(t, Q))
small = st.lists(st.tuples(st.tuples(st.integers(-1, 1), st.integers(0, 1), st.integers(0, 1)), coeffs),
                 min_size=1, max_size=2).map(lambda t: element_from_terms(t, Q))


@st.composite
def forms(draw, max_degree=2):
    deg = draw(st.integers(0, max_degree))
    return UniversalForm.from_term(draw(small), [draw(small) for _ in range(deg)])


@pytest.mark.parametrize("x", monomial_grid(1, Q), ids=lambda x: x.text())
def test_four_term_decomposition(x):
    assert decomposition_matches(x, TruncationWindow(8, 8))


def test_differential_examples():
    g = generators(Q)
    b, a = g["b"], g["a"]
    assert differential(b) == Form1(AlgebraElement.zero(Q), -b)
    ab = a * b
    assert differential(ab) == Form1(-ab, -ab)
    assert differential(g["1"]) == Form1(AlgebraElement.zero(Q), AlgebraElement.zero(Q))


def test_form1_rejects_non_ideal_part():
    with pytest.raises(ValueError):
        Form1(AlgebraElement.zero(Q), generators(Q)["a"])


@given(elements, elements)
def test_leibniz(x, y):
    assert leibniz_holds(x, y)


@given(elements, elements)
def test_bimodule_associativity(x, y):
    w = differential(generators(Q)["b"])
    assert bimodule_action(x, bimodule_action(y, w)) == bimodule_action(x * y, w)


@given(forms(), forms())
def test_psi_is_multiplicative(w, v):
    assert psi(w * v) == psi(w) * psi(v)


@given(forms(1))
def test_psi_kills_d_of_d(w):
    # psi is not a chain map in general, but it is linear
    assert psi(w + w) == psi(w).scale(2)


@settings(max_examples=6)
@given(forms(2))
def test_psi_matches_operators_mod_compacts(w):
    cls = classify_mod_compacts(w, TruncationWindow(40, 40))
    assert cls.passed, cls.as_dict()


@pytest.mark.parametrize("k", [1, -1, 2, -2, 3])
def test_omega_k_identities(k):
    wk = omega_k(k, Q)
    ak = AlgebraElement.monomial(k, 0, 0, Q)
    assert psi(wk).is_zero()
    x = AlgebraElement.monomial(0, 1, 1, Q)
    assert psi(wk.d()) == CalkinClass(ak.scale(mu(k, Q)) + (ak * x).scale(nu(k, Q)), AlgebraElement.zero(Q))


def test_mu_nu_closed_forms():
    q2 = Q * Q
    assert mu(1, Q) == -1 - (1 + q2) / (1 - q2)
    assert nu(2, Q) == 4 * q2 / (1 - q2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_theta_reaches_s_powers(n):
    t = theta(n, Q)
    assert psi(t).is_zero()
    assert psi(t.d()) == CalkinClass.s_power(n, Q)


def test_witnesses():
    g = generators(Q)
    a, a_, b = g["a"], g["a*"], g["b"]
    zero = AlgebraElement.zero(Q)
    assert psi(witness_alpha_beta(Q)).is_zero()
    assert psi(witness_alpha_beta(Q).d()) == CalkinClass(zero, a * b)
    assert psi(witness_alpha_star_beta(Q)).is_zero()
    assert psi(witness_alpha_star_beta(Q).d()) == CalkinClass(zero, -(a_ * b))


def test_form_with_class_s():
    assert psi(connes.form_with_class_s(Q)) == CalkinClass.s_power(1, Q)


def test_higher_form_vanishing_certificates():
    checks = connes.higher_form_vanishing_check(3, Q)
    assert len(checks) == 15
    bad = [c.as_dict() for c in checks if not c.passed]
    assert not bad


def test_tech_lemma_probe():
    g = generators(Q)
    one, a = g["1"], g["a"]
    assert tech_lemma_probe(one, AlgebraElement.zero(Q)).status == "separated"
    assert tech_lemma_probe(a, -a).status == "separated"
    assert tech_lemma_probe(AlgebraElement.zero(Q), AlgebraElement.zero(Q)).status == "null_pair"
    # pi(bb*) = q^{2N} (x) I decays in N only, so it is not compact either
    bb = g["b"] * g["b*"]
    assert tech_lemma_probe(AlgebraElement.zero(Q), bb).status == "separated"
