from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qspectral import podles
from qspectral.forms import UniversalForm
from qspectral.podles import SphereElement, SphereMonomial, SphereParams
from qspectral.scalars import to_float

P = SphereParams(Fraction(1, 2), Fraction(2))
P_IRR = SphereParams(Fraction(3, 4), Fraction(1, 10))
params = st.sampled_from([P, P_IRR, SphereParams(Fraction(9, 10), Fraction(1, 10)), SphereParams(Fraction(1, 3), Fraction(5))])
smonos = st.tuples(st.integers(0, 2), st.integers(-2, 2))
coeffs = st.fractions(-3, 3, max_denominator=4).filter(lambda c: c != 0)


def element(draw_terms, p):
    return SphereElement({SphereMonomial(m, n): c for (m, n), c in draw_terms}, p)


@st.composite
def sphere_elements(draw, p=P):
    return element(draw(st.lists(st.tuples(smonos, coeffs), min_size=1, max_size=3)), p)


def dense_pair(p: SphereParams, m: int, sign: int):
    """Float oracle for pi_pm(A), pi_pm(B) on e_0..e_m."""
    q, c = float(p.q), float(p.c)
    lam = 0.5 + sign * math.sqrt(c + 0.25)
    A = np.diag([lam * q ** (2 * n) for n in range(m + 1)])
    B = np.zeros((m + 1, m + 1))
    for n in range(1, m + 1):
        x = lam * q ** (2 * n)
        B[n - 1, n] = math.sqrt(x - x * x + c)
    return A, B


def dense_word(x: SphereMonomial, A, B):
    out = np.linalg.matrix_power(A, x.m)
    Bn = B if x.n >= 0 else B.T
    return out @ np.linalg.matrix_power(Bn, abs(x.n))


@pytest.mark.parametrize("p", [P, P_IRR, SphereParams(Fraction(9, 10), Fraction(1, 10))])
def test_relations_are_exact(p):
    for name, rel in podles.sphere_relations(p).items():
        assert rel.is_zero(), name
    assert podles.c_pm_zero_is_exact(p)


def test_paper_examples():
    g = podles.sphere_generators(P)
    A, B, B_, one = g["A"], g["B"], g["B*"], g["1"]
    assert B * A == SphereElement.monomial(1, 1, P, coeff=Fraction(1, 4))
    assert B_ * B == A - A * A + one.scale(2)
    assert one * B == B
    assert P.lam(1) == 2 and P.lam(-1) == -1


def test_literal_display_is_inconsistent():
    assert not podles.literal_display_defect(P).is_zero()


def test_param_validation():
    with pytest.raises(ValueError):
        SphereParams(Fraction(2), Fraction(1))
    with pytest.raises(ValueError):
        SphereParams(Fraction(1, 2), Fraction(0))
    with pytest.raises(ValueError):
        SphereElement.monomial(0, 1, P) * SphereElement.monomial(0, 1, P_IRR)


@given(sphere_elements(), sphere_elements(), sphere_elements())
def test_associativity(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(sphere_elements(), sphere_elements())
def test_adjoint_antihomomorphism(x, y):
    assert (x * y).adjoint() == y.adjoint() * x.adjoint()
    assert x.adjoint().adjoint() == x


@given(sphere_elements())
def test_text_roundtrip(x):
    assert podles.parse_sphere(x.text(), P) == x


@settings(max_examples=25)
@given(params, smonos, smonos, st.sampled_from([1, -1]))
def test_products_against_float_representations(p, m1, m2, sign):
    m = 14
    A, B = dense_pair(p, m, sign)
    x, y = SphereMonomial(*m1), SphereMonomial(*m2)
    prod = SphereElement({x: 1}, p) * SphereElement({y: 1}, p)
    want = dense_word(x, A, B) @ dense_word(y, A, B)
    got = sum(float(c) * dense_word(k, A, B) for k, c in prod.terms.items())
    keep = slice(0, m + 1 - abs(m1[1]) - abs(m2[1]))
    assert np.allclose(np.asarray(got)[keep, keep], want[keep, keep], atol=1e-10)


@pytest.mark.parametrize("p", [P, P_IRR])
def test_representation_matches_oracle(p):
    m = 10
    g = podles.sphere_generators(p)
    for idx, sign in enumerate((1, -1)):
        A, B = dense_pair(p, m, sign)
        assert np.allclose(podles.sphere_represent(g["A"], m)[idx].to_dense(), A)
        assert np.allclose(podles.sphere_represent(g["B"], m)[idx].to_dense(), B)
        assert np.allclose(podles.sphere_represent(g["B*"], m)[idx].to_dense(), B.T)


@pytest.mark.parametrize("p", [P, P_IRR])
def test_c_pm_positive(p):
    for sign in (1, -1):
        assert p.c_pm(sign, 0) == 0
        assert all(to_float(p.c_pm(sign, n)) > 0 for n in range(1, 60))


def test_represented_relations_exact_on_interior():
    g = podles.sphere_generators(P_IRR)
    A, B, B_, one = g["A"], g["B"], g["B*"], g["1"]
    q, c = P_IRR.q, P_IRR.c
    for (px, py), pr in zip(zip(podles.sphere_represent(B, 12), podles.sphere_represent(B_, 12)),
                            podles.sphere_represent(A.scale(q * q) - (A * A).scale(q ** 4) + one.scale(c), 12)):
        assert (px @ py).equal_on_interior(pr, 2)


@pytest.mark.parametrize("name", ["A", "B", "B*", "1"])
def test_evenness(name):
    x = podles.sphere_generators(P)[name]
    assert all(podles.evenness_checks(x, 10).values())


def test_commutator_with_identity_vanishes():
    assert not podles.even_triple_commutator(podles.sphere_generators(P)["1"], 10).entries


@pytest.mark.parametrize("p", [P, P_IRR])
def test_db_leading_term(p):
    assert podles.db_leading_certificate(p).passed


@pytest.mark.parametrize("p", [P, P_IRR, SphereParams(Fraction(9, 10), Fraction(1, 10))])
def test_boundedness_certificates(p):
    cert = podles.sphere_boundedness_certificates(p)
    assert cert.shift_commutation
    assert cert.passed, cert.as_dict()


@pytest.mark.parametrize("proj,s0,want", [("p0", 0, -1), ("p0", 1, -1), ("zero", 0, 0), ("rank_two", 0, 0),
                                          ("rank_two", 1, 0)])
def test_index_pairing(proj, s0, want):
    res = podles.sphere_index_pairing(12, proj, s0)
    assert res.index == want and res.status == "stable"


def test_index_pairing_rejects_unknown_projection():
    with pytest.raises(ValueError):
        podles.sphere_index_pairing(8, "other")


@pytest.mark.parametrize("p", [P, P_IRR])
def test_sphere_calculus(p):
    rep = podles.sphere_calculus(3, p)
    assert rep.passed, [c["name"] for c in rep.checks if not c["passed"]]


def test_witness_is_not_twice_identity():
    """pi(d omega_2) is -2c (I + compact), which differs from 2I by a non-compact part when c != -1."""
    w = podles.witness(2, P).d()
    mat = podles.represent_sphere_form(w, 40)
    m = 40
    resid = mat - 2 * np.eye(2 * (m + 1))
    cert = podles._pair_certificate(resid, m, 2)
    assert not cert.passed


def test_block_shape_of_delta_b():
    res = podles.block_shape(UniversalForm.delta(podles.sphere_generators(P)["B"]))
    assert res["degree"] == 1 and res["block_pattern"] and res["passed"]
