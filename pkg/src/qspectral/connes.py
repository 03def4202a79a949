"""Connes-de Rham calculus of quantum SU(2) for the generic Dirac operator.

Everything is organised around the exact matrix identity, for the generic D
and a basis word ``m = a_i b^j b*^k``,

    [D, pi(m)] = -i S pi(m) + (k - j) pi(m)
                 - 2 (Z_i (x) C_j) pi(a_i b^{j-1} b*^k)
                 + 2 (Z_i (x) B_jk) pi(a_i b^j b*^{k-1}),

with ``S = I (x) sign``, ``Z_i = q^{N+i}(N+i)``,
``C_j = sum_{t<j} |e_{-t-1}><e_{-t}|`` and ``B_jk = sum_{b<k} |e_{b-j}><e_{b-j-1}|``.
The last two terms are compact, so modulo compacts ``[D, pi(m)]`` is
``S pi(-i m) + pi((k-j) m)``.  Classes ``pi(x) + S pi(y)`` are multiplied
using ``S^2 = 1`` and ``S pi(a) = pi(a) S`` (mod compacts).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .algebra import AlgebraElement, Monomial, generators, in_ideal_beta
from .exact_linalg import solve_rational
from .dirac import DiracSpec, commutator, generic_dirac
from .forms import UniversalForm
from .representation import represent, represent_float
from .truncation import (CompactnessCertificate, TruncatedOperator, TruncationWindow, compact_certificate,
                         decay_certificate, restrict_interior_matrix, sign_plus, tail_norm_profile)

CERT_WINDOW = TruncationWindow(40, 40)
CERT_CUTS = (8, 16, 32)


# ---------------------------------------------------------------------------
# the four-term decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailTerm:
    kind: str  # "C" or "B"
    i: int
    j: int
    k: int
    coeff: Fraction
    word: Monomial  # the monomial multiplied on the right

    def operator(self, window: TruncationWindow, q: Fraction) -> TruncatedOperator:
        def z(lab):
            n = lab[0] + self.i
            return q ** n * n

        zi = TruncatedOperator.diagonal(window, z)
        if self.kind == "C":
            pairs = [((-t - 1,), (-t,)) for t in range(self.j)]
        else:
            pairs = [((b - self.j,), (b - self.j - 1,)) for b in range(self.k)]
        items = []
        for n in range(window.m_row + 1):
            for (r,), (c,) in pairs:
                items.append(((n, r), (n, c), 1))
        shift = TruncatedOperator.from_labels(window, items, margin=self.j + self.k)
        word = represent(AlgebraElement({self.word: Fraction(1)}, q), window)
        return (zi @ shift @ word).scale(self.coeff)


@dataclass(frozen=True)
class SymbolicCommutator:
    s_coeff: AlgebraElement
    plain: AlgebraElement
    finite_rank_tail: tuple

    def evaluate(self, window: TruncationWindow) -> TruncatedOperator:
        q = self.plain.q
        s = TruncatedOperator.diagonal(window, lambda lab: Fraction(sign_plus(lab[1])))
        out = s @ represent(self.s_coeff, window) + represent(self.plain, window)
        for t in self.finite_rank_tail:
            out = out + t.operator(window, q)
        return out

    def margin(self) -> int:
        tail = max((t.j + t.k + abs(t.i) for t in self.finite_rank_tail), default=0)
        return max(self.s_coeff.max_shift(), self.plain.max_shift(), tail) + 1


def symbolic_commutator(a: AlgebraElement) -> SymbolicCommutator:
    q = a.q
    s_coeff, plain, tail = {}, {}, []
    for m, c in sorted(a.terms.items()):
        if m.i:
            s_coeff[m] = s_coeff.get(m, 0) - m.i * c
        if m.k != m.j:
            plain[m] = plain.get(m, 0) + (m.k - m.j) * c
        if m.j >= 1:
            tail.append(TailTerm("C", m.i, m.j, m.k, Fraction(-2) * c, Monomial(m.i, m.j - 1, m.k)))
        if m.k >= 1:
            tail.append(TailTerm("B", m.i, m.j, m.k, Fraction(2) * c, Monomial(m.i, m.j, m.k - 1)))
    return SymbolicCommutator(AlgebraElement(s_coeff, q), AlgebraElement(plain, q), tuple(tail))


def decomposition_matches(a: AlgebraElement, window: TruncationWindow, spec: DiracSpec | None = None) -> bool:
    """Four-term expansion equals the Leibniz-built matrix commutator on the interior."""
    spec = spec or generic_dirac()
    sc = symbolic_commutator(a)
    return sc.evaluate(window).equal_on_interior(commutator(spec, a, window), sc.margin())


# ---------------------------------------------------------------------------
# degree-one forms  A (+) I_b
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Form1:
    free_part: AlgebraElement
    ideal_part: AlgebraElement

    def __post_init__(self):
        if not in_ideal_beta(self.ideal_part):
            raise ValueError("ideal part must lie in the ideal generated by b, b*")

    def __add__(self, other: "Form1") -> "Form1":
        return Form1(self.free_part + other.free_part, self.ideal_part + other.ideal_part)

    def __eq__(self, other):
        return (isinstance(other, Form1) and self.free_part == other.free_part
                and self.ideal_part == other.ideal_part)

    def __hash__(self):
        return hash((self.free_part, self.ideal_part))

    def as_dict(self) -> dict:
        return {"free": self.free_part.text(), "ideal": self.ideal_part.text()}


def differential(a: AlgebraElement) -> Form1:
    """d(a_i b^j b*^k) = -i a_i b^j b*^k (+) (k - j) a_i b^j b*^k."""
    sc = symbolic_commutator(a)
    return Form1(sc.s_coeff, sc.plain)


def bimodule_action(x: AlgebraElement, w: Form1, side: str = "left") -> Form1:
    if side == "left":
        return Form1(x * w.free_part, x * w.ideal_part)
    if side == "right":
        return Form1(w.free_part * x, w.ideal_part * x)
    raise ValueError("side must be 'left' or 'right'")


def leibniz_holds(x: AlgebraElement, y: AlgebraElement) -> bool:
    return differential(x * y) == bimodule_action(x, differential(y)) + bimodule_action(y, differential(x), "right")


# ---------------------------------------------------------------------------
# classes modulo compacts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CalkinClass:
    """The class of pi(even) + S pi(odd) in the Calkin algebra."""

    even: AlgebraElement
    odd: AlgebraElement

    @classmethod
    def zero(cls, q) -> "CalkinClass":
        return cls(AlgebraElement.zero(q), AlgebraElement.zero(q))

    @classmethod
    def s_power(cls, n: int, q) -> "CalkinClass":
        one, zero = AlgebraElement.one(q), AlgebraElement.zero(q)
        return cls(one, zero) if n % 2 == 0 else cls(zero, one)

    def __add__(self, other):
        return CalkinClass(self.even + other.even, self.odd + other.odd)

    def __sub__(self, other):
        return CalkinClass(self.even - other.even, self.odd - other.odd)

    def scale(self, c):
        return CalkinClass(self.even.scale(c), self.odd.scale(c))

    def __mul__(self, other):
        if isinstance(other, CalkinClass):
            return CalkinClass(self.even * other.even + self.odd * other.odd,
                               self.even * other.odd + self.odd * other.even)
        return CalkinClass(self.even * other, self.odd * other)

    def __rmul__(self, x):
        return CalkinClass(x * self.even, x * self.odd)

    def __eq__(self, other):
        return isinstance(other, CalkinClass) and self.even == other.even and self.odd == other.odd

    def __hash__(self):
        return hash((self.even, self.odd))

    def is_zero(self) -> bool:
        return self.even.is_zero() and self.odd.is_zero()

    def operator_float(self, window: TruncationWindow) -> sp.csr_matrix:
        s = sign_matrix(window)
        return (represent_float(self.even, window) + s @ represent_float(self.odd, window)).tocsr()

    def as_dict(self) -> dict:
        return {"0": self.even.text(), "1": self.odd.text()}


@lru_cache(maxsize=None)
def delta_class(m: Monomial, q: Fraction) -> CalkinClass:
    mono = AlgebraElement({m: Fraction(1)}, q)
    return CalkinClass(mono.scale(m.k - m.j), mono.scale(-m.i))


def psi(w: UniversalForm) -> CalkinClass:
    """Class of pi_n(w) modulo compacts."""
    q = w.ring.q
    total = CalkinClass.zero(q)
    for key, c in w.terms.items():
        term = CalkinClass(AlgebraElement({key[0]: c}, q), AlgebraElement.zero(q))
        for m in key[1:]:
            term = term * delta_class(m, q)
        total = total + term
    return total


# ---------------------------------------------------------------------------
# matrices of forms
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def sign_matrix(window: TruncationWindow) -> sp.csr_matrix:
    return sp.diags([float(sign_plus(window.label(k)[1])) for k in range(window.dim)]).tocsr()


@lru_cache(maxsize=64)
def _dirac_vector(spec: DiracSpec, window: TruncationWindow) -> np.ndarray:
    return np.array([float(spec(*window.label(k))) for k in range(window.dim)])


def commutator_float(m: Monomial, q: Fraction, window: TruncationWindow, spec: DiracSpec) -> sp.csr_matrix:
    return _commutator_float(m, q, window, spec)


@lru_cache(maxsize=4096)
def _commutator_float(m, q, window, spec):
    p = represent_float(AlgebraElement({m: Fraction(1)}, q), window)
    d = sp.diags(_dirac_vector(spec, window))
    return (d @ p - p @ d).tocsr()


def _mono_shift(m: Monomial) -> int:
    return max(abs(m.i), abs(m.j - m.k))


def form_margin(w: UniversalForm) -> int:
    return max((sum(_mono_shift(m) for m in key) for key in w.terms), default=0)


def represent_form_float(w: UniversalForm, window: TruncationWindow, spec: DiracSpec | None = None) -> sp.csr_matrix:
    """pi(a0)[D,a1]...[D,an] summed over terms, in floating point."""
    spec = spec or generic_dirac()
    q = w.ring.q
    total = sp.csr_matrix((window.dim, window.dim))
    for key, c in w.terms.items():
        term = represent_float(AlgebraElement({key[0]: Fraction(1)}, q), window)
        for m in key[1:]:
            term = term @ commutator_float(m, q, window, spec)
        total = total + float(c) * term
    return total.tocsr()


def represent_form(w: UniversalForm, spec: DiracSpec, window: TruncationWindow) -> TruncatedOperator:
    """Exact pi_n(w) on the window (exact on the interior of margin ``form_margin(w)``)."""
    q = w.ring.q
    total = TruncatedOperator.zero(window)
    for key, c in sorted(w.terms.items()):
        term = represent(AlgebraElement({key[0]: Fraction(1)}, q), window)
        for m in key[1:]:
            term = term @ commutator(spec, AlgebraElement({m: Fraction(1)}, q), window, check=False)
        total = total + term.scale(c)
    return total.with_margin(form_margin(w))


def residual_certificate(w: UniversalForm, target: CalkinClass, window: TruncationWindow = CERT_WINDOW,
                         cuts=CERT_CUTS, spec: DiracSpec | None = None) -> CompactnessCertificate:
    """Tail decay of pi_n(w) - (pi(even) + S pi(odd)) on the interior."""
    resid = represent_form_float(w, window, spec) - target.operator_float(window)
    margin = max(form_margin(w), target.even.max_shift(), target.odd.max_shift())
    resid = restrict_interior_matrix(resid, window, margin)
    profile = tail_norm_profile(resid, cuts, window=window)
    return decay_certificate(profile, cuts)


@dataclass(frozen=True)
class Classification:
    s_power_parts: dict
    parity_ok: bool
    certificate: CompactnessCertificate

    @property
    def passed(self) -> bool:
        return self.parity_ok and self.certificate.passed

    def as_dict(self) -> dict:
        return {
            "s_power_parts": {str(k): v.text() for k, v in sorted(self.s_power_parts.items())},
            "parity_ok": self.parity_ok,
            "certificate": self.certificate.as_dict(),
        }


def classify_mod_compacts(w: UniversalForm, window: TruncationWindow = CERT_WINDOW, cuts=CERT_CUTS,
                          spec: DiracSpec | None = None) -> Classification:
    """Reduce pi_n(w) to pi(a) + S pi(b) mod compacts and certify the remainder.

    For degree n the class lies in S^n A + S^{n+1} I_b: the part carrying the
    parity of n+1 must lie in the ideal.
    """
    cls = psi(w)
    if w.degree == 0:
        parity_ok = cls.odd.is_zero()
    elif w.degree % 2:
        parity_ok = in_ideal_beta(cls.even)
    else:
        parity_ok = in_ideal_beta(cls.odd)
    cert = residual_certificate(w, cls, window, cuts, spec)
    return Classification({0: cls.even, 1: cls.odd}, parity_ok, cert)


# ---------------------------------------------------------------------------
# the explicit forms used for higher degrees
# ---------------------------------------------------------------------------


def _g(q):
    g = generators(q)
    return g["a"], g["a*"], g["b"], g["b*"], g["1"]


def form_with_class_s(q) -> UniversalForm:
    """w with psi(w) = S: -(1-q^2)^{-1}[d(aa*) - a da* + q^2 d(a*a) - q^2 a* da]."""
    q = Fraction(q)
    a, a_, b, b_, one = _g(q)
    D = UniversalForm.delta
    E = UniversalForm.from_term
    inner = D(a * a_) - E(a, [a_]) + D(a_ * a).scale(q * q) - E(a_, [a]).scale(q * q)
    return inner.scale(-1 / (1 - q * q))


def mu(k: int, q) -> Fraction:
    q = Fraction(q)
    return -k * k - k * (1 + q * q) / (1 - q * q)


def nu(k: int, q) -> Fraction:
    q = Fraction(q)
    return 2 * k * q * q / (1 - q * q)


def omega_k(k: int, q) -> UniversalForm:
    """k a_k w + d(a_k): psi = 0 and psi(d omega_k) = a_k (mu_k + nu_k b b*)."""
    q = Fraction(q)
    ak = AlgebraElement.monomial(k, 0, 0, q)
    return form_with_class_s(q).left_mul(ak).scale(k) + UniversalForm.delta(ak)


def _theta2(q: Fraction) -> UniversalForm:
    # psi(d(omega_k y)) = psi(d omega_k) y because psi(omega_k) = 0; with
    # y in {a*, a* X, a, a X} (X = b b*) the four classes are polynomials of
    # degree <= 3 in X, and a combination equal to 1 exists because the two
    # quadratics they are built from have disjoint roots {q^-2, q^-4}, {1, q^2}.
    a, a_, *_ = _g(q)
    x = AlgebraElement.monomial(0, 1, 1, q)
    basis = [omega_k(1, q).right_mul(a_), omega_k(1, q).right_mul(a_ * x),
             omega_k(-1, q).right_mul(a), omega_k(-1, q).right_mul(a * x)]
    classes = [psi(f.d()) for f in basis]
    if any(not c.odd.is_zero() for c in classes):
        raise ArithmeticError("unexpected odd part")
    mat = [[c.even.coefficient(0, t, t) for c in classes] for t in range(4)]
    coeffs = solve_rational(mat, [Fraction(1), 0, 0, 0])
    out = basis[0].scale(coeffs[0])
    for f, c in zip(basis[1:], coeffs[1:]):
        out = out + f.scale(c)
    return out


@lru_cache(maxsize=None)
def theta(n: int, q) -> UniversalForm:
    """Degree n-1 form with psi = 0 and psi(d theta_n) = S^n (n >= 2)."""
    q = Fraction(q)
    if n < 2:
        raise ValueError("n must be >= 2")
    if n == 2:
        return _theta2(q)
    a, a_, *_ = _g(q)
    prev = theta(n - 1, q)
    # omega_k = k theta dA_k has psi(d omega_k) = -S^n a_k
    w1 = prev * UniversalForm.delta(a)
    wm1 = (prev * UniversalForm.delta(a_)).scale(-1)
    return (w1.right_mul(a_) - wm1.right_mul(a).scale(q * q)).scale(-1 / (1 - q * q))


def witness_alpha_beta(q) -> UniversalForm:
    """(1/2)(a db - d(ab) + q b da)."""
    q = Fraction(q)
    a, a_, b, b_, one = _g(q)
    E = UniversalForm.from_term
    return (E(a, [b]) - UniversalForm.delta(a * b) + E(b, [a]).scale(q)).scale(Fraction(1, 2))


def witness_alpha_star_beta(q) -> UniversalForm:
    """(1/2)(a* db - d(a*b) + q^{-1} b da*)."""
    q = Fraction(q)
    a, a_, b, b_, one = _g(q)
    E = UniversalForm.from_term
    return (E(a_, [b]) - UniversalForm.delta(a_ * b) + E(b, [a_]).scale(1 / q)).scale(Fraction(1, 2))


@dataclass
class IdentityCheck:
    name: str
    symbolic: bool
    certificate: CompactnessCertificate | None = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.symbolic and (self.certificate is None or self.certificate.passed)

    def as_dict(self) -> dict:
        out = {"name": self.name, "symbolic": self.symbolic, "passed": self.passed}
        if self.certificate is not None:
            out["certificate"] = self.certificate.as_dict()
        out.update(self.detail)
        return out


def _check(name, form, expected: CalkinClass, window, cuts, numeric=True) -> IdentityCheck:
    got = psi(form)
    cert = residual_certificate(form, expected, window, cuts) if numeric else None
    return IdentityCheck(name, got == expected, cert, {"class": got.as_dict(), "expected": expected.as_dict()})


def higher_form_vanishing_check(n: int = 3, q=Fraction(1, 2), window: TruncationWindow = CERT_WINDOW,
                                cuts=CERT_CUTS, ks=(1, -1, 2)) -> list[IdentityCheck]:
    """Identities showing psi(d J_{m}) reaches S^{m+1} for m < n, each certified numerically."""
    q = Fraction(q)
    zero = CalkinClass.zero(q)
    a, a_, b, b_, one = _g(q)
    S = CalkinClass.s_power(1, q)
    out = [_check("psi(w) = S", form_with_class_s(q), S, window, cuts)]
    for k in ks:
        wk = omega_k(k, q)
        ak = AlgebraElement.monomial(k, 0, 0, q)
        out.append(_check(f"psi(omega_{k}) = 0", wk, zero, window, cuts))
        x = AlgebraElement.monomial(0, 1, 1, q)
        target = CalkinClass(ak.scale(mu(k, q)) + (ak * x).scale(nu(k, q)), zero.odd)
        out.append(_check(f"psi(d omega_{k}) = a_{k}(mu_{k} + nu_{k} bb*)", wk.d(), target, window, cuts))
    wab = witness_alpha_beta(q)
    out.append(_check("psi(w_ab) = 0", wab, zero, window, cuts))
    out.append(_check("psi(d w_ab) = S ab", wab.d(), CalkinClass(zero.even, a * b), window, cuts))
    wasb = witness_alpha_star_beta(q)
    out.append(_check("psi(w_a*b) = 0", wasb, zero, window, cuts))
    out.append(_check("psi(d w_a*b) = -S a*b", wasb.d(), CalkinClass(zero.even, -(a_ * b)), window, cuts))
    for m in range(2, n + 1):
        t = theta(m, q)
        out.append(_check(f"psi(theta_{m}) = 0", t, zero, window, cuts))
        out.append(_check(f"psi(d theta_{m}) = S^{m}", t.d(), CalkinClass.s_power(m, q), window, cuts))
    return out


# ---------------------------------------------------------------------------
# separation of a S + b from the compacts
# ---------------------------------------------------------------------------

DEFAULT_LADDER = (TruncationWindow(8, 8), TruncationWindow(16, 16), TruncationWindow(32, 32))


@dataclass(frozen=True)
class TechProbe:
    status: str  # separated, null_pair, contradiction
    tails: tuple

    def as_dict(self) -> dict:
        return {"status": self.status, "tails": [float(f"{t:.6e}") for t in self.tails]}


def tech_lemma_probe(a: AlgebraElement, b: AlgebraElement, ladder=DEFAULT_LADDER) -> TechProbe:
    """Tail norms of pi(a) S + pi(b) beyond half of each window of the ladder."""
    if a.is_zero() and b.is_zero():
        return TechProbe("null_pair", ())
    margin = max(a.max_shift(), b.max_shift())
    tails = []
    for w in ladder:
        op = represent_float(a, w) @ sign_matrix(w) + represent_float(b, w)
        op = restrict_interior_matrix(op, w, margin)
        tails.append(tail_norm_profile(op, [min(w.m_row, w.m_col) // 2], window=w)[0])
    last_two = min(tails[-2:])
    status = "separated" if last_two >= 0.5 * tails[0] and tails[0] > 0 else "contradiction"
    return TechProbe(status, tuple(tails))
