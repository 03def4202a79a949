"""The Podles sphere: algebra, the two representations, the even triple, index, calculus.

Relations (A self-adjoint):

    B A = q^2 A B,   B* B = A - A^2 + c,   B B* = q^2 A - q^4 A^2 + c.

Basis words are ``A^m B^n`` with ``B^n = (B*)^{-n}`` for ``n < 0``.  Moving
``B^n`` past ``A^m`` costs ``q^{2nm}``; products ``B^a (B*)^b`` are reduced
with ``B^s p(A) = p(q^{2s} A) B^s``.

On l2(N), with ``lambda_pm = 1/2 +- sqrt(c + 1/4)`` and
``c_pm(n) = lambda_pm q^{2n} - (lambda_pm q^{2n})^2 + c``:

    pi_pm(A) e_n = lambda_pm q^{2n} e_n,   pi_pm(B) e_n = sqrt(c_pm(n)) e_{n-1}.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from .dirac import bounded_trend
from .fredholm import IndexResult, block_operator, stabilized_index
from .forms import UniversalForm
from .scalars import Scalar, sqrt, to_float
from .truncation import (CompactnessCertificate, NatWindow, SumWindow, TruncatedOperator, decay_certificate,
                         restrict_interior_matrix, tail_norm_profile)

CERT_M = 40
CERT_CUTS = (8, 16, 32)


@dataclass(frozen=True)
class SphereParams:
    q: Fraction = Fraction(1, 2)
    c: Fraction = Fraction(2)

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "c", Fraction(self.c))
        if not 0 < self.q < 1:
            raise ValueError("q must lie in (0,1)")
        if self.c <= 0:
            raise ValueError("c must be positive")

    @property
    def root(self) -> Scalar:
        return sqrt(self.c + Fraction(1, 4))

    def lam(self, sign: int) -> Scalar:
        return Fraction(1, 2) + self.root if sign > 0 else Fraction(1, 2) - self.root

    def c_pm(self, sign: int, n: int) -> Scalar:
        x = self.lam(sign) * self.q ** (2 * n)
        return x - x * x + self.c


@dataclass(frozen=True, order=True)
class SphereMonomial:
    m: int
    n: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("power of A must be nonnegative")

    def text(self) -> str:
        return f"A^{self.m} B^{self.n}"


@lru_cache(maxsize=None)
def _b_pair(n1: int, n2: int, q: Fraction, c: Fraction) -> tuple:
    """B^{n1} B^{n2} = sum coeff A^m B^n, as ((m, n), coeff) pairs."""
    if n1 == 0 or n2 == 0 or (n1 > 0) == (n2 > 0):
        return (((0, n1 + n2), Fraction(1)),)
    if n1 > 0:
        # B^a B*^b = g(q^{2(a-1)} A) B^{a-1} B*^{b-1},  g(A) = q^2 A - q^4 A^2 + c
        s = q ** (2 * (n1 - 1))
        poly = {0: c, 1: q * q * s, 2: -(q ** 4) * s * s}
        rest = _b_pair(n1 - 1, n2 + 1, q, c)
    else:
        # B*^a B^b = f(q^{-2(a-1)} A) B*^{a-1} B^{b-1},  f(A) = A - A^2 + c
        s = q ** (-2 * (-n1 - 1))
        poly = {0: c, 1: s, 2: -s * s}
        rest = _b_pair(n1 + 1, n2 - 1, q, c)
    out: dict = {}
    for e, pc in poly.items():
        for (m, n), rc in rest:
            out[(m + e, n)] = out.get((m + e, n), 0) + pc * rc
    return tuple(sorted((k, v) for k, v in out.items() if v))


@lru_cache(maxsize=100_000)
def sphere_monomial_product(x: SphereMonomial, y: SphereMonomial, q: Fraction, c: Fraction) -> tuple:
    pre = q ** (2 * x.n * y.m)
    return tuple((SphereMonomial(x.m + y.m + m, n), pre * v) for (m, n), v in _b_pair(x.n, y.n, q, c))


class SphereElement:
    __slots__ = ("terms", "params")

    def __init__(self, terms: Mapping[SphereMonomial, Fraction] | None = None, params: SphereParams = SphereParams()):
        self.params = params
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def monomial(cls, m: int, n: int = 0, params: SphereParams = SphereParams(), coeff=1) -> "SphereElement":
        return cls({SphereMonomial(m, n): coeff}, params)

    def like(self, terms) -> "SphereElement":
        return SphereElement(terms, self.params)

    @staticmethod
    def unit_key() -> SphereMonomial:
        return SphereMonomial(0, 0)

    def _coerce(self, other) -> "SphereElement":
        if isinstance(other, SphereElement):
            if other.params != self.params:
                raise ValueError("mismatched sphere parameters")
            return other
        if isinstance(other, (int, Fraction)):
            return SphereElement({SphereMonomial(0, 0): Fraction(other)}, self.params)
        raise TypeError(f"cannot combine SphereElement with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return SphereElement(t, self.params)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def scale(self, c) -> "SphereElement":
        return SphereElement({k: v * Fraction(c) for k, v in self.terms.items()}, self.params)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, SphereElement):
            return NotImplemented
        other = self._coerce(other)
        q, c = self.params.q, self.params.c
        acc: dict = {}
        for x, cx in self.terms.items():
            for y, cy in other.terms.items():
                for mono, v in sphere_monomial_product(x, y, q, c):
                    acc[mono] = acc.get(mono, 0) + cx * cy * v
        return SphereElement(acc, self.params)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def adjoint(self) -> "SphereElement":
        # (A^m B^n)* = B^{-n} A^m = q^{-2nm} A^m B^{-n}
        q = self.params.q
        acc: dict = {}
        for x, v in self.terms.items():
            key = SphereMonomial(x.m, -x.n)
            acc[key] = acc.get(key, 0) + v * q ** (-2 * x.n * x.m)
        return SphereElement(acc, self.params)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        return isinstance(other, SphereElement) and self.params == other.params and self.terms == other.terms

    def __hash__(self):
        return hash((self.params, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def max_shift(self) -> int:
        return max((abs(x.n) for x in self.terms), default=0)

    def text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{v} * {k.text()}" for k, v in sorted(self.terms.items()))

    def __repr__(self):
        return f"SphereElement({self.text()})"


_STERM = re.compile(r"^\s*(-?\d+(?:/\d+)?)\s*\*\s*A\^(\d+)\s+B\^(-?\d+)\s*$")


def parse_sphere(text: str, params: SphereParams = SphereParams()) -> SphereElement:
    text = text.strip()
    if text == "0":
        return SphereElement({}, params)
    acc: dict = {}
    for part in text.split(" + "):
        mt = _STERM.match(part)
        if not mt:
            raise ValueError(f"cannot parse term {part!r}")
        key = SphereMonomial(int(mt.group(2)), int(mt.group(3)))
        acc[key] = acc.get(key, 0) + Fraction(mt.group(1))
    return SphereElement(acc, params)


def sphere_generators(params: SphereParams = SphereParams()) -> dict[str, SphereElement]:
    return {
        "A": SphereElement.monomial(1, 0, params),
        "B": SphereElement.monomial(0, 1, params),
        "B*": SphereElement.monomial(0, -1, params),
        "1": SphereElement.monomial(0, 0, params),
    }


def sphere_relations(params: SphereParams = SphereParams()) -> dict[str, SphereElement]:
    g = sphere_generators(params)
    A, B, B_, one = g["A"], g["B"], g["B*"], g["1"]
    q, c = params.q, params.c
    return {
        "BA - q^2 AB": B * A - (A * B).scale(q * q),
        "B*B - (A - A^2 + c)": B_ * B - (A - A * A + one.scale(c)),
        "BB* - (q^2 A - q^4 A^2 + c)": B * B_ - (A.scale(q * q) - (A * A).scale(q ** 4) + one.scale(c)),
        "A* - A": A.adjoint() - A,
    }


def literal_display_defect(params: SphereParams = SphereParams()) -> SphereElement:
    """Associativity defect B*(BB*) - (B*B)B* if BB* were q^2 A - q^4 + c.

    With the reduction rules above, ``B*(q^2 A - q^4 + c)`` and
    ``(A - A^2 + c) B*`` must agree; the returned difference is nonzero.
    """
    g = sphere_generators(params)
    A, B_, one = g["A"], g["B*"], g["1"]
    q, c = params.q, params.c
    literal_bbs = A.scale(q * q) + one.scale(c - q ** 4)
    return B_ * literal_bbs - (A - A * A + one.scale(c)) * B_


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _root_c(params: SphereParams, sign: int, n: int) -> Scalar:
    if n <= 0:
        return Fraction(0)
    val = params.c_pm(sign, n)
    if to_float(val) <= 0:
        raise ValueError(f"c_{'+' if sign > 0 else '-'}({n}) is not positive")
    return sqrt(val)


def _mono_action(x: SphereMonomial, params: SphereParams, sign: int, k: int):
    w: Scalar = Fraction(1)
    if x.n > 0:
        for t in range(k - x.n + 1, k + 1):
            if t <= 0:
                return None
            w = w * _root_c(params, sign, t)
    elif x.n < 0:
        for t in range(k + 1, k - x.n + 1):
            w = w * _root_c(params, sign, t)
    k2 = k - x.n
    if x.m:
        lam = params.lam(sign) * params.q ** (2 * k2)
        for _ in range(x.m):
            w = w * lam
    return w, k2


@lru_cache(maxsize=4096)
def _represent_mono(x: SphereMonomial, params: SphereParams, sign: int, m: int) -> TruncatedOperator:
    w = NatWindow(m)
    items = []
    for (k,) in w.labels():
        img = _mono_action(x, params, sign, k)
        if img is not None and img[0] != 0:
            items.append(((img[1],), (k,), img[0]))
    return TruncatedOperator.from_labels(w, items, margin=abs(x.n))


def sphere_represent(a: SphereElement, m: int) -> tuple[TruncatedOperator, TruncatedOperator]:
    """(pi_+(a), pi_-(a)) on the l2(N) window 0..m."""
    out = []
    for sign in (1, -1):
        op = TruncatedOperator.zero(NatWindow(m))
        for x, v in sorted(a.terms.items()):
            op = op + _represent_mono(x, a.params, sign, m).scale(v)
        out.append(op.with_margin(a.max_shift()))
    return out[0], out[1]


def represent_pair(a: SphereElement, m: int) -> TruncatedOperator:
    """pi_+(a) (+) pi_-(a) on SumWindow(NatWindow(m), 2)."""
    p, n = sphere_represent(a, m)
    return block_operator(SumWindow(NatWindow(m), 2), {(0, 0): p, (1, 1): n})


def number_operator(m: int) -> TruncatedOperator:
    return TruncatedOperator.diagonal(NatWindow(m), lambda lab: Fraction(lab[0]))


def lowering(m: int) -> TruncatedOperator:
    w = NatWindow(m)
    return TruncatedOperator.from_labels(w, (((k - 1,), (k,), 1) for (k,) in w.labels() if k >= 1), margin=1)


def dirac_pair(m: int) -> TruncatedOperator:
    n = number_operator(m)
    return block_operator(SumWindow(NatWindow(m), 2), {(0, 1): n, (1, 0): n})


def grading(m: int) -> TruncatedOperator:
    return TruncatedOperator.diagonal(SumWindow(NatWindow(m), 2), lambda lab: Fraction(1 if lab[0] == 0 else -1))


def even_triple_commutator(a: SphereElement, m: int) -> TruncatedOperator:
    d, p = dirac_pair(m), represent_pair(a, m)
    return (d @ p - p @ d).with_margin(a.max_shift())


def is_grading_odd(op: TruncatedOperator) -> bool:
    g = grading(op.window.base.m)
    return not (g @ op + op @ g).entries


def evenness_checks(a: SphereElement, m: int) -> dict:
    g, d, p = grading(m), dirac_pair(m), represent_pair(a, m)
    return {
        "gamma D + D gamma = 0": not (g @ d + d @ g).entries,
        "gamma pi(a) = pi(a) gamma": not (g @ p - p @ g).entries,
        "[D, pi(a)] is odd": is_grading_odd(even_triple_commutator(a, m)),
    }


def kappa_block(op: TruncatedOperator, m: int) -> TruncatedOperator:
    """op (x) kappa with kappa the swap of the two summands."""
    return block_operator(SumWindow(NatWindow(m), 2), {(0, 1): op, (1, 0): op})


def _pair_certificate(op_float, m: int, margin: int, cuts=CERT_CUTS) -> CompactnessCertificate:
    w = SumWindow(NatWindow(m), 2)
    resid = restrict_interior_matrix(op_float, w, margin)
    return decay_certificate(tail_norm_profile(resid, cuts, window=w), cuts)


def db_leading_certificate(params: SphereParams, m: int = CERT_M, cuts=CERT_CUTS) -> CompactnessCertificate:
    """[D, B] + sqrt(c) (l (x) kappa) has decaying tails."""
    B = sphere_generators(params)["B"]
    comm = even_triple_commutator(B, m).to_sparse()
    lead = kappa_block(lowering(m), m).to_sparse() * (-np.sqrt(float(params.c)))
    return _pair_certificate(comm - lead, m, 1, cuts)


# ---------------------------------------------------------------------------
# boundedness facts
# ---------------------------------------------------------------------------


@dataclass
class SphereBoundedness:
    params: SphereParams
    scans: tuple
    number_times_a: tuple  # max_n n |lambda_pm| q^{2n}
    root_defect: tuple  # max_n n |sqrt(c_pm(n)) - sqrt(c)|
    shift_commutation: bool
    commutator_a_compact: CompactnessCertificate

    @property
    def passed(self) -> bool:
        return (bounded_trend(self.number_times_a) and bounded_trend(self.root_defect)
                and self.shift_commutation and self.commutator_a_compact.passed)

    def as_dict(self) -> dict:
        return {
            "q": str(self.params.q),
            "c": str(self.params.c),
            "scans": list(self.scans),
            "(i) max n|pi(A)|": [float(f"{x:.10g}") for x in self.number_times_a],
            "(ii) max n|sqrt(c_pm(n)) - sqrt(c)|": [float(f"{x:.10g}") for x in self.root_defect],
            "(iii) [N,l] = -l and [N,l*] = l*": self.shift_commutation,
            "[D,A] compact": self.commutator_a_compact.as_dict(),
            "passed": self.passed,
        }


def sphere_boundedness_certificates(params: SphereParams = SphereParams(), scan: int = 8) -> SphereBoundedness:
    scans = (scan, 2 * scan, 4 * scan)
    q, sc = float(params.q), np.sqrt(float(params.c))
    lam = [to_float(params.lam(s)) for s in (1, -1)]
    na, rd = [], []
    for s in scans:
        na.append(max(n * abs(l) * q ** (2 * n) for n in range(s + 1) for l in lam))
        rd.append(max(n * abs(to_float(_root_c(params, sign, n)) - sc) for n in range(1, s + 1) for sign in (1, -1)))
    m = 4 * scan
    N, L = number_operator(m), lowering(m)
    shift_ok = (N @ L - L @ N).equal_on_interior(-L, 1) and (N @ L.adjoint() - L.adjoint() @ N).equal_on_interior(L.adjoint(), 1)
    A = sphere_generators(params)["A"]
    cert = _pair_certificate(even_triple_commutator(A, CERT_M).to_sparse(), CERT_M, 0)
    return SphereBoundedness(params, scans, tuple(na), tuple(rd), shift_ok, cert)


def c_pm_zero_is_exact(params: SphereParams) -> bool:
    """c_pm(0) = lambda - lambda^2 + c is formally zero (lambda^2 = lambda + c)."""
    return all(params.c_pm(s, 0) == 0 for s in (1, -1)) and all(
        params.lam(s) * params.lam(s) == params.lam(s) + params.c for s in (1, -1))


# ---------------------------------------------------------------------------
# index pairing
# ---------------------------------------------------------------------------

PROJECTIONS = {
    "p0": (lambda n: False, lambda n: n == 0),
    "zero": (lambda n: False, lambda n: False),
    "rank_two": (lambda n: n == 0, lambda n: n == 0),
}


def phase_operator(m: int, sign_at_zero: int = 0) -> TruncatedOperator:
    """Phase of D: the off-diagonal blocks are sign(N), with sign(0) = sign_at_zero."""
    s = TruncatedOperator.diagonal(NatWindow(m), lambda lab: Fraction(1 if lab[0] > 0 else sign_at_zero))
    return block_operator(SumWindow(NatWindow(m), 2), {(0, 1): s, (1, 0): s})


def sphere_index_pairing(m: int = 12, projection: str = "p0", sign_at_zero: int = 0) -> IndexResult:
    """Index of P F P from the gamma = +1 part to the gamma = -1 part of P's range.

    ``projection`` picks P = p_+ (+) p_-; "p0" is 0 (+) |e_0><e_0|.
    """
    if projection not in PROJECTIONS:
        raise ValueError(f"unknown projection {projection!r}")
    plus, minus = PROJECTIONS[projection]
    dom = lambda lab: lab[0] == 0 and plus(lab[1])
    cod = lambda lab: lab[0] == 1 and minus(lab[1])
    return stabilized_index(f"sphere/{projection}/sign0={sign_at_zero}", lambda w: phase_operator(w.base.m, sign_at_zero),
                            SumWindow(NatWindow(m), 2), dom, cod, guard=1)


# ---------------------------------------------------------------------------
# calculus
# ---------------------------------------------------------------------------


@lru_cache(maxsize=512)
def _pair_float(x: SphereMonomial, params: SphereParams, m: int) -> sp.csr_matrix:
    return represent_pair(SphereElement({x: 1}, params), m).to_sparse()


@lru_cache(maxsize=512)
def _comm_float(x: SphereMonomial, params: SphereParams, m: int) -> sp.csr_matrix:
    return even_triple_commutator(SphereElement({x: 1}, params), m).to_sparse()


def represent_sphere_form(w: UniversalForm, m: int = CERT_M) -> sp.csr_matrix:
    params = w.ring.params
    dim = 2 * (m + 1)
    total = sp.csr_matrix((dim, dim))
    for key, c in w.terms.items():
        term = _pair_float(key[0], params, m)
        for x in key[1:]:
            term = term @ _comm_float(x, params, m)
        total = total + float(c) * term
    return total.tocsr()


def _form_margin(w: UniversalForm) -> int:
    return max((sum(abs(x.n) for x in key) for key in w.terms), default=0)


def witness(n: int, params: SphereParams = SphereParams()) -> UniversalForm:
    """B dB* (dB)^{n-2} + B* dB (dB)^{n-2}."""
    if n < 2:
        raise ValueError("n must be >= 2")
    g = sphere_generators(params)
    B, B_ = g["B"], g["B*"]
    tail = [B] * (n - 2)
    return UniversalForm.from_term(B, [B_] + tail) + UniversalForm.from_term(B_, [B] + tail)


def _block_split(mat: sp.csr_matrix, m: int):
    k = m + 1
    mat = sp.csr_matrix(mat)
    return mat[:k, :k], mat[:k, k:], mat[k:, :k], mat[k:, k:]


def block_shape(w: UniversalForm, m: int = CERT_M, cuts=CERT_CUTS) -> dict:
    """Even degree: block diagonal with equal blocks mod compacts; odd: off-diagonal likewise."""
    mat = represent_sphere_form(w, m)
    mat.eliminate_zeros()
    p, x, y, n = _block_split(mat, m)
    margin = _form_margin(w)
    nat = NatWindow(m)
    if w.degree % 2 == 0:
        pattern = x.nnz == 0 and y.nnz == 0
        diff = p - n
    else:
        pattern = p.nnz == 0 and n.nnz == 0
        diff = x - y
    diff = restrict_interior_matrix(diff, nat, margin)
    cert = decay_certificate(tail_norm_profile(diff, cuts, window=nat), cuts)
    return {"degree": w.degree, "block_pattern": pattern, "blocks_agree_mod_compacts": cert.as_dict(),
            "passed": pattern and cert.passed}


@dataclass
class SphereCalculusReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def as_dict(self) -> dict:
        return {"checks": self.checks, "passed": self.passed}


def sphere_calculus(n: int = 3, params: SphereParams = SphereParams(), m: int = CERT_M, cuts=CERT_CUTS,
                    samples=None) -> SphereCalculusReport:
    rep = SphereCalculusReport()
    g = sphere_generators(params)
    A, B, B_, one = g["A"], g["B"], g["B*"], g["1"]
    c = float(params.c)
    sc = np.sqrt(c)
    w_m = SumWindow(NatWindow(m), 2)
    L = lowering(m)
    for k in range(2, n + 1):
        wk = witness(k, params)
        om = represent_sphere_form(wk, m)
        cert1 = _pair_certificate(om, m, _form_margin(wk), cuts)
        rep.checks.append({"name": f"pi(omega_{k}) compact", "certificate": cert1.as_dict(), "passed": cert1.passed})
        dwk = wk.d()
        lead = TruncatedOperator.identity(NatWindow(m))
        for _ in range(k - 2):
            lead = lead @ L
        lead_op = (block_operator(w_m, {(0, 0): lead, (1, 1): lead}) if k % 2 == 0
                   else kappa_block(lead, m)).to_sparse() * (-2 * c * (-sc) ** (k - 2))
        resid = represent_sphere_form(dwk, m) - lead_op
        cert2 = _pair_certificate(resid, m, _form_margin(dwk), cuts)
        rep.checks.append({"name": f"pi(d omega_{k}) = -2c(-sqrt c)^{k - 2} l^{k - 2} (x) kappa^{k - 2} mod compacts",
                           "certificate": cert2.as_dict(), "passed": cert2.passed})
    # degree one: [D, B] leading term
    cert3 = db_leading_certificate(params, m, cuts)
    rep.checks.append({"name": "[D,B] = -sqrt(c) l (x) kappa mod compacts; class of z", "scalar": -sc,
                       "certificate": cert3.as_dict(), "passed": cert3.passed})
    # block shapes of sample forms
    samples = samples or [
        UniversalForm.delta(B),
        UniversalForm.from_term(A, [B_]),
        UniversalForm.from_term(B, [B, B_]),
        UniversalForm.from_term(one, [A, B]),
        UniversalForm.from_term(B_, [B, B, B_]),
    ]
    for s in samples:
        res = block_shape(s, m, cuts)
        res["name"] = f"block shape of a degree-{s.degree} form"
        rep.checks.append(res)
    d_one = UniversalForm.delta(one)
    rep.checks.append({"name": "d(1) = 0", "passed": d_one.is_zero()})
    return rep
