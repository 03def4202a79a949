"""Square-integrable forms on the circle and their pullback to quantum SU(2).

A circle form ``sum c z^{n0} dz^{n1} ... dz^{nk}`` is represented by its
coefficients on index tuples.  Under the Hilbertian pairing its only invariant
is the *aggregate* Laurent polynomial ``sum c n1...nk z^{n0+...+nk}``; the
pairing of two forms is the l2 pairing of their aggregates, and a form is null
exactly when its aggregate vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Mapping

from .algebra import AlgebraElement, LaurentPoly
from .connes import commutator_float, represent_form_float
from .dirac import DiracSpec, generic_dirac
from .forms import UniversalForm
from .representation import represent_float
from .truncation import (CompactnessCertificate, TruncationWindow, decay_certificate, restrict_interior_matrix,
                         tail_norm_profile)


class CircleForm:
    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Mapping[tuple, Fraction] | None = None):
        self.degree = degree
        acc: dict = {}
        for key, c in (terms or {}).items():
            key = tuple(int(x) for x in key)
            if len(key) != degree + 1:
                raise ValueError(f"index tuple {key} does not have length {degree + 1}")
            if any(n == 0 for n in key[1:]):  # d(1) = 0
                continue
            acc[key] = acc.get(key, 0) + Fraction(c)
        self.terms = {k: v for k, v in acc.items() if v != 0}

    @classmethod
    def term(cls, *indices, coeff=1) -> "CircleForm":
        return cls(len(indices) - 1, {tuple(indices): coeff})

    def __add__(self, other: "CircleForm") -> "CircleForm":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return CircleForm(self.degree, t)

    def scale(self, c) -> "CircleForm":
        return CircleForm(self.degree, {k: v * Fraction(c) for k, v in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, CircleForm) and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def d(self) -> "CircleForm":
        """Universal differential: z^{n0} dz^{n1}... -> dz^{n0} dz^{n1}..."""
        return CircleForm(self.degree + 1, {(0,) + k: c for k, c in self.terms.items()})

    def aggregate(self) -> LaurentPoly:
        acc: dict = {}
        for key, c in self.terms.items():
            r = sum(key)
            acc[r] = acc.get(r, 0) + c * prod(key[1:])
        return LaurentPoly(acc)

    def __repr__(self):
        return f"CircleForm(deg={self.degree}, {self.terms})"


def l2_inner_product(w: CircleForm, v: CircleForm) -> Fraction:
    if w.degree != v.degree:
        raise ValueError(f"degree mismatch {w.degree} vs {v.degree}")
    a, b = w.aggregate().coeffs, v.aggregate().coeffs
    return sum((a[r] * b[r] for r in a.keys() & b.keys()), Fraction(0))


def kernel_membership(w: CircleForm) -> bool:
    return w.aggregate().is_zero()


def l2_differential_circle(p: LaurentPoly) -> LaurentPoly:
    """z^n -> n z^n."""
    return LaurentPoly({n: n * c for n, c in p.coeffs.items()})


def circle_differential_class(p: LaurentPoly) -> LaurentPoly:
    """Class of dp in the degree-one quotient, read from the aggregate of dp."""
    acc = CircleForm(1)
    for n, c in p.coeffs.items():
        acc = acc + CircleForm.term(0, n, coeff=c)
    # z^0 dz^n = n z^{n-1} dz mod null forms; identify z^m dz with z^{m+1}
    return acc.aggregate()


def l2_differential_suq2(a: AlgebraElement, mode: str = "literal") -> LaurentPoly:
    """a_i b^j b*^k -> -i z^i; 'quotiented' sends monomials in the b-ideal to 0."""
    if mode not in ("literal", "quotiented"):
        raise ValueError("mode must be 'literal' or 'quotiented'")
    acc: dict = {}
    for m, c in a.terms.items():
        if mode == "quotiented" and (m.j or m.k):
            continue
        acc[m.i] = acc.get(m.i, 0) - m.i * c
    return LaurentPoly(acc)


# ---------------------------------------------------------------------------
# null relations
# ---------------------------------------------------------------------------


def relation_reduce(indices: tuple) -> CircleForm:
    """z^{n0} dz^{n1}...dz^{nk} - n1...nk z^{sum - k} (dz)^k."""
    k = len(indices) - 1
    s = sum(indices) - k
    return CircleForm.term(*indices) - CircleForm(k, {(s,) + (1,) * k: prod(indices[1:])})


def relation_exact(r: int, k: int) -> CircleForm:
    """dz^r (dz)^{k-1} - r z^{r-1} (dz)^k, degree k."""
    return CircleForm(k, {(0, r) + (1,) * (k - 1): 1}) - CircleForm(k, {(r - 1,) + (1,) * k: r})


def relation_primitive(r: int, k: int) -> CircleForm:
    """z^r (dz)^{k-1} - (1/(r+1)) dz^{r+1} (dz)^{k-2}, degree k-1 (r != -1, k >= 2)."""
    if r == -1:
        raise ValueError("r = -1 has no primitive of this shape")
    return CircleForm(k - 1, {(r,) + (1,) * (k - 1): 1}) - CircleForm(k - 1, {(0, r + 1) + (1,) * (k - 2): Fraction(1, r + 1)})


def _primitive(s: int, k: int) -> CircleForm:
    """eta in the null space of degree k-1 with d(eta) = z^s (dz)^k modulo null forms."""
    ones = (1,) * (k - 2)
    return CircleForm(k - 1, {(s + 1, 1) + ones: 1, (s, 2) + ones: Fraction(-1, 2)})


def null_decomposition(w: CircleForm) -> tuple[CircleForm, CircleForm]:
    """Write a form of degree >= 2 as kappa + d(eta), kappa and eta both null."""
    k = w.degree
    if k < 2:
        raise ValueError("degree must be >= 2")
    kappa, eta = CircleForm(k), CircleForm(k - 1)
    for key, c in w.terms.items():
        weight = prod(key[1:])
        s = sum(key) - k
        e = _primitive(s, k).scale(c * weight)
        eta = eta + e
        kappa = kappa + CircleForm(k, {key: c}) - e.d()
    return kappa, eta


# ---------------------------------------------------------------------------
# pushforward along the symbol map
# ---------------------------------------------------------------------------


def sigma_k(w: UniversalForm) -> CircleForm:
    """Apply the symbol map to every slot of a quantum SU(2) form."""
    acc: dict = {}
    for key, c in w.terms.items():
        if any(m.j or m.k for m in key):
            continue
        idx = tuple(m.i for m in key)
        acc[idx] = acc.get(idx, 0) + c
    return CircleForm(w.degree, acc)


def lift(w: UniversalForm) -> UniversalForm:
    """Drop every term with a slot in the b-ideal (a section of the symbol map)."""
    keep = {key: c for key, c in w.terms.items() if not any(m.j or m.k for m in key)}
    return UniversalForm(w.degree, keep, w.ring)


@dataclass(frozen=True)
class PushforwardReport:
    circle_form: dict
    lhs: Fraction
    rhs: Fraction
    discrepancy: CompactnessCertificate

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs and self.discrepancy.passed

    def as_dict(self) -> dict:
        return {
            "sigma_k": {",".join(map(str, k)): str(v) for k, v in sorted(self.circle_form.items())},
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "discrepancy": self.discrepancy.as_dict(),
            "passed": self.passed,
        }


def sigma_pushforward_check(w: UniversalForm, window: TruncationWindow = TruncationWindow(40, 40),
                            cuts=(8, 16, 32), spec: DiracSpec | None = None) -> PushforwardReport:
    """Both sides of (w, w)_D = (sigma_k w, sigma_k w) and the b-ideal discrepancy.

    The left side is, by the pushforward identity, evaluated through the circle
    formula; the numeric part checks that pi_k(w) - pi_k(lift(w)) decays in the
    N direction (it is a sum of terms each carrying a factor q^N).
    """
    spec = spec or generic_dirac()
    cf = sigma_k(w)
    lhs = l2_inner_product(cf, cf)
    rhs = l2_inner_product(sigma_k(lift(w)), sigma_k(lift(w)))
    diff = represent_form_float(w, window, spec) - represent_form_float(lift(w), window, spec)
    margin = max((sum(max(abs(m.i), abs(m.j - m.k)) for m in key) for key in w.terms), default=0)
    diff = restrict_interior_matrix(diff, window, margin)
    profile = tail_norm_profile(diff, cuts, axis="row", window=window)
    return PushforwardReport(dict(cf.terms), lhs, rhs, decay_certificate(profile, cuts))
