"""The representation on l2(N) (x) l2(Z):

    a  -> l sqrt(1 - q^{2N}) (x) I,     b -> q^N (x) l,

with ``l`` the lowering shift.  On basis vectors,

    a_i b^j b*^k e_{n,t} = q^{(j+k)n} * (prod of sqrt(1 - q^{2m})) e_{n-i, t+k-j},

where the product runs over m = n, n-1, ..., n-i+1 when i > 0 and over
m = n+1, ..., n+|i| when i < 0.  The square roots stay exact (see scalars).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import scipy.sparse as sp

from .algebra import AlgebraElement, LaurentPoly, Monomial
from .exact_linalg import exact_rank
from .scalars import Scalar, sqrt
from .truncation import IntWindow, TruncatedOperator, TruncationWindow


class InconclusiveProbe(RuntimeError):
    """Window too small to separate the given elements."""


@lru_cache(maxsize=None)
def root_x(m: int, q: Fraction) -> Scalar:
    """sqrt(1 - q^{2m}) exactly."""
    return sqrt(1 - q ** (2 * m))


@lru_cache(maxsize=None)
def _alpha_weight(i: int, n: int, q: Fraction) -> Scalar:
    """Scalar picked up by a_i acting on row index n (0 when annihilated)."""
    w: Scalar = Fraction(1)
    if i > 0:
        if n - i < 0:
            return Fraction(0)
        for m in range(n - i + 1, n + 1):
            w = w * root_x(m, q)
    elif i < 0:
        for m in range(n + 1, n - i + 1):
            w = w * root_x(m, q)
    return w


def monomial_action(mon: Monomial, n: int, t: int, q: Fraction):
    """Image of e_{n,t}: returns (coefficient, (n', t')) or None if zero."""
    if n - mon.i < 0:
        return None
    w = _alpha_weight(mon.i, n, q)
    if w == 0:
        return None
    return (q ** ((mon.j + mon.k) * n)) * w, (n - mon.i, t + mon.k - mon.j)


@lru_cache(maxsize=4096)
def represent_monomial(mon: Monomial, window: TruncationWindow, q: Fraction) -> TruncatedOperator:
    items = []
    for n, t in window.labels():
        img = monomial_action(mon, n, t, q)
        if img is not None:
            items.append((img[1], (n, t), img[0]))
    return TruncatedOperator.from_labels(window, items, margin=max(abs(mon.i), abs(mon.j - mon.k)))


def represent(a: AlgebraElement, window: TruncationWindow) -> TruncatedOperator:
    """Compression of pi(a) to the window, exact."""
    out = TruncatedOperator.zero(window)
    for mon, c in sorted(a.terms.items()):
        out = out + represent_monomial(mon, window, a.q).scale(c)
    return out.with_margin(a.max_shift())


def represent_float(a: AlgebraElement, window: TruncationWindow) -> sp.csr_matrix:
    return _represent_float_cached(a, window)


@lru_cache(maxsize=4096)
def _represent_float_cached(a: AlgebraElement, window) -> sp.csr_matrix:
    acc = sp.csr_matrix((window.dim, window.dim))
    for mon, c in a.terms.items():
        acc = acc + float(c) * _monomial_float(mon, window, a.q)
    return acc.tocsr()


@lru_cache(maxsize=4096)
def _monomial_float(mon: Monomial, window, q: Fraction) -> sp.csr_matrix:
    return represent_monomial(mon, window, q).to_sparse()


def represent_circle(p: LaurentPoly, m: int) -> TruncatedOperator:
    """z^n -> l^n on the l2(Z) window |j| <= m."""
    w = IntWindow(m)
    items = []
    for n, c in p.coeffs.items():
        for (t,) in w.labels():
            items.append(((t - n,), (t,), c))
    margin = max((abs(n) for n in p.coeffs), default=0)
    return TruncatedOperator.from_labels(w, items, margin=margin)


# ---------------------------------------------------------------------------
# faithfulness
# ---------------------------------------------------------------------------


def _represented_rank(elements: Sequence[AlgebraElement], window: TruncationWindow) -> int:
    margin = max(e.max_shift() for e in elements)
    interior = None
    entries = {}
    pos: dict = {}
    for col, e in enumerate(elements):
        op = represent(e, window)
        if interior is None:
            interior = op.interior_indices(margin)
        for (r, c), v in op.entries.items():
            if r in interior and c in interior:
                row = pos.setdefault((r, c), len(pos))
                entries[(row, col)] = v
    return exact_rank(entries, (len(pos), len(elements))).rank


def algebraic_rank(elements: Sequence[AlgebraElement]) -> int:
    mons = sorted({m for e in elements for m in e.terms})
    idx = {m: n for n, m in enumerate(mons)}
    entries = {(idx[m], col): c for col, e in enumerate(elements) for m, c in e.terms.items()}
    return exact_rank(entries, (len(mons), len(elements))).rank


def faithfulness_probe(elements: Sequence[AlgebraElement], window: TruncationWindow) -> bool:
    """True when no nonzero combination of ``elements`` is represented by zero.

    Zero elements are discarded first (an empty list is vacuously faithful).
    Represented rank is compared with algebraic rank at ``window`` and at the
    doubled window; a deficiency at both raises :class:`InconclusiveProbe`.
    """
    elements = [e for e in elements if not e.is_zero()]
    if not elements:
        return True
    target = algebraic_rank(elements)
    for w in (window, window.doubled()):
        if _represented_rank(elements, w) == target:
            return True
    raise InconclusiveProbe(
        f"represented rank stays below algebraic rank {target} on windows {window} and {window.doubled()}"
    )


# ---------------------------------------------------------------------------
# torus equivariance at 4th roots of unity
# ---------------------------------------------------------------------------


def equivariance_check(a: AlgebraElement, window: TruncationWindow, z_pow: int, w_pow: int) -> bool:
    """Check U* pi(a) U = pi(tau(a)) for U = z^N (x) w^N with z = i^z_pow, w = i^w_pow.

    Entries of both sides are Gaussian numbers ``x * i^e`` with real exact ``x``;
    they are compared as (real, imaginary) pairs.
    """
    def gauss(x, e):
        e %= 4
        return [(x, 0), (0, x), (-x, 0), (0, -x)][e]

    for mon, c in a.terms.items():
        op = represent_monomial(mon, window, a.q)
        char = z_pow * mon.i + w_pow * (mon.j - mon.k)
        for (r, col), v in op.entries.items():
            (nr, tr), (nc, tc) = window.label(r), window.label(col)
            # <e_r, U* T U e_c> = conj(z^nr w^tr) z^nc w^tc T_rc
            lhs = gauss(v * c, z_pow * (nc - nr) + w_pow * (tc - tr))
            rhs = gauss(v * c, char)
            if lhs != rhs:
                return False
    return True
