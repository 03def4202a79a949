"""Exact scalars: rationals and formal square roots.

Operator entries are either :class:`fractions.Fraction` or :class:`Surd`, a
finite sum ``sum_K c_K * prod_{r in K} sqrt(r)`` where every radicand ``r`` is
a positive exact value (a Fraction, or itself a Surd) and ``sqrt(r)**2 = r``
is the only simplification applied.  Every identity that holds formally holds
numerically, which is all the relation checks need.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, "Surd"]


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _radicand_key(r) -> tuple:
    if isinstance(r, Fraction):
        return (0, r.numerator, r.denominator)
    return (1, repr(r))


class Surd:
    """Element of the formal ring Q[sqrt(r_1), sqrt(r_2), ...]."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict):
        self._terms = {k: v for k, v in terms.items() if v != 0}
        self._hash = None

    # construction helpers -------------------------------------------------
    @staticmethod
    def normalize(terms: dict) -> Scalar:
        terms = {k: v for k, v in terms.items() if v != 0}
        if not terms:
            return Fraction(0)
        if len(terms) == 1 and frozenset() in terms:
            return Fraction(terms[frozenset()])
        return Surd(terms)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_single_term(self) -> bool:
        return len(self._terms) == 1

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            t = dict(self._terms)
            t[frozenset()] = t.get(frozenset(), Fraction(0)) + other
            return Surd.normalize(t)
        if isinstance(other, Surd):
            t = dict(self._terms)
            for k, v in other._terms.items():
                t[k] = t.get(k, Fraction(0)) + v
            return Surd.normalize(t)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Surd({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Surd)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Fraction(0)
            return Surd({k: v * other for k, v in self._terms.items()})
        if not isinstance(other, Surd):
            return NotImplemented
        acc: Scalar = Fraction(0)
        plain: dict = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                common = k1 & k2
                key = k1 ^ k2
                coeff = v1 * v2
                nested = []
                for r in common:
                    if isinstance(r, Fraction):
                        coeff *= r
                    else:
                        nested.append(r)
                if not nested:
                    plain[key] = plain.get(key, Fraction(0)) + coeff
                else:
                    term: Scalar = Surd.normalize({key: coeff})
                    for r in nested:
                        term = term * r
                    acc = acc + term
        return acc + Surd.normalize(plain)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def conjugate(self) -> "Surd":
        return self

    # comparison / conversion -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Surd):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __float__(self):
        total = 0.0
        for key, c in self._terms.items():
            prod = float(c)
            for r in key:
                prod *= math.sqrt(float(r))
            total += prod
        return total

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        out = []
        for key, c in self._terms.items():
            rads = tuple(sorted(key, key=_radicand_key))
            out.append((rads, c))
        out.sort(key=lambda t: tuple(_radicand_key(r) for r in t[0]))
        return out

    def __repr__(self):
        parts = []
        for rads, c in self.sorted_terms():
            root = "*".join(f"sqrt({r})" for r in rads)
            parts.append(f"{c}" + (f"*{root}" if root else ""))
        return "Surd(" + " + ".join(parts) + ")"


def sqrt(x) -> Scalar:
    """Exact square root of a nonnegative exact value."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        if x < 0:
            raise ValueError(f"negative radicand {x}")
        r = _rational_sqrt(x)
        if r is not None:
            return r
        return Surd({frozenset([x]): Fraction(1)})
    if isinstance(x, Surd):
        if float(x) < 0:
            raise ValueError(f"negative radicand {x!r}")
        return Surd({frozenset([x]): Fraction(1)})
    raise TypeError(f"cannot take exact sqrt of {type(x).__name__}")


def as_scalar(x) -> Scalar:
    if isinstance(x, Surd):
        return x
    return Fraction(x)


def to_float(x: Scalar) -> float:
    return float(x)


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))
