"""The coordinate *-algebra of quantum SU(2) in its normal-ordered basis.

Basis words are ``a_i b^j b*^k`` where ``a_i = a^i`` for ``i >= 0`` and
``a_i = (a*)^{-i}`` for ``i < 0``.  Products are reduced with

    a b = q b a,   a b* = q b* a,   b b* = b* b,
    a* a = 1 - b* b,   a a* = 1 - q^2 b b*.

Write ``X = b b*``.  Commuting ``b^j b*^k`` to the right of ``a_i`` costs
``q^{-i(j+k)}`` and ``X a_i = q^{-2i} a_i X``, so every product reduces to a
combination of ``a_i X^t b^j b*^k = a_i b^{j+t} b*^{k+t}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

DEFAULT_Q = Fraction(1, 2)


def check_q(q) -> Fraction:
    q = Fraction(q)
    if not 0 < q < 1:
        raise ValueError("q must lie in (0,1)")
    return q


@dataclass(frozen=True, order=True)
class Monomial:
    i: int
    j: int = 0
    k: int = 0

    def __post_init__(self):
        if self.j < 0 or self.k < 0:
            raise ValueError("powers of b and b* must be nonnegative")

    @property
    def shift(self) -> tuple[int, int]:
        """Displacement (row, col) of basis labels under the representation."""
        return (-self.i, self.k - self.j)

    def in_ideal(self) -> bool:
        return self.j + self.k >= 1

    def text(self) -> str:
        return f"a^{self.i} b^{self.j} b*^{self.k}"


@lru_cache(maxsize=None)
def _alpha_pair(i1: int, i2: int, q: Fraction) -> tuple:
    """``a_{i1} a_{i2} = sum c * a_i X^t`` as a tuple of ((i, t), c)."""
    if i1 == 0 or i2 == 0 or (i1 > 0) == (i2 > 0):
        return (((i1 + i2, 0), Fraction(1)),)
    out: dict = {}
    if i1 > 0:
        # a^a (a*)^b = a^{a-1}(a*)^{b-1} - q^{2a} X a^{a-1}(a*)^{b-1}
        a, b = i1, -i2
        head = _alpha_pair(a - 1, -(b - 1), q)
        factor = -(q ** (2 * a))
    else:
        # (a*)^a a^b = (a*)^{a-1} a^{b-1} - q^{-2(a-1)} X (a*)^{a-1} a^{b-1}
        a, b = -i1, i2
        head = _alpha_pair(-(a - 1), b - 1, q)
        factor = -(q ** (-2 * (a - 1)))
    for (i, t), c in head:
        out[(i, t)] = out.get((i, t), 0) + c
        # X a_i X^t = q^{-2i} a_i X^{t+1}
        key = (i, t + 1)
        out[key] = out.get(key, 0) + factor * c * q ** (-2 * i)
    return tuple(sorted((k, v) for k, v in out.items() if v))


@lru_cache(maxsize=200_000)
def monomial_product(m1: Monomial, m2: Monomial, q: Fraction) -> tuple:
    """Normal-ordered ``m1 * m2`` as a tuple of (Monomial, coefficient)."""
    pre = q ** (-m2.i * (m1.j + m1.k))
    out = []
    for (i, t), c in _alpha_pair(m1.i, m2.i, q):
        out.append((Monomial(i, m1.j + m2.j + t, m1.k + m2.k + t), pre * c))
    return tuple(out)


class AlgebraElement:
    """Finite exact combination of normal-ordered monomials at a fixed q."""

    __slots__ = ("terms", "q")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None, q=DEFAULT_Q):
        self.q = check_q(q)
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}

    # constructors ------------------------------------------------------------
    @classmethod
    def monomial(cls, i: int, j: int = 0, k: int = 0, q=DEFAULT_Q, coeff=1) -> "AlgebraElement":
        return cls({Monomial(i, j, k): Fraction(coeff)}, q)

    @classmethod
    def one(cls, q=DEFAULT_Q) -> "AlgebraElement":
        return cls.monomial(0, 0, 0, q)

    @classmethod
    def zero(cls, q=DEFAULT_Q) -> "AlgebraElement":
        return cls({}, q)

    def like(self, terms: Mapping[Monomial, Fraction]) -> "AlgebraElement":
        """Element of the same algebra with the given terms."""
        return AlgebraElement(terms, self.q)

    @staticmethod
    def unit_key() -> Monomial:
        return Monomial(0, 0, 0)

    # arithmetic ----------------------------------------------------------------
    def _same(self, other: "AlgebraElement"):
        if self.q != other.q:
            raise ValueError(f"mismatched q contexts {self.q} and {other.q}")

    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            self._same(other)
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraElement({Monomial(0): Fraction(other)}, self.q)
        raise TypeError(f"cannot combine AlgebraElement with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return AlgebraElement(t, self.q)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement({m: -c for m, c in self.terms.items()}, self.q)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement({m: v * c for m, v in self.terms.items()}, self.q)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        other = self._coerce(other)
        acc: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                for m, c in monomial_product(m1, m2, self.q):
                    acc[m] = acc.get(m, 0) + c1 * c2 * c
        return AlgebraElement(acc, self.q)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self._coerce(other) * self

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = AlgebraElement.one(self.q)
        for _ in range(n):
            out = out * self
        return out

    def adjoint(self) -> "AlgebraElement":
        # (a_i b^j b*^k)* = b^k b*^j a_{-i} = q^{i(j+k)} a_{-i} b^k b*^j
        q = self.q
        acc: dict = {}
        for m, c in self.terms.items():
            key = Monomial(-m.i, m.k, m.j)
            acc[key] = acc.get(key, 0) + c * q ** (m.i * (m.j + m.k))
        return AlgebraElement(acc, q)

    # comparisons -----------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.q == other.q and self.terms == other.terms

    def __hash__(self):
        return hash((self.q, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, i: int, j: int = 0, k: int = 0) -> Fraction:
        return self.terms.get(Monomial(i, j, k), Fraction(0))

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms)

    def max_shift(self) -> int:
        return max((max(abs(m.i), abs(m.j - m.k)) for m in self.terms), default=0)

    # text form ---------------------------------------------------------------------
    def text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c} * {m.text()}" for m, c in sorted(self.terms.items()))

    def __repr__(self):
        return f"AlgebraElement({self.text()}; q={self.q})"


_TERM = re.compile(r"^\s*(-?\d+(?:/\d+)?)\s*\*\s*a\^(-?\d+)\s+b\^(\d+)\s+b\*\^(\d+)\s*$")


def parse_element(text: str, q=DEFAULT_Q) -> AlgebraElement:
    """Inverse of :meth:`AlgebraElement.text`."""
    text = text.strip()
    if text == "0":
        return AlgebraElement.zero(q)
    acc: dict = {}
    for part in text.split(" + "):
        m = _TERM.match(part)
        if not m:
            raise ValueError(f"cannot parse term {part!r}")
        c, i, j, k = Fraction(m.group(1)), int(m.group(2)), int(m.group(3)), int(m.group(4))
        key = Monomial(i, j, k)
        acc[key] = acc.get(key, 0) + c
    return AlgebraElement(acc, q)


# ---------------------------------------------------------------------------
# generators, relations, states
# ---------------------------------------------------------------------------


def generators(q=DEFAULT_Q) -> dict[str, AlgebraElement]:
    return {
        "a": AlgebraElement.monomial(1, 0, 0, q),
        "a*": AlgebraElement.monomial(-1, 0, 0, q),
        "b": AlgebraElement.monomial(0, 1, 0, q),
        "b*": AlgebraElement.monomial(0, 0, 1, q),
        "1": AlgebraElement.one(q),
    }


def defining_relations(q=DEFAULT_Q) -> dict[str, AlgebraElement]:
    """The five defining relations, each of which should normal-order to zero."""
    g = generators(q)
    a, a_, b, b_, one = g["a"], g["a*"], g["b"], g["b*"], g["1"]
    q = Fraction(q)

    def word(*xs):
        out = one
        for x in xs:
            out = out * x
        return out

    # evaluate words letter by letter so the rewriting actually fires
    return {
        "ab - q ba": word(a, b) - word(b, a).scale(q),
        "ab* - q b*a": word(a, b_) - word(b_, a).scale(q),
        "bb* - b*b": word(b, b_) - word(b_, b),
        "a*a + b*b - 1": word(a_, a) + word(b_, b) - one,
        "aa* + q^2 bb* - 1": word(a, a_) + word(b, b_).scale(q * q) - one,
    }


def haar_state(a: AlgebraElement) -> Fraction:
    q2 = a.q * a.q
    total = Fraction(0)
    for m, c in a.terms.items():
        if m.i == 0 and m.j == m.k:
            total += c * (1 - q2) / (1 - q2 ** (m.j + 1))
    return total


def haar_state_series(a: AlgebraElement, terms: int = 200) -> float:
    """Truncated (1-q^2) sum_n q^{2n} <e_{n,0}, pi(a) e_{n,0}> (floating oracle)."""
    q = float(a.q)
    total = 0.0
    for m, c in a.terms.items():
        if m.i != 0 or m.j != m.k:
            continue
        total += float(c) * sum((1 - q * q) * q ** (2 * n) * q ** (2 * m.j * n) for n in range(terms))
    return total


def in_ideal_beta(a: AlgebraElement) -> bool:
    return all(m.in_ideal() for m in a.terms)


# ---------------------------------------------------------------------------
# Laurent polynomials and the symbol map
# ---------------------------------------------------------------------------


class LaurentPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Fraction] | None = None):
        self.coeffs = {int(n): Fraction(c) for n, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def monomial(cls, n: int, c=1) -> "LaurentPoly":
        return cls({n: c})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        t = dict(self.coeffs)
        for n, c in other.coeffs.items():
            t[n] = t.get(n, 0) + c
        return LaurentPoly(t)

    def __neg__(self):
        return LaurentPoly({n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LaurentPoly":
        return LaurentPoly({n: v * Fraction(c) for n, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        acc: dict = {}
        for n1, c1 in self.coeffs.items():
            for n2, c2 in other.coeffs.items():
                acc[n1 + n2] = acc.get(n1 + n2, 0) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def text(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*z^{n}" for n, c in sorted(self.coeffs.items()))

    def __repr__(self):
        return f"LaurentPoly({self.text()})"


def symbol(a: AlgebraElement) -> LaurentPoly:
    """The quotient map killing b, b*: a_i b^j b*^k -> z^i if j = k = 0, else 0."""
    return LaurentPoly({m.i: c for m, c in a.terms.items() if m.j == 0 and m.k == 0})


def monomial_grid(bound: int, q=DEFAULT_Q) -> list[AlgebraElement]:
    """All basis monomials with |i|, j, k <= bound."""
    return [
        AlgebraElement.monomial(i, j, k, q)
        for i in range(-bound, bound + 1)
        for j in range(bound + 1)
        for k in range(bound + 1)
    ]


def element_from_terms(items: Iterable[tuple[tuple[int, int, int], Fraction]], q=DEFAULT_Q) -> AlgebraElement:
    acc: dict = {}
    for (i, j, k), c in items:
        m = Monomial(i, j, k)
        acc[m] = acc.get(m, 0) + Fraction(c)
    return AlgebraElement(acc, q)
