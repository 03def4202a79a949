"""Universal differential forms over a unital algebra with a monomial basis.

A degree-n form is stored in the canonical basis of ``A (x) (A/C)^{(x) n}``:
a dict mapping ``(m0, m1, ..., mn)`` (basis monomials, the letters ``m1..mn``
never the unit) to coefficients, meaning ``sum c * m0 dm1 ... dmn``.  Since
``d(1) = 0`` and the representation is multilinear, this normal form is unique
and equality of forms is equality of dicts.

Elements must expose ``terms`` (monomial -> coefficient), ``like(terms)`` and
``unit_key()``; both algebras in this package do.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Callable, Sequence


class UniversalForm:
    __slots__ = ("degree", "terms", "ring")

    def __init__(self, degree: int, terms: dict, ring):
        self.degree = degree
        self.terms = {k: v for k, v in terms.items() if v != 0}
        self.ring = ring  # any element of the algebra, used to build new ones

    # construction -----------------------------------------------------------------
    @classmethod
    def from_term(cls, a0, letters: Sequence = (), coeff=1) -> "UniversalForm":
        """``coeff * a0 d(letters[0]) ... d(letters[-1])`` expanded multilinearly."""
        unit = a0.unit_key()
        acc: dict = {}
        choices = [list(a0.terms.items())]
        for x in letters:
            choices.append([(m, c) for m, c in x.terms.items() if m != unit])
        for combo in product(*choices):
            key = tuple(m for m, _ in combo)
            c = Fraction(coeff)
            for _, v in combo:
                c *= v
            acc[key] = acc.get(key, 0) + c
        return cls(len(letters), acc, a0)

    @classmethod
    def element(cls, a) -> "UniversalForm":
        return cls.from_term(a, ())

    @classmethod
    def delta(cls, a) -> "UniversalForm":
        one = a.like({a.unit_key(): Fraction(1)})
        return cls.from_term(one, (a,))

    @classmethod
    def zero(cls, degree: int, ring) -> "UniversalForm":
        return cls(degree, {}, ring)

    def _mono(self, m):
        return self.ring.like({m: Fraction(1)})

    # linear structure -----------------------------------------------------------------
    def _check(self, other: "UniversalForm"):
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch {self.degree} vs {other.degree}")

    def __add__(self, other: "UniversalForm") -> "UniversalForm":
        self._check(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return UniversalForm(self.degree, t, self.ring)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "UniversalForm":
        c = Fraction(c)
        return UniversalForm(self.degree, {k: v * c for k, v in self.terms.items()}, self.ring)

    def __eq__(self, other):
        if not isinstance(other, UniversalForm):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    # products -----------------------------------------------------------------------------
    def left_mul(self, x) -> "UniversalForm":
        acc: dict = {}
        for key, c in self.terms.items():
            prod0 = x * self._mono(key[0])
            for m, v in prod0.terms.items():
                k2 = (m,) + key[1:]
                acc[k2] = acc.get(k2, 0) + c * v
        return UniversalForm(self.degree, acc, self.ring)

    def right_mul(self, x) -> "UniversalForm":
        """Uses (w da) b = w d(ab) - (w a) db."""
        if self.degree == 0:
            acc: dict = {}
            for key, c in self.terms.items():
                for m, v in (self._mono(key[0]) * x).terms.items():
                    acc[(m,)] = acc.get((m,), 0) + c * v
            return UniversalForm(0, acc, self.ring)
        out = UniversalForm.zero(self.degree, self.ring)
        for key, c in self.terms.items():
            head = UniversalForm(self.degree - 1, {key[:-1]: c}, self.ring)
            last = self._mono(key[-1])
            out = out + head.append_delta(last * x)
            out = out - head.right_mul(last).append_delta(x)
        return out

    def append_delta(self, x) -> "UniversalForm":
        """w |-> w dx."""
        unit = x.unit_key()
        acc: dict = {}
        for key, c in self.terms.items():
            for m, v in x.terms.items():
                if m == unit:
                    continue
                k2 = key + (m,)
                acc[k2] = acc.get(k2, 0) + c * v
        return UniversalForm(self.degree + 1, acc, self.ring)

    def __mul__(self, other):
        if isinstance(other, UniversalForm):
            out = UniversalForm.zero(self.degree + other.degree, self.ring)
            for key, c in other.terms.items():
                piece = self.right_mul(self._mono(key[0]))
                for m in key[1:]:
                    piece = piece.append_delta(self._mono(m))
                out = out + piece.scale(c)
            return out
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.right_mul(other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.left_mul(other)

    def d(self) -> "UniversalForm":
        """d(a0 da1 ... dan) = da0 da1 ... dan."""
        unit = self.ring.unit_key()
        acc: dict = {}
        for key, c in self.terms.items():
            if key[0] == unit:
                continue
            k2 = (unit,) + key
            acc[k2] = acc.get(k2, 0) + c
        return UniversalForm(self.degree + 1, acc, self.ring)

    # evaluation -------------------------------------------------------------------------
    def evaluate(self, rep0: Callable, rep1: Callable, add: Callable, mul: Callable, zero):
        """Sum of c * rep0(m0) rep1(m1) ... rep1(mn) with user-supplied arithmetic."""
        total = zero
        for key, c in sorted(self.terms.items(), key=lambda kv: repr(kv[0])):
            term = rep0(key[0])
            for m in key[1:]:
                term = mul(term, rep1(m))
            total = add(total, term, c)
        return total

    def map_letters(self, fn: Callable) -> "UniversalForm":
        """Apply an algebra map to every slot (used for symbol pushforwards)."""
        out = None
        for key, c in self.terms.items():
            a0 = fn(self._mono(key[0]))
            letters = [fn(self._mono(m)) for m in key[1:]]
            piece = UniversalForm.from_term(a0, letters, c)
            out = piece if out is None else out + piece
        return out

    def __repr__(self):
        return f"UniversalForm(deg={self.degree}, {len(self.terms)} terms)"
