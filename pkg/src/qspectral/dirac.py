"""Torus-equivariant Dirac candidates ``D e_ij = d_ij e_ij`` and their audits.

Asymptotic conditions (O(1), O(i+1), O(i+|j|+1), summability) cannot be decided
from finite data.  Each one is turned into a trend certificate over three scans
``s, 2s, 4s``: the sequence of maxima ``v1, v2, v3`` counts as bounded when it
does not increase at the last step, or when its increments shrink by at least
a factor 3/4 (so a geometric approach to a finite limit passes while linear or
logarithmic growth fails).  Reports carry the raw profiles.
"""

from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .algebra import AlgebraElement, Monomial
from .representation import represent, root_x
from .scalars import Scalar
from .truncation import TruncatedOperator, TruncationWindow, sign_plus

TREND_RATIO = Fraction(3, 4)


class CommutatorMismatch(AssertionError):
    """Leibniz-assembled commutator disagrees with D pi(a) - pi(a) D."""


class InconclusiveSign(RuntimeError):
    """A column has no stable sign within the scan."""


@dataclass(frozen=True)
class DiracSpec:
    rule: Callable[[int, int], Fraction]
    name: str = "custom"

    def __call__(self, i: int, j: int) -> Fraction:
        return Fraction(self.rule(i, j))

    def negated(self) -> "DiracSpec":
        rule = self.rule
        return DiracSpec(lambda i, j: -Fraction(rule(i, j)), f"-{self.name}")

    def operator(self, window: TruncationWindow) -> TruncatedOperator:
        return TruncatedOperator.diagonal(window, lambda lab: self(*lab))


def _generic_rule(i: int, j: int) -> Fraction:
    return Fraction(i * sign_plus(j) + j)


def generic_dirac() -> DiracSpec:
    """d_ij = i * sgn+(j) + j, i.e. D = N (x) S + I (x) N."""
    return DiracSpec(_generic_rule, "generic")


def constant_dirac(value=1) -> DiracSpec:
    v = Fraction(value)
    return DiracSpec(lambda i, j: v, f"const({v})")


def dirac_from_csv(source, default: DiracSpec | None = None, name: str | None = None) -> DiracSpec:
    """Rows ``i,j,value`` override ``default`` (zero when omitted).

    ``source`` is a path or the CSV text itself.  A header row is allowed.
    """
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).exists()):
        text = Path(source).read_text()
        label = name or Path(source).name
    else:
        text = str(source)
        label = name or "csv"
    table: dict[tuple[int, int], Fraction] = {}
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].strip().startswith("#"):
            continue
        if row[0].strip() == "i":
            continue
        if len(row) != 3:
            raise ValueError(f"expected i,j,value: {row}")
        table[(int(row[0]), int(row[1]))] = Fraction(row[2].strip())
    base = default.rule if default is not None else (lambda i, j: Fraction(0))

    def rule(i, j):
        return table.get((i, j), base(i, j))

    return DiracSpec(rule, label)


# ---------------------------------------------------------------------------
# trend certificates
# ---------------------------------------------------------------------------


def bounded_trend(values) -> bool:
    v1, v2, v3 = values
    return v3 <= v2 or (v3 - v2) <= TREND_RATIO * (v2 - v1)


@dataclass(frozen=True)
class TrendReport:
    name: str
    scans: tuple
    values: tuple
    witnesses: tuple  # argmax point per scan
    passed: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "scans": list(self.scans),
            "values": [str(v) for v in self.values],
            "witnesses": [list(w) for w in self.witnesses],
            "passed": self.passed,
            "kind": "finite-evidence certificate",
        }


def _scan_max(fn, scan: int, i_min: int = 0):
    best, arg = Fraction(-1), None
    for i in range(i_min, scan + 1):
        for j in range(-scan, scan + 1):
            v = fn(i, j)
            if v > best:
                best, arg = v, (i, j)
    return best, arg


def _trend(name, fn, scan, i_min=0) -> TrendReport:
    scans = (scan, 2 * scan, 4 * scan)
    vals, wits = [], []
    for s in scans:
        v, w = _scan_max(fn, s, i_min)
        vals.append(v)
        wits.append(w)
    return TrendReport(name, scans, tuple(vals), tuple(wits), bounded_trend(vals))


@dataclass(frozen=True)
class BoundednessReport:
    row_condition: TrendReport  # |d_{i-1,j} - d_ij| = O(1)
    col_condition: TrendReport  # |d_{i,j-1} - d_ij| = O(i+1)

    @property
    def passed(self) -> bool:
        return self.row_condition.passed and self.col_condition.passed

    def witness(self):
        failing = [r for r in (self.row_condition, self.col_condition) if not r.passed]
        return failing[0] if failing else None

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "row_condition": self.row_condition.as_dict(),
            "col_condition": self.col_condition.as_dict(),
        }


def boundedness_gate(spec: DiracSpec, scan: int = 8) -> BoundednessReport:
    if scan < 8:
        raise ValueError("scan must be >= 8")
    row = _trend("|d(i-1,j) - d(i,j)|", lambda i, j: abs(spec(i - 1, j) - spec(i, j)), scan, i_min=1)
    col = _trend("|d(i,j-1) - d(i,j)|/(i+1)", lambda i, j: abs(spec(i, j - 1) - spec(i, j)) / (i + 1), scan)
    return BoundednessReport(row, col)


def growth_audit(spec: DiracSpec, scan: int = 8) -> TrendReport:
    return _trend("|d(i,j)|/(i+|j|+1)", lambda i, j: abs(spec(i, j)) / (i + abs(j) + 1), scan)


# ---------------------------------------------------------------------------
# commutators
# ---------------------------------------------------------------------------

LETTERS = ("a", "a*", "b", "b*")


def monomial_letters(mon: Monomial) -> list[str]:
    """Word a_i b^j b*^k spelled out letter by letter."""
    head = ["a"] * mon.i if mon.i >= 0 else ["a*"] * (-mon.i)
    return head + ["b"] * mon.j + ["b*"] * mon.k


def letter_action(letter: str, n: int, t: int, q: Fraction):
    """pi(letter) e_{n,t} as (weight, (n', t')), or None."""
    if letter == "a":
        if n == 0:
            return None
        return root_x(n, q), (n - 1, t)
    if letter == "a*":
        return root_x(n + 1, q), (n + 1, t)
    if letter == "b":
        return q ** n, (n, t - 1)
    if letter == "b*":
        return q ** n, (n, t + 1)
    raise ValueError(f"unknown letter {letter!r}")


def commutator_letter_action(spec: DiracSpec, letter: str, n: int, t: int, q: Fraction):
    """[D, pi(letter)] e_{n,t} from the generator formulas.

    [D,a] e_ij = (d_{i-1,j} - d_ij) sqrt(1-q^{2i}) e_{i-1,j}
    [D,b] e_ij = (d_{i,j-1} - d_ij) q^i e_{i,j-1}
    and [D, x*] = -[D, x]*.
    """
    if letter == "a":
        if n == 0:
            return None
        return (spec(n - 1, t) - spec(n, t)) * root_x(n, q), (n - 1, t)
    if letter == "b":
        return (spec(n, t - 1) - spec(n, t)) * q ** n, (n, t - 1)
    if letter == "a*":
        # -[D,a]* e_{n,t}: the adjoint of the a-formula read from (n+1,t) to (n,t)
        return -(spec(n, t) - spec(n + 1, t)) * root_x(n + 1, q), (n + 1, t)
    if letter == "b*":
        return -(spec(n, t) - spec(n, t + 1)) * q ** n, (n, t + 1)
    raise ValueError(f"unknown letter {letter!r}")


def _apply_word(actions, n, t):
    """Apply a list of letter actions right to left to e_{n,t}."""
    weight: Scalar = Fraction(1)
    for act in reversed(actions):
        img = act(n, t)
        if img is None:
            return None
        w, (n, t) = img
        if w == 0:
            return None
        weight = weight * w
    return weight, (n, t)


def commutator(spec: DiracSpec, a: AlgebraElement, window: TruncationWindow, check: bool = True) -> TruncatedOperator:
    """[D, pi(a)] by the Leibniz rule over the letters of each monomial.

    With ``check`` the result is compared with ``D pi(a) - pi(a) D`` on the
    interior and :class:`CommutatorMismatch` is raised on disagreement.
    """
    q = a.q
    items = []
    for mon, c in sorted(a.terms.items()):
        letters = monomial_letters(mon)
        for pos in range(len(letters)):
            actions = []
            for k, L in enumerate(letters):
                if k == pos:
                    actions.append(lambda n, t, L=L: commutator_letter_action(spec, L, n, t, q))
                else:
                    actions.append(lambda n, t, L=L: letter_action(L, n, t, q))
            for n, t in window.labels():
                img = _apply_word(actions, n, t)
                if img is not None:
                    items.append((img[1], (n, t), img[0] * c))
    out = TruncatedOperator.from_labels(window, items, margin=a.max_shift())
    if check:
        d = spec.operator(window)
        pa = represent(a, window)
        direct = d @ pa - pa @ d
        if not out.equal_on_interior(direct, a.max_shift()):
            raise CommutatorMismatch(f"commutator mismatch for {a.text()} with {spec.name}")
    return out


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------


def multiplicities(spec: DiracSpec, scan: int) -> Counter:
    """Counter of eigenvalues d_ij over 0 <= i <= scan, |j| <= scan."""
    return Counter(spec(i, j) for i in range(scan + 1) for j in range(-scan, scan + 1))


class NotCompactResolvent(ValueError):
    """Eigenvalue counts below a cutoff change when the scan is enlarged."""


@dataclass(frozen=True)
class SummabilityReport:
    spec: str
    p: Fraction
    lambdas: tuple
    partial_sums: tuple
    counts: tuple
    converging: bool

    def as_dict(self) -> dict:
        return {
            "dirac": self.spec,
            "p": str(self.p),
            "lambdas": list(self.lambdas),
            "partial_sums": [float(f"{s:.12g}") for s in self.partial_sums],
            "counts": list(self.counts),
            "trend": "converging" if self.converging else "diverging",
        }


def summability_profile(spec: DiracSpec, p, lambda_list, scan: int | None = None) -> SummabilityReport:
    """Partial sums of |d|^{-p} over 0 < |d_ij| <= Lambda for each Lambda.

    The scan region defaults to max(Lambda); the counts below each Lambda must
    not change when the region is doubled (finite multiplicities).
    """
    lambdas = tuple(sorted(Fraction(x) for x in lambda_list))
    if not lambdas:
        raise ValueError("lambda list must not be empty")
    p = Fraction(p)
    if p <= 0:
        raise ValueError("p must be positive")
    scan = scan or int(max(lambdas))
    small, big = multiplicities(spec, scan), multiplicities(spec, 2 * scan)
    if all(v == 0 for v in big):
        raise ValueError("all-zero spectrum")
    sums, counts = [], []
    for lam in lambdas:
        cs = sum(m for v, m in small.items() if 0 < abs(v) <= lam)
        cb = sum(m for v, m in big.items() if 0 < abs(v) <= lam)
        if cs != cb:
            raise NotCompactResolvent(f"count below {lam} changes from {cs} to {cb} when the scan doubles")
        counts.append(cs)
        sums.append(sum(m * float(abs(v)) ** (-float(p)) for v, m in small.items() if 0 < abs(v) <= lam))
    converging = True
    if len(sums) >= 3:
        s1, s2, s3 = sums[-3:]
        converging = (s3 - s2) <= float(TREND_RATIO) * (s2 - s1)
    return SummabilityReport(spec.name, p, tuple(int(x) if x.denominator == 1 else str(x) for x in lambdas),
                             tuple(sums), tuple(counts), converging)


# ---------------------------------------------------------------------------
# sign structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignProjectionClass:
    kind: str  # P1, P2, P3, P4 or other
    exceptional_set: frozenset
    cutoff: int
    exceptions: tuple = field(default=())  # (i, j) points disagreeing with their column's eventual sign

    def predicate(self) -> Callable[[int, int], bool]:
        """Membership (i, j) -> bool of the diagonal projection this class denotes."""
        M, E = self.cutoff, self.exceptional_set
        if self.kind == "P1":
            return lambda i, j: j <= -M or j in E
        if self.kind == "P2":
            return lambda i, j: j >= M or j in E
        if self.kind == "P3":
            return lambda i, j: j in E
        if self.kind == "P4":
            return lambda i, j: j not in E
        raise ValueError("no projection for class 'other'")

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "exceptional_set": sorted(self.exceptional_set),
            "cutoff": self.cutoff,
            "exceptions": [list(x) for x in self.exceptions],
        }


def _sgn(x) -> int:
    return 1 if x >= 0 else -1


def classify_sign_projection(spec: DiracSpec, scan: int = 16) -> SignProjectionClass:
    """Match P = (I + sign D)/2 (with sign(0) = +1) against the P1..P4 shapes."""
    eventual: dict[int, int] = {}
    exceptions = []
    for j in range(-scan, scan + 1):
        tail = {_sgn(spec(i, j)) for i in range(scan // 2, scan + 1)}
        if len(tail) != 1:
            raise InconclusiveSign(f"column {j} has no stable sign for i in [{scan // 2}, {scan}]")
        s = tail.pop()
        eventual[j] = s
        exceptions.extend((i, j) for i in range(scan // 2) if _sgn(spec(i, j)) != s)
    best = None
    for M in range(1, scan + 1):
        up = {eventual[j] for j in range(M, scan + 1)}
        down = {eventual[j] for j in range(-scan, -M + 1)}
        if len(up) == 1 and len(down) == 1:
            best = (M, up.pop(), down.pop())
            break
    if best is None:
        return SignProjectionClass("other", frozenset(), scan, tuple(exceptions))
    M, s_up, s_down = best
    middle = range(-M + 1, M)
    pos = frozenset(j for j in middle if eventual[j] > 0)
    neg = frozenset(j for j in middle if eventual[j] < 0)
    kind, E = {
        (1, -1): ("P2", pos),
        (-1, 1): ("P1", pos),
        (-1, -1): ("P3", pos),
        (1, 1): ("P4", neg),
    }[(s_up, s_down)]
    return SignProjectionClass(kind, E, M, tuple(exceptions))
