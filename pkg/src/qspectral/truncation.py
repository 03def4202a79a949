"""Finite windows of l2(N), l2(Z), l2(N) (x) l2(Z) and sparse exact operators on them.

A :class:`TruncatedOperator` is the compression ``P_W T P_W`` of an infinite
banded operator ``T`` to the span of a finite window ``W``.  Its ``margin``
records how far from the truncation boundary a basis vector must sit for
``T e`` to lie entirely inside the window; products of compressions agree with
compressions of products on the interior (distance >= sum of margins).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.sparse.csgraph import connected_components

from .scalars import Scalar, Surd, as_scalar, to_float

NORM_TOL = 1e-10


# ---------------------------------------------------------------------------
# windows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncationWindow:
    """Basis ``{e_ij : 0 <= i <= m_row, |j| <= m_col}`` of l2(N) (x) l2(Z)."""

    m_row: int
    m_col: int

    def __post_init__(self):
        if self.m_row < 1 or self.m_col < 1:
            raise ValueError("window sizes must be >= 1")

    @property
    def dim(self) -> int:
        return (self.m_row + 1) * (2 * self.m_col + 1)

    def contains(self, label) -> bool:
        i, j = label
        return 0 <= i <= self.m_row and -self.m_col <= j <= self.m_col

    def index(self, label) -> int:
        i, j = label
        if not self.contains(label):
            raise IndexError(f"{label} outside window ({self.m_row},{self.m_col})")
        return i * (2 * self.m_col + 1) + (j + self.m_col)

    def label(self, idx: int) -> tuple[int, int]:
        i, r = divmod(idx, 2 * self.m_col + 1)
        return (i, r - self.m_col)

    def labels(self) -> Iterator[tuple[int, int]]:
        for i in range(self.m_row + 1):
            for j in range(-self.m_col, self.m_col + 1):
                yield (i, j)

    def distance(self, label) -> int:
        i, j = label
        return min(self.m_row - i, self.m_col - abs(j))

    def radius(self, label, axis: str = "both") -> int:
        i, j = label
        if axis == "row":
            return i
        if axis == "col":
            return abs(j)
        return max(i, abs(j))

    def doubled(self) -> "TruncationWindow":
        return TruncationWindow(2 * self.m_row, 2 * self.m_col)


@dataclass(frozen=True)
class NatWindow:
    """Basis ``{e_n : 0 <= n <= m}`` of l2(N)."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("window size must be >= 1")

    @property
    def dim(self) -> int:
        return self.m + 1

    def contains(self, label) -> bool:
        return 0 <= label[0] <= self.m

    def index(self, label) -> int:
        if not self.contains(label):
            raise IndexError(f"{label} outside window {self.m}")
        return label[0]

    def label(self, idx):
        return (idx,)

    def labels(self):
        for n in range(self.m + 1):
            yield (n,)

    def distance(self, label) -> int:
        return self.m - label[0]

    def radius(self, label, axis: str = "both") -> int:
        return label[0]

    def doubled(self) -> "NatWindow":
        return NatWindow(2 * self.m)


@dataclass(frozen=True)
class IntWindow:
    """Basis ``{e_j : |j| <= m}`` of l2(Z)."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("window size must be >= 1")

    @property
    def dim(self) -> int:
        return 2 * self.m + 1

    def contains(self, label) -> bool:
        return -self.m <= label[0] <= self.m

    def index(self, label) -> int:
        if not self.contains(label):
            raise IndexError(f"{label} outside window {self.m}")
        return label[0] + self.m

    def label(self, idx):
        return (idx - self.m,)

    def labels(self):
        for j in range(-self.m, self.m + 1):
            yield (j,)

    def distance(self, label) -> int:
        return self.m - abs(label[0])

    def radius(self, label, axis: str = "both") -> int:
        return abs(label[0])

    def doubled(self) -> "IntWindow":
        return IntWindow(2 * self.m)


@dataclass(frozen=True)
class SumWindow:
    """Direct sum of ``copies`` identical windows; labels are ``(copy, *base)``."""

    base: object
    copies: int

    def __post_init__(self):
        if self.copies < 1:
            raise ValueError("need at least one copy")

    @property
    def dim(self) -> int:
        return self.copies * self.base.dim

    def contains(self, label) -> bool:
        return 0 <= label[0] < self.copies and self.base.contains(label[1:])

    def index(self, label) -> int:
        if not 0 <= label[0] < self.copies:
            raise IndexError(f"copy {label[0]} outside 0..{self.copies - 1}")
        return label[0] * self.base.dim + self.base.index(label[1:])

    def label(self, idx):
        c, r = divmod(idx, self.base.dim)
        return (c,) + tuple(self.base.label(r))

    def labels(self):
        for c in range(self.copies):
            for lab in self.base.labels():
                yield (c,) + tuple(lab)

    def distance(self, label) -> int:
        return self.base.distance(label[1:])

    def radius(self, label, axis: str = "both") -> int:
        return self.base.radius(label[1:], axis)

    def doubled(self) -> "SumWindow":
        return SumWindow(self.base.doubled(), self.copies)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def _clean(entries: Mapping) -> dict:
    return {k: v for k, v in entries.items() if v != 0}


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    window: object
    entries: Mapping[tuple[int, int], Scalar] = field(default_factory=dict)
    margin: int = 0

    # --- constructors -----------------------------------------------------
    @classmethod
    def from_labels(cls, window, items: Iterable, margin: int = 0) -> "TruncatedOperator":
        """Build from ``(row_label, col_label, value)``; out-of-window rows are dropped."""
        acc: dict = {}
        for row, col, val in items:
            if not window.contains(row) or not window.contains(col):
                continue
            key = (window.index(row), window.index(col))
            acc[key] = acc.get(key, Fraction(0)) + as_scalar(val)
        return cls(window, _clean(acc), margin)

    @classmethod
    def diagonal(cls, window, fn: Callable, margin: int = 0) -> "TruncatedOperator":
        items = ((lab, lab, fn(lab)) for lab in window.labels())
        return cls.from_labels(window, items, margin)

    @classmethod
    def identity(cls, window) -> "TruncatedOperator":
        return cls.diagonal(window, lambda lab: Fraction(1))

    @classmethod
    def zero(cls, window) -> "TruncatedOperator":
        return cls(window, {}, 0)

    # --- algebra ------------------------------------------------------------
    def _check(self, other: "TruncatedOperator"):
        if self.window != other.window:
            raise ValueError("operators live on different windows")

    def __add__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        self._check(other)
        acc = dict(self.entries)
        for k, v in other.entries.items():
            acc[k] = acc[k] + v if k in acc else v
        return TruncatedOperator(self.window, _clean(acc), max(self.margin, other.margin))

    def __neg__(self) -> "TruncatedOperator":
        return TruncatedOperator(self.window, {k: -v for k, v in self.entries.items()}, self.margin)

    def __sub__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        return self + (-other)

    def scale(self, c) -> "TruncatedOperator":
        c = as_scalar(c)
        if c == 0:
            return TruncatedOperator(self.window, {}, self.margin)
        return TruncatedOperator(self.window, _clean({k: v * c for k, v in self.entries.items()}), self.margin)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        self._check(other)
        rows: dict[int, list] = {}
        for (r, c), v in other.entries.items():
            rows.setdefault(r, []).append((c, v))
        acc: dict = {}
        for (r, k), a in self.entries.items():
            for c, b in rows.get(k, ()):
                key = (r, c)
                p = a * b
                acc[key] = acc[key] + p if key in acc else p
        return TruncatedOperator(self.window, _clean(acc), self.margin + other.margin)

    def adjoint(self) -> "TruncatedOperator":
        return TruncatedOperator(
            self.window, {(c, r): v.conjugate() for (r, c), v in self.entries.items()}, self.margin
        )

    def commutator(self, other: "TruncatedOperator") -> "TruncatedOperator":
        return self @ other - other @ self

    def with_margin(self, margin: int) -> "TruncatedOperator":
        return TruncatedOperator(self.window, self.entries, margin)

    # --- inspection ---------------------------------------------------------
    def entry(self, row_label, col_label) -> Scalar:
        w = self.window
        return self.entries.get((w.index(row_label), w.index(col_label)), Fraction(0))

    def nnz(self) -> int:
        return len(self.entries)

    def bandwidth(self) -> int:
        """Largest label displacement (in window radius) of any entry."""
        w = self.window
        best = 0
        for r, c in self.entries:
            lr, lc = w.label(r), w.label(c)
            best = max(best, max(abs(a - b) for a, b in zip(lr, lc)))
        return best

    def interior_indices(self, margin: int | None = None) -> set[int]:
        m = self.margin if margin is None else margin
        w = self.window
        return {w.index(lab) for lab in w.labels() if w.distance(lab) >= m}

    def restrict(self, rows: set[int] | None = None, cols: set[int] | None = None) -> "TruncatedOperator":
        ent = {
            k: v
            for k, v in self.entries.items()
            if (rows is None or k[0] in rows) and (cols is None or k[1] in cols)
        }
        return TruncatedOperator(self.window, ent, self.margin)

    def interior(self, margin: int | None = None) -> "TruncatedOperator":
        """Zero every row and column closer than ``margin`` to the boundary."""
        keep = self.interior_indices(margin)
        return self.restrict(keep, keep)

    def equal_on_interior(self, other: "TruncatedOperator", margin: int | None = None) -> bool:
        self._check(other)
        m = max(self.margin, other.margin) if margin is None else margin
        return not (self - other).interior(m).entries

    def is_zero_on_interior(self, margin: int | None = None) -> bool:
        return not self.interior(margin).entries

    def __eq__(self, other):
        if not isinstance(other, TruncatedOperator):
            return NotImplemented
        return self.window == other.window and dict(self.entries) == dict(other.entries)

    __hash__ = None

    def is_rational(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.entries.values())

    # --- numerics -------------------------------------------------------------
    def to_sparse(self) -> sp.csr_matrix:
        n = self.window.dim
        if not self.entries:
            return sp.csr_matrix((n, n))
        keys = list(self.entries)
        rows = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
        cols = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
        vals = np.fromiter((to_float(self.entries[k]) for k in keys), dtype=float, count=len(keys))
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    # --- serialization ----------------------------------------------------------
    def dumps(self) -> str:
        """Sparse-triplet text: ``window m_row m_col margin`` then ``i j i' j' num den [r_num r_den ...]``."""
        w = self.window
        if not isinstance(w, TruncationWindow):
            raise ValueError("only TruncationWindow operators are serializable")
        lines = [f"window {w.m_row} {w.m_col} {self.margin}"]
        body = []
        for (r, c), v in self.entries.items():
            (i, j), (ii, jj) = w.label(r), w.label(c)
            if isinstance(v, Fraction):
                body.append(((i, j, ii, jj), (), v))
                continue
            for rads, coeff in v.sorted_terms():
                if not all(isinstance(x, Fraction) for x in rads):
                    raise ValueError("nested radicands cannot be serialized")
                body.append(((i, j, ii, jj), tuple((x.numerator, x.denominator) for x in rads), coeff))
        body.sort(key=lambda t: (t[0], t[1]))
        for idx, rads, coeff in body:
            extra = "".join(f" {a} {b}" for a, b in rads)
            lines.append(f"{idx[0]} {idx[1]} {idx[2]} {idx[3]} {coeff.numerator} {coeff.denominator}{extra}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "TruncatedOperator":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("window "):
            raise ValueError("missing window header")
        _, m_row, m_col, margin = lines[0].split()
        w = TruncationWindow(int(m_row), int(m_col))
        acc: dict = {}
        for ln in lines[1:]:
            tok = [int(t) for t in ln.split()]
            if len(tok) < 6 or len(tok) % 2:
                raise ValueError(f"malformed entry line: {ln!r}")
            i, j, ii, jj, num, den = tok[:6]
            val: Scalar = Fraction(num, den)
            rads = [Fraction(tok[p], tok[p + 1]) for p in range(6, len(tok), 2)]
            if rads:
                val = Surd({frozenset(rads): val})
            key = (w.index((i, j)), w.index((ii, jj)))
            acc[key] = acc[key] + val if key in acc else val
        return cls(w, _clean(acc), int(margin))


# ---------------------------------------------------------------------------
# elementary operators
# ---------------------------------------------------------------------------

ELEMENTARY = ("shift_n", "shift_z", "number_n", "number_z", "q_pow_n", "sign_s", "rank_one")


def _check_q(q) -> Fraction:
    if q is None:
        raise ValueError("q is required for this operator")
    q = Fraction(q)
    if not 0 < q < 1:
        raise ValueError("q must lie in (0,1)")
    return q


def sign_plus(j: int) -> int:
    """+1 for j >= 0, -1 for j < 0 (the diagonal of S)."""
    return 1 if j >= 0 else -1


def build_elementary(window: TruncationWindow, which: str, q=None, indices=None) -> TruncatedOperator:
    """Elementary operators on l2(N) (x) l2(Z) restricted to ``window``."""
    if which == "shift_n":
        items = (((i - 1, j), (i, j), 1) for i, j in window.labels() if i >= 1)
        return TruncatedOperator.from_labels(window, items, margin=1)
    if which == "shift_z":
        items = (((i, j - 1), (i, j), 1) for i, j in window.labels())
        return TruncatedOperator.from_labels(window, items, margin=1)
    if which == "number_n":
        return TruncatedOperator.diagonal(window, lambda lab: Fraction(lab[0]))
    if which == "number_z":
        return TruncatedOperator.diagonal(window, lambda lab: Fraction(lab[1]))
    if which == "q_pow_n":
        qq = _check_q(q)
        return TruncatedOperator.diagonal(window, lambda lab: qq ** lab[0])
    if which == "sign_s":
        return TruncatedOperator.diagonal(window, lambda lab: Fraction(sign_plus(lab[1])))
    if which == "rank_one":
        if indices is None or len(indices) != 4:
            raise ValueError("rank_one needs indices (i, j, i', j')")
        row, col = tuple(indices[:2]), tuple(indices[2:])
        if not window.contains(row) or not window.contains(col):
            raise IndexError("rank_one indices outside window")
        return TruncatedOperator.from_labels(window, [(row, col, 1)])
    raise ValueError(f"unknown elementary operator {which!r}; expected one of {ELEMENTARY}")


# ---------------------------------------------------------------------------
# norms and tail certificates
# ---------------------------------------------------------------------------


def _block_norm(sub) -> float:
    if max(sub.shape) <= 1500 or min(sub.shape) <= 2:
        return float(np.linalg.norm(sub.toarray(), 2))
    try:
        s = spla.svds(sub, k=1, ncv=min(min(sub.shape) - 1, 40), return_singular_vectors=False,
                      tol=1e-12, maxiter=20000)
        return float(s[0])
    except (spla.ArpackNoConvergence, spla.ArpackError):
        gram = (sub.T @ sub) if sub.shape[1] <= sub.shape[0] else (sub @ sub.T)
        return float(np.sqrt(max(np.linalg.eigvalsh(gram.toarray())[-1], 0.0)))


def spectral_norm(mat) -> float:
    """Largest singular value of a (sparse or dense) matrix.

    The nonzero pattern is split into connected blocks (rows and columns linked
    by entries); the norm is the maximum over blocks, each done densely when small.
    """
    m = sp.csr_matrix(mat)
    m.eliminate_zeros()
    if m.nnz == 0:
        return 0.0
    r, c = m.nonzero()
    rows, r_inv = np.unique(r, return_inverse=True)
    cols, c_inv = np.unique(c, return_inverse=True)
    nr, nc = len(rows), len(cols)
    sub = m[rows][:, cols].tocsr()
    graph = sp.coo_matrix((np.ones(len(r)), (r_inv, nr + c_inv)), shape=(nr + nc, nr + nc))
    ncomp, lab = connected_components(graph, directed=False)
    if ncomp == 1:
        return _block_norm(sub)
    best = 0.0
    row_lab, col_lab = lab[:nr], lab[nr:]
    n_rows = np.bincount(row_lab, minlength=ncomp)
    n_cols = np.bincount(col_lab, minlength=ncomp)
    # blocks that are a single row or a single column have norm = Euclidean length
    coo = sub.tocoo()
    sq = np.bincount(row_lab[coo.row], weights=coo.data ** 2, minlength=ncomp)
    thin = (n_rows == 1) | (n_cols == 1)
    if thin.any():
        best = float(np.sqrt(sq[thin].max()))
    order = np.argsort(lab, kind="stable")
    bounds = np.searchsorted(lab[order], np.arange(ncomp + 1))
    for k in np.nonzero(~thin)[0]:
        members = order[bounds[k]:bounds[k + 1]]
        br = members[members < nr]
        bc = members[members >= nr] - nr
        if len(br) == 0 or len(bc) == 0:
            continue
        best = max(best, _block_norm(sub[br][:, bc]))
    return best


def operator_norm(op) -> float:
    if isinstance(op, TruncatedOperator):
        op = op.to_sparse()
    return spectral_norm(op)


def tail_columns(window, cut: int, axis: str = "both") -> np.ndarray:
    return np.array([window.index(lab) for lab in window.labels() if window.radius(lab, axis) > cut], dtype=np.int64)


def tail_norm_profile(op, cut_list, axis: str = "both", window=None) -> list[float]:
    """Norms of ``op`` composed with the projection onto basis vectors beyond each cut.

    ``axis="both"`` projects onto ``i > M or |j| > M``; ``"row"`` onto ``i > M``.
    ``op`` may be a :class:`TruncatedOperator` or a scipy matrix (then pass ``window``).
    """
    cut_list = list(cut_list)
    if not cut_list:
        raise ValueError("cut_list must not be empty")
    if isinstance(op, TruncatedOperator):
        window = op.window
        mat = op.to_sparse()
    else:
        if window is None:
            raise ValueError("window required for raw matrices")
        mat = sp.csr_matrix(op)
    bound = max(window.radius(lab, axis) for lab in window.labels())
    out = []
    mat = mat.tocsc()
    for cut in cut_list:
        if cut >= bound:
            raise ValueError(f"cut {cut} not below window bound {bound}")
        cols = tail_columns(window, cut, axis)
        out.append(spectral_norm(mat[:, cols]) if len(cols) else 0.0)
    return out


@dataclass(frozen=True)
class CompactnessCertificate:
    cuts: tuple
    profile: tuple
    factor: float
    floor: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "cuts": list(self.cuts),
            "profile": [float(f"{x:.6e}") for x in self.profile],
            "factor": self.factor,
            "floor": self.floor,
            "passed": self.passed,
        }


def decay_certificate(profile, cuts, factor: float = 2.0, floor: float = NORM_TOL) -> CompactnessCertificate:
    """Each tail must shrink by ``factor`` per doubling of the cut, or already sit below ``floor``."""
    ok = True
    for prev, cur in zip(profile, profile[1:]):
        if cur <= floor:
            continue
        if cur * factor > prev:
            ok = False
    return CompactnessCertificate(tuple(cuts), tuple(profile), factor, floor, ok)


def compact_certificate(op, cuts=(8, 16, 32), axis: str = "both", window=None, margin=None,
                        factor: float = 2.0) -> CompactnessCertificate:
    """Tail-decay evidence that ``op`` is compact, evaluated on its interior."""
    if isinstance(op, TruncatedOperator):
        op = op.interior(margin)
    elif margin is not None:
        op = restrict_interior_matrix(op, window, margin)
    profile = tail_norm_profile(op, cuts, axis=axis, window=window)
    return decay_certificate(profile, cuts, factor)


def interior_mask(window, margin: int) -> np.ndarray:
    return np.array([window.distance(window.label(k)) >= margin for k in range(window.dim)])


def restrict_interior_matrix(mat, window, margin: int):
    mask = interior_mask(window, margin).astype(float)
    d = sp.diags(mask)
    return d @ sp.csr_matrix(mat) @ d
