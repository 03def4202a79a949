"""Exact rank of sparse matrices with Fraction or single-radical Surd entries.

Matrices are given as a dict ``(row, col) -> scalar``.  Surd entries are first
rationalized by diagonal row/column scaling (each row and column is multiplied
by a product of square roots chosen so every entry becomes rational); rank is
invariant under such scaling.  Rank over Q is then computed by sparse Gaussian
elimination.  A floating SVD rank is always computed alongside and a mismatch
raises, so a wrong exact path can never go unnoticed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .scalars import Surd, to_float

FLOAT_RANK_TOL = 1e-8


class RankMismatch(ArithmeticError):
    """Exact and floating rank computations disagree."""


def _key(x) -> frozenset:
    if isinstance(x, Fraction):
        return frozenset()
    if isinstance(x, Surd) and x.is_single_term():
        (k,) = x.terms
        return k
    raise ValueError("entry is not a single radical term")


def rationalize(entries: Mapping) -> dict | None:
    """Scale rows and columns by square roots so all entries become rational.

    Returns the rescaled entry dict, or ``None`` when no consistent scaling
    exists (multi-term entries, nested radicands or inconsistent cycles).
    """
    if all(isinstance(v, Fraction) for v in entries.values()):
        return dict(entries)
    try:
        keys = {rc: _key(v) for rc, v in entries.items()}
    except ValueError:
        return None
    adj: dict = {}
    for (r, c), k in keys.items():
        adj.setdefault(("r", r), []).append((("c", c), k))
        adj.setdefault(("c", c), []).append((("r", r), k))
    label: dict = {}
    for start in adj:
        if start in label:
            continue
        label[start] = frozenset()
        todo = deque([start])
        while todo:
            node = todo.popleft()
            for nb, k in adj[node]:
                want = label[node] ^ k
                if nb in label:
                    if label[nb] != want:
                        return None
                else:
                    label[nb] = want
                    todo.append(nb)
    out = {}
    for (r, c), v in entries.items():
        lr, lc = label[("r", r)], label[("c", c)]
        val = v
        if lr:
            val = val * Surd({lr: Fraction(1)})
        if lc:
            val = val * Surd({lc: Fraction(1)})
        if not isinstance(val, Fraction):
            return None
        out[(r, c)] = val
    return out


def rank_rational(entries: Mapping) -> int:
    """Rank over Q by sparse row echelon reduction (pivot on leading column)."""
    rows: dict = {}
    for (r, c), v in entries.items():
        if v:
            rows.setdefault(r, {})[c] = v
    pivots: dict[int, dict] = {}
    for r in sorted(rows):
        row = rows[r]
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                inv = 1 / row[c]
                pivots[c] = {k: v * inv for k, v in row.items()}
                break
            f = row[c]
            for k, v in piv.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return len(pivots)


def float_rank(entries: Mapping, shape: tuple[int, int], tol: float = FLOAT_RANK_TOL) -> int:
    if not entries:
        return 0
    rows = sorted({r for r, _ in entries})
    cols = sorted({c for _, c in entries})
    ri = {r: n for n, r in enumerate(rows)}
    ci = {c: n for n, c in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)))
    for (r, c), v in entries.items():
        mat[ri[r], ci[c]] = to_float(v)
    s = np.linalg.svd(mat, compute_uv=False)
    return int((s > tol).sum())


@dataclass(frozen=True)
class RankResult:
    rank: int
    method: str  # "exact" or "float"
    float_rank: int


def exact_rank(entries: Mapping, shape: tuple[int, int], tol: float = FLOAT_RANK_TOL) -> RankResult:
    """Rank with exact arithmetic when possible, always cross-checked in floating point."""
    entries = {k: v for k, v in entries.items() if v != 0}
    fr = float_rank(entries, shape, tol)
    rat = rationalize(entries)
    if rat is None:
        return RankResult(fr, "float", fr)
    rk = rank_rational(rat)
    if rk != fr:
        raise RankMismatch(f"exact rank {rk} != floating rank {fr}")
    return RankResult(rk, "exact", fr)


def solve_rational(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Unique solution of a square nonsingular rational system (Gauss-Jordan)."""
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[-1] for row in aug]
