"""Fredholm indices of compressions ``P U P`` computed by exact rank.

A square truncation of a Fredholm operator always has index 0, so the index is
read off differently: the kernel of ``T = P U P`` is computed on basis vectors
at distance >= ``guard`` from the truncation boundary, mapping into the whole
window (whose rows then see every image exactly).  Finitely supported kernel
vectors near the origin are found this way, while the boundary produces no
spurious ones.  The same is done for ``T*``.  Every index is computed on a
window and on its double and the two must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import AlgebraElement, DEFAULT_Q, generators
from .dirac import DiracSpec, SignProjectionClass, generic_dirac
from .exact_linalg import exact_rank
from .representation import represent
from .truncation import SumWindow, TruncatedOperator, TruncationWindow, sign_plus

MULTIPLICITY_CAP = 8


class IndexNotStable(RuntimeError):
    """Index values disagree across window sizes."""


# ---------------------------------------------------------------------------
# core computation
# ---------------------------------------------------------------------------


def _rank_block(op: TruncatedOperator, rows: set, cols: set) -> tuple[int, str]:
    sub = {k: v for k, v in op.entries.items() if k[0] in rows and k[1] in cols}
    res = exact_rank(sub, (len(rows), len(cols)))
    return res.rank, res.method


def restricted_index(op: TruncatedOperator, domain: Callable, codomain: Callable, guard: int):
    """(dim ker, dim coker, method) of the compression codomain * op * domain.

    ``domain`` / ``codomain`` are predicates on window labels.
    """
    w = op.window
    labels = list(w.labels())
    dom = {w.index(l) for l in labels if domain(l)}
    cod = {w.index(l) for l in labels if codomain(l)}
    inner = {w.index(l) for l in labels if w.distance(l) >= guard}
    d_in, c_in = dom & inner, cod & inner
    r1, m1 = _rank_block(op, cod, d_in)
    r2, m2 = _rank_block(op, c_in, dom)  # rank of the adjoint block
    method = "exact" if m1 == m2 == "exact" else "float"
    return len(d_in) - r1, len(c_in) - r2, method


@dataclass(frozen=True)
class IndexResult:
    label: str
    windows: tuple
    kernel_dims: tuple
    cokernel_dims: tuple
    index: int
    status: str
    methods: tuple = ()

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "windows": [list(w) for w in self.windows],
            "kernel_dims": list(self.kernel_dims),
            "cokernel_dims": list(self.cokernel_dims),
            "index": self.index,
            "status": self.status,
            "rank_methods": list(self.methods),
        }


def _window_tuple(w) -> tuple:
    base = w.base if isinstance(w, SumWindow) else w
    if isinstance(base, TruncationWindow):
        return (base.m_row, base.m_col)
    return (base.m,)


def stabilized_index(label: str, build: Callable, base_window, domain: Callable, codomain: Callable,
                     guard: int = 1) -> IndexResult:
    """Run ``restricted_index`` on ``base_window`` and its double; they must agree."""
    kers, cokers, methods, wins = [], [], [], []
    for w in (base_window, base_window.doubled()):
        op = build(w)
        k, c, m = restricted_index(op, domain, codomain, guard)
        kers.append(k)
        cokers.append(c)
        methods.append(m)
        wins.append(_window_tuple(w))
    idx = [k - c for k, c in zip(kers, cokers)]
    if idx[0] != idx[1]:
        raise IndexNotStable(f"{label}: index {idx[0]} on {wins[0]} but {idx[1]} on {wins[1]}")
    return IndexResult(label, tuple(wins), tuple(kers), tuple(cokers), idx[0], "stable", tuple(methods))


# ---------------------------------------------------------------------------
# block operators on direct sums
# ---------------------------------------------------------------------------


def block_operator(window: SumWindow, blocks: dict) -> TruncatedOperator:
    """Assemble ``{(row_copy, col_copy): op on window.base}`` into one operator."""
    base = window.base
    items = []
    margin = 0
    for (rc, cc), op in blocks.items():
        margin = max(margin, op.margin)
        for (r, c), v in op.entries.items():
            items.append(((rc,) + tuple(base.label(r)), (cc,) + tuple(base.label(c)), v))
    return TruncatedOperator.from_labels(window, items, margin=margin)


# ---------------------------------------------------------------------------
# problems
# ---------------------------------------------------------------------------


def build_u(window: TruncationWindow, q=DEFAULT_Q) -> TruncatedOperator:
    """u = p pi(b) + (I - p) with p the projection onto the i = 0 row."""
    b = generators(q)["b"]
    p = TruncatedOperator.diagonal(window, lambda lab: Fraction(1 if lab[0] == 0 else 0))
    ident = TruncatedOperator.identity(window)
    return (p @ represent(b, window) + (ident - p)).with_margin(1)


def generic_predicate(spec: DiracSpec | None = None) -> Callable[[int, int], bool]:
    """(I + sign D)/2 with sign(0) = +1."""
    spec = spec or generic_dirac()
    return lambda i, j: spec(i, j) >= 0


@dataclass(frozen=True)
class CompressionProblem:
    """Compression of a unitary on ``SumWindow(base, copies)`` by a diagonal projection.

    ``blocks(base) -> {(r, c): op on base}`` builds the unitary;
    ``predicate(copy, i, j)`` decides membership in the projection.
    """

    label: str
    blocks: Callable
    predicate: Callable
    base: TruncationWindow
    copies: int = 1
    guard: int = 1
    perturbation: tuple = field(default=())  # labels whose column is multiplied by -1

    def window(self, base=None) -> SumWindow:
        return SumWindow(base or self.base, self.copies)

    def unitary(self, base=None) -> TruncatedOperator:
        w = self.window(base)
        op = block_operator(w, self.blocks(w.base))
        if self.perturbation:
            flip = TruncatedOperator.diagonal(
                w, lambda lab: Fraction(-1 if tuple(lab) in self.perturbation else 1))
            op = (op @ flip).with_margin(op.margin)
        return op

    def projection(self, base=None) -> TruncatedOperator:
        return TruncatedOperator.diagonal(self.window(base), lambda lab: Fraction(1 if self.predicate(*lab) else 0))

    def interior_isometric(self) -> bool:
        u = self.unitary()
        ident = TruncatedOperator.identity(u.window)
        m = 2 * u.margin
        return (u.adjoint() @ u).equal_on_interior(ident, m) and (u @ u.adjoint()).equal_on_interior(ident, m)

    def perturbed(self, labels: Sequence[tuple]) -> "CompressionProblem":
        return CompressionProblem(self.label + "+diag", self.blocks, self.predicate, self.base, self.copies,
                                  self.guard, tuple(tuple(l) for l in labels))


def direct_sum(p1: CompressionProblem, p2: CompressionProblem) -> CompressionProblem:
    if p1.base != p2.base:
        raise ValueError("direct sum needs a common base window")
    n1 = p1.copies

    def blocks(base):
        out = dict(p1.blocks(base))
        for (r, c), op in p2.blocks(base).items():
            out[(r + n1, c + n1)] = op
        return out

    def pred(c, i, j):
        return p1.predicate(c, i, j) if c < n1 else p2.predicate(c - n1, i, j)

    return CompressionProblem(f"{p1.label}(+){p2.label}", blocks, pred, p1.base,
                              p1.copies + p2.copies, max(p1.guard, p2.guard))


def index(problem: CompressionProblem) -> IndexResult:
    pred = problem.predicate

    def member(lab):
        return pred(*lab)

    return stabilized_index(problem.label, problem.unitary, problem.base, member, member, problem.guard)


def u_problem(predicate: Callable[[int, int], bool], window: TruncationWindow, label: str = "u",
              q=DEFAULT_Q) -> CompressionProblem:
    return CompressionProblem(label, lambda base: {(0, 0): build_u(base, q)},
                              lambda c, i, j: predicate(i, j), window)


def identity_problem(predicate: Callable[[int, int], bool], window: TruncationWindow) -> CompressionProblem:
    return CompressionProblem("identity", lambda base: {(0, 0): TruncatedOperator.identity(base)},
                              lambda c, i, j: predicate(i, j), window, guard=0)


def class_problem(cls: SignProjectionClass, window: TruncationWindow, q=DEFAULT_Q) -> CompressionProblem:
    return u_problem(cls.predicate(), window, f"u/{cls.kind}(M={cls.cutoff},E={sorted(cls.exceptional_set)})", q)


def index_table(window: TruncationWindow, cutoffs=(1, 2, 3), exceptional_sets=None, q=DEFAULT_Q) -> list[IndexResult]:
    """Indices of u against P1..P4 for several cutoffs and exceptional sets."""
    out = []
    for M in cutoffs:
        sets = exceptional_sets or [frozenset(), frozenset({0}), frozenset(range(-M + 1, M))]
        for E in sets:
            E = frozenset(x for x in E if -M < x < M)
            for kind in ("P1", "P2", "P3", "P4"):
                out.append(index(class_problem(SignProjectionClass(kind, E, M), window, q)))
    return out


EXPECTED_TABLE = {"P1": -1, "P2": 1, "P3": 0, "P4": 0}


def canonical_unitary_problem(window: TruncationWindow, projection: str = "generic", q=DEFAULT_Q) -> CompressionProblem:
    """[[a, -q b*], [b, a*]] on H (+) H against P (x) I_2."""
    q = Fraction(q)
    g = generators(q)

    def blocks(base):
        return {
            (0, 0): represent(g["a"], base),
            (0, 1): represent(g["b*"], base).scale(-q),
            (1, 0): represent(g["b"], base),
            (1, 1): represent(g["a*"], base),
        }

    if projection == "generic":
        gp = generic_predicate()
        pred = lambda c, i, j: gp(i, j)
    elif projection == "identity":
        pred = lambda c, i, j: True
    elif projection == "zero":
        pred = lambda c, i, j: False
    else:
        raise ValueError(f"unknown projection {projection!r}")
    return CompressionProblem(f"canonical/{projection}", blocks, pred, window, copies=2)


def canonical_unitary_pairing(window: TruncationWindow, projection: str = "generic", q=DEFAULT_Q) -> IndexResult:
    return index(canonical_unitary_problem(window, projection, q))


def multiplicity_problem(m: int, window: TruncationWindow, q=DEFAULT_Q) -> CompressionProblem:
    if m == 0:
        raise ValueError("m must be nonzero")
    if abs(m) > MULTIPLICITY_CAP:
        raise ValueError(f"|m| must be <= {MULTIPLICITY_CAP}")
    s = 1 if m > 0 else -1
    u = lambda base: build_u(base, q)

    def blocks(base):
        op = u(base)
        return {(c, c): op for c in range(abs(m))}

    # F = sign(m) S, projection (I + F)/2
    pred = lambda c, i, j: s * sign_plus(j) > 0
    return CompressionProblem(f"multiplicity({m})", blocks, pred, window, copies=abs(m))


def multiplicity_pairing(m: int, window: TruncationWindow, q=DEFAULT_Q) -> IndexResult:
    return index(multiplicity_problem(m, window, q))


def generic_u_pairing(window: TruncationWindow, q=DEFAULT_Q) -> IndexResult:
    return index(u_problem(generic_predicate(), window, "u/generic", q))
