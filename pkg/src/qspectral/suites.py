"""Verification suites behind ``qspectral verify``.

Each suite returns a JSON-ready dict ``{"suite", "config", "checks", "passed"}``
where every check carries a ``name`` and a boolean ``passed``.  Nothing in a
report depends on wall-clock time or hash ordering, so identical configs give
identical bytes.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from itertools import product

from . import connes, l2, podles
from .algebra import (AlgebraElement, LaurentPoly, defining_relations, generators, haar_state, haar_state_series,
                      monomial_grid)
from .config import SUITES, RunConfig
from .dirac import (DiracSpec, boundedness_gate, classify_sign_projection, generic_dirac, growth_audit,
                    multiplicities, summability_profile)
from .fredholm import (EXPECTED_TABLE, canonical_unitary_pairing, class_problem, generic_u_pairing, index,
                       multiplicity_pairing)
from .dirac import SignProjectionClass
from .forms import UniversalForm
from .representation import equivariance_check, faithfulness_probe, represent
from .truncation import TruncationWindow

SEED = 20240611


def _check(name: str, passed: bool, **detail) -> dict:
    out = {"name": name, "passed": bool(passed)}
    out.update(detail)
    return out


def _report(name: str, cfg: RunConfig, checks: list) -> dict:
    return {"suite": name, "config": cfg.as_dict(), "checks": checks, "passed": all(c["passed"] for c in checks)}


def random_triples(grid: list, count: int, seed: int = SEED) -> list:
    rng = random.Random(seed)
    return [tuple(rng.choice(grid) for _ in range(3)) for _ in range(count)]


# ---------------------------------------------------------------------------


def algebra_suite(cfg: RunConfig, bound: int = 2, random_count: int = 200) -> dict:
    q = cfg.q
    checks = []
    for label, rel in defining_relations(q).items():
        checks.append(_check(f"relation {label} = 0", rel.is_zero(), residual=rel.text()))
    grid = monomial_grid(bound, q)
    bad = [(x, y, z) for x, y, z in product(grid, repeat=3) if (x * y) * z != x * (y * z)]
    checks.append(_check(f"associativity on grid {bound} (exhaustive)", not bad, triples=len(grid) ** 3,
                         failures=len(bad)))
    # random triples of sums from the grid
    sums = [x + y.scale(Fraction(k + 2, 3)) for k, (x, y) in enumerate(zip(grid, reversed(grid)))]
    bad = [t for t in random_triples(sums, random_count) if (t[0] * t[1]) * t[2] != t[0] * (t[1] * t[2])]
    checks.append(_check("associativity on random triples", not bad, triples=random_count, failures=len(bad)))
    bad = [(x, y) for x, y in product(grid, repeat=2) if (x * y).adjoint() != y.adjoint() * x.adjoint()]
    checks.append(_check("(xy)* = y* x* on grid pairs", not bad, pairs=len(grid) ** 2, failures=len(bad)))
    bad = [x for x in grid if x.adjoint().adjoint() != x]
    checks.append(_check("x** = x", not bad, failures=len(bad)))
    err = max(abs(float(haar_state(x)) - haar_state_series(x)) for x in grid)
    checks.append(_check("Haar state closed form matches the diagonal series", err < 1e-12,
                         max_error=float(f"{err:.3e}")))
    return _report("algebra", cfg, checks)


def representation_suite(cfg: RunConfig, bound: int = 2) -> dict:
    q = cfg.q
    grid = monomial_grid(bound, q)
    checks = []
    for w in cfg.windows:
        win = TruncationWindow(w, w)
        reps = {x: represent(x, win) for x in grid}
        bad = 0
        for x, y in product(grid, repeat=2):
            if not (reps[x] @ reps[y]).equal_on_interior(represent(x * y, win)):
                bad += 1
        checks.append(_check(f"pi(xy) = pi(x) pi(y) on ({w},{w})", bad == 0, pairs=len(grid) ** 2, failures=bad))
        bad = sum(1 for x in grid if not represent(x.adjoint(), win).equal_on_interior(reps[x].adjoint()))
        checks.append(_check(f"pi(x*) = pi(x)* on ({w},{w})", bad == 0, failures=bad))
    small = monomial_grid(1, q)
    w0 = cfg.windows[0]
    checks.append(_check("faithfulness on grid 1", faithfulness_probe(small, TruncationWindow(w0, w0))))
    bad = [x.text() for x in small for zp, wp in ((1, 0), (0, 1), (1, 1))
           if not equivariance_check(x, TruncationWindow(w0, w0), zp, wp)]
    checks.append(_check("torus equivariance at 4th roots of unity", not bad, failures=bad))
    return _report("representation", cfg, checks)


def dirac_suite(cfg: RunConfig) -> dict:
    spec = generic_dirac()
    checks = []
    gate = boundedness_gate(spec)
    checks.append(_check("generic D has bounded commutators", gate.passed, report=gate.as_dict()))
    sq = boundedness_gate(DiracSpec(lambda i, j: Fraction(i * i), "i^2"))
    checks.append(_check("d = i^2 fails the row condition", not sq.row_condition.passed, report=sq.as_dict()))
    grow = growth_audit(DiracSpec(lambda i, j: Fraction(i * j), "i*j"))
    checks.append(_check("d = i*j grows faster than linearly", not grow.passed, report=grow.as_dict()))
    mult = multiplicities(spec, 32)
    bad = [n for n in range(-16, 17) if mult[Fraction(n)] != (n + 1 if n >= 0 else -n)]
    checks.append(_check("multiplicities n+1 (n >= 0) and |n| (n < 0)", not bad, failures=bad))
    for p, want in ((1, "diverging"), (2, "diverging"), (3, "converging")):
        rep = summability_profile(spec, p, (8, 16, 32))
        checks.append(_check(f"p = {p} partial sums {want}", rep.as_dict()["trend"] == want, report=rep.as_dict()))
    cls = classify_sign_projection(spec)
    ok = cls.kind == "P2" and cls.exceptional_set == frozenset({0})
    checks.append(_check("sign projection of generic D is P2 with E = {0}", ok, found=cls.as_dict()))
    return _report("dirac", cfg, checks)


def fredholm_suite(cfg: RunConfig) -> dict:
    q = cfg.q
    w0 = cfg.windows[0]
    win = TruncationWindow(w0, w0)
    checks = []
    res = generic_u_pairing(win, q)
    checks.append(_check("index of PuP for generic D = 1", res.index == 1, result=res.as_dict()))
    for kind, want in sorted(EXPECTED_TABLE.items()):
        for E in (frozenset(), frozenset({0})):
            res = index(class_problem(SignProjectionClass(kind, E, 1), win, q))
            checks.append(_check(f"index against {kind} (E = {sorted(E)}) = {want}", res.index == want,
                                 result=res.as_dict()))
    for m in (-3, -2, -1, 1, 2, 3):
        res = multiplicity_pairing(m, win, q)
        checks.append(_check(f"multiplicity pairing m = {m}", res.index == m, result=res.as_dict()))
    for proj, want in (("generic", 1), ("identity", 0), ("zero", 0)):
        res = canonical_unitary_pairing(win, proj, q)
        checks.append(_check(f"canonical unitary against {proj} projection = {want}", res.index == want,
                             result=res.as_dict()))
    return _report("fredholm", cfg, checks)


def calculus_suite(cfg: RunConfig, bound: int = 2) -> dict:
    q = cfg.q
    grid = monomial_grid(bound, q)
    checks = []
    win = TruncationWindow(12, 12)
    bad = [x.text() for x in grid if not connes.decomposition_matches(x, win)]
    checks.append(_check("four-term commutator expansion matches on (12,12)", not bad, failures=bad))
    bad = sum(1 for x, y in product(grid, repeat=2) if not connes.leibniz_holds(x, y))
    checks.append(_check("Leibniz rule for degree-one forms", bad == 0, pairs=len(grid) ** 2, failures=bad))
    for chk in connes.higher_form_vanishing_check(3, q):
        checks.append(_check(chk.name, chk.passed, detail=chk.as_dict()))
    g = generators(q)
    one, a = g["1"], g["a"]
    for label, (x, y) in {"I S + 0": (one, one.scale(0)), "a S - a": (a, -a)}.items():
        probe = connes.tech_lemma_probe(x, y)
        checks.append(_check(f"{label} stays away from the compacts", probe.status == "separated",
                             probe=probe.as_dict()))
    return _report("calculus", cfg, checks)


def random_circle_form(rng: random.Random, degree: int, terms: int = 3, span: int = 3) -> l2.CircleForm:
    acc = {}
    for _ in range(terms):
        key = (rng.randint(-span, span),) + tuple(rng.choice([n for n in range(-span, span + 1) if n])
                                                for _ in range(degree))
        acc[key] = acc.get(key, 0) + Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return l2.CircleForm(degree, acc)


def l2_suite(cfg: RunConfig, samples: int = 100) -> dict:
    q = cfg.q
    rng = random.Random(SEED)
    checks = []
    bad = []
    for _ in range(50):
        k = rng.randint(1, 3)
        idx = (rng.randint(-3, 3),) + tuple(rng.choice([-2, -1, 1, 2, 3]) for _ in range(k))
        if not l2.kernel_membership(l2.relation_reduce(idx)):
            bad.append(idx)
    checks.append(_check("reduction relations are null", not bad, failures=[list(b) for b in bad]))
    bad = [(r, k) for r in range(-3, 4) if r for k in range(1, 4) if not l2.kernel_membership(l2.relation_exact(r, k))]
    checks.append(_check("exactness relations are null", not bad, failures=[list(b) for b in bad]))
    bad = [(r, k) for r in range(-3, 4) if r != -1 for k in range(2, 5)
           if not l2.kernel_membership(l2.relation_primitive(r, k))]
    checks.append(_check("primitive relations are null", not bad, failures=[list(b) for b in bad]))
    forms = [random_circle_form(rng, rng.randint(1, 3)) for _ in range(samples)]
    checks.append(_check("(w, w) >= 0 on random forms", all(l2.l2_inner_product(w, w) >= 0 for w in forms),
                         samples=samples))
    bad = 0
    for w in forms:
        if w.degree < 2:
            continue
        kappa, eta = l2.null_decomposition(w)
        if not (l2.kernel_membership(kappa) and l2.kernel_membership(eta) and kappa + eta.d() == w):
            bad += 1
    checks.append(_check("every form of degree >= 2 is null + d(null)", bad == 0, failures=bad))
    bad = [n for n in range(-6, 7)
           if l2.l2_differential_circle(LaurentPoly.monomial(n)) != LaurentPoly({n: n})
           or l2.circle_differential_class(LaurentPoly.monomial(n)) != LaurentPoly({n: n})]
    checks.append(_check("d(z^n) = n z^n", not bad, failures=bad))
    bad = [x.text() for x in monomial_grid(3, q) if all(m.j == 0 and m.k == 0 for m in x.terms)
           and l2.l2_differential_suq2(x, "literal") != l2.l2_differential_suq2(x, "quotiented")]
    checks.append(_check("literal and quotiented differentials agree off the b-ideal", not bad, failures=bad))
    g = generators(q)
    a, a_, b = g["a"], g["a*"], g["b"]
    ab = a * b
    checks.append(_check("differential of ab: literal -z, quotiented 0",
                         l2.l2_differential_suq2(ab, "literal") == LaurentPoly({1: -1})
                         and l2.l2_differential_suq2(ab, "quotiented").is_zero()))
    for label, w in (("d a", UniversalForm.delta(a)), ("d b", UniversalForm.delta(b)),
                     ("a d a*", UniversalForm.from_term(a, [a_]))):
        rep = l2.sigma_pushforward_check(w)
        checks.append(_check(f"pushforward of {label}", rep.passed, report=rep.as_dict()))
    return _report("l2", cfg, checks)


def sphere_suite(cfg: RunConfig) -> dict:
    params = podles.SphereParams(cfg.q, cfg.c)
    checks = []
    for label, rel in podles.sphere_relations(params).items():
        checks.append(_check(f"relation {label} = 0", rel.is_zero(), residual=rel.text()))
    m = 16
    bad = []
    g = podles.sphere_generators(params)
    A, B, B_, one = g["A"], g["B"], g["B*"], g["1"]
    for label, (x, y), rhs in (("B*B", (B_, B), A - A * A + one.scale(params.c)),
                               ("BB*", (B, B_), A.scale(params.q ** 2) - (A * A).scale(params.q ** 4) + one.scale(params.c)),
                               ("BA", (B, A), (A * B).scale(params.q ** 2))):
        for sign, px, py, pr in zip((1, -1), podles.sphere_represent(x, m), podles.sphere_represent(y, m),
                                    podles.sphere_represent(rhs, m)):
            if not (px @ py).equal_on_interior(pr, 2):
                bad.append(f"{label} sign {sign}")
    checks.append(_check("relations hold in both representations", not bad, failures=bad))
    checks.append(_check("c_pm(0) = 0 symbolically", podles.c_pm_zero_is_exact(params)))
    checks.append(_check("literal BB* display is inconsistent", not podles.literal_display_defect(params).is_zero(),
                         defect=podles.literal_display_defect(params).text()))
    bad = [f"{x}: {k}" for x in ("A", "B", "B*") for k, v in podles.evenness_checks(g[x], 12).items() if not v]
    checks.append(_check("grading: D odd, pi even, commutators odd", not bad, failures=bad))
    cert = podles.sphere_boundedness_certificates(params)
    checks.append(_check("boundedness certificates (i)-(iii)", cert.passed, report=cert.as_dict()))
    for proj, s0, want in (("p0", 0, -1), ("p0", 1, -1), ("zero", 0, 0), ("rank_two", 0, 0), ("rank_two", 1, 0)):
        res = podles.sphere_index_pairing(12, proj, s0)
        checks.append(_check(f"index pairing {proj} with sign(0) = {s0} is {want}", res.index == want,
                             result=res.as_dict()))
    rep = podles.sphere_calculus(3, params)
    for chk in rep.checks:
        checks.append(_check(chk["name"], chk["passed"], detail=chk))
    return _report("sphere", cfg, checks)


SUITE_FUNCS = {
    "algebra": algebra_suite,
    "representation": representation_suite,
    "dirac": dirac_suite,
    "fredholm": fredholm_suite,
    "calculus": calculus_suite,
    "l2": l2_suite,
    "sphere": sphere_suite,
}
assert tuple(SUITE_FUNCS) == SUITES


def run_suite(name: str, cfg: RunConfig) -> dict:
    return SUITE_FUNCS[name](cfg)


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
