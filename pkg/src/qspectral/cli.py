"""Command line driver.

Exit codes: 0 all checks pass, 1 some certificate failed, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from pathlib import Path

from . import podles
from .config import DEFAULT_CONFIG_TEXT, ConfigError, RunConfig, load_config, parse_config
from .dirac import NotCompactResolvent, dirac_from_csv, generic_dirac, multiplicities, summability_profile
from .fredholm import IndexNotStable, canonical_unitary_pairing, generic_u_pairing, multiplicity_pairing
from .suites import dumps_report, run_suite
from .truncation import TruncationWindow


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _emit(obj: dict, as_json: bool, lines: list[str]):
    if as_json:
        sys.stdout.write(dumps_report(obj))
    else:
        print("\n".join(lines))


def _summary_lines(report: dict) -> list[str]:
    out = [f"[{'PASS' if report['passed'] else 'FAIL'}] suite {report['suite']}"]
    for c in report["checks"]:
        out.append(f"  {'ok  ' if c['passed'] else 'FAIL'} {c['name']}")
    return out


def _run_suites(cfg: RunConfig, names, args) -> int:
    out_dir = Path(args.out) if getattr(args, "out", None) else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    reports = []
    for name in names:
        rep = run_suite(name, cfg)
        reports.append(rep)
        if out_dir:
            (out_dir / f"{name}.json").write_text(dumps_report(rep))
    if args.json:
        sys.stdout.write(dumps_report({"reports": reports, "passed": all(r["passed"] for r in reports)}))
    else:
        for rep in reports:
            print("\n".join(_summary_lines(rep)))
        failed = [f"{r['suite']}: {c['name']}" for r in reports for c in r["checks"] if not c["passed"]]
        for f in failed:
            print(f"failed: {f}")
    return 0 if all(r["passed"] for r in reports) else 1


def cmd_verify(args) -> int:
    cfg = load_config(args.config) if args.config else parse_config(DEFAULT_CONFIG_TEXT)
    return _run_suites(cfg, cfg.suites, args)


def _cfg_from_flags(args) -> RunConfig:
    kw = {}
    if getattr(args, "q", None) is not None:
        kw["q"] = args.q
    if getattr(args, "c", None) is not None:
        kw["c"] = args.c
    return RunConfig(**kw)


def cmd_suite(name: str):
    def run(args) -> int:
        cfg = _cfg_from_flags(args)
        return _run_suites(cfg, [name], args)
    return run


def cmd_index(args) -> int:
    cfg = _cfg_from_flags(args)
    which = args.which
    kind = which[0]
    w = args.window
    if kind == "u":
        if len(which) != 1:
            raise UsageError("--which u takes no argument")
        res = generic_u_pairing(TruncationWindow(w, w), cfg.q)
    elif kind == "canonical":
        if len(which) != 1:
            raise UsageError("--which canonical takes no argument")
        res = canonical_unitary_pairing(TruncationWindow(w, w), "generic", cfg.q)
    elif kind == "sphere":
        if len(which) != 1:
            raise UsageError("--which sphere takes no argument")
        res = podles.sphere_index_pairing(w)
    elif kind == "multiplicity":
        if len(which) != 2:
            raise UsageError("--which multiplicity needs an integer m")
        try:
            m = int(which[1])
        except ValueError:
            raise UsageError(f"multiplicity must be an integer, got {which[1]!r}") from None
        try:
            res = multiplicity_pairing(m, TruncationWindow(w, w), cfg.q)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        raise UsageError(f"unknown --which {kind!r} (choose u, canonical, sphere, multiplicity m)")
    d = res.as_dict()
    lines = [str(res.index),
             f"windows {d['windows'][0]} and {d['windows'][1]}: kernel {d['kernel_dims']}, "
             f"cokernel {d['cokernel_dims']}, {d['status']} ({'/'.join(d['rank_methods'])} rank)"]
    _emit(d, args.json, lines)
    return 0


def cmd_spectrum(args) -> int:
    lambdas = [x for x in (args.lambda_ or "").replace(",", " ").split() if x]
    if not lambdas:
        raise UsageError("--lambda needs at least one cutoff")
    try:
        lam = sorted(Fraction(x) for x in lambdas)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --lambda list {args.lambda_!r}") from None
    if lam[0] <= 0:
        raise UsageError("cutoffs must be positive")
    spec = generic_dirac() if args.dirac == "generic" else dirac_from_csv(args.dirac)
    top = int(lam[-1]) + 1
    mult = multiplicities(spec, 2 * top)
    check = multiplicities(spec, 4 * top)
    try:
        rep = summability_profile(spec, args.p, lam)
    except NotCompactResolvent as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rows = sorted(v for v in mult if abs(v) <= lam[-1])
    if any(mult[v] != check[v] for v in rows):
        print("error: multiplicities below the cutoff are not stable", file=sys.stderr)
        return 1
    if args.json:
        sys.stdout.write(dumps_report({"multiplicities": {str(v): mult[v] for v in rows}, "summability": rep.as_dict()}))
        return 0
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["eigenvalue", "multiplicity"])
    for v in rows:
        wr.writerow([str(v), mult[v]])
    wr.writerow([])
    wr.writerow(["lambda", "count", f"partial_sum_p={rep.p}"])
    d = rep.as_dict()
    for L, cnt, s in zip(d["lambdas"], d["counts"], d["partial_sums"]):
        wr.writerow([L, cnt, repr(s)])
    wr.writerow(["trend", d["trend"]])
    sys.stdout.write(buf.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qspectral", description="Spectral triple computations on quantum SU(2) "
                                                              "and the Podles sphere.")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, params=True):
        sp.add_argument("--json", action="store_true", help="machine readable output")
        if params:
            sp.add_argument("--q", type=_fraction, default=None, help="deformation parameter in (0,1)")

    v = sub.add_parser("verify", help="run the configured verification suites")
    v.add_argument("config", nargs="?", help="config file (defaults built in)")
    v.add_argument("--out", help="directory for per-suite JSON reports")
    common(v, params=False)
    v.set_defaults(func=cmd_verify)

    ix = sub.add_parser("index", help="index pairings")
    ix.add_argument("--which", nargs="+", default=["u"], metavar="KIND",
                    help="u | canonical | sphere | multiplicity M")
    ix.add_argument("--window", type=int, default=12)
    ix.add_argument("--c", type=_fraction, default=None)
    common(ix)
    ix.set_defaults(func=cmd_index)

    s = sub.add_parser("spectrum", help="eigenvalue multiplicities and summability partial sums (CSV)")
    s.add_argument("--dirac", default="generic", help="'generic' or a CSV file of i,j,value rows")
    s.add_argument("--p", type=_fraction, default=Fraction(3))
    s.add_argument("--lambda", dest="lambda_", default=None, help="comma separated cutoffs")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_spectrum)

    for name in ("algebra", "calculus", "l2", "sphere"):
        sp = sub.add_parser(name, help=f"run the {name} suite")
        sp.add_argument("--out", help="directory for the JSON report")
        common(sp)
        if name == "sphere":
            sp.add_argument("--c", type=_fraction, default=None)
        sp.set_defaults(func=cmd_suite(name))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IndexNotStable as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
