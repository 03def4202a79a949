"""Tail-norm profiles behind the "modulo compacts" identities, for several q.

For each q, runs the higher-degree identities on quantum SU(2) and the sphere
witnesses, and prints a table of name, profile and verdict.
"""

import argparse
import sys
from fractions import Fraction

from qspectral.connes import higher_form_vanishing_check
from qspectral.podles import SphereParams, sphere_calculus


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=Fraction, nargs="+", default=[Fraction(1, 2), Fraction(2, 3)])
    ap.add_argument("--c", type=Fraction, default=Fraction(2))
    ap.add_argument("--degree", type=int, default=3)
    args = ap.parse_args(argv)
    failures = 0
    for q in args.q:
        print(f"# q = {q}")
        for chk in higher_form_vanishing_check(args.degree, q):
            prof = chk.certificate.profile if chk.certificate else ()
            print(f"{'ok  ' if chk.passed else 'FAIL'} {chk.name:55s} " + " ".join(f"{x:.2e}" for x in prof))
            failures += not chk.passed
        rep = sphere_calculus(args.degree, SphereParams(q, args.c))
        for chk in rep.checks:
            prof = chk.get("certificate", {}).get("profile") or chk.get("blocks_agree_mod_compacts", {}).get("profile", [])
            print(f"{'ok  ' if chk['passed'] else 'FAIL'} sphere: {chk['name'][:47]:47s} " + " ".join(f"{x:.2e}" for x in prof))
            failures += not chk["passed"]
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
