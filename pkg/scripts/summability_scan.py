"""Partial sums of |d|^{-p} for a range of exponents p and spectral cutoffs.

Prints a CSV with one row per (p, Lambda) and the trend verdict per p.
"""

import argparse
import csv
import sys
from fractions import Fraction

from qspectral.dirac import dirac_from_csv, generic_dirac, summability_profile


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dirac", default="generic", help="'generic' or a CSV of i,j,value overrides")
    ap.add_argument("--p", type=Fraction, nargs="+", default=[Fraction(1), Fraction(3, 2), Fraction(2),
                                                              Fraction(5, 2), Fraction(3)])
    ap.add_argument("--lambdas", type=int, nargs="+", default=[8, 16, 32, 64])
    args = ap.parse_args(argv)
    spec = generic_dirac() if args.dirac == "generic" else dirac_from_csv(args.dirac, default=generic_dirac())
    wr = csv.writer(sys.stdout, lineterminator="\n")
    wr.writerow(["p", "lambda", "count", "partial_sum", "trend"])
    for p in args.p:
        rep = summability_profile(spec, p, args.lambdas).as_dict()
        for L, n, s in zip(rep["lambdas"], rep["counts"], rep["partial_sums"]):
            wr.writerow([str(p), L, n, s, rep["trend"]])
    return 0


if __name__ == "__main__":
    sys.exit(main())
