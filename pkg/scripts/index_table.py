"""Index of the compressed unitary against every projection class, for several cutoffs and windows.

    python3 scripts/index_table.py --window 8 --cutoffs 1 2 3 --csv out.csv
"""

import argparse
import csv
import sys
from dataclasses import dataclass
from fractions import Fraction

from qspectral.fredholm import EXPECTED_TABLE, index_table
from qspectral.truncation import TruncationWindow


@dataclass
class TableConfig:
    window: int = 8
    cutoffs: tuple = (1, 2, 3)
    q: Fraction = Fraction(1, 2)
    exceptional_sets: list | None = None


def run(cfg: TableConfig):
    rows = []
    for res in index_table(TruncationWindow(cfg.window, cfg.window), cfg.cutoffs, cfg.exceptional_sets, cfg.q):
        kind = res.label.split("/")[1].split("(")[0]
        rows.append({"projection": res.label, "class": kind, "index": res.index,
                     "expected": EXPECTED_TABLE[kind], "kernel": res.kernel_dims[0], "cokernel": res.cokernel_dims[0],
                     "status": res.status})
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--window", type=int, default=8)
    ap.add_argument("--cutoffs", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--q", type=Fraction, default=Fraction(1, 2))
    ap.add_argument("--csv", help="write the table here instead of stdout")
    args = ap.parse_args(argv)
    rows = run(TableConfig(args.window, tuple(args.cutoffs), args.q))
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    wr = csv.DictWriter(out, fieldnames=list(rows[0]))
    wr.writeheader()
    wr.writerows(rows)
    bad = [r for r in rows if r["index"] != r["expected"]]
    print(f"{len(rows)} compressions, {len(bad)} disagree with the class table", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
