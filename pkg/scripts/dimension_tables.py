"""Dimension tables for the three computable subspaces.

Writes one TSV table plus long-format plot data per experiment into --out.
"""
import argparse
import os
from fractions import Fraction

from markedgroups import lattice, onerelator, smallcancel
from markedgroups.tables import plotdata


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/dimension")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--zm-n", type=int, default=20)
    ap.add_argument("--ps-n", type=int, default=6)
    ap.add_argument("--ur-n", type=int, default=8)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    runs = {
        "zm1": lattice.zm_dimension_experiment(1, range(1, args.zm_n + 1)),
        "zm2": lattice.zm_dimension_experiment(2, range(1, 6)),
        "ps_m2_k1": smallcancel.ps_dimension_experiment(
            2, 1, Fraction(1, 6), range(1, args.ps_n + 1), threads=args.threads
        ),
        "ur_m2_q2": onerelator.ur_dimension_experiment(2, 2, range(1, args.ur_n + 1), threads=args.threads),
        "ur_m2_q3": onerelator.ur_dimension_experiment(2, 3, range(1, args.ur_n + 1), threads=args.threads),
    }
    for name, (table, est) in runs.items():
        with open(os.path.join(args.out, f"{name}.tsv"), "w") as fh:
            fh.write(table.to_tsv())
        with open(os.path.join(args.out, f"{name}_plot.tsv"), "w") as fh:
            fh.write(plotdata(table))
        window = "NA" if est is None or est.window is None else f"{est.liminf:.4f}..{est.limsup:.4f}"
        print(f"{name}: finite-window s_n range {window}")


if __name__ == "__main__":
    main()
