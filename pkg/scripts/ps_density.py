"""Exact versus sampled density of C'(λ) relators among cyclically reduced words.

Exact counts come from enumeration while affordable; beyond that only the
seeded Monte Carlo estimate is reported.
"""
import argparse
from fractions import Fraction

from markedgroups import smallcancel, words
from markedgroups._budget import BudgetExceeded
from markedgroups.tables import Table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-m", type=int, default=2)
    ap.add_argument("--lambda", dest="lam", type=Fraction, default=Fraction(1, 6))
    ap.add_argument("--lengths", default="6,12,18,24,30,36,48")
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=2005)
    ap.add_argument("--exact-budget", type=int, default=10**6)
    args = ap.parse_args()

    t = Table("ps density", ["n", "cyc", "exact", "sampled", "stderr", "density"])
    for n in map(int, args.lengths.split(",")):
        try:
            exact = smallcancel.enumerate_ps(args.m, 1, args.lam, n, budget=args.exact_budget).count
        except BudgetExceeded:
            exact = None
        s = smallcancel.sample_ps(args.m, 1, args.lam, n, samples=args.samples, seed=args.seed)
        t.add(n, words.count_cyc(args.m, n), exact, s.estimate, s.stderr, s.density)
    print(t.to_tsv(), end="")


if __name__ == "__main__":
    main()
