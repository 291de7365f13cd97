"""Covering counts and separating words for the oracle-parameterized family.

For each n the 3^n bound is printed next to the number of distinct
fingerprints the cover's centers actually have at length 2^n. Then, for
each pair of constant oracles, the shortest separating word is searched.
"""
import argparse
import itertools

from markedgroups import grigorchuk
from markedgroups.grigorchuk import OracleSeq


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=2)
    ap.add_argument("--sep-length", type=int, default=8)
    args = ap.parse_args()
    print("n\tbound\tobserved\tcovered")
    for n in range(args.n_max + 1):
        r = grigorchuk.covering_estimate_B(n)
        print(f"{n}\t{r['bound']}\t{r['observed']}\t{r['covered']}")
    print()
    print("omega1\tomega2\tseparating_word")
    for x, y in itertools.combinations("012", 2):
        w = grigorchuk.separating_word(OracleSeq(x, x), OracleSeq(y, y), args.sep_length)
        print(f"{x}*\t{y}*\t{w if w is not None else 'NA'}")


if __name__ == "__main__":
    main()
