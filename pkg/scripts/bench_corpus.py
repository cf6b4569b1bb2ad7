"""Ratio-to-optimum benchmark of both annealers and the baselines on seeded random corpora.

    python3 scripts/bench_corpus.py --n 8 --count 40 --out bench.csv
"""
import argparse
import csv
import math
import sys

import numpy as np

from annealmax.cli import BENCH_HEADER, fmt, run_bench


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    algs = ["anneal1", "baseline-ls-p", "baseline-random", "anneal2"]
    table = []
    for kind in ("random-digraph", "random-coverage"):
        rows, _ = run_bench(kind, args.n, args.count, algs, args.seed, workers=args.workers)
        table += rows
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    for r in table:
        w.writerow([r[0], r[1], *map(fmt, r[2:])])
    if fh is not sys.stdout:
        fh.close()

    print(f"{'alg':<16}{'min':>8}{'mean':>8}{'runs':>6}", file=sys.stderr)
    for a in algs:
        rs = [r[4] for r in table if r[1] == a and math.isfinite(r[4])]
        print(f"{a:<16}{min(rs):8.4f}{np.mean(rs):8.4f}{len(rs):6d}", file=sys.stderr)


if __name__ == "__main__":
    main()
