"""Rescaling sweep: generate ensembles at several target sizes and report
how average degree, max degree, and edge counts move with n.

Usage:
    python3 scripts/scale_series.py profile.json --sizes 5000 10000 19036 30000
"""

import argparse

import numpy as np

from annograph import (StubColor, SummaryProfile, construct_2k, fit_ccdf,
                       marginal_ad, rescale_add)
from annograph.cli import member_rng

COLORS = (StubColor.CUSTOMER, StubColor.PROVIDER, StubColor.PEER)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("profile", help="profile JSON from `annograph extract`")
    ap.add_argument("--sizes", type=int, nargs="+",
                    default=[5000, 10000, 19036, 30000])
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    profile = SummaryProfile.load(args.profile)
    rows = {}
    for n in args.sizes:
        fits = [fit_ccdf(marginal_ad(profile, c), n) for c in COLORS]
        avg, top, edges = [], [], []
        for t in range(args.trials):
            rng = member_rng(args.seed, t)
            add = rescale_add(profile, fits, n, rng)
            graph, _ = construct_2k(add, profile, rng)
            avg.append(2.0 * graph.n_edges / graph.n)
            top.append(graph.max_degree())
            edges.append(graph.n_edges)
        rows[n] = (np.mean(avg), np.mean(top), np.mean(edges))
        print(f"n={n:>6}  avg_degree={rows[n][0]:.4f}  "
              f"mean_max_degree={rows[n][1]:.1f}  mean_edges={rows[n][2]:.0f}")

    ratios = np.array([rows[n][2] / n for n in args.sizes])
    print(f"edges-per-node spread: {np.ptp(ratios):.4f} "
          f"(mean {ratios.mean():.4f})")


if __name__ == "__main__":
    main()
