"""Concentration check: generate an ensemble at one size and report the
relative spread of the headline metrics across members.

Average degree and average distance should concentrate tightly; the max
degree should not (its tail index keeps it fluctuating by design).

Usage:
    python3 scripts/ensemble_variance.py profile.json --size 19036 --count 50
"""

import argparse

import numpy as np

from annograph import (StubColor, SummaryProfile, construct_2k,
                       distance_distribution, fit_ccdf, marginal_ad,
                       rescale_add)
from annograph.cli import member_rng

COLORS = (StubColor.CUSTOMER, StubColor.PROVIDER, StubColor.PEER)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("profile", help="profile JSON from `annograph extract`")
    ap.add_argument("--size", type=int, default=19036)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--sources", type=int, default=600,
                    help="BFS sources sampled per member")
    args = ap.parse_args()

    profile = SummaryProfile.load(args.profile)
    fits = [fit_ccdf(marginal_ad(profile, c), args.size) for c in COLORS]

    avg_deg, max_deg, avg_dist = [], [], []
    for t in range(args.count):
        rng = member_rng(args.seed, t)
        add = rescale_add(profile, fits, args.size, rng)
        graph, _ = construct_2k(add, profile, rng)
        src_rng = member_rng(777, t)
        src = np.sort(src_rng.choice(graph.n, size=args.sources, replace=False))
        dist = distance_distribution(graph, "shortest", sources=src)
        avg_deg.append(2.0 * graph.n_edges / graph.n)
        max_deg.append(float(graph.max_degree()))
        avg_dist.append(dist.avg_distance)

    for name, xs in (("avg_degree", avg_deg), ("avg_distance", avg_dist),
                     ("max_degree", max_deg)):
        xs = np.asarray(xs)
        cv = xs.std(ddof=1) / xs.mean() if len(xs) > 1 else 0.0
        print(f"{name:>12}: mean={xs.mean():.4f}  std/mean={cv:.5f}")


if __name__ == "__main__":
    main()
