"""Rank-based dependence transfer between degree samples.

The dependence structure of a multivariate sample is captured by its
empirical copula: each coordinate is replaced by its rank divided by the
sample count, ties broken uniformly at random so tied blocks receive a
random permutation of their rank range.  Rescaling re-samples rows with
replacement to the target count, rank-transforms them, and then maps every
rank fraction u through the generalized inverse of a target marginal: the
ceil(u * N)-th smallest element of the target list.  Because the rank
fractions of each coordinate form exactly the set {1/N, ..., N/N}, the
merged output's per-coordinate multisets equal the target marginals
exactly; only the coupling between coordinates comes from the source.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .fit import FittedCCDF, sample_degrees
from .profile import SummaryProfile


def resample_rows(samples: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` rows with replacement."""
    samples = np.asarray(samples)
    if samples.ndim != 2 or samples.shape[0] == 0:
        raise ValueError("samples must be a non-empty 2-D array")
    if count < 0:
        raise ValueError("count must be non-negative")
    idx = rng.integers(0, samples.shape[0], size=count)
    return samples[idx]


def rank_transform(rows: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Per-column rank fractions in (0, 1], ties broken uniformly at random.

    Column j of the result is a permutation of {1/N, ..., N/N} where N is
    the row count, so marginal uniformity is exact by construction.
    """
    rows = np.asarray(rows)
    if rows.ndim != 2:
        raise ValueError("rows must be 2-D")
    n, p = rows.shape
    u = np.empty((n, p), dtype=np.float64)
    for j in range(p):
        order = np.lexsort((rng.random(n), rows[:, j]))
        ranks = np.empty(n, dtype=np.int64)
        ranks[order] = np.arange(1, n + 1)
        u[:, j] = ranks / n
    return u


def merge_with_marginals(u: np.ndarray, marginals: Sequence[np.ndarray]) -> np.ndarray:
    """Map rank fractions through target marginals' generalized inverses.

    Coordinate m of each row becomes the ceil(u * L)-th smallest value of
    marginals[m] (L its length); u = 0 maps to the minimum.  When u's
    columns are rank permutations and L equals the row count, the output
    columns are exact permutations of the marginal lists.
    """
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 2 or u.shape[1] != len(marginals):
        raise ValueError("one marginal per copula coordinate required")
    cols = []
    for m, marginal in enumerate(marginals):
        marginal = np.sort(np.asarray(marginal))
        size = marginal.size
        if size == 0:
            raise ValueError(f"marginal {m} is empty")
        idx = np.ceil(u[:, m] * size - 1e-9).astype(np.int64)
        idx = np.clip(idx, 1, size) - 1
        cols.append(marginal[idx])
    return np.column_stack(cols)


def rescale_add(profile: SummaryProfile, fits: Sequence[FittedCCDF],
                count: int, rng: np.random.Generator) -> np.ndarray:
    """Rescale the annotated degree distribution to ``count`` nodes.

    Marginals are drawn from the per-color fits; the coupling between
    colors is the source ADD's empirical copula.  Randomness is split into
    fixed-order substreams, one per marginal plus one for row resampling
    and one for rank tie-breaks, so the marginal streams are independent of
    the target count and of each other.
    """
    if len(fits) != 3:
        raise ValueError("three per-color fits required")
    g_cust, g_prov, g_peer, g_rows, g_ranks = rng.spawn(5)
    sampled = [
        sample_degrees(fits[0], count, g_cust),
        sample_degrees(fits[1], count, g_prov),
        sample_degrees(fits[2], count, g_peer),
    ]
    rows = resample_rows(profile.add, count, g_rows)
    u = rank_transform(rows, g_ranks)
    return merge_with_marginals(u, sampled)


def copula_ks2d(a: np.ndarray, b: np.ndarray, grid: int = 512) -> float:
    """Sup distance between two bivariate copula samples' CDFs, evaluated
    on a regular lattice over the unit square (adequate for the smooth,
    densely sampled copulas compared here)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != 2 or b.shape[1] != 2:
        raise ValueError("copula samples must be (n, 2) arrays")
    edges = np.linspace(0.0, 1.0, grid + 1)
    ha, _, _ = np.histogram2d(a[:, 0], a[:, 1], bins=[edges, edges])
    hb, _, _ = np.histogram2d(b[:, 0], b[:, 1], bins=[edges, edges])
    ca = ha.cumsum(axis=0).cumsum(axis=1) / a.shape[0]
    cb = hb.cumsum(axis=0).cumsum(axis=1) / b.shape[0]
    return float(np.abs(ca - cb).max())
