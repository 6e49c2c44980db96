"""Smooth, extrapolatable fits of heavy-tailed degree distributions.

A degree sample set is summarized by its left-continuous complementary CDF,
ccdf(x) = fraction of samples >= x.  Zero degrees are kept out of the curve
as an explicit atom.  The positive support is fitted with a cubic smoothing
spline in (log10 degree, log10 ccdf) coordinates, the smoothing parameter
chosen by generalized cross-validation, and the result is projected onto
non-increasing curves by isotonic regression on a dense grid.  Beyond the
observed maximum the curve continues linearly in log-log coordinates with a
slope fitted over the curve's tail, weighted by the sampling information at
each depth, down to a floor probability of 1/(floor_factor * target_size);
the degree where the curve crosses that floor is the support cap, and draws
beyond it clamp there.

Sampling inverts the fitted CDF at stratified uniform levels: level j of N
is (j - U_j)/N with U_j independent uniforms, so each level is marginally
uniform while the set of levels covers every probability stratum exactly
once.  Stratification keeps sums of heavy-tailed draws stable across runs
and makes the sampled set's empirical CCDF hug the fit.  Levels are emitted
deepest-tail first from a single stream, so runs that share a seed see the
same tail variates regardless of the requested count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import LSQUnivariateSpline, make_smoothing_spline
from scipy.optimize import isotonic_regression


class FitError(ValueError):
    """Input distribution unusable for fitting."""


@dataclass
class FitOptions:
    grid_points: int = 1024        # dense grid size over the observed support
    tail_points: int = 64          # grid extension into the extrapolated tail
    tail_ccdf: float = 0.05        # slope window: where the curve is at or below this mass
    tail_fraction: float = 0.10    # slope window is never narrower than this share of knots
    floor_factor: float = 2.0      # support floor is 1/(floor_factor * target_size)
    fallback_dof: int = 20         # model size cap when GCV cannot be used
    min_slope: float = -1e-3       # slopes shallower than this are rejected


@dataclass
class FittedCCDF:
    """Monotone log-log representation of a fitted degree CCDF."""

    zero_mass: float
    log10_degree: np.ndarray   # strictly increasing, starts at 0.0 (degree 1)
    log10_ccdf: np.ndarray     # non-increasing
    tail_slope: float
    support_cap: int

    # -- evaluation ----------------------------------------------------

    def ccdf(self, x) -> np.ndarray:
        """P(degree >= x) under the fit, for x >= 0."""
        x = np.asarray(x, dtype=np.float64)
        out = np.empty_like(x)
        below = x < 1.0
        # the zero atom spreads over [0, 1): linear decay keeps ccdf(0) = 1
        out[below] = 1.0 - np.clip(x[below], 0.0, 1.0) * self.zero_mass
        lx = np.log10(np.maximum(x, 1.0))
        ly = np.interp(lx, self.log10_degree, self.log10_ccdf,
                       right=-np.inf)
        beyond = lx > self.log10_degree[-1]
        if np.any(beyond):
            ly = np.where(
                beyond,
                self.log10_ccdf[-1] + self.tail_slope * (lx - self.log10_degree[-1]),
                ly,
            )
        out[~below] = 10.0 ** ly[~below]
        return out

    def inverse_levels(self, levels: np.ndarray) -> np.ndarray:
        """Map CCDF levels in (0, 1) to integer degrees.

        The generalized inverse is evaluated on the monotone knot grid; the
        piecewise-linear bracket is resolved in closed form, which is the
        exact limit of bisecting in u, so the result carries no level error.
        Levels above ccdf(1) land in the zero atom; levels below the floor
        clamp to the support cap.
        """
        levels = np.asarray(levels, dtype=np.float64)
        head = 10.0 ** self.log10_ccdf[0]        # = 1 - zero_mass
        ys, xs = self.log10_ccdf, self.log10_degree
        ly = np.log10(np.clip(levels, 1e-300, None))
        # smallest knot index whose value is <= the level; the curve crosses
        # the level inside the preceding segment (plateaus cannot straddle)
        j = ys.size - np.searchsorted(ys[::-1], ly, side="right")
        j = np.clip(j, 1, ys.size - 1)
        y0, y1 = ys[j - 1], ys[j]
        frac = np.where(y0 > y1, (y0 - ly) / np.where(y0 > y1, y0 - y1, 1.0), 0.0)
        lx = xs[j - 1] + np.clip(frac, 0.0, 1.0) * (xs[j] - xs[j - 1])
        deg = np.floor(10.0 ** lx + 1e-9).astype(np.int64)
        deg = np.clip(deg, 1, self.support_cap)
        deg[levels > head] = 0
        return deg

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``count`` degrees by stratified inverse-CCDF sampling."""
        if count < 0:
            raise ValueError("count must be non-negative")
        if count == 0:
            return np.empty(0, dtype=np.int64)
        jitter = rng.random(count)
        levels = (np.arange(1, count + 1, dtype=np.float64) - jitter) / count
        return self.inverse_levels(levels)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "zero_mass": self.zero_mass,
            "log10_degree": self.log10_degree.tolist(),
            "log10_ccdf": self.log10_ccdf.tolist(),
            "tail_slope": self.tail_slope,
            "support_cap": self.support_cap,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FittedCCDF":
        return cls(
            zero_mass=float(data["zero_mass"]),
            log10_degree=np.asarray(data["log10_degree"], dtype=np.float64),
            log10_ccdf=np.asarray(data["log10_ccdf"], dtype=np.float64),
            tail_slope=float(data["tail_slope"]),
            support_cap=int(data["support_cap"]),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path: str | Path) -> "FittedCCDF":
        return cls.from_dict(json.loads(Path(path).read_text()))


def empirical_ccdf(samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distinct positive values (ascending) and the left-continuous CCDF,
    the fraction of all samples (zeros included) at or above each value."""
    samples = np.asarray(samples)
    total = samples.size
    positive = samples[samples > 0]
    values, counts = np.unique(positive, return_counts=True)
    at_least = np.cumsum(counts[::-1])[::-1]
    return values.astype(np.int64), at_least / total


def _fit_log_curve(x: np.ndarray, y: np.ndarray, options: FitOptions):
    """Smooth y(x); returns a callable.  GCV spline, then fixed-size spline,
    then a straight line, whichever first succeeds."""
    if x.size >= 5:
        try:
            spline = make_smoothing_spline(x, y)
            test = spline(x)
            if np.all(np.isfinite(test)):
                return spline
        except Exception:
            pass
        # fixed equivalent degrees of freedom: coefficient count capped
        dof = min(options.fallback_dof, x.size - 1)
        n_interior = max(dof - 4, 0)
        if n_interior:
            quantiles = np.linspace(0, 1, n_interior + 2)[1:-1]
            knots = np.quantile(x, quantiles)
            knots = knots[(knots > x[0]) & (knots < x[-1])]
            try:
                return LSQUnivariateSpline(x, y, knots, k=3)
            except Exception:
                pass
    coeffs = np.polyfit(x, y, 1)
    return np.poly1d(coeffs)


def fit_ccdf(samples: np.ndarray, target_size: int,
             options: FitOptions | None = None) -> FittedCCDF:
    """Fit one degree sample set for rescaling to ``target_size`` nodes."""
    options = options or FitOptions()
    samples = np.asarray(samples, dtype=np.int64)
    if samples.size == 0:
        raise FitError("no samples")
    if np.any(samples < 0):
        raise FitError("degrees must be non-negative")
    if target_size < 1:
        raise FitError("target size must be positive")
    if np.unique(samples).size < 2:
        raise FitError("degenerate distribution: fewer than two distinct values")

    total = samples.size
    zero_mass = float(np.count_nonzero(samples == 0)) / total
    head = 1.0 - zero_mass
    values, ccdf = empirical_ccdf(samples)
    floor = 1.0 / (options.floor_factor * target_size)
    y_floor = np.log10(floor)

    if values.size == 1:
        # all positive mass on one degree: a flat head with a sharp drop
        v = int(values[0])
        x_lo = np.log10(max(v, 1))
        x_hi = np.log10(v + 1) - 1e-9
        slope = (y_floor - np.log10(head)) / (x_hi - x_lo)
        xs = np.array([0.0, x_lo, x_hi]) if v > 1 else np.array([x_lo, x_hi])
        ys = np.concatenate([np.full(xs.size - 1, np.log10(head)), [y_floor]])
        return FittedCCDF(zero_mass, xs, ys, float(slope), v)

    x = np.log10(values.astype(np.float64))
    y = np.log10(ccdf)
    curve = _fit_log_curve(x, y, options)

    xs = np.linspace(0.0, x[-1], options.grid_points)
    ys = np.asarray(curve(np.clip(xs, x[0], x[-1])), dtype=np.float64)
    ys = np.minimum(ys, np.log10(head))
    ys = isotonic_regression(ys, increasing=False).x
    ys[0] = np.log10(head)   # exact head anchor: ccdf(1) = 1 - zero_mass

    tail_slope = _tail_slope(xs, ys, options)

    if ys[-1] > y_floor:
        # extend linearly until the curve crosses the floor
        x_last, y_last = xs[-1], ys[-1]
        x_cap = x_last + (y_floor - y_last) / tail_slope
        ext = np.linspace(x_last, x_cap, options.tail_points + 1)[1:]
        xs = np.concatenate([xs, ext])
        ys = np.concatenate([ys, y_last + tail_slope * (ext - x_last)])
    else:
        # fit is already below the floor inside the observed range: truncate
        keep = ys >= y_floor
        if not np.any(keep):
            raise FitError("fitted curve entirely below the support floor")
        last = int(np.flatnonzero(keep)[-1])
        if last + 1 < ys.size and ys[last] > y_floor:
            frac = (ys[last] - y_floor) / (ys[last] - ys[last + 1])
            x_cross = xs[last] + frac * (xs[last + 1] - xs[last])
            xs = np.concatenate([xs[:last + 1], [x_cross]])
            ys = np.concatenate([ys[:last + 1], [y_floor]])
        else:
            xs, ys = xs[:last + 1], ys[:last + 1]

    support_cap = max(int(np.floor(10.0 ** xs[-1] + 1e-9)), 1)
    return FittedCCDF(zero_mass, xs, ys, float(tail_slope), support_cap)


def _tail_slope(xs: np.ndarray, ys: np.ndarray, options: FitOptions) -> float:
    """Log-log slope of the fitted curve over its tail.

    The window starts where the curve drops to ``tail_ccdf`` of the mass
    (never narrower than the trailing ``tail_fraction`` of knots), and the
    least-squares fit weights each knot by the square root of its ccdf,
    i.e. by the sampling information available at that depth.  A window
    confined to the extreme tail would ride order statistics that carry a
    handful of samples and scatter the estimate far outside the true
    exponent; the weighted wide window keeps the estimate anchored where
    the data is, while still being a tail quantity."""
    start = int(np.searchsorted(-ys, -np.log10(options.tail_ccdf), side="left"))
    k = min(start, int(round((1 - options.tail_fraction) * xs.size)))
    for lo in (k, int(round(0.75 * xs.size))):
        lo = max(min(lo, xs.size - 2), 0)
        if xs[-1] > xs[lo]:
            w = np.sqrt(10.0 ** ys[lo:])
            slope = np.polyfit(xs[lo:], ys[lo:], 1, w=w)[0]
            if slope <= options.min_slope:
                return float(slope)
    span = xs[-1] - xs[0]
    if span <= 0:
        return options.min_slope
    return float(min((ys[-1] - ys[0]) / span, options.min_slope))


def sample_degrees(fit: FittedCCDF, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` integer degrees from a fitted CCDF (see FittedCCDF.sample)."""
    return fit.sample(count, rng)


def ks_to_fit(fit: FittedCCDF, samples: np.ndarray) -> float:
    """Sup distance between a sample set's CCDF and the fit, evaluated over
    the integer support (degrees are integers, so comparison points are the
    integers where either curve can jump)."""
    samples = np.asarray(samples, dtype=np.int64)
    hi = int(max(samples.max(initial=0), fit.support_cap))
    points = np.arange(0, hi + 2, dtype=np.int64)
    emp = 1.0 - np.searchsorted(np.sort(samples), points, side="left") / samples.size
    return float(np.abs(emp - fit.ccdf(points)).max())
