"""Monte Carlo estimators: escape probabilities, LERW length moments, tail
curves, the growth exponent and the separation / convergence probes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import sampling
from .lattice import Domain, ball
from .potential import PreconditionError
from .rng import derive_seed
from .stats import EstimatorSummary, LineFit, empirical_pmf, fit_line, jackknife_ratio_moments, tv_distance

LOW_CONFIDENCE_COUNT = 10


def _bernoulli(name, flags, seed, **extra) -> EstimatorSummary:
    flags = np.asarray(flags, dtype=float)
    k = len(flags)
    p = float(flags.mean())
    # binomial variance of a single indicator
    return EstimatorSummary.from_moments(name, k, p, p * (1 - p) * k / max(k - 1, 1), seed, **extra)


def estimate_es(n: int, trials: int, seed: int, workers: int | None = None) -> EstimatorSummary:
    """Es(n): S[1, sigma_n] misses L(S'[0, sigma_n]). Es(0) = 1 exactly."""
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    if n == 0:
        return EstimatorSummary.exact_value("Es", 1.0, n=0)
    ok, _ = sampling.escape_trials(n, trials, seed, workers=workers)
    return _bernoulli("Es", ok, seed, n=n)


def estimate_es_mn(m: int, n: int, trials: int, seed: int, workers: int | None = None) -> EstimatorSummary:
    """Es(m, n): S[1, sigma_n] misses the terminal segment of L(S'[0, sigma_n])
    from its last visit to B_m (at a positive index) onward."""
    if m > n:
        raise PreconditionError("Es(m, n) needs m <= n")
    if m < 0:
        raise PreconditionError("m must be nonnegative")
    ok, _ = sampling.escape_trials(n, trials, seed, segment_radius=m, workers=workers)
    return _bernoulli("Es_mn", ok, seed, m=m, n=n)


def estimate_hat_es(n: int, trials: int, seed: int, outer_factor: int = 4,
                    workers: int | None = None) -> EstimatorSummary:
    """Escape probability from the infinite LERW, approximated by the LERW to
    the boundary of B_{outer_factor n} cut at its first exit of B_n."""
    if n < 1:
        raise PreconditionError("n must be positive")
    ok, _ = sampling.escape_trials(n, trials, seed, eta_radius=outer_factor * n,
                                   truncate_radius=n, workers=workers)
    return _bernoulli("hatEs", ok, seed, n=n, outer_factor=outer_factor)


# ---- LERW length -------------------------------------------------------------

def sample_Mn(D: Domain | int, trials: int, seed: int, workers: int | None = None,
              inner: Domain | None = None):
    """Per-trial M_D (steps); with ``inner``, also the vertex counts in it."""
    if isinstance(D, int):
        D = ball((0, 0), D)
    if (0, 0) not in D:
        raise PreconditionError("the domain must contain the origin")
    steps, inner_counts, _ = sampling.lerw_lengths(D, trials, seed, inner=inner, workers=workers)
    return (steps, inner_counts) if inner is not None else steps


def sample_hat_Mn(n: int, trials: int, seed: int, outer_factor: int = 4,
                  workers: int | None = None) -> np.ndarray:
    """Steps of L(S[0, sigma_{outer_factor n}]) up to its first exit of B_n."""
    if n < 1:
        raise PreconditionError("n must be positive")
    _, _, ex = sampling.lerw_lengths(ball((0, 0), outer_factor * n), trials, seed,
                                     inner=ball((0, 0), n), workers=workers)
    return ex


def moments(samples, k_max: int) -> list[dict]:
    """E[M^k] and r_k = E[M^k] / (k! E[M]^k) with jackknife errors."""
    return jackknife_ratio_moments(samples, k_max)


def max_root_ratio(samples, k_max: int = 6) -> float:
    return max(row["ratio"] ** (1.0 / row["k"]) for row in moments(samples, k_max))


@dataclass
class TailCurve:
    direction: str  # "upper": P{M > lam E}, "lower": P{M < E / lam}
    lambdas: np.ndarray
    survival: np.ndarray
    survival_raw: np.ndarray
    se: np.ndarray
    counts: np.ndarray
    trials: int
    mean_hat: float
    mean_se: float
    low_confidence: np.ndarray = field(default=None)

    def usable(self) -> np.ndarray:
        return ~self.low_confidence & (self.survival > 0)

    def log_fit(self, transform=lambda lam: lam) -> LineFit:
        keep = self.usable()
        x = transform(self.lambdas[keep])
        return fit_line(x, np.log(self.survival[keep]))

    def log_correlation(self, transform=lambda lam: lam) -> float:
        keep = self.usable()
        if keep.sum() < 3:
            return math.nan
        return float(np.corrcoef(transform(self.lambdas[keep]), np.log(self.survival[keep]))[0, 1])


def tail_curves(n: int, lambda_grid, trials: int, seed: int,
                workers: int | None = None) -> tuple[TailCurve, TailCurve]:
    """Tail curves of M_n at ``trials`` fresh samples."""
    lam = np.asarray(lambda_grid, dtype=float)
    if lam.size == 0 or lam.min() < 1:
        raise PreconditionError("the lambda grid must start at 1 or above")
    return tail_curves_from_samples(sample_Mn(n, trials, seed, workers), lam)


def tail_curves_from_samples(samples, lambda_grid) -> tuple[TailCurve, TailCurve]:
    """Upper and lower empirical tails around the same-run sample mean."""
    lam = np.asarray(lambda_grid, dtype=float)
    if lam.size == 0 or lam.min() < 1:
        raise PreconditionError("the lambda grid must start at 1 or above")
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    mean = float(x.mean())
    mean_se = float(x.std(ddof=1) / math.sqrt(n))
    out = []
    for direction in ("upper", "lower"):
        if direction == "upper":
            counts = n - np.searchsorted(x, lam * mean, side="right")
        else:
            counts = np.searchsorted(x, mean / lam, side="left")
        raw = counts / n
        reg = np.minimum.accumulate(raw)
        se = np.sqrt(raw * (1 - raw) / n)
        out.append(TailCurve(direction, lam, reg, raw, se, counts, n, mean, mean_se,
                             counts < LOW_CONFIDENCE_COUNT))
    return out[0], out[1]


@dataclass
class GrowthFit:
    radii: list
    means: list
    mean_se: list
    slope: float
    intercept: float
    slope_ci: tuple[float, float]
    r2: float


def growth_exponent_fit(radii, trials: int, seed: int, workers: int | None = None,
                        n_boot: int = 1000, samples: dict | None = None) -> GrowthFit:
    """Least-squares slope of log E[M_n] against log n with a bootstrap CI."""
    radii = sorted(radii)
    if len(radii) < 3:
        raise PreconditionError("need at least three radii")
    if samples is None:
        samples = {r: sample_Mn(r, trials, derive_seed(seed, r), workers) for r in radii}
    means = [float(samples[r].mean()) for r in radii]
    ses = [float(samples[r].std(ddof=1) / math.sqrt(len(samples[r]))) for r in radii]
    lx = np.log(radii)
    fit = fit_line(lx, np.log(means))
    rng = np.random.default_rng(derive_seed(seed, 0xB007))
    boot = np.empty(n_boot)
    for b in range(n_boot):
        bm = [samples[r][rng.integers(0, len(samples[r]), len(samples[r]))].mean() for r in radii]
        boot[b] = fit_line(lx, np.log(bm)).slope
    lo, hi = np.percentile(boot, [2.5, 97.5])
    return GrowthFit(radii, means, ses, fit.slope, fit.intercept, (float(lo), float(hi)), fit.r2)


def separation_probe(n: int, trials: int, seed: int, fraction: float = 0.1,
                     outer_factor: int = 4, workers: int | None = None) -> EstimatorSummary:
    """P{d_n >= fraction * n | S[1, sigma_n] misses the (approximate)
    infinite LERW up to its exit of B_n}."""
    if n < 8:
        raise PreconditionError("separation probe needs n >= 8")
    ok, dn = sampling.escape_trials(n, trials, seed, eta_radius=outer_factor * n,
                                    truncate_radius=n, separation=True, workers=workers)
    d = dn[ok.astype(bool)]
    est = _bernoulli("separation", d >= fraction * n, seed, n=n, fraction=fraction,
                     successes=int(len(d)))
    est.extra["low_confidence"] = len(d) < 100
    return est


def mu_convergence_probe(l: int, scales, trials: int, seed: int, workers: int | None = None,
                         exact: bool = False) -> dict:
    """Empirical laws of the LERW from 0 in B_{n l}, cut at its first exit of
    B_l, for each n in ``scales``; TV distances between consecutive scales."""
    if l > 2:
        raise PreconditionError("l must be at most 2 so the support is enumerable")
    scales = list(scales)
    pmfs, exact_pmfs = [], []
    trunc = ball((0, 0), l)
    for n in scales:
        codes = sampling.lerw_codes(ball((0, 0), n * l), trials, derive_seed(seed, n),
                                    truncate=trunc, workers=workers)
        pmfs.append(empirical_pmf(codes))
        if exact:
            from .oracle import lerw_exact_laplacian, paths_to_codes

            exact_pmfs.append(paths_to_codes(lerw_exact_laplacian(ball((0, 0), n * l), stop=trunc)))
    tv = [tv_distance(a, b) for a, b in zip(pmfs, pmfs[1:])]
    support = len(set().union(*pmfs))
    # typical TV between two independent empirical laws on this support
    noise = 0.4 * math.sqrt(2 * support / trials)
    out = {"scales": scales, "pmfs": pmfs, "tv": tv, "noise": noise}
    if exact:
        out["exact_pmfs"] = exact_pmfs
        out["exact_tv"] = [tv_distance(a, b) for a, b in zip(exact_pmfs, exact_pmfs[1:])]
    return out
