"""Summary statistics with uncertainty, and small fitting helpers."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

Z95 = 1.96


@dataclass
class EstimatorSummary:
    name: str
    trials: int
    mean: float
    variance: float
    se: float
    ci: tuple[float, float]
    seed: int | None = None
    exact: bool = False
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_samples(cls, name: str, x, seed: int | None = None, **extra) -> "EstimatorSummary":
        x = np.asarray(x, dtype=float)
        count = len(x)
        mean = float(x.mean()) if count else math.nan
        var = float(x.var(ddof=1)) if count > 1 else 0.0
        return cls.from_moments(name, count, mean, var, seed, **extra)

    @classmethod
    def from_moments(cls, name, count, mean, var, seed=None, **extra) -> "EstimatorSummary":
        se = math.sqrt(var / count) if count else math.nan
        return cls(name, count, mean, var, se, (mean - Z95 * se, mean + Z95 * se), seed, extra=extra)

    @classmethod
    def exact_value(cls, name: str, value: float, **extra) -> "EstimatorSummary":
        return cls(name, 0, value, 0.0, 0.0, (value, value), None, True, extra)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["ci"] = list(self.ci)
        return d


def jackknife_ratio_moments(x, k_max: int):
    """Raw moments E[X^k] and r_k = E[X^k] / (k! E[X]^k), k = 1..k_max, with
    leave-one-out jackknife standard errors (closed form, vectorized)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    scale = x.mean()
    z = x / scale  # rescale to keep high powers finite
    out = []
    s1 = z.sum()
    loo1 = (s1 - z) / (n - 1)
    for k in range(1, k_max + 1):
        zk = z**k
        sk = zk.sum()
        mk = sk / n
        loo_k = (sk - zk) / (n - 1)
        r = mk / (math.factorial(k) * (s1 / n) ** k)
        loo_r = loo_k / (math.factorial(k) * loo1**k)
        r_se = math.sqrt((n - 1) / n * ((loo_r - loo_r.mean()) ** 2).sum())
        m_se = math.sqrt((n - 1) / n * ((loo_k - loo_k.mean()) ** 2).sum())
        out.append(
            {
                "k": k,
                "moment": mk * scale**k,
                "moment_se": m_se * scale**k,
                "ratio": r,
                "ratio_se": r_se,
            }
        )
    return out


@dataclass
class LineFit:
    slope: float
    intercept: float
    r2: float
    slope_ci: tuple[float, float] | None = None


def fit_line(x, y) -> LineFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    ss_tot = ((y - y.mean()) ** 2).sum()
    r2 = 1.0 - (resid**2).sum() / ss_tot if ss_tot > 0 else 1.0
    return LineFit(float(slope), float(intercept), float(r2))


def tv_distance(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * math.fsum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def empirical_pmf(values) -> dict:
    vals, counts = np.unique(np.asarray(values), return_counts=True)
    return dict(zip(vals.tolist(), (counts / counts.sum()).tolist()))
