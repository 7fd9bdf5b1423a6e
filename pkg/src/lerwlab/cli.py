"""Command-line front end: manifests, experiment runners and artifacts.

Every experiment writes three files into ``--out``:

``results.csv``
    columns ``name,value,se,trials,extra``; one record per estimate or per
    lambda point. ``se`` is ``exact`` for values that carry no sampling error;
    ``extra`` holds ``key=value`` pairs joined by ``;``.
``summary.json``
    all estimates with SE or an exact tag, assertion outcomes, seed and wall
    time (schema ``lerwlab.summary/1``).
``plot.svg``
    for curve-type kinds (es, es-mn with k, hat-es, tails, growth,
    separation, mu-convergence, green-checks).

The exit status is 0 iff every assertion passes; 2 signals an invalid
manifest.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import estimators as E
from . import oracle, potential, sampling
from .conditioned import check_mk_parameters, estimate_MK_moments
from .lattice import ball, inner_boundary, square
from .rng import derive_seed
from .stats import fit_line
from .svg import line_plot
from .wilson import branch_codes, wilson_ust

SCHEMA = "lerwlab.summary/1"
KINDS = ("oracle-check", "es", "es-mn", "hat-es", "moments", "tails", "growth", "separation",
         "mu-convergence", "mk", "wilson", "green-checks")

DEFAULTS = {
    "oracle-check": {"n": 1, "reverse": False, "trials": 10**6},
    "es": {"n": [1, 2, 4, 8, 16], "trials": 10**5},
    "es-mn": {"m": 8, "n": 32, "k": None, "trials": 10**5},
    "hat-es": {"n": [16, 32, 64], "k": 4, "trials": 5 * 10**4},
    "moments": {"n": 64, "k": 6, "bound": 5.0, "trials": 10**5},
    "tails": {"n": 64, "lambda_grid": [round(1 + 0.1 * i, 10) for i in range(31)], "trials": 10**6},
    "growth": {"n": [64, 128, 256, 512], "trials": 10**4},
    "separation": {"n": [16, 32, 64], "trials": 5 * 10**4},
    "mu-convergence": {"m": 1, "n": [4, 8, 16], "trials": 10**5},
    "mk": {"m": 8, "n": 16, "N": 256, "trials": 2000},
    "wilson": {"n": 2, "trials": 10**5},
    "green-checks": {"n": [8, 16, 32, 64, 128], "m": 8, "N": 64, "k": 100, "trials": 1},
}


@dataclass
class ExperimentManifest:
    kind: str
    params: dict = field(default_factory=dict)
    trials: int | None = None
    seed: int = 0
    workers: int | None = None
    out: str = "out"

    def resolved(self) -> dict:
        p = {k: v for k, v in DEFAULTS.get(self.kind, {}).items() if k != "trials"}
        p.update({k: v for k, v in self.params.items() if v is not None})
        return p

    @property
    def n_trials(self) -> int:
        if self.trials is not None:
            return self.trials
        return DEFAULTS.get(self.kind, {}).get("trials", 10**4)

    def validate(self) -> list[str]:
        return validate(self)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentManifest":
        d = json.loads(text)
        return cls(**{k: d[k] for k in ("kind", "params", "trials", "seed", "workers", "out") if k in d})

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def _ints(v) -> list[int]:
    return [int(x) for x in (v if isinstance(v, (list, tuple)) else [v])]


def validate(man: ExperimentManifest) -> list[str]:
    """Dry-run precondition check; returns the violations."""
    bad = []
    if man.kind not in KINDS:
        return [f"unknown experiment kind {man.kind!r}"]
    if man.n_trials < 1:
        bad.append("trials must be at least 1")
    if man.seed < 0:
        bad.append("seed must be nonnegative")
    if man.workers is not None and man.workers < 1:
        bad.append("workers must be at least 1")
    p = man.resolved()
    k = man.kind
    try:
        ns = _ints(p.get("n", []))
    except (TypeError, ValueError):
        return bad + ["n must be an integer or a list of integers"]
    if k == "oracle-check" and not all(0 <= x <= 2 for x in ns):
        bad.append("oracle-check needs 0 <= n <= 2 (enumerable support)")
    if k == "es" and any(x < 0 for x in ns):
        bad.append("Es(n) needs n >= 0")
    if k == "es-mn":
        if p["m"] < 0:
            bad.append("m must be nonnegative")
        if p.get("k") is None and p["m"] > ns[0]:
            bad.append(f"Es(m, n) needs m <= n (m={p['m']}, n={ns[0]})")
        if p.get("k") is not None and any(x < 1 for x in _ints(p["k"])):
            bad.append("k must be at least 1")
    if k == "hat-es" and (any(x < 1 for x in ns) or int(p["k"]) < 1):
        bad.append("hat-es needs n >= 1 and outer factor k >= 1")
    if k in ("moments", "tails") and any(x < 1 for x in ns):
        bad.append("n must be at least 1")
    if k == "moments" and int(p["k"]) < 1:
        bad.append("k_max must be at least 1")
    if k == "tails" and (not p["lambda_grid"] or min(p["lambda_grid"]) < 1):
        bad.append("the lambda grid must start at 1 or above")
    if k == "growth" and len(set(ns)) < 3:
        bad.append("growth fit needs at least three radii")
    if k == "growth" and any(x < 1 for x in ns):
        bad.append("radii must be positive")
    if k == "separation" and any(x < 8 for x in ns):
        bad.append("separation probe needs n >= 8")
    if k == "mu-convergence":
        if not 1 <= int(p["m"]) <= 2:
            bad.append("mu-convergence needs 1 <= l <= 2 (pass l as --m)")
        if len(ns) < 2 or any(x < 1 for x in ns):
            bad.append("mu-convergence needs at least two scales n >= 1")
    if k == "mk":
        m, n, N = int(p["m"]), ns[0], int(p["N"])
        bad += check_mk_parameters(m, n, N, (m, 0), inner_boundary(square(m)))
    if k == "wilson" and (len(ns) != 1 or ns[0] < 0):
        bad.append("wilson needs a single radius n >= 0")
    if k == "green-checks" and (len(ns) < 2 or any(x < 1 for x in ns)):
        bad.append("green-checks needs at least two radii n >= 1")
    return bad


# ---- results -----------------------------------------------------------------

@dataclass
class Row:
    name: str
    value: float
    se: float | None  # None: exact
    trials: int
    extra: dict = field(default_factory=dict)


@dataclass
class Result:
    rows: list = field(default_factory=list)
    assertions: list = field(default_factory=list)
    plot: dict | None = None

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        self.assertions.append({"name": name, "passed": bool(passed), "detail": detail})

    def add(self, name, value, se, trials, **extra) -> None:
        self.rows.append(Row(name, float(value), None if se is None else float(se), int(trials), extra))


def _summary_row(res: Result, s) -> None:
    if s.exact:
        res.add(s.name, s.mean, None, 0, **s.extra)
    else:
        res.add(s.name, s.mean, s.se, s.trials, **s.extra)


# ---- experiments -------------------------------------------------------------

def _oracle_check(p, trials, seed, workers) -> Result:
    res = Result()
    n = _ints(p["n"])[0]
    D = ball((0, 0), n)
    dist = oracle.lerw_exact_laplacian(D)
    worst = max(abs(q - oracle.lerw_exact_green_product(D, path)) for path, q in dist.items())
    res.add("exact_paths", len(dist), None, 0, n=n)
    res.add("route_disagreement", worst, None, 0, n=n)
    res.add("total_mass_error", abs(dist.total() - 1), None, 0, n=n)
    res.check("routes agree within 1e-10", worst < 1e-10, f"max diff {worst:.3g}")
    res.check("distribution sums to 1 within 1e-12", abs(dist.total() - 1) < 1e-12)
    codes = sampling.lerw_codes(D, trials, seed, reverse=bool(p.get("reverse")), workers=workers)
    tv = oracle.empirical_tv(codes, oracle.paths_to_codes(dist))
    res.add("tv_mc_vs_exact", tv, None, trials, n=n, reverse=bool(p.get("reverse")))
    tol = p.get("tv_max", 0.005 if n <= 1 else 0.02)
    res.check(f"Monte Carlo TV < {tol}", tv < tol, f"TV {tv:.4g}")
    return res


def _es(p, trials, seed, workers) -> Result:
    res = Result()
    ns = sorted(_ints(p["n"]))
    ests = [E.estimate_es(n, trials, derive_seed(seed, n), workers) for n in ns]
    for s in ests:
        _summary_row(res, s)
    vals = [s.mean for s in ests]
    rises = [b / a for a, b in zip(vals, vals[1:]) if a > 0]
    res.check("no increase by more than factor 1.3", all(r <= 1.3 for r in rises))
    res.plot = {"series": {"Es(n)": (ns, vals)}, "title": "escape probability", "xlabel": "n",
                "ylabel": "Es(n)", "logx": True, "logy": True}
    return res


def _es_mn(p, trials, seed, workers) -> Result:
    res = Result()
    m, n = int(p["m"]), _ints(p["n"])[0]
    if p.get("k") is None:
        s = E.estimate_es_mn(m, n, trials, derive_seed(seed, m, n), workers)
        _summary_row(res, s)
        base = E.estimate_es(n, trials, derive_seed(seed, n), workers)
        _summary_row(res, base)
        res.check("Es(m, n) >= Es(n) within 3 SE", s.mean >= base.mean - 3 * math.hypot(s.se, base.se))
        return res
    ks = sorted(_ints(p["k"]))
    ests = [E.estimate_es_mn(n, k * n, trials, derive_seed(seed, n, k * n), workers) for k in ks]
    for s in ests:
        _summary_row(res, s)
    fit = fit_line(np.log(ks), np.log([s.mean for s in ests]))
    res.add("slope_log_es_vs_log_k", fit.slope, None, trials, r2=fit.r2)
    res.check("escape slope in [-0.90, -0.60]", -0.90 <= fit.slope <= -0.60, f"slope {fit.slope:.4f}")
    res.plot = {"series": {"Es(n, kn)": (ks, [s.mean for s in ests])}, "title": f"Es({n}, k{n})",
                "xlabel": "k", "ylabel": "Es", "logx": True, "logy": True,
                "annotation": f"slope {fit.slope:.3f}"}
    return res


def _hat_es(p, trials, seed, workers) -> Result:
    res = Result()
    ns = sorted(_ints(p["n"]))
    outer = int(p["k"])
    hats, plain = [], []
    for n in ns:
        h = E.estimate_hat_es(n, trials, derive_seed(seed, n, 1), outer, workers)
        s = E.estimate_es(n, trials, derive_seed(seed, n, 2), workers)
        _summary_row(res, h)
        _summary_row(res, s)
        r = h.mean / s.mean
        res.add("hat_ratio", r, r * math.hypot(h.se / h.mean, s.se / s.mean), trials, n=n)
        res.check(f"hatEs/Es in [0.5, 2] at n={n}", 0.5 <= r <= 2, f"ratio {r:.3f}")
        hats.append(h.mean)
        plain.append(s.mean)
    res.plot = {"series": {"hatEs": (ns, hats), "Es": (ns, plain)}, "title": "escape probabilities",
                "xlabel": "n", "ylabel": "probability", "logx": True, "logy": True}
    return res


def _moments(p, trials, seed, workers) -> Result:
    res = Result()
    n, kmax = _ints(p["n"])[0], int(p["k"])
    x = E.sample_Mn(n, trials, seed, workers)
    for row in E.moments(x, kmax):
        res.add(f"moment_k{row['k']}", row["moment"], row["moment_se"], trials, n=n)
        res.add(f"ratio_k{row['k']}", row["ratio"], row["ratio_se"], trials, n=n)
    worst = E.max_root_ratio(x, kmax)
    res.add("max_root_ratio", worst, None, trials, n=n, k_max=kmax)
    res.check(f"max_k r_k^(1/k) <= {p['bound']}", worst <= float(p["bound"]), f"value {worst:.4f}")
    return res


def _tails(p, trials, seed, workers) -> Result:
    res = Result()
    n = _ints(p["n"])[0]
    lam = np.asarray(p["lambda_grid"], dtype=float)
    x = E.sample_Mn(n, trials, seed, workers)
    up, lo = E.tail_curves_from_samples(x, lam)
    res.add("mean_M", up.mean_hat, up.mean_se, trials, n=n)
    res.add("min_M", float(x.min()), None, trials, n=n)
    for c in (up, lo):
        for i, l in enumerate(lam):
            res.add(f"{c.direction}_survival", c.survival[i], c.se[i], trials, n=n, lam=float(l),
                    raw=float(c.survival_raw[i]), low_confidence=bool(c.low_confidence[i]))
    keep_u = (lam >= 1) & (lam <= 2.5) & up.usable()
    fu = fit_line(lam[keep_u], np.log(up.survival[keep_u])) if keep_u.sum() >= 3 else None
    keep_l = (lam >= 1.5) & (lam <= 4) & lo.usable()
    corr = float(np.corrcoef(lam[keep_l] ** 0.8, np.log(lo.survival[keep_l]))[0, 1]) if keep_l.sum() >= 3 else math.nan
    res.check("upper tail: log-linear R^2 >= 0.95 with negative slope",
              fu is not None and fu.r2 >= 0.95 and fu.slope < 0,
              "too few usable points" if fu is None else f"slope {fu.slope:.4f}, R^2 {fu.r2:.4f}")
    res.check("lower tail: corr(log survival, lambda^0.8) <= -0.9", corr <= -0.9,
              f"corr {corr:.4f} over {int(keep_l.sum())} usable points")
    res.check("P{M_n < n} = 0", int((x < n).sum()) == 0, f"min M {int(x.min())}")
    res.plot = {"series": {"upper": (lam, up.survival), "lower": (lam, lo.survival)},
                "title": f"tails of M_{n}", "xlabel": "lambda", "ylabel": "survival", "logy": True}
    return res


def _growth(p, trials, seed, workers) -> Result:
    res = Result()
    g = E.growth_exponent_fit(_ints(p["n"]), trials, seed, workers)
    for r, m, se in zip(g.radii, g.means, g.mean_se):
        res.add("mean_M", m, se, trials, n=r)
    res.add("growth_slope", g.slope, None, trials, ci_lo=g.slope_ci[0], ci_hi=g.slope_ci[1], r2=g.r2)
    res.check("growth slope in [1.20, 1.30]", 1.20 <= g.slope <= 1.30, f"slope {g.slope:.4f}")
    res.plot = {"series": {"E[M_n]": (g.radii, g.means)}, "title": "LERW growth", "xlabel": "n",
                "ylabel": "E[M_n]", "logx": True, "logy": True, "annotation": f"slope {g.slope:.3f}"}
    return res


def _separation(p, trials, seed, workers) -> Result:
    res = Result()
    ns = sorted(_ints(p["n"]))
    vals = []
    for n in ns:
        s = E.separation_probe(n, trials, derive_seed(seed, n), workers=workers)
        _summary_row(res, s)
        vals.append(s.mean)
        res.check(f"separation estimate positive at n={n}", s.mean > 0)
    fit = fit_line(np.log(ns), vals)
    res.add("separation_trend_slope", fit.slope, None, trials)
    res.check("no trend across n (|slope vs log n| <= 0.1)", abs(fit.slope) <= 0.1, f"slope {fit.slope:.4f}")
    res.plot = {"series": {"P(d_n >= n/10 | escape)": (ns, vals)}, "title": "separation",
                "xlabel": "n", "ylabel": "probability", "logx": True}
    return res


def _mu(p, trials, seed, workers) -> Result:
    res = Result()
    l, scales = int(p["m"]), sorted(_ints(p["n"]))
    out = E.mu_convergence_probe(l, scales, trials, seed, workers)
    for (a, b), tv in zip(zip(scales, scales[1:]), out["tv"]):
        res.add("tv_consecutive", tv, None, trials, l=l, n_from=a, n_to=b)
    res.add("tv_noise_scale", out["noise"], None, trials)
    tvs = out["tv"]
    res.check("TV decreasing within noise", all(b <= a + out["noise"] for a, b in zip(tvs, tvs[1:])))
    res.check("final TV < 0.05", tvs[-1] < 0.05, f"TV {tvs[-1]:.4g}")
    res.plot = {"series": {"TV": (scales[1:], tvs)}, "title": f"convergence of the B_{l} law",
                "xlabel": "n", "ylabel": "TV", "logx": True}
    return res


def _mk(p, trials, seed, workers) -> Result:
    res = Result()
    m, n, N = int(p["m"]), _ints(p["n"])[0], int(p["N"])
    first, second = estimate_MK_moments(m, n, N, (m, 0), inner_boundary(square(m)), trials, seed, workers)
    _summary_row(res, first)
    _summary_row(res, second)
    ratio = second.mean / first.mean**2
    bound = 10 * math.log(N / n) ** 2
    res.add("second_over_first_squared", ratio, None, trials, bound=bound)
    res.check("E[X^2]/E[X]^2 <= 10 ln(N/n)^2", math.isfinite(ratio) and ratio <= bound, f"ratio {ratio:.4f}")
    return res


def _wilson(p, trials, seed, workers) -> Result:
    res = Result()
    n = _ints(p["n"])[0]
    D = ball((0, 0), n)
    tree = wilson_ust(D, seed)
    res.add("tree_edges", tree.edges(), None, 1, sites=len(D))
    res.check("sampled tree spans the wired graph", tree.is_spanning_tree())
    if len(D) <= oracle.MAX_ENUM_SITES:
        codes = branch_codes(D, trials, seed, workers=workers)
        tv = oracle.empirical_tv(codes, oracle.paths_to_codes(oracle.lerw_exact_laplacian(D)))
        res.add("tv_branch_vs_exact", tv, None, trials, n=n)
        res.check("branch law TV < 0.02", tv < 0.02, f"TV {tv:.4g}")
    return res


def _green(p, trials, seed, workers) -> Result:
    res = Result()
    ns = sorted(_ints(p["n"]))
    G = potential.GreenOperator(ball((0, 0), min(ns)))
    M = G.matrix()
    res.add("green_asymmetry", float(np.abs(M - M.T).max()), None, 0, n=min(ns))
    res.check("Green function symmetric", np.allclose(M, M.T, rtol=0, atol=1e-12))
    res.check("Green function positive", bool((M > 0).all()))
    g0 = [potential.green_origin(n) for n in ns]
    for n, v in zip(ns, g0):
        res.add("green_origin", v, None, 0, n=n)
    fit = fit_line(np.log(ns), g0)
    res.add("green_log_slope", fit.slope, None, 0)
    res.check("G_n(0,0) slope vs ln n within 10% of 2/pi", abs(fit.slope / (2 / math.pi) - 1) <= 0.1,
              f"slope {fit.slope:.4f}")
    m, N = int(p["m"]), int(p["N"])
    z = (23, 0) if (m, N) == (8, 64) else (int(math.sqrt(m * N)), 0)
    exact = potential.annulus_hit_probability(m, N, z)
    formula = potential.annulus_formula(m, N, math.hypot(*z))
    res.add("annulus_exact", exact, None, 0, m=m, n=N, r=math.hypot(*z))
    res.add("annulus_formula", formula, None, 0, m=m, n=N, r=math.hypot(*z))
    res.check("annulus formula within 0.05", abs(exact - formula) <= 0.05, f"diff {abs(exact - formula):.4f}")
    rng = np.random.default_rng(derive_seed(seed, 0x2EF))
    count = int(p["k"])
    viol = 0
    for _ in range(count):
        D, K, zz = potential.random_reflection_instance(rng)
        viol += not potential.reflection_inequality_check(D, K, zz)
    res.add("reflection_violations", viol, None, 0, instances=count)
    res.check("reflection inequality: zero violations", viol == 0, f"{viol} of {count}")
    res.plot = {"series": {"G_n(0,0)": (ns, g0)}, "title": "Green function at the origin",
                "xlabel": "n", "ylabel": "G_n(0,0)", "logx": True,
                "annotation": f"slope {fit.slope:.4f} vs 2/pi {2 / math.pi:.4f}"}
    return res


RUNNERS = {
    "oracle-check": _oracle_check, "es": _es, "es-mn": _es_mn, "hat-es": _hat_es,
    "moments": _moments, "tails": _tails, "growth": _growth, "separation": _separation,
    "mu-convergence": _mu, "mk": _mk, "wilson": _wilson, "green-checks": _green,
}


# ---- artifacts ---------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(rows, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "value", "se", "trials", "extra"])
        for r in rows:
            extra = ";".join(f"{k}={_fmt(v)}" for k, v in sorted(r.extra.items()))
            w.writerow([r.name, repr(r.value), "exact" if r.se is None else repr(r.se), r.trials, extra])


def run(man: ExperimentManifest) -> int:
    bad = validate(man)
    if bad:
        raise ValueError("invalid manifest: " + "; ".join(bad))
    out = Path(man.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    res = RUNNERS[man.kind](man.resolved(), man.n_trials, man.seed, man.workers)
    wall = time.perf_counter() - t0
    write_csv(res.rows, out / "results.csv")
    ok = all(a["passed"] for a in res.assertions)
    summary = {
        "schema": SCHEMA,
        "kind": man.kind,
        "seed": man.seed,
        "trials": man.n_trials,
        "params": man.resolved(),
        "estimates": [
            {"name": r.name, "value": r.value, "se": "exact" if r.se is None else r.se,
             "trials": r.trials, "extra": r.extra}
            for r in res.rows
        ],
        "assertions": res.assertions,
        "passed": ok,
        "failed": [a["name"] for a in res.assertions if not a["passed"]],
        "wall_time_s": wall,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, default=_json_default) + "\n")
    if res.plot is not None:
        pl = dict(res.plot)
        series = {k: ([float(a) for a in xs], [float(b) for b in ys]) for k, (xs, ys) in pl.pop("series").items()}
        (out / "plot.svg").write_text(line_plot(series, **pl))
    return 0 if ok else 1


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.bool_,)):
        return bool(o)
    raise TypeError(type(o))


# ---- argument parsing --------------------------------------------------------

def _list(text: str) -> list:
    vals = [float(t) for t in text.split(",") if t.strip()]
    return [int(v) if v.is_integer() else v for v in vals]


def _int_or_list(text: str):
    vals = _list(text)
    return vals[0] if len(vals) == 1 else vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lerwlab",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = ap.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        sp = sub.add_parser(kind, help=f"run a {kind} experiment")
        sp.add_argument("--manifest", help="JSON manifest; flags override its fields")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--trials", type=int)
        sp.add_argument("--n", type=_int_or_list, help="radius or comma-separated radii")
        sp.add_argument("--m", type=int, help="inner radius (l for mu-convergence)")
        sp.add_argument("--N", type=int, help="outer radius (mk, green-checks annulus)")
        sp.add_argument("--k", type=_int_or_list,
                        help="moment order, outer factor, k list for es-mn, or reflection instances")
        sp.add_argument("--lambda-grid", type=_list, dest="lambda_grid")
        sp.add_argument("--workers", type=int)
        sp.add_argument("--out")
    return ap


def manifest_from_args(args) -> ExperimentManifest:
    if args.manifest:
        man = ExperimentManifest.from_json(Path(args.manifest).read_text())
        if man.kind != args.kind:
            raise ValueError(f"manifest kind {man.kind!r} does not match subcommand {args.kind!r}")
    else:
        man = ExperimentManifest(args.kind)
    params = dict(man.params)
    for key in ("n", "m", "N", "k", "lambda_grid"):
        v = getattr(args, key)
        if v is not None:
            params[key] = v
    man.params = params
    for key in ("seed", "trials", "workers", "out"):
        v = getattr(args, key)
        if v is not None:
            setattr(man, key, v)
    return man


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        man = manifest_from_args(args)
    except (ValueError, OSError) as exc:
        print(f"lerwlab: error: {exc}", file=sys.stderr)
        return 2
    bad = validate(man)
    if bad:
        for b in bad:
            print(f"lerwlab: invalid manifest: {b}", file=sys.stderr)
        return 2
    status = run(man)
    summary = json.loads((Path(man.out) / "summary.json").read_text())
    for a in summary["assertions"]:
        print(f"{'PASS' if a['passed'] else 'FAIL'}  {a['name']}  {a['detail']}")
    return status


if __name__ == "__main__":
    sys.exit(main())
