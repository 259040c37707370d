"""Seeded Monte-Carlo batches over the two-block model.

Trial ``t`` of a batch uses seed ``params.seed + t``, so any trial can be
re-run on its own with ``run_trial``.  Trials may run on a thread pool
(size capped by ``EIGLOC_THREADS``); results are always ordered by seed.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .localize import BoundNotApplicable
from .sbm import (
    SbmParams,
    accuracy,
    cos_M_Z,
    gamma,
    mu_predicted,
    sample,
    spectral_bipartition,
    xi_bar,
)

MAX_RETAINED = 100_000
CSV_FIELDS = ("seed", "cos2_MZ", "lambda1", "mu_pred", "rel_gap", "accuracy", "gap_flag")


@dataclass(frozen=True)
class TrialResult:
    seed: int
    cos2_MZ: float
    lambda1: float
    mu_pred: float
    rel_gap: float
    accuracy: float
    gap_flag: bool
    skipped: str | None = None
    wall_time: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class ExperimentSummary:
    params: dict
    trials: int
    completed: int
    skipped: int
    gap_flag_count: int
    frac_cos_ok: float | None
    frac_lambda_ok: float | None
    frac_rel_gap_ok: float | None
    mean_accuracy: float | None
    frac_accuracy_ok: float | None
    gamma: float | None
    xi_bar: float | None
    mu_pred: float | None
    epsilon: float
    epsilon_acc: float
    lambda_slack: float
    error: str | None = None
    results: tuple = field(default=(), repr=False, compare=False)

    def to_dict(self, with_results=False):
        d = asdict(self)
        d.pop("results")
        if with_results:
            d["results"] = [_trial_row(r) for r in self.results]
        return d

    def to_json(self, digits=12):
        return json.dumps(_round(self.to_dict(), digits), indent=2) + "\n"


def _round(obj, digits):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: _round(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v, digits) for v in obj]
    return obj


def _trial_row(r):
    return {k: getattr(r, k) for k in CSV_FIELDS}


def run_trial(params: SbmParams, seed: int) -> TrialResult:
    """Sample one graph and evaluate every quantity the batch predicates need."""
    t0 = time.perf_counter()
    p = params.with_seed(seed)
    mu = mu_predicted(p)
    s = sample(p)
    try:
        cos = cos_M_Z(s)
        bip = spectral_bipartition(s)
    except (ValueError, ArithmeticError) as exc:
        nan = float("nan")
        return TrialResult(seed, nan, nan, mu, nan, nan, False, skipped=str(exc),
                           wall_time=time.perf_counter() - t0)
    lam = bip.lambda1
    rel_gap = abs(lam - mu) / abs(lam) if lam != 0 else float("inf")
    return TrialResult(
        seed=seed, cos2_MZ=cos * cos, lambda1=lam, mu_pred=mu, rel_gap=rel_gap,
        accuracy=accuracy(bip.labels, s.planted), gap_flag=bip.gap_flag,
        wall_time=time.perf_counter() - t0,
    )


def default_threads():
    env = os.environ.get("EIGLOC_THREADS")
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


def _run_trials(params, seeds, threads):
    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or len(seeds) == 1:
        return [run_trial(params, s) for s in seeds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda s: run_trial(params, s), seeds))


def summarize(params: SbmParams, results, epsilon=0.05, epsilon_acc=0.02,
              lambda_slack=0.1) -> ExperimentSummary:
    """Aggregate per-trial results into predicate frequencies.

    Fractions are over completed (non-skipped) trials; the accuracy
    predicate additionally excludes trials whose leading eigenvalue was
    flagged degenerate.
    """
    g = gamma(params.p_in, params.p_out)
    try:
        xb = xi_bar(g) if g > 0 else None
    except BoundNotApplicable:
        xb = None
    mu = mu_predicted(params)
    done = [r for r in results if r.skipped is None]
    m = len(done)

    def frac(flags):
        flags = list(flags)
        return float(np.mean(flags)) if flags else None

    frac_cos = frac(r.cos2_MZ >= g * g - epsilon for r in done)
    frac_lam = frac(r.lambda1 >= (1.0 - lambda_slack) * mu for r in done)
    bound = math.sqrt(max(1.0 - g * g, 0.0)) + epsilon
    frac_gap = frac(r.rel_gap <= bound for r in done)
    mean_acc = float(np.mean([r.accuracy for r in done])) if m else None
    frac_acc = None
    if xb is not None:
        frac_acc = frac(r.accuracy >= xb - epsilon_acc for r in done if not r.gap_flag)
    return ExperimentSummary(
        params=params.to_dict(), trials=len(results), completed=m,
        skipped=len(results) - m, gap_flag_count=sum(r.gap_flag for r in done),
        frac_cos_ok=frac_cos, frac_lambda_ok=frac_lam, frac_rel_gap_ok=frac_gap,
        mean_accuracy=mean_acc, frac_accuracy_ok=frac_acc,
        gamma=g, xi_bar=xb, mu_pred=mu,
        epsilon=epsilon, epsilon_acc=epsilon_acc, lambda_slack=lambda_slack,
        results=tuple(results[:MAX_RETAINED]),
    )


def run_batch(params: SbmParams, trials: int, epsilon=0.05, epsilon_acc=0.02,
              lambda_slack=0.1, threads=None) -> ExperimentSummary:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    # fail fast on degenerate models before sampling anything
    gamma(params.p_in, params.p_out)
    seeds = [params.seed + t for t in range(trials)]
    results = _run_trials(params, seeds, threads)
    return summarize(params, results, epsilon, epsilon_acc, lambda_slack)


def sweep(grid, trials: int, epsilon=0.05, epsilon_acc=0.02, lambda_slack=0.1,
          threads=None):
    """One summary per grid point, in input order; failures become ``error`` entries."""
    grid = list(grid)
    if not grid:
        raise ValueError("empty grid")
    out = []
    for params in grid:
        try:
            out.append(run_batch(params, trials, epsilon, epsilon_acc, lambda_slack, threads))
        except (ValueError, ArithmeticError) as exc:
            out.append(ExperimentSummary(
                params=params.to_dict(), trials=trials, completed=0, skipped=trials,
                gap_flag_count=0, frac_cos_ok=None, frac_lambda_ok=None,
                frac_rel_gap_ok=None, mean_accuracy=None, frac_accuracy_ok=None,
                gamma=None, xi_bar=None, mu_pred=mu_predicted(params),
                epsilon=epsilon, epsilon_acc=epsilon_acc, lambda_slack=lambda_slack,
                error=str(exc)))
    return out


def _fmt(v, digits):
    if isinstance(v, bool) or isinstance(v, (int, np.integer)):
        return str(int(v)) if not isinstance(v, bool) else str(v).lower()
    return f"{float(v):.{digits}g}"


def trials_csv(results, digits=12, extra=None) -> str:
    """One row per trial; ``extra`` is an ordered dict of constant leading columns."""
    extra = extra or {}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*extra.keys(), *CSV_FIELDS])
    for r in results:
        row = _trial_row(r)
        w.writerow([*(_fmt(v, digits) for v in extra.values()),
                    *(_fmt(row[k], digits) for k in CSV_FIELDS)])
    return buf.getvalue()


def summaries_json(summaries, digits=12) -> str:
    return json.dumps([_round(s.to_dict(), digits) for s in summaries], indent=2) + "\n"
