"""Importance sampling for tail probabilities ``P(N_t > c)``.

The proposal is the same Hawkes process with a raised baseline. The mean
count is linear in the baseline, so scaling it by ``c / E[N_t]`` puts the
proposal's mean exactly at the threshold. Likelihood ratios between two
processes that differ only in baseline reduce to

    log w = t * (tilted - lambda0) + sum_i log(lambda(t_i) / tilted_lambda(t_i))

and are kept in log space until the final, max-shifted average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Sequence

import numpy as np

from .errors import ContractError, DomainError, TiltError
from .harness import completed, run_replications
from .process import HawkesParams, expected_count, excitation_at_events
from .univariate import SAMPLERS, SimConfig

__all__ = [
    "TWITPOCALYPSE_THRESHOLD",
    "RareEventSpec",
    "ISResult",
    "NaiveResult",
    "SweepRow",
    "tilt_baseline",
    "log_weight",
    "estimate_is",
    "estimate_naive",
    "threshold_sweep",
]

# largest signed 32-bit integer, the tweet-id ceiling
TWITPOCALYPSE_THRESHOLD = 2_147_483_647


@dataclass(frozen=True)
class RareEventSpec:
    threshold: int = TWITPOCALYPSE_THRESHOLD
    horizon: float = 10.0
    trials: int = 100

    def __post_init__(self):
        if self.threshold < 0:
            raise DomainError("threshold must be >= 0")
        if not self.horizon > 0:
            raise DomainError("horizon must be > 0")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")


@dataclass(frozen=True)
class ISResult:
    p_hat: float
    std_err: float
    ess: float
    tilted_baseline: float
    hit_fraction: float


@dataclass(frozen=True)
class NaiveResult:
    p_hat: float
    std_err: float


@dataclass(frozen=True)
class SweepRow:
    threshold: int
    p_hat: float
    std_err: float
    ess: float
    tilted_baseline: float
    error: str | None = None


def tilt_baseline(params: HawkesParams, c: float, t: float) -> float:
    mean = expected_count(params, t)
    if not mean > 0:
        raise TiltError(f"expected count is {mean}; cannot tilt towards {c}")
    return c * params.baseline / mean


def log_weight(params: HawkesParams, tilted: HawkesParams, events, t: float) -> float:
    """Log likelihood ratio of ``params`` against ``tilted`` on one path."""
    if params.kernel != tilted.kernel:
        raise ContractError("importance weights need processes that differ only in baseline")
    times = np.asarray(getattr(events, "times", events), dtype=float)
    excite = excitation_at_events(times, params.kernel)
    with np.errstate(divide="ignore"):
        ratio = np.log(params.baseline + excite) - np.log(tilted.baseline + excite)
    return t * (tilted.baseline - params.baseline) + float(np.sum(ratio))


def _is_trial(original: HawkesParams, tilted: HawkesParams, t: float, method: str, seed: int):
    events = SAMPLERS[method](SimConfig(tilted, t, seed))
    return len(events), log_weight(original, tilted, events, t)


def _count_trial(params: HawkesParams, t: float, method: str, seed: int) -> int:
    return len(SAMPLERS[method](SimConfig(params, t, seed)))


def estimate_is(
    spec: RareEventSpec,
    params: HawkesParams,
    seed: int,
    method: str = "thinning",
    parallelism: int = 1,
) -> ISResult:
    """Weighted estimate of ``P(N_t > c)`` under a baseline-tilted proposal."""
    t = spec.horizon
    tilted = params.with_baseline(tilt_baseline(params, spec.threshold, t))
    out = completed(run_replications(partial(_is_trial, params, tilted, t, method), spec.trials, seed, parallelism))
    counts = np.array([n for n, _ in out])
    logw = np.array([lw for _, lw in out])
    hits = counts > spec.threshold
    m = spec.trials

    if hits.any():
        shift = float(logw[hits].max())
        scaled = np.where(hits, np.exp(logw - shift), 0.0)
        p_hat = math.exp(shift) * float(scaled.mean())
        sd = float(scaled.std(ddof=1)) if m > 1 else 0.0
        std_err = math.exp(shift) * sd / math.sqrt(m)
    else:
        p_hat = std_err = 0.0

    # effective sample size of the raw weights; invariant to the shift
    w = np.exp(logw - logw.max())
    ess = float(w.sum() ** 2 / np.sum(w * w))
    return ISResult(
        p_hat=p_hat,
        std_err=std_err,
        ess=min(max(ess, 1.0), float(m)),
        tilted_baseline=tilted.baseline,
        hit_fraction=float(hits.mean()),
    )


def estimate_naive(
    spec: RareEventSpec,
    params: HawkesParams,
    seed: int,
    method: str = "thinning",
    parallelism: int = 1,
) -> NaiveResult:
    counts = np.array(
        completed(run_replications(partial(_count_trial, params, spec.horizon, method), spec.trials, seed, parallelism))
    )
    p = float(np.mean(counts > spec.threshold))
    return NaiveResult(p, math.sqrt(p * (1 - p) / spec.trials))


def threshold_sweep(
    params: HawkesParams,
    thresholds: Sequence[int],
    t: float,
    m: int,
    seed: int,
    method: str = "thinning",
    parallelism: int = 1,
) -> list[SweepRow]:
    """One :func:`estimate_is` per threshold, in input order.

    A threshold whose tilt cannot be built yields a row with ``error`` set
    and NaN estimates; the remaining thresholds still run.
    """
    if len(thresholds) == 0:
        raise DomainError("thresholds must be non-empty")
    rows = []
    for c in thresholds:
        try:
            r = estimate_is(RareEventSpec(int(c), t, m), params, seed, method, parallelism)
        except TiltError as exc:
            rows.append(SweepRow(int(c), math.nan, math.nan, math.nan, math.nan, str(exc)))
            continue
        rows.append(SweepRow(int(c), r.p_hat, r.std_err, r.ess, r.tilted_baseline))
    return rows
