"""Samplers for the univariate exponential Hawkes process.

Three routes to the same law:

* :func:`simulate_generations` builds the process generation by generation.
  Generation 0 is the homogeneous Poisson stream of immigrants; generation
  ``k + 1`` is obtained by thinning a homogeneous stream whose rate is the
  largest value of the excitation created by generation ``k``.
* :func:`simulate_thinning` is sequential thinning over the whole horizon with
  a bound that is tightened after every rejection.
* :func:`simulate_cluster` draws the branching structure directly and never
  rejects anything. It serves as the reference for the other two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Sequence

import numpy as np

from .errors import DomainError, UndefinedRatioError
from .harness import UniformStream, completed, make_rng, run_replications, substream
from .process import EventSequence, HawkesParams, KernelParams, decay_sums

__all__ = [
    "SimConfig",
    "GenerationTrace",
    "simulate_generations",
    "simulate_thinning",
    "simulate_cluster",
    "draw_offspring",
    "acceptance_ratio",
    "efficiency_sweep",
    "SAMPLERS",
]


@dataclass(frozen=True)
class SimConfig:
    params: HawkesParams
    horizon: float
    seed: int
    max_generations: int = 10_000

    def __post_init__(self):
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise DomainError(f"horizon must be finite and > 0, got {self.horizon}")
        if self.max_generations < 1:
            raise DomainError("max_generations must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    def with_seed(self, seed: int) -> "SimConfig":
        return SimConfig(self.params, self.horizon, seed, self.max_generations)


@dataclass(frozen=True, eq=False)
class GenerationTrace:
    generations: tuple
    proposed_count: int
    accepted_count: int
    merged: EventSequence
    truncated: bool = False
    # one (generation, time) pair per kept event, handy for CSV export
    rows: list = field(default_factory=list, repr=False)

    def __eq__(self, other):
        if not isinstance(other, GenerationTrace):
            return NotImplemented
        return (
            self.proposed_count == other.proposed_count
            and self.accepted_count == other.accepted_count
            and self.truncated == other.truncated
            and self.merged == other.merged
            and len(self.generations) == len(other.generations)
            and all(np.array_equal(a, b) for a, b in zip(self.generations, other.generations))
        )


def _excitation_after(query: np.ndarray, parents: np.ndarray, kernel: KernelParams, right: np.ndarray):
    """Excitation of ``parents`` at sorted ``query`` points (strictly earlier parents only).

    ``right`` holds the right-limit decay sums at each parent.
    """
    idx = np.searchsorted(parents, query, side="left") - 1
    out = np.zeros(query.size)
    ok = idx >= 0
    j = idx[ok]
    out[ok] = kernel.alpha * right[j] * np.exp(-kernel.beta * (query[ok] - parents[j]))
    return out


def simulate_generations(config: SimConfig) -> GenerationTrace:
    """Generation-by-generation construction with per-generation thinning.

    The proposal rate for generation ``k + 1`` is the maximum of the
    generation-``k`` excitation. That excitation decays between its own
    events and jumps at them, so the maximum is attained at one of those
    events (right limit). Proposals start at the earliest parent, before
    which the excitation is zero. Each generation uses its own random
    substream.
    """
    p = config.params
    T = config.horizon
    kernel = p.kernel

    rng = substream(config.seed, 0)
    n0 = int(rng.poisson(p.baseline * T))
    current = np.sort(rng.uniform(0.0, T, n0))
    generations = [current]
    proposed = accepted = n0
    truncated = False

    while current.size:
        if len(generations) >= config.max_generations:
            truncated = True
            break
        rng = substream(config.seed, len(generations))
        right = decay_sums(current, kernel.beta) + 1.0
        bound = kernel.alpha * float(right.max())
        lo = float(current[0])
        n = int(rng.poisson(bound * (T - lo))) if bound > 0 else 0
        props = np.sort(rng.uniform(lo, T, n))
        lam = _excitation_after(props, current, kernel, right)
        keep = rng.random(n) * bound < lam
        current = props[keep]
        proposed += n
        accepted += int(keep.sum())
        generations.append(current)

    rows = [(k, float(t)) for k, g in enumerate(generations) for t in g]
    merged = np.unique(np.concatenate(generations)) if generations else np.empty(0)
    return GenerationTrace(
        generations=tuple(generations),
        proposed_count=proposed,
        accepted_count=accepted,
        merged=EventSequence(T, merged),
        truncated=truncated,
        rows=rows,
    )


def simulate_thinning(config: SimConfig) -> EventSequence:
    """Sequential thinning with a bound tightened after each rejection.

    Between events the intensity only decays, so the intensity just after
    the current time dominates everything up to the next event.
    """
    p = config.params
    T = config.horizon
    lam0, alpha, beta = p.baseline, p.alpha, p.beta
    stream = UniformStream(make_rng(config.seed))
    s = 0.0
    excite = 0.0
    events = []
    while True:
        bound = lam0 + excite
        if bound <= 0:
            break
        w = stream.exponential(bound)
        s += w
        if s > T:
            break
        excite *= math.exp(-beta * w)
        if stream.uniform() * bound < lam0 + excite:
            events.append(s)
            excite += alpha
    return EventSequence(T, events)


def draw_offspring(rng: np.random.Generator, parents: np.ndarray, kernel: KernelParams, horizon: float):
    """Direct children of ``parents`` that fall on or before ``horizon``.

    A parent at ``tau`` has ``Poisson(alpha/beta * (1 - exp(-beta*(T - tau))))``
    children whose delays follow the kernel truncated to ``[0, T - tau]``,
    sampled by inversion.
    """
    mass = -np.expm1(-kernel.beta * (horizon - parents))
    counts = rng.poisson(kernel.branching_ratio * mass)
    who = np.repeat(parents, counts)
    m = np.repeat(mass, counts)
    u = rng.random(who.size)
    delays = -np.log1p(-u * m) / kernel.beta
    return np.minimum(who + delays, horizon)


def simulate_cluster(config: SimConfig) -> EventSequence:
    """Exact sampler through the immigrant/offspring representation."""
    p = config.params
    T = config.horizon
    rng = make_rng(config.seed)
    current = rng.uniform(0.0, T, int(rng.poisson(p.baseline * T)))
    pieces = [current]
    depth = 1
    while current.size and p.alpha > 0 and depth < config.max_generations:
        current = draw_offspring(rng, current, p.kernel, T)
        pieces.append(current)
        depth += 1
    return EventSequence(T, np.unique(np.concatenate(pieces)))


def _generations_merged(config: SimConfig) -> EventSequence:
    return simulate_generations(config).merged


SAMPLERS = {
    "generations": _generations_merged,
    "thinning": simulate_thinning,
    "cluster": simulate_cluster,
}


def acceptance_ratio(trace: GenerationTrace) -> float:
    if trace.proposed_count == 0:
        raise UndefinedRatioError("no events were proposed")
    return trace.accepted_count / trace.proposed_count


def _ratio_task(config: SimConfig, seed: int) -> float:
    trace = simulate_generations(config.with_seed(seed))
    if trace.proposed_count == 0:
        return math.nan
    return acceptance_ratio(trace)


def efficiency_sweep(
    alphas: Sequence[float],
    betas: Sequence[float],
    base: SimConfig,
    reps: int,
    parallelism: int = 1,
) -> np.ndarray:
    """Mean acceptance ratio of :func:`simulate_generations` on an (alpha, beta) grid.

    Every cell reuses the same ``reps`` trial seeds derived from
    ``base.seed``. Runs in which nothing was proposed carry no ratio and are
    left out of the mean.
    """
    if reps < 1:
        raise DomainError("reps must be >= 1")
    kernels = [[KernelParams(a, b) for b in betas] for a in alphas]
    out = np.empty((len(alphas), len(betas)))
    for i, row in enumerate(kernels):
        for j, kernel in enumerate(row):
            cfg = SimConfig(HawkesParams(base.params.baseline, kernel), base.horizon, base.seed, base.max_generations)
            ratios = np.array(completed(run_replications(partial(_ratio_task, cfg), reps, base.seed, parallelism)))
            out[i, j] = np.nan if np.all(np.isnan(ratios)) else float(np.nanmean(ratios))
    return out
