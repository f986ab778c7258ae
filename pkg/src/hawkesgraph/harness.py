"""Reproducible replication machinery and small statistics helpers.

Per-trial seeds are a pure function of ``(master_seed, index)``, and results
are slotted by trial index, so the output of :func:`run_replications` does not
depend on the number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, NamedTuple, Sequence

import numpy as np
from scipy.special import kolmogorov

from .errors import TrialError

__all__ = [
    "derive_trial_seed",
    "make_rng",
    "substream",
    "UniformStream",
    "TrialFailure",
    "completed",
    "run_replications",
    "SummaryStats",
    "summarize",
    "KSResult",
    "ks_two_sample",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_trial_seed(master: int, index: int) -> int:
    """SplitMix64 finalizer applied to ``master + index * GOLDEN`` (mod 2**64).

    The map is a bijection of the index for a fixed master, so distinct
    indices never collide. Do not change this: archived results depend on it.
    """
    if index < 0:
        raise ValueError(f"trial index must be >= 0, got {index}")
    return _splitmix64((int(master) + int(index) * _GOLDEN) & _MASK64)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & _MASK64))


def substream(seed: int, key: int) -> np.random.Generator:
    """Independent generator for sub-task ``key`` of a run seeded with ``seed``."""
    ss = np.random.SeedSequence(int(seed) & _MASK64, spawn_key=(int(key),))
    return np.random.Generator(np.random.PCG64(ss))


class UniformStream:
    """Scalar uniforms drawn from a generator in blocks.

    Sequential samplers ask for one variate at a time; pulling them from a
    block avoids the per-call overhead of the numpy generator.
    """

    def __init__(self, rng: np.random.Generator, block: int = 512):
        self._rng = rng
        self._block = block
        self._buf: list[float] = []
        self._pos = 0

    def uniform(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self._rng.random(self._block).tolist()
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def exponential(self, rate: float) -> float:
        # 1 - u lies in (0, 1], so the log is finite
        return -math.log1p(-self.uniform()) / rate


@dataclass(frozen=True)
class TrialFailure:
    """Placeholder stored in the result slot of a trial that raised."""

    index: int
    error: str


def _run_trial(task, master, index):
    try:
        return task(derive_trial_seed(master, index))
    except Exception as exc:  # noqa: BLE001 - failures are reported per slot
        return TrialFailure(index, f"{type(exc).__name__}: {exc}")


def _run_chunk(task, master, indices):
    return [_run_trial(task, master, i) for i in indices]


def run_replications(
    task: Callable[[int], Any],
    n: int,
    master: int,
    parallelism: int = 1,
) -> list:
    """Run ``task(seed_i)`` for ``i = 0..n-1`` with derived seeds.

    With ``parallelism > 1`` trials are spread over a process pool, so ``task``
    must be picklable (a module-level function or a ``functools.partial`` of
    one). A trial that raises leaves a :class:`TrialFailure` in its slot.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if parallelism <= 1 or n == 1:
        return _run_chunk(task, master, range(n))
    workers = min(parallelism, n)
    chunks = [range(lo, min(lo + math.ceil(n / workers), n)) for lo in range(0, n, math.ceil(n / workers))]
    results: list = [None] * n
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [(chunk, pool.submit(_run_chunk, task, master, chunk)) for chunk in chunks]
        for chunk, fut in futures:
            for i, r in zip(chunk, fut.result()):
                results[i] = r
    return results


def completed(results: list) -> list:
    """Return ``results`` unchanged, raising if any slot holds a :class:`TrialFailure`."""
    for r in results:
        if isinstance(r, TrialFailure):
            raise TrialError(f"trial {r.index} failed: {r.error}")
    return results


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    variance: float
    std_err: float
    min: float
    max: float


def summarize(values: Sequence[float]) -> SummaryStats:
    """Mean, unbiased variance (0 when ``n == 1``) and standard error."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("cannot summarize an empty list")
    var = float(np.var(x, ddof=1)) if x.size > 1 else 0.0
    return SummaryStats(
        n=int(x.size),
        mean=float(np.mean(x)),
        variance=var,
        std_err=math.sqrt(var / x.size),
        min=float(x.min()),
        max=float(x.max()),
    )


class KSResult(NamedTuple):
    statistic: float
    pvalue: float


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> KSResult:
    """Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.

    The p-value is the Kolmogorov survival function at ``sqrt(n_e) * D`` with
    ``n_e = n_a * n_b / (n_a + n_b)``. Ties are handled exactly in ``D``; for
    discrete data the test is conservative.
    """
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    grid = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, grid, side="right") / a.size
    cdf_b = np.searchsorted(b, grid, side="right") / b.size
    d = float(np.max(np.abs(cdf_a - cdf_b)))
    ne = a.size * b.size / (a.size + b.size)
    p = float(kolmogorov(math.sqrt(ne) * d))
    return KSResult(d, min(max(p, 0.0), 1.0))
