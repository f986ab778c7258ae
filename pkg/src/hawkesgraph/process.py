"""Parameters and closed-form analytics of the exponential-kernel Hawkes process.

The intensity of the process is

    lambda(t) = lambda0 + sum_{t_i < t} alpha * exp(-beta * (t - t_i))

Everything here is a pure function of immutable inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RegimeError

__all__ = [
    "KernelParams",
    "HawkesParams",
    "EventSequence",
    "Regime",
    "kernel_value",
    "intensity",
    "compensator",
    "log_likelihood",
    "expected_count",
    "limiting_intensity",
    "classify_regime",
    "excitation_at_events",
    "decay_sums",
]


@dataclass(frozen=True)
class KernelParams:
    """Exponential kernel ``alpha * exp(-beta * x)``.

    ``alpha`` is the jump of the intensity at an event and ``beta`` the decay
    rate. ``alpha == 0`` is allowed and reduces the process to Poisson.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise DomainError(f"alpha must be finite and >= 0, got {self.alpha}")
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise DomainError(f"beta must be finite and > 0, got {self.beta}")

    @property
    def branching_ratio(self) -> float:
        return self.alpha / self.beta


@dataclass(frozen=True)
class HawkesParams:
    baseline: float
    kernel: KernelParams

    def __post_init__(self):
        object.__setattr__(self, "baseline", float(self.baseline))
        if not (math.isfinite(self.baseline) and self.baseline >= 0):
            raise DomainError(f"baseline must be finite and >= 0, got {self.baseline}")

    @classmethod
    def from_values(cls, baseline: float, alpha: float, beta: float) -> "HawkesParams":
        return cls(baseline, KernelParams(alpha, beta))

    @property
    def alpha(self) -> float:
        return self.kernel.alpha

    @property
    def beta(self) -> float:
        return self.kernel.beta

    def with_baseline(self, baseline: float) -> "HawkesParams":
        return HawkesParams(baseline, self.kernel)


@dataclass(frozen=True, eq=False)
class EventSequence:
    """Strictly increasing event times on ``[0, horizon]``.

    The ``times`` array is stored read-only.
    """

    horizon: float
    times: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        horizon = float(self.horizon)
        if not (math.isfinite(horizon) and horizon > 0):
            raise DomainError(f"horizon must be finite and > 0, got {horizon}")
        times = np.array(self.times, dtype=float).reshape(-1)
        if times.size:
            if not np.all(np.isfinite(times)):
                raise DomainError("event times must be finite")
            if times[0] < 0 or times[-1] > horizon:
                raise DomainError("event times must lie in [0, horizon]")
            if np.any(np.diff(times) <= 0):
                raise DomainError("event times must be strictly increasing")
        times.setflags(write=False)
        object.__setattr__(self, "horizon", horizon)
        object.__setattr__(self, "times", times)

    def __len__(self) -> int:
        return self.times.size

    def __iter__(self):
        return iter(self.times.tolist())

    def __eq__(self, other):
        if not isinstance(other, EventSequence):
            return NotImplemented
        return self.horizon == other.horizon and np.array_equal(self.times, other.times)

    def __hash__(self):
        return hash((self.horizon, self.times.tobytes()))

    def __repr__(self):
        return f"EventSequence(horizon={self.horizon}, n={len(self)})"


class Regime(enum.Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


def _as_times(history) -> np.ndarray:
    if isinstance(history, EventSequence):
        return history.times
    return np.asarray(history, dtype=float).reshape(-1)


def kernel_value(kernel: KernelParams, x: float) -> float:
    if x < 0:
        raise DomainError(f"elapsed time must be >= 0, got {x}")
    return kernel.alpha * math.exp(-kernel.beta * x)


def intensity(params: HawkesParams, history: EventSequence, t: float) -> float:
    """Conditional intensity at ``t``; events exactly at ``t`` do not count."""
    if not 0 <= t <= history.horizon:
        raise DomainError(f"t={t} outside [0, {history.horizon}]")
    times = history.times
    past = times[times < t]
    k = params.kernel
    return params.baseline + float(np.sum(k.alpha * np.exp(-k.beta * (t - past))))


def compensator(params: HawkesParams, history, T: float) -> float:
    """Integral of the intensity over ``[0, T]``."""
    times = _as_times(history)
    if times.size and times.max() > T:
        raise DomainError("history contains events after T")
    k = params.kernel
    excited = np.sum(-np.expm1(-k.beta * (T - times))) * (k.alpha / k.beta)
    return params.baseline * T + float(excited)


def decay_sums(times: np.ndarray, beta: float) -> np.ndarray:
    """``sum_{j<i} exp(-beta * (t_i - t_j))`` for every ``i`` of sorted ``times``.

    Linear-time exponential recursion.
    """
    times = np.asarray(times, dtype=float)
    if times.size < 2:
        return np.zeros(times.size)
    acc = 0.0
    vals = [0.0]
    for d in np.exp(-beta * np.diff(times)).tolist():
        acc = d * (acc + 1.0)
        vals.append(acc)
    return np.array(vals)


def excitation_at_events(times: np.ndarray, kernel: KernelParams) -> np.ndarray:
    """Kernel excitation felt by each event from all strictly earlier events."""
    if kernel.alpha == 0:
        return np.zeros(np.size(times))
    return kernel.alpha * decay_sums(times, kernel.beta)


def log_likelihood(params: HawkesParams, events, T: float) -> float:
    """Log of ``exp{ int_0^T (1 - lambda(s)) ds + int_0^T ln lambda(s) dN_s }``.

    Returns ``-inf`` when some event falls where the intensity is zero
    (possible only with a zero baseline).
    """
    times = _as_times(events)
    if times.size and (times.max() > T or np.any(np.diff(times) < 0)):
        raise DomainError("events must be sorted and lie in [0, T]")
    lam = params.baseline + excitation_at_events(times, params.kernel)
    if np.any(lam <= 0):
        return -math.inf
    return T - compensator(params, times, T) + float(np.sum(np.log(lam)))


def classify_regime(kernel: KernelParams) -> Regime:
    if kernel.alpha < kernel.beta:
        return Regime.SUBCRITICAL
    if kernel.alpha == kernel.beta:
        return Regime.CRITICAL
    return Regime.SUPERCRITICAL


def limiting_intensity(params: HawkesParams) -> float:
    """Long-run mean intensity ``beta * lambda0 / (beta - alpha)``."""
    a, b = params.alpha, params.beta
    if a >= b:
        raise RegimeError(f"no finite limiting intensity for alpha={a} >= beta={b}")
    return b * params.baseline / (b - a)


def expected_count(params: HawkesParams, t: float) -> float:
    """Mean number of events on ``[0, t]``, piecewise by regime."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    lam0, a, b = params.baseline, params.alpha, params.beta
    regime = classify_regime(params.kernel)
    if regime is Regime.SUBCRITICAL:
        gap = b - a
        lam_inf = b * lam0 / gap
        return lam_inf * t + (lam0 - lam_inf) / gap * -math.expm1(-gap * t)
    if regime is Regime.SUPERCRITICAL:
        gap = a - b
        return (b * lam0 / gap**2 + lam0 / gap) * math.expm1(gap * t) - b * lam0 / gap * t
    return 0.5 * b * lam0 * t * t + lam0 * t

