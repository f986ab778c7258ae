"""Simulation and estimation toolkit for exponential Hawkes processes.

Submodules
----------
process      parameters, intensity, compensator, likelihood, moments
univariate   generation, thinning and cluster samplers
rare_event   baseline-tilted importance sampling for count tails
graph        Hawkes dynamics on a directed follow-graph
harness      seeds, replications, summary statistics, KS test
io           CSV/JSON readers and writers
"""

from .errors import (
    ContractError,
    DomainError,
    GraphValidationError,
    HawkesError,
    RegimeError,
    TiltError,
    TrialError,
    UndefinedRatioError,
)
from .graph import (
    NetworkTrace,
    NodeSpec,
    UserGraph,
    activity_histogram,
    build_graph,
    node_intensity,
    node_summary,
    simulate_network,
    validate_graph,
)
from .harness import derive_trial_seed, ks_two_sample, run_replications, summarize
from .process import (
    EventSequence,
    HawkesParams,
    KernelParams,
    Regime,
    classify_regime,
    compensator,
    expected_count,
    intensity,
    kernel_value,
    limiting_intensity,
    log_likelihood,
)
from .rare_event import (
    TWITPOCALYPSE_THRESHOLD,
    ISResult,
    RareEventSpec,
    estimate_is,
    estimate_naive,
    log_weight,
    threshold_sweep,
    tilt_baseline,
)
from .univariate import (
    GenerationTrace,
    SimConfig,
    acceptance_ratio,
    efficiency_sweep,
    simulate_cluster,
    simulate_generations,
    simulate_thinning,
)

__version__ = "0.1.0"
