"""Command-line entry point.

Every randomized command requires ``--seed``. Exit status is 0 on success and
2 on validation or domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io
from .errors import HawkesError
from .graph import activity_histogram, node_summary, simulate_network
from .process import (
    HawkesParams,
    Regime,
    classify_regime,
    expected_count,
    limiting_intensity,
    log_likelihood,
)
from .rare_event import RareEventSpec, estimate_is, estimate_naive
from .univariate import SAMPLERS, SimConfig, efficiency_sweep, simulate_generations


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _add_params(p: argparse.ArgumentParser, with_alpha: bool = True) -> None:
    p.add_argument("--lambda0", type=float, required=True)
    if with_alpha:
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--beta", type=float, required=True)
    p.add_argument("--horizon", type=float, required=True)


def _params(args) -> HawkesParams:
    return HawkesParams.from_values(args.lambda0, args.alpha, args.beta)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def cmd_simulate(args) -> None:
    cfg = SimConfig(_params(args), args.horizon, args.seed)
    if args.method == "generations":
        trace = simulate_generations(cfg)
        events = trace.merged
        if args.trace:
            io.write_generation_csv(trace, args.trace)
        info = {"generations": len(trace.generations), "truncated": trace.truncated}
    else:
        if args.trace:
            raise HawkesError("--trace is only available with --method generations")
        events = SAMPLERS[args.method](cfg)
        info = {}
    if args.out:
        io.write_times_csv(events, args.out)
    _emit({"method": args.method, "count": len(events), **info})


def cmd_moments(args) -> None:
    params = _params(args)
    regime = classify_regime(params.kernel)
    _emit(
        {
            "expected_count": expected_count(params, args.horizon),
            "limiting_intensity": limiting_intensity(params) if regime is Regime.SUBCRITICAL else None,
            "regime": regime.value,
        }
    )


def cmd_loglik(args) -> None:
    times = sorted(io.read_times_csv(args.events))
    print(repr(log_likelihood(_params(args), times, args.horizon)))


def cmd_rare_event(args) -> None:
    params = _params(args)
    spec = RareEventSpec(args.threshold, args.horizon, args.trials)
    if args.naive:
        r = estimate_naive(spec, params, args.seed, parallelism=args.workers)
        row = {"threshold": spec.threshold, "p_hat": r.p_hat, "std_err": r.std_err,
               "ess": float(spec.trials), "tilted_baseline": params.baseline}
    else:
        r = estimate_is(spec, params, args.seed, parallelism=args.workers)
        row = {"threshold": spec.threshold, "p_hat": r.p_hat, "std_err": r.std_err,
               "ess": r.ess, "tilted_baseline": r.tilted_baseline}
    if args.out:
        io.write_sweep_csv([argparse.Namespace(**row)], args.out)
    _emit({**row, "estimator": "naive" if args.naive else "importance"})


def cmd_sweep(args) -> None:
    base = SimConfig(HawkesParams.from_values(args.lambda0, 0.0, 1.0), args.horizon, args.seed)
    matrix = efficiency_sweep(args.alpha_list, args.beta_list, base, args.reps, parallelism=args.workers)
    io.write_efficiency_csv(args.alpha_list, args.beta_list, matrix, args.out)
    _emit({"cells": len(args.alpha_list) * len(args.beta_list), "out": args.out})


def cmd_graph_sim(args) -> None:
    g = io.load_graph(args.graph)
    trace = simulate_network(g, args.horizon, args.seed, prune_eps=args.prune_eps, mode=args.mode)
    if args.out:
        io.write_network_csv(trace, args.out)
    if args.summary:
        io.write_node_summary_csv(node_summary(g, trace), args.summary)
    out = {"events": len(trace), "per_node_counts": trace.per_node_counts}
    if args.hist_width:
        out["histogram"] = [[s, c] for s, c in activity_histogram(trace, args.hist_width)]
    if trace.notes:
        out["notes"] = list(trace.notes)
    _emit(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hawkesgraph", description="Hawkes process simulation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate one univariate path")
    _add_params(p)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--method", choices=sorted(SAMPLERS), default="generations")
    p.add_argument("--trace", help="generation,time CSV (generations method)")
    p.add_argument("--out", help="time CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("moments", help="expected count and limiting intensity")
    _add_params(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("loglik", help="log-likelihood of an event file")
    _add_params(p)
    p.add_argument("--events", required=True)
    p.set_defaults(func=cmd_loglik)

    p = sub.add_parser("rare-event", help="estimate P(N_t > threshold)")
    _add_params(p)
    p.add_argument("--threshold", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--naive", action="store_true")
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_rare_event)

    p = sub.add_parser("sweep", help="acceptance-ratio grid of the generation sampler")
    _add_params(p, with_alpha=False)
    p.add_argument("--alpha-list", type=_float_list, required=True)
    p.add_argument("--beta-list", type=_float_list, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("graph-sim", help="simulate a follow-graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--mode", choices=("incremental", "strict"), default="incremental")
    p.add_argument("--prune-eps", type=float, default=0.0)
    p.add_argument("--out")
    p.add_argument("--hist-width", type=float)
    p.add_argument("--summary")
    p.set_defaults(func=cmd_graph_sim)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (HawkesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
