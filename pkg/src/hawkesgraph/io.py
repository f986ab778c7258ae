"""CSV and JSON readers/writers for traces, sweeps and graphs.

Floats are written with ``repr`` so files round-trip exactly and repeated
runs produce byte-identical output.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DomainError
from .graph import NetworkTrace, NodeRow, NodeSpec, UserGraph
from .process import KernelParams

__all__ = [
    "write_generation_csv",
    "write_times_csv",
    "read_times_csv",
    "write_sweep_csv",
    "write_efficiency_csv",
    "write_network_csv",
    "write_node_summary_csv",
    "write_histogram_csv",
    "graph_from_dict",
    "load_graph",
]


def _fmt(x) -> str:
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def _write(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_generation_csv(trace, path) -> None:
    """One ``generation,time`` row per kept event of a :class:`GenerationTrace`."""
    _write(path, ("generation", "time"), trace.rows)


def write_times_csv(events, path) -> None:
    _write(path, ("time",), ((float(t),) for t in events))


def read_times_csv(path) -> list[float]:
    """Event times from a one-column CSV; a ``time`` header is optional."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            cell = row[0].strip()
            if cell.lower() == "time":
                continue
            out.append(float(cell))
    return out


def write_sweep_csv(rows, path) -> None:
    """Rows need ``threshold, p_hat, std_err, ess, tilted_baseline`` attributes."""
    _write(
        path,
        ("threshold", "p_hat", "std_err", "ess", "tilted_lambda0"),
        ((r.threshold, r.p_hat, r.std_err, r.ess, r.tilted_baseline) for r in rows),
    )


def write_efficiency_csv(alphas, betas, matrix, path) -> None:
    _write(
        path,
        ("alpha", "beta", "mean_acceptance_ratio"),
        ((float(a), float(b), float(matrix[i][j])) for i, a in enumerate(alphas) for j, b in enumerate(betas)),
    )


def write_network_csv(trace: NetworkTrace, path) -> None:
    _write(path, ("time", "node"), trace.events)


def write_node_summary_csv(rows: Sequence[NodeRow], path) -> None:
    _write(path, ("id", "out_degree", "in_degree", "count"), ((r.id, r.out_degree, r.in_degree, r.count) for r in rows))


def write_histogram_csv(bins, path) -> None:
    _write(path, ("bin_start", "count"), ((float(s), c) for s, c in bins))


def graph_from_dict(data: dict) -> UserGraph:
    """Build a graph from the JSON layout.

    ``{"alpha": .., "beta": .., "nodes": [{"id", "baseline", "alpha"?, "beta"?}],
    "follows": [[follower, followee], ...]}``. Per-node ``alpha``/``beta``
    fall back to the top-level values.
    """
    try:
        default_a = data.get("alpha")
        default_b = data.get("beta")
        nodes = []
        for entry in data.get("nodes", []):
            a = entry.get("alpha", default_a)
            b = entry.get("beta", default_b)
            if a is None or b is None:
                raise DomainError(f"node {entry.get('id')!r} has no alpha/beta and no default is given")
            nodes.append(NodeSpec(str(entry["id"]), float(entry["baseline"]), KernelParams(a, b)))
        edges = [(str(a), str(b)) for a, b in data.get("follows", [])]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed graph description: {exc}") from exc
    return UserGraph.from_edges(nodes, edges)


def load_graph(path) -> UserGraph:
    return graph_from_dict(json.loads(Path(path).read_text()))
