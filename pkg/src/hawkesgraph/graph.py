"""Hawkes dynamics embedded in a directed follow-graph.

Each node ``i`` publishes events as a conditionally Poisson process with
intensity

    lambda_i(t) = I_i + sum over events (tau, k), tau < t, k in follows(i)
                  of alpha_i * exp(-beta_i * (t - tau))

so influence flows from the followee to the follower. A node only reacts to
its own events when it follows itself.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, GraphValidationError
from .harness import UniformStream, make_rng
from .process import KernelParams

__all__ = [
    "NodeSpec",
    "UserGraph",
    "GraphReport",
    "NetworkTrace",
    "NodeRow",
    "validate_graph",
    "node_intensity",
    "simulate_network",
    "activity_histogram",
    "node_summary",
    "NetworkState",
    "build_graph",
]

DEFAULT_KERNEL = KernelParams(0.5, 1.0)


@dataclass(frozen=True)
class NodeSpec:
    id: str
    baseline: float
    kernel: KernelParams = DEFAULT_KERNEL

    def __post_init__(self):
        if not (math.isfinite(self.baseline) and self.baseline >= 0):
            raise DomainError(f"node {self.id!r}: baseline must be finite and >= 0")


@dataclass(frozen=True)
class UserGraph:
    """Nodes plus, for each node, the ids it follows.

    The container does not reject structural problems (unknown targets,
    repeated ids); :func:`validate_graph` reports them.
    """

    nodes: tuple
    follows: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "follows", {k: tuple(v) for k, v in dict(self.follows).items()})

    @classmethod
    def from_edges(cls, nodes: Iterable[NodeSpec], edges: Iterable[tuple[str, str]] = ()) -> "UserGraph":
        """Build from ``(follower, followee)`` pairs."""
        nodes = tuple(nodes)
        follows: dict[str, list] = {n.id: [] for n in nodes}
        for a, b in edges:
            follows.setdefault(a, []).append(b)
        return cls(nodes, follows)

    @property
    def ids(self) -> list[str]:
        return [n.id for n in self.nodes]

    def node(self, node_id: str) -> NodeSpec:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(f"unknown node {node_id!r}")

    def following(self, node_id: str) -> tuple:
        return self.follows.get(node_id, ())

    def followers(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {i: [] for i in self.ids}
        for i in self.ids:
            for j in self.following(i):
                if j in out and i not in out[j]:
                    out[j].append(i)
        return out

    def edges(self) -> list[tuple[str, str]]:
        """``(follower, followee)`` pairs in node order."""
        return [(i, j) for i in self.ids for j in self.following(i)]

    def with_edge(self, follower: str, followee: str) -> "UserGraph":
        follows = {i: list(self.following(i)) for i in self.ids}
        if followee not in follows[follower]:
            follows[follower].append(followee)
        return UserGraph(self.nodes, follows)


@dataclass(frozen=True)
class GraphReport:
    closed: bool
    irreducible: bool
    issues: list

    @property
    def ok(self) -> bool:
        return not self.issues


def validate_graph(g: UserGraph) -> GraphReport:
    """Structural checks plus weak connectivity.

    A graph is irreducible when every pair of nodes is linked under the
    symmetric, transitive closure of "follows", i.e. it has a single weakly
    connected component. Graphs are closed by construction: edges can only
    name nodes of the graph, and dangling ones are reported as issues.
    """
    issues = []
    ids = g.ids
    seen = set()
    for i in ids:
        if i in seen:
            issues.append(f"duplicate node id {i!r}")
        seen.add(i)
    for i, targets in g.follows.items():
        if i not in seen:
            issues.append(f"follow list for unknown node {i!r}")
        dup = {j for j in targets if list(targets).count(j) > 1}
        for j in sorted(dup):
            issues.append(f"{i!r} follows {j!r} more than once")
        for j in targets:
            if j not in seen:
                issues.append(f"{i!r} follows unknown node {j!r}")

    adj: dict[str, set] = {i: set() for i in seen}
    for i, targets in g.follows.items():
        for j in targets:
            if i in adj and j in adj:
                adj[i].add(j)
                adj[j].add(i)
    irreducible = True
    if adj:
        start = next(iter(adj))
        reached = {start}
        stack = [start]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in reached:
                    reached.add(nb)
                    stack.append(nb)
        irreducible = len(reached) == len(adj)
    return GraphReport(closed=True, irreducible=irreducible, issues=issues)


@dataclass(frozen=True)
class NetworkTrace:
    horizon: float
    events: tuple
    per_node_counts: dict
    notes: tuple = ()
    pruned: int = 0

    def __len__(self) -> int:
        return len(self.events)

    def times(self, node_id: str | None = None) -> list[float]:
        return [t for t, k in self.events if node_id is None or k == node_id]


def node_intensity(g: UserGraph, trace: NetworkTrace, i: str, t: float) -> float:
    """Exact intensity of node ``i`` at ``t`` given the trace."""
    node = g.node(i)
    if t > trace.horizon:
        raise DomainError(f"t={t} beyond horizon {trace.horizon}")
    followed = set(g.following(i))
    a, b = node.kernel.alpha, node.kernel.beta
    return node.baseline + sum(a * math.exp(-b * (t - tau)) for tau, k in trace.events if tau < t and k in followed)


class NetworkState:
    """Running intensities of every node during a simulation.

    Each node keeps the influencing event times it still remembers and their
    summed excitation, stored as of the time of the last update. With
    ``prune_eps > 0`` an event is forgotten once its contribution drops below
    ``prune_eps``; the intensity then undershoots the exact value by at most
    ``prune_eps`` per forgotten event.
    """

    def __init__(self, g: UserGraph, prune_eps: float = 0.0):
        if prune_eps < 0:
            raise DomainError("prune_eps must be >= 0")
        self.prune_eps = prune_eps
        self.ids = g.ids
        self.baseline = {n.id: n.baseline for n in g.nodes}
        self.alpha = {n.id: n.kernel.alpha for n in g.nodes}
        self.beta = {n.id: n.kernel.beta for n in g.nodes}
        self.followers = g.followers()
        self.memory = {i: deque() for i in self.ids}
        self.excite = {i: 0.0 for i in self.ids}
        self.stamp = {i: 0.0 for i in self.ids}
        self.pruned = {i: 0 for i in self.ids}

    def _advance(self, i: str, t: float) -> None:
        if t > self.stamp[i]:
            self.excite[i] *= math.exp(-self.beta[i] * (t - self.stamp[i]))
            self.stamp[i] = t
        if self.prune_eps > 0:
            a, b = self.alpha[i], self.beta[i]
            mem = self.memory[i]
            while mem and a * math.exp(-b * (t - mem[0])) < self.prune_eps:
                self.excite[i] -= a * math.exp(-b * (t - mem.popleft()))
                self.pruned[i] += 1
            if not mem:
                self.excite[i] = 0.0
            elif self.excite[i] < 0:
                self.excite[i] = 0.0

    def intensity(self, i: str, t: float) -> float:
        """Intensity of ``i`` just after ``t`` (events at ``t`` included)."""
        self._advance(i, t)
        return self.baseline[i] + self.excite[i]

    def publish(self, k: str, t: float) -> list[str]:
        """Record an event by ``k`` at ``t``; returns the nodes it excites."""
        touched = self.followers[k]
        for i in touched:
            self._advance(i, t)
            self.excite[i] += self.alpha[i]
            self.memory[i].append(t)
        return touched

    def next_time(self, i: str, t0: float, horizon: float, stream: UniformStream) -> float:
        """Thinning draw of node ``i``'s next event after ``t0``, assuming no other events.

        Returns ``inf`` when it would fall beyond ``horizon``.
        """
        lam0 = self.baseline[i]
        beta = self.beta[i]
        start = self.intensity(i, t0) - lam0
        bound = lam0 + start
        s = t0
        while bound > 0:
            s += stream.exponential(bound)
            if s > horizon:
                break
            lam = lam0 + start * math.exp(-beta * (s - t0))
            if stream.uniform() * bound < lam:
                return s
            bound = lam
        return math.inf


def simulate_network(
    g: UserGraph,
    horizon: float,
    seed: int,
    prune_eps: float = 0.0,
    mode: str = "incremental",
) -> NetworkTrace:
    """Next-event simulation of the whole network on ``[0, horizon]``.

    Every node holds a candidate time for its next event, drawn by thinning
    against its current intensity. The earliest candidate is committed. In
    ``"strict"`` mode every candidate is then redrawn; in ``"incremental"``
    mode only the publisher and its followers are, which is valid because a
    node whose intensity did not change keeps a candidate with the right
    conditional law.
    """
    if mode not in ("incremental", "strict"):
        raise DomainError(f"unknown mode {mode!r}")
    if not horizon > 0:
        raise DomainError("horizon must be > 0")
    report = validate_graph(g)
    if report.issues:
        raise GraphValidationError(report.issues)

    state = NetworkState(g, prune_eps)
    stream = UniformStream(make_rng(seed))
    ids = state.ids
    cand = {i: state.next_time(i, 0.0, horizon, stream) for i in ids}
    events = []
    counts = {i: 0 for i in ids}
    notes = []

    while ids:
        # ties broken by node order
        k = min(ids, key=lambda i: cand[i])
        t = cand[k]
        if t == math.inf:
            break
        tied = [i for i in ids if cand[i] == t]
        if len(tied) > 1:
            notes.append(f"tie at t={t!r} between {tied}; kept {k!r}")
        events.append((t, k))
        counts[k] += 1
        touched = state.publish(k, t)
        if mode == "strict":
            refresh = ids
        else:
            refresh = [k] + [i for i in touched if i != k]
            # a tied loser would otherwise fire at the same instant
            refresh += [i for i in tied if i != k and i not in refresh]
        for i in refresh:
            cand[i] = state.next_time(i, t, horizon, stream)

    return NetworkTrace(
        horizon=float(horizon),
        events=tuple(events),
        per_node_counts=counts,
        notes=tuple(notes),
        pruned=sum(state.pruned.values()),
    )


def activity_histogram(trace: NetworkTrace, bin_width: float) -> list[tuple[float, int]]:
    """Event counts per half-open bin ``[k*w, (k+1)*w)`` covering ``[0, T]``.

    An event exactly at ``T`` lands in the last bin.
    """
    if not bin_width > 0:
        raise DomainError("bin_width must be > 0")
    nbins = max(1, math.ceil(trace.horizon / bin_width - 1e-9))
    counts = [0] * nbins
    for t, _ in trace.events:
        counts[min(int(t // bin_width), nbins - 1)] += 1
    return [(k * bin_width, c) for k, c in enumerate(counts)]


@dataclass(frozen=True)
class NodeRow:
    id: str
    out_degree: int
    in_degree: int
    count: int


def node_summary(g: UserGraph, trace: NetworkTrace) -> list[NodeRow]:
    followers = g.followers()
    return [
        NodeRow(i, len(set(g.following(i))), len(followers[i]), trace.per_node_counts.get(i, 0))
        for i in g.ids
    ]


def build_graph(
    nodes: Sequence[tuple],
    edges: Iterable[tuple[str, str]] = (),
    kernel: KernelParams = DEFAULT_KERNEL,
) -> UserGraph:
    """Shorthand: ``nodes`` are ``(id, baseline)`` or ``(id, baseline, alpha, beta)``."""
    specs = []
    for entry in nodes:
        if len(entry) == 2:
            specs.append(NodeSpec(entry[0], entry[1], kernel))
        else:
            specs.append(NodeSpec(entry[0], entry[1], KernelParams(entry[2], entry[3])))
    return UserGraph.from_edges(specs, edges)
