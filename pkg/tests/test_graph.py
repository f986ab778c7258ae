import math

import numpy as np
import pytest

from hawkesgraph.errors import DomainError, GraphValidationError
from hawkesgraph.graph import (
    NetworkState,
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
from hawkesgraph.harness import derive_trial_seed, ks_two_sample, summarize
from hawkesgraph.process import EventSequence, HawkesParams, KernelParams, intensity

FIVE = build_graph(
    [("a", 0.3), ("b", 0.2), ("c", 0.4), ("d", 0.1), ("e", 0.3)],
    [("a", "b"), ("b", "c"), ("c", "a"), ("d", "a"), ("d", "c"), ("e", "d"), ("b", "e"), ("e", "e")],
    KernelParams(0.4, 1.0),
)


def trace_of(events, horizon, ids):
    counts = {i: 0 for i in ids}
    for _, k in events:
        counts[k] += 1
    return NetworkTrace(horizon, tuple(events), counts)


def run_counts(g, T, n, master, node=None, **kw):
    out = []
    for i in range(n):
        tr = simulate_network(g, T, derive_trial_seed(master, i), **kw)
        out.append(len(tr) if node is None else tr.per_node_counts[node])
    return np.array(out)


class TestValidate:
    def test_single_node(self):
        r = validate_graph(build_graph([("a", 1.0)]))
        assert r.irreducible and r.closed and r.issues == []

    def test_two_unlinked(self):
        assert not validate_graph(build_graph([("a", 1.0), ("b", 1.0)])).irreducible

    def test_one_edge_links_both(self):
        assert validate_graph(build_graph([("a", 1.0), ("b", 1.0)], [("a", "b")])).irreducible

    def test_transitive(self):
        g = build_graph([("a", 1), ("b", 1), ("c", 1)], [("a", "b"), ("c", "b")])
        assert validate_graph(g).irreducible

    def test_issues(self):
        g = UserGraph(
            (NodeSpec("a", 1.0), NodeSpec("a", 2.0), NodeSpec("b", 1.0)),
            {"a": ("b", "b", "zz"), "ghost": ("a",)},
        )
        issues = validate_graph(g).issues
        assert any("duplicate node id" in s for s in issues)
        assert any("more than once" in s for s in issues)
        assert any("unknown node 'zz'" in s for s in issues)
        assert any("'ghost'" in s for s in issues)

    def test_self_loop_allowed(self):
        assert validate_graph(build_graph([("a", 1.0)], [("a", "a")])).issues == []

    def test_empty(self):
        r = validate_graph(UserGraph(()))
        assert r.irreducible and r.issues == []


class TestNodeIntensity:
    def test_no_followees_is_constant(self):
        g = build_graph([("a", 0.7), ("b", 1.0)], [("b", "a")])
        tr = trace_of([(1.0, "a"), (2.0, "b")], 5.0, ["a", "b"])
        assert [node_intensity(g, tr, "a", t) for t in (0.0, 1.5, 4.0)] == [0.7] * 3

    def test_follower(self):
        g = build_graph([("A", 1.0, 1, 1), ("B", 0.5, 1, 1)], [("B", "A")])
        tr = trace_of([(1.0, "A")], 5.0, ["A", "B"])
        assert node_intensity(g, tr, "B", 2.0) == pytest.approx(0.5 + math.exp(-1), abs=1e-12)
        assert node_intensity(g, tr, "B", 2.0) == pytest.approx(0.867879441, abs=1e-9)

    def test_self_loop_equals_univariate(self):
        g = build_graph([("a", 1.0, 1, 1)], [("a", "a")])
        tr = trace_of([(1.0, "a")], 5.0, ["a"])
        uni = intensity(HawkesParams.from_values(1, 1, 1), EventSequence(5.0, [1.0]), 2.0)
        assert node_intensity(g, tr, "a", 2.0) == pytest.approx(uni, abs=1e-15)
        assert uni == pytest.approx(1.367879441, abs=1e-9)

    def test_per_node_kernel(self):
        g = build_graph([("A", 1.0, 1, 1), ("B", 0.0, 3, 2)], [("B", "A")])
        tr = trace_of([(1.0, "A")], 5.0, ["A", "B"])
        assert node_intensity(g, tr, "B", 1.5) == pytest.approx(3 * math.exp(-1.0))

    def test_unknown_node(self):
        with pytest.raises(KeyError):
            node_intensity(FIVE, trace_of([], 1.0, FIVE.ids), "zz", 0.5)


class TestSimulate:
    def test_empty_graph(self):
        tr = simulate_network(UserGraph(()), 10.0, 1)
        assert len(tr) == 0

    def test_refuses_invalid(self):
        g = UserGraph((NodeSpec("a", 1.0),), {"a": ("b",)})
        with pytest.raises(GraphValidationError):
            simulate_network(g, 10.0, 1)

    def test_bad_mode(self):
        with pytest.raises(DomainError):
            simulate_network(FIVE, 10.0, 1, mode="lazy")

    @pytest.mark.parametrize("mode", ["incremental", "strict"])
    def test_deterministic_and_sorted(self, mode):
        a = simulate_network(FIVE, 20.0, 42, mode=mode)
        assert a == simulate_network(FIVE, 20.0, 42, mode=mode)
        times = [t for t, _ in a.events]
        assert all(x < y for x, y in zip(times, times[1:]))
        assert all(0 <= t <= 20.0 for t in times)
        assert sum(a.per_node_counts.values()) == len(a)

    @pytest.mark.slow
    def test_independent_nodes(self):
        g = build_graph([("a", 1.0), ("b", 1.0)])
        c = run_counts(g, 10.0, 10_000, 3)
        s = summarize(c)
        assert abs(s.mean - 20) < 3 * s.std_err

    @pytest.mark.slow
    def test_self_loop_mean(self):
        g = build_graph([("a", 1.0, 1, 2)], [("a", "a")])
        s = summarize(run_counts(g, 10.0, 10_000, 4))
        assert abs(s.mean - 19.0000454) < 3 * s.std_err

    @pytest.mark.slow
    def test_chain_mean(self):
        g = build_graph([("A", 1.0, 1, 1), ("B", 0.0, 1, 1)], [("B", "A")])
        target = 1 * 1.0 * (10 - (1 - math.exp(-10)) / 1)
        assert target == pytest.approx(9.0000454, abs=1e-7)
        s = summarize(run_counts(g, 10.0, 10_000, 5, node="B"))
        assert abs(s.mean - target) < 3 * s.std_err

    @pytest.mark.slow
    def test_modes_agree_in_law(self):
        strict = run_counts(FIVE, 10.0, 3000, 12, mode="strict")
        incr = run_counts(FIVE, 10.0, 3000, 13, mode="incremental")
        assert ks_two_sample(strict, incr).pvalue > 0.01

    @pytest.mark.slow
    def test_edge_addition_never_hurts(self):
        base = FIVE
        plus = FIVE.with_edge("a", "c")
        n = 10_000
        diff = run_counts(plus, 10.0, n, 6, node="a") - run_counts(base, 10.0, n, 6, node="a")
        s = summarize(diff)
        assert s.mean >= -3 * s.std_err


class TestPruning:
    def test_bias_bound(self):
        eps = 1e-2
        tr = simulate_network(FIVE, 30.0, 77, prune_eps=eps)
        state = NetworkState(FIVE, prune_eps=eps)
        rng = np.random.default_rng(0)
        checked = 0
        for (t, k), nxt in zip(tr.events, list(tr.events[1:]) + [(30.0, None)]):
            state.publish(k, t)
            q = t + (nxt[0] - t) * rng.uniform(0.1, 0.9)
            for i in FIVE.ids:
                exact = node_intensity(FIVE, tr, i, q)
                approx = state.intensity(i, q)
                assert approx <= exact + 1e-12
                assert exact - approx <= eps * state.pruned[i] + 1e-12
                checked += 1
        assert checked and sum(state.pruned.values()) > 0
        assert tr.pruned > 0

    def test_zero_eps_is_exact(self):
        tr = simulate_network(FIVE, 10.0, 5)
        state = NetworkState(FIVE)
        for t, k in tr.events:
            state.publish(k, t)
        for i in FIVE.ids:
            assert state.intensity(i, 10.0) == pytest.approx(node_intensity(FIVE, tr, i, 10.0), rel=1e-12)

    def test_negative_eps(self):
        with pytest.raises(DomainError):
            NetworkState(FIVE, -1.0)


class TestHistogram:
    def test_example(self):
        tr = trace_of([(0.5, "a"), (1.5, "a"), (1.7, "a")], 2.0, ["a"])
        assert activity_histogram(tr, 1.0) == [(0.0, 1), (1.0, 2)]

    def test_empty(self):
        assert activity_histogram(trace_of([], 3.0, []), 1.0) == [(0.0, 0), (1.0, 0), (2.0, 0)]

    def test_single_bin(self):
        tr = simulate_network(FIVE, 10.0, 3)
        assert activity_histogram(tr, 10.0) == [(0.0, len(tr))]

    def test_event_at_horizon(self):
        tr = trace_of([(2.0, "a")], 2.0, ["a"])
        assert activity_histogram(tr, 1.0) == [(0.0, 0), (1.0, 1)]

    def test_bad_width(self):
        with pytest.raises(DomainError):
            activity_histogram(trace_of([], 1.0, []), 0.0)


class TestSummary:
    def test_isolated(self):
        g = build_graph([("a", 1.0)])
        row = node_summary(g, trace_of([], 1.0, ["a"]))[0]
        assert (row.out_degree, row.in_degree) == (0, 0)

    def test_chain(self):
        g = build_graph([("A", 1.0), ("B", 1.0)], [("B", "A")])
        rows = {r.id: r for r in node_summary(g, trace_of([], 1.0, ["A", "B"]))}
        assert (rows["A"].out_degree, rows["A"].in_degree) == (0, 1)
        assert (rows["B"].out_degree, rows["B"].in_degree) == (1, 0)

    def test_conservation(self):
        tr = simulate_network(FIVE, 15.0, 8)
        assert sum(r.count for r in node_summary(FIVE, tr)) == len(tr)
