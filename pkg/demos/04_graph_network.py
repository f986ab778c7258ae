"""A small follower network where posts excite the people who follow you.

Loads a five-user graph, simulates a day of activity, and prints who
posted most plus a coarse activity histogram.
"""

from pathlib import Path

from hawkesgraph import activity_histogram, node_summary, simulate_network, validate_graph
from hawkesgraph.io import load_graph

graph = load_graph(Path(__file__).parent / "data" / "five_users.json")
report = validate_graph(graph)
print(f"closed={report.closed} irreducible={report.irreducible} issues={report.issues}")

trace = simulate_network(graph, horizon=24.0, seed=11)
print(f"{len(trace)} posts in 24 hours")
for row in sorted(node_summary(graph, trace), key=lambda r: -r.count):
    print(f"  {row.id:<5} posts={row.count:<4} follows={row.out_degree} followers={row.in_degree}")

for start, n in activity_histogram(trace, 4.0):
    print(f"  [{start:4.0f}h, {start + 4:4.0f}h)  {'#' * n}")
