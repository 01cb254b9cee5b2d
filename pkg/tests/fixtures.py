"""Shared fixture builders (plain functions so tests and the acceptance runner can both use them)."""

from __future__ import annotations

import itertools
import random

from confpersist.complex import Snapshot
from confpersist.metric import WeightedGraph, cycle_graph, shortest_path_metric

# minimal 6-vertex triangulation of the real projective plane
RP2_TRIANGLES = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5),
]


def closure(top_simplices) -> set[tuple]:
    out = set()
    for s in top_simplices:
        s = tuple(sorted(s))
        for size in range(1, len(s) + 1):
            out.update(itertools.combinations(s, size))
    return out


def rp2_cells():
    cells = closure(RP2_TRIANGLES)
    return [sorted(c for c in cells if len(c) == q + 1) for q in range(3)]


def rp2_snapshot(r: float | None = 0.0) -> Snapshot:
    return Snapshot(closure(RP2_TRIANGLES), r)


def cycle_space(n: int):
    return shortest_path_metric(cycle_graph(n))


def random_weighted_graph(seed: int, max_vertices: int = 12, max_weight: int = 4, p: float = 0.35) -> WeightedGraph:
    rng = random.Random(seed)
    n = rng.randint(3, max_vertices)
    vertices = [f"v{i:02d}" for i in range(n)]
    edges = []
    # spanning path keeps the graph connected, extra edges add cycles
    order = vertices[:]
    rng.shuffle(order)
    for u, v in zip(order, order[1:]):
        edges.append((u, v, rng.randint(1, max_weight)))
    have = {frozenset(e[:2]) for e in edges}
    for u, v in itertools.combinations(vertices, 2):
        if frozenset((u, v)) not in have and rng.random() < p:
            edges.append((u, v, rng.randint(1, max_weight)))
    return WeightedGraph.from_edges(vertices, edges)
