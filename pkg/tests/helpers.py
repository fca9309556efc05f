"""Shared graph builders and independent oracles for the test suite.

The BFS enumerator and the dense eigenvalue oracle are deliberately
separate implementations from the package's DFS/power-iteration code:
they provide the second opinion the cross-checks rely on.
"""

import math
from collections import deque

import numpy as np

from entrograph import MetricGraph


def rose(k, length=1.0):
    return MetricGraph.from_edges(["v"], [("v", "v", length)] * k)


def theta(lengths=(1.0, 1.0, 1.0)):
    return MetricGraph.from_edges(["x", "y"],
                                  [("x", "y", l) for l in lengths])


def cycle(n, lengths=None):
    if lengths is None:
        lengths = [1.0] * n
    names = [f"c{i}" for i in range(n)]
    edges = [(names[i], names[(i + 1) % n], lengths[i]) for i in range(n)]
    return MetricGraph.from_edges(names, edges)


def c4():
    return MetricGraph.from_edges(
        list("abcd"),
        [("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0), ("d", "a", 1.0)])


def complete4(length=1.0):
    names = list("abcd")
    edges = [(u, v, length) for i, u in enumerate(names)
             for v in names[i + 1:]]
    return MetricGraph.from_edges(names, edges)


def segment(length=1.0):
    return MetricGraph.from_edges(["x", "y"], [("x", "y", length)])


def path3(l1=1.0, l2=1.0):
    return MetricGraph.from_edges(["x", "y", "z"],
                                  [("x", "y", l1), ("y", "z", l2)])


GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def dumbbell(l1=1.0, l2=GOLDEN, bar=(1.0, 1.0)):
    """Loops at a and b joined by the 2-edge path a-m-b; a, b are
    non-adjacent and the two loop lengths have a Diophantine ratio by
    default (the golden ratio is badly approximable)."""
    return MetricGraph.from_edges(
        ["a", "m", "b"],
        [("a", "a", l1), ("b", "b", l2), ("a", "m", bar[0]),
         ("m", "b", bar[1])])


def bfs_enumerate(graph, kind, r_max, mode="nb", x=None, y=None, v=None):
    """Breadth-first enumeration oracle; returns sorted lengths < r_max.

    kind: "from" | "xy" | "cycles" | "primitive".  Scans graph.darts
    directly instead of using the package's successor tables.
    """
    darts = graph.darts
    base = v if kind in ("cycles", "primitive") else x
    out = []
    queue = deque((d.id, d.length) for d in darts
                  if d.tail == base and d.length < r_max)
    while queue:
        did, cum = queue.popleft()
        head = darts[did].head
        if kind == "from":
            out.append(cum)
        elif kind == "xy" and head == y:
            out.append(cum)
        elif kind in ("cycles", "primitive") and head == base:
            out.append(cum)
        if kind == "primitive" and head == base:
            continue
        for d2 in darts:
            if d2.tail != head:
                continue
            if mode == "nb" and d2.id == darts[did].reverse:
                continue
            if cum + d2.length < r_max:
                queue.append((d2.id, cum + d2.length))
    return sorted(out)


def eig_rho(matrix):
    """Spectral radius via dense eigenvalues (independent of power
    iteration)."""
    m = np.asarray(matrix, dtype=float)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def nonadjacent_pair(graph):
    """First non-adjacent vertex pair inside one component, or None."""
    from entrograph import components
    for comp, _ in components(graph):
        verts = sorted(comp.vertex_set)
        for i, a in enumerate(verts):
            nbrs = {comp.darts[d].head for d in comp.out_darts(a)}
            for b in verts[i + 1:]:
                if b not in nbrs:
                    return a, b
    return None
