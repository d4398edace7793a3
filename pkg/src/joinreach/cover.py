"""Vertex-disjoint dipath covers of DAGs and the per-vertex from-rank
tables the path-cover join constructions consume."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import CyclicGraphError, topo_order


@dataclass
class PathCover:
    """Vertex-disjoint dipaths covering a DAG; consecutive pairs are arcs."""

    paths: list
    path_of: list  # vertex -> (path index, rank within path)

    @property
    def kappa(self):
        return len(self.paths)


def min_path_cover(g, greedy=False):
    """Dipath cover of an acyclic digraph.

    The default cover is minimum: kappa = n - |maximum matching| on the
    split bipartite graph, found by augmenting paths. With greedy=True a
    longest-path-peeling cover is returned instead (faster on large
    inputs, possibly more paths; every consumer is cover-agnostic).
    """
    order = topo_order(g)
    if order is None:
        raise CyclicGraphError("path cover requires an acyclic digraph")
    n = g.n
    if greedy:
        return _greedy_cover(g, order)
    match_succ = [-1] * n  # chosen successor of each vertex
    match_pred = [-1] * n

    def augment(u, seen):
        for v in g.out[u]:
            if seen[v]:
                continue
            seen[v] = True
            if match_pred[v] == -1 or augment(match_pred[v], seen):
                match_pred[v] = u
                match_succ[u] = v
                return True
        return False

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 2 * n + 100))
    try:
        for u in range(n):
            augment(u, [False] * n)
    finally:
        sys.setrecursionlimit(old_limit)

    paths = []
    for v in range(n):
        if match_pred[v] == -1:
            path = [v]
            while match_succ[path[-1]] != -1:
                path.append(match_succ[path[-1]])
            paths.append(path)
    return _finish(n, paths)


def _greedy_cover(g, order):
    n = g.n
    remaining = [True] * n
    paths = []
    while any(remaining):
        best_len = [1] * n
        best_next = [-1] * n
        for v in reversed(order):
            if not remaining[v]:
                continue
            for w in g.out[v]:
                if remaining[w] and best_len[w] + 1 > best_len[v]:
                    best_len[v] = best_len[w] + 1
                    best_next[v] = w
        start = max(
            (v for v in range(n) if remaining[v]),
            key=lambda v: (best_len[v], -v),
        )
        path = [start]
        while best_next[path[-1]] != -1:
            path.append(best_next[path[-1]])
        for v in path:
            remaining[v] = False
        paths.append(path)
    return _finish(n, paths)


def _finish(n, paths):
    paths.sort(key=lambda p: p[0])
    path_of = [None] * n
    for pid, path in enumerate(paths):
        for rank, v in enumerate(path):
            path_of[v] = (pid, rank)
    assert all(po is not None for po in path_of)
    return PathCover(paths, path_of)


@dataclass
class FromRanks:
    """from_[v][i]: highest rank on path i of a vertex reaching v, or None."""

    table: list

    def get(self, v, i):
        return self.table[v][i]


def format_cover(pc):
    """Cover file format: kappa, then one vertex-sequence line per path."""
    lines = [str(pc.kappa)]
    lines.extend(" ".join(str(v) for v in path) for path in pc.paths)
    return "\n".join(lines) + "\n"


def parse_cover(text):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    kappa = int(lines[0])
    paths = [[int(v) for v in ln.split()] for ln in lines[1 : 1 + kappa]]
    n = sum(len(p) for p in paths)
    path_of = [None] * n
    for pid, path in enumerate(paths):
        for rank, v in enumerate(path):
            path_of[v] = (pid, rank)
    return PathCover(paths, path_of)


def from_ranks(g, pc):
    """Max-propagating pass in topological order.

    For each vertex and cover path, the highest rank on that path among
    the vertices that reach it; a vertex on a path trivially reaches
    itself. Values are monotone along arcs.
    """
    order = topo_order(g)
    if order is None:
        raise CyclicGraphError("from-ranks require an acyclic digraph")
    kappa = pc.kappa
    table = [[None] * kappa for _ in range(g.n)]
    for v in order:
        pid, rank = pc.path_of[v]
        row = table[v]
        if row[pid] is None or row[pid] < rank:
            row[pid] = rank
        for w in g.out[v]:
            wrow = table[w]
            for i in range(kappa):
                x = row[i]
                if x is not None and (wrow[i] is None or wrow[i] < x):
                    wrow[i] = x
    return FromRanks(table)
