"""Seeded instance generators for every supported graph class.

Identical (kind, n, seed, params) always reproduce identical instances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .explicit import gen_bitreversal
from .graph import Digraph


GENERATOR_KINDS = (
    "path",
    "utree-random",
    "out-tree",
    "in-tree",
    "dag-gnp",
    "bitrev",
    "sp-st",
)


@dataclass
class InstanceSpec:
    kind: str
    n: int
    seed: int = 0
    params: dict = field(default_factory=dict)


def generate(spec):
    """One or two graphs described by an InstanceSpec; bitrev yields a pair."""
    if spec.kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator kind {spec.kind!r}")
    if spec.n < 1:
        raise ValueError("n must be positive")
    rng = random.Random((spec.kind, spec.n, spec.seed).__repr__())
    if spec.kind == "path":
        return [rand_path(rng, spec.n)]
    if spec.kind == "utree-random":
        return [rand_utree(rng, spec.n)]
    if spec.kind == "out-tree":
        return [rand_tree(rng, spec.n, "out-tree")]
    if spec.kind == "in-tree":
        return [rand_tree(rng, spec.n, "in-tree")]
    if spec.kind == "dag-gnp":
        p = spec.params.get("p", 0.2)
        return [rand_dag(rng, spec.n, p)]
    if spec.kind == "bitrev":
        return list(gen_bitreversal(spec.n))
    return [rand_sp_st(rng, spec.n)]


def rand_path(rng, n):
    """Permutation dipath."""
    order = list(range(n))
    rng.shuffle(order)
    return Digraph(n, [(order[i], order[i + 1]) for i in range(n - 1)], kind="path")


def rand_upath(rng, n):
    """Unoriented path: random vertex order, random arc orientations."""
    order = list(range(n))
    rng.shuffle(order)
    arcs = []
    for a, b in zip(order, order[1:]):
        arcs.append((a, b) if rng.random() < 0.5 else (b, a))
    return Digraph(n, arcs, kind="path")


def rand_tree(rng, n, kind):
    parent = [-1] + [rng.randrange(v) for v in range(1, n)]
    perm = list(range(n))
    rng.shuffle(perm)
    if kind == "out-tree":
        arcs = [(perm[parent[v]], perm[v]) for v in range(1, n)]
    else:
        arcs = [(perm[v], perm[parent[v]]) for v in range(1, n)]
    return Digraph(n, arcs, kind=kind)


def rand_utree(rng, n):
    parent = [-1] + [rng.randrange(v) for v in range(1, n)]
    perm = list(range(n))
    rng.shuffle(perm)
    arcs = []
    for v in range(1, n):
        a, b = perm[parent[v]], perm[v]
        arcs.append((a, b) if rng.random() < 0.5 else (b, a))
    return Digraph(n, arcs, kind="utree")


def rand_dag(rng, n, p=0.2):
    arcs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    perm = list(range(n))
    rng.shuffle(perm)
    return Digraph(n, [(perm[u], perm[v]) for u, v in arcs])


def rand_sp_st(rng, n):
    """Series-parallel st-digraph with a left-to-right out-arc embedding.

    Grown by arc expansion: a random arc is either subdivided or doubled
    into a parallel two-arc branch inserted beside it, so the result is
    planar with the source and sink on the outer face.
    """
    if n < 2:
        raise ValueError("sp-st needs n >= 2")
    out_order = [[1], []]
    arcs = [(0, 1)]
    nxt = 2
    while nxt < n:
        u, v = arcs[rng.randrange(len(arcs))]
        w = nxt
        nxt += 1
        pos = out_order[u].index(v)
        if rng.random() < 0.5:
            # series: u -> w -> v
            out_order[u][pos] = w
            out_order.append([v])
            arcs.remove((u, v))
            arcs.extend([(u, w), (w, v)])
        else:
            # parallel: u -> w -> v beside the old arc
            side = rng.random() < 0.5
            out_order[u].insert(pos + (1 if side else 0), w)
            out_order.append([v])
            arcs.extend([(u, w), (w, v)])
    return Digraph(n, arcs, kind="planar-st", out_order=out_order)
