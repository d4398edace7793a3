import math
import random

import pytest

from joinreach.explicit import (
    build_pathcover,
    build_tree_path,
    build_two_paths,
    build_two_trees,
    build_unoriented_trees,
    format_join,
    gen_bitreversal,
    parse_join,
    split_unoriented_path,
    verify_join_graph,
    JoinGraph,
)
from joinreach.cover import min_path_cover
from joinreach.graph import Digraph, GraphClassError, dipath_of, transitive_closure


def rand_perm_path(rng, n):
    order = list(range(n))
    rng.shuffle(order)
    return dipath_of(order)


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
    arcs = []
    for v in range(1, n):
        p = rng.randrange(v)
        arcs.append((p, v) if rng.random() < 0.5 else (v, p))
    return Digraph(n, arcs, kind="utree")


def rand_dag(rng, n, p=0.2):
    arcs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    perm = list(range(n))
    rng.shuffle(perm)
    return Digraph(n, [(perm[u], perm[v]) for u, v in arcs])


def logceil(n):
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def test_two_paths_identical_and_reversed():
    rng = random.Random(1)
    p1 = rand_perm_path(rng, 12)
    jg = build_two_paths(p1, p1)
    assert verify_join_graph(jg, p1, p1).ok
    p2 = Digraph(12, [(v, u) for u, v in p1.arcs], kind="path")
    jg2 = build_two_paths(p1, p2)
    assert verify_join_graph(jg2, p1, p2).ok
    # opposite orders relate nothing beyond reflexivity
    rows = transitive_closure(jg2.graph)
    for a in range(12):
        for b in range(12):
            if a != b:
                assert not rows.reach(a, b)


def test_two_paths_bitrev_matches_dominance_scan():
    p1, p2 = gen_bitreversal(16)
    jg = build_two_paths(p1, p2)
    assert verify_join_graph(jg, p1, p2).ok
    m = transitive_closure(jg.graph)
    from joinreach.graph import path_order

    r1 = {v: r for r, v in enumerate(path_order(p1))}
    r2 = {v: r for r, v in enumerate(path_order(p2))}
    for a in range(16):
        for b in range(16):
            want = r1[a] <= r1[b] and r2[a] <= r2[b]
            assert m.reach(a, b) == want


def test_two_paths_size_bound_and_random_instances():
    rng = random.Random(2)
    for _ in range(40):
        n = rng.randrange(1, 65)
        p1 = rand_perm_path(rng, n)
        p2 = rand_perm_path(rng, n)
        jg = build_two_paths(p1, p2)
        assert verify_join_graph(jg, p1, p2).ok
        assert jg.size <= 3 * n * (logceil(n) + 1)


def test_two_paths_steiner_tags_stay_in_their_slab():
    n = 48
    rng = random.Random(33)
    p1 = rand_perm_path(rng, n)
    p2 = rand_perm_path(rng, n)
    jg = build_two_paths(p1, p2)
    # tag format: two-paths;d<depth>;x1=<lo>..<hi>; the slab at depth d is
    # a ceil-halving of [0, n), so its width is at most ceil(n / 2^d)
    assert jg.steiner_count > 0
    for tag in jg.steiner_tags:
        parts = tag.split(";")
        assert parts[0] == "two-paths"
        depth = int(parts[1][1:])
        lo, hi = (int(x) for x in parts[2].split("=")[1].split(".."))
        assert 0 <= lo < hi <= n
        assert hi - lo <= math.ceil(n / 2 ** depth)


def test_split_oriented_path_is_identity():
    p = dipath_of([2, 0, 1, 3])
    runs = split_unoriented_path(p)
    assert runs == [[2, 0, 1, 3]]


def test_split_alternating_path():
    # 0-1-2-3-4 with arcs 0->1, 2->1, 2->3, 4->3
    p = Digraph(5, [(0, 1), (2, 1), (2, 3), (4, 3)], kind="path")
    runs = split_unoriented_path(p)
    assert sorted(map(tuple, runs)) == [(0, 1), (2, 1), (2, 3), (4, 3)]


def test_split_random_paths_cover_and_multiplicity():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randrange(2, 51)
        seq = list(range(n))
        rng.shuffle(seq)
        arcs = []
        for a, b in zip(seq, seq[1:]):
            arcs.append((a, b) if rng.random() < 0.5 else (b, a))
        p = Digraph(n, arcs, kind="path")
        runs = split_unoriented_path(p)
        counts = {}
        arcset = set(p.arcs)
        for run in runs:
            for v in run:
                counts[v] = counts.get(v, 0) + 1
            for a, b in zip(run, run[1:]):
                assert (a, b) in arcset
        assert max(counts.values()) <= 2
        assert set(counts) == set(range(n))
        # every arc appears in exactly one run
        run_arcs = [(a, b) for run in runs for a, b in zip(run, run[1:])]
        assert sorted(run_arcs) == sorted(arcset)


def test_bitreversal_values():
    p1, p2 = gen_bitreversal(16)
    from joinreach.graph import path_order

    r2 = {v: r for r, v in enumerate(path_order(p2))}
    assert r2[1] == 8  # 0001 reversed over 4 bits is 1000
    assert r2[8] == 1
    # one-bit-difference dominated pairs number (n/2) * log2(n)
    r1 = {v: r for r, v in enumerate(path_order(p1))}
    pairs = 0
    for a in range(16):
        for b in range(16):
            if a == b:
                continue
            diff = r1[a] ^ r1[b]
            if diff and not (diff & (diff - 1)) and r1[a] < r1[b]:
                pairs += 1
    assert pairs == 32
    p1, p2 = gen_bitreversal(2)
    assert path_order(p2) == [0, 1]
    with pytest.raises(ValueError):
        gen_bitreversal(12)


def test_tree_path_chain_equals_order():
    chain = Digraph(6, [(i, i + 1) for i in range(5)], kind="out-tree")
    p = dipath_of(list(range(6)))
    jg = build_tree_path(chain, p)
    assert verify_join_graph(jg, chain, p).ok
    m = transitive_closure(jg.graph)
    for a in range(6):
        for b in range(6):
            assert m.reach(a, b) == (a <= b)


def test_tree_path_star_with_root_last():
    n = 6
    star = Digraph(n, [(0, v) for v in range(1, n)], kind="out-tree")
    p = dipath_of(list(range(1, n)) + [0])  # root has minimal height
    jg = build_tree_path(star, p)
    assert verify_join_graph(jg, star, p).ok
    m = transitive_closure(jg.graph)
    for a in range(n):
        for b in range(n):
            assert m.reach(a, b) == (a == b)


def test_tree_path_random_instances_both_orientations():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randrange(2, 49)
        kind = "out-tree" if rng.random() < 0.5 else "in-tree"
        t = rand_tree(rng, n, kind)
        p = rand_perm_path(rng, n)
        jg = build_tree_path(t, p)
        assert verify_join_graph(jg, t, p).ok
        assert jg.size <= 3 * n * (logceil(n) + 1)


def test_two_trees_same_tree_is_ancestry():
    rng = random.Random(7)
    t = rand_tree(rng, 20, "out-tree")
    jg = build_two_trees(t, t)
    assert verify_join_graph(jg, t, t).ok


def test_two_trees_chain_second_matches_tree_path_relation():
    rng = random.Random(9)
    t = rand_tree(rng, 16, "out-tree")
    order = list(range(16))
    rng.shuffle(order)
    chain = Digraph(16, [(order[i], order[i + 1]) for i in range(15)], kind="out-tree")
    p = dipath_of(order)
    jg_tree = build_two_trees(t, chain)
    jg_path = build_tree_path(t, p)
    assert verify_join_graph(jg_tree, t, chain).ok
    m1 = transitive_closure(jg_tree.graph)
    m2 = transitive_closure(jg_path.graph)
    for a in range(16):
        for b in range(16):
            assert m1.reach(a, b) == m2.reach(a, b)


def test_two_trees_all_orientation_mixes():
    rng = random.Random(11)
    for _ in range(24):
        n = rng.randrange(2, 49)
        k1 = "out-tree" if rng.random() < 0.5 else "in-tree"
        k2 = "out-tree" if rng.random() < 0.5 else "in-tree"
        t1 = rand_tree(rng, n, k1)
        t2 = rand_tree(rng, n, k2)
        jg = build_two_trees(t1, t2)
        assert verify_join_graph(jg, t1, t2).ok, (n, k1, k2)
        assert jg.size <= 4 * n * (logceil(n) + 1) ** 2


def test_unoriented_trees_delegates_when_oriented():
    rng = random.Random(13)
    t1 = rand_tree(rng, 14, "in-tree")
    t2 = rand_tree(rng, 14, "out-tree")
    u1 = Digraph(14, t1.arcs, kind="utree")
    u2 = Digraph(14, t2.arcs, kind="utree")
    jg = build_unoriented_trees(u1, u2)
    assert verify_join_graph(jg, u1, u2).ok


def test_unoriented_trees_random_instances():
    rng = random.Random(15)
    for _ in range(25):
        n = rng.randrange(2, 41)
        g1 = rand_utree(rng, n)
        g2 = rand_utree(rng, n)
        jg = build_unoriented_trees(g1, g2)
        assert verify_join_graph(jg, g1, g2).ok, n


def test_pathcover_dipath_reduces_to_two_paths():
    rng = random.Random(17)
    p1 = rand_perm_path(rng, 20)
    p2 = rand_perm_path(rng, 20)
    g1 = Digraph(20, p1.arcs)  # same arcs, digraph kind: kappa = 1
    jg = build_pathcover(g1, p2)
    assert verify_join_graph(jg, g1, p2).ok
    mm = transitive_closure(jg.graph)
    ref = transitive_closure(build_two_paths(p1, p2).graph)
    for a in range(20):
        for b in range(20):
            assert mm.reach(a, b) == ref.reach(a, b)


def test_pathcover_antichain_is_reflexive_only():
    g1 = Digraph(10, [])
    p2 = dipath_of(list(range(10)))
    jg = build_pathcover(g1, p2)
    assert verify_join_graph(jg, g1, p2).ok
    m = transitive_closure(jg.graph)
    for a in range(10):
        for b in range(10):
            assert m.reach(a, b) == (a == b)


def test_pathcover_random_dag_and_path():
    rng = random.Random(19)
    for _ in range(20):
        n = rng.randrange(2, 41)
        g1 = rand_dag(rng, n, 0.25)
        p2 = rand_perm_path(rng, n)
        jg = build_pathcover(g1, p2)
        assert verify_join_graph(jg, g1, p2).ok


def test_pathcover_two_dags():
    rng = random.Random(21)
    for _ in range(15):
        n = rng.randrange(2, 41)
        g1 = rand_dag(rng, n, 0.3)
        g2 = rand_dag(rng, n, 0.3)
        jg = build_pathcover(g1, g2)
        assert verify_join_graph(jg, g1, g2).ok
        k1 = min_path_cover(g1).kappa
        k2 = min_path_cover(g2).kappa
        bound = 4 * (k1 * k2 + 1) * n * (logceil(n) + 2)
        assert jg.size <= bound


def test_pathcover_rejects_cycles():
    cyc = Digraph(3, [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(Exception):
        build_pathcover(cyc, dipath_of([0, 1, 2]))


def test_verify_detects_mutations():
    chain = dipath_of([0, 1, 2, 3])
    jg = build_two_paths(chain, chain)
    assert verify_join_graph(jg, chain, chain).ok
    # drop one arc on the unique witness path 0 -> 1
    g = jg.graph
    needed = None
    for drop in g.arcs:
        g2 = Digraph(g.n, [a for a in g.arcs if a != drop])
        rep = verify_join_graph(JoinGraph(g2, jg.n_original, jg.steiner_tags), chain, chain)
        if not rep.ok:
            needed = rep
            break
    assert needed is not None
    a, b, kind = needed.first_violation
    assert kind == "missing"
    # spurious arc: join graph claiming 3 reaches 0
    g3 = Digraph(g.n, list(g.arcs) + [(3, 0)])
    rep = verify_join_graph(JoinGraph(g3, jg.n_original, jg.steiner_tags), chain, chain)
    assert not rep.ok
    assert rep.first_violation[2] == "spurious"


def test_join_format_roundtrip():
    p1, p2 = gen_bitreversal(8)
    jg = build_two_paths(p1, p2)
    jg2 = parse_join(format_join(jg))
    assert jg2.n_original == jg.n_original
    assert jg2.graph.arcs == jg.graph.arcs
    assert jg2.steiner_tags == jg.steiner_tags


def test_builders_reject_mismatched_sizes():
    with pytest.raises(ValueError):
        build_two_paths(dipath_of([0, 1]), dipath_of([0, 1, 2]))
    with pytest.raises(GraphClassError):
        build_tree_path(Digraph(3, [(0, 1), (0, 2)]), dipath_of([0, 1, 2]))
