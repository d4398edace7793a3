"""Implicit join-reachability indexes.

Each builder returns a JRIndex whose query(b) reports exactly the
vertices that reach b in both input graphs, b included. Rooted inputs
get a single geometric structure; unoriented trees get one structure per
layer-pair, and a query touches only the two decomposition graphs that
can hold its predecessors. Probe counts and the list of pair structures
touched are exposed for output-sensitivity checks.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .cover import from_ranks, min_path_cover, PathCover
from .geom import CartesianTree, HSegment, RangeTree2D, SegRayIndex
from .graph import (
    CyclicGraphError,
    Digraph,
    GraphClassError,
    contracted_intervals,
    dfs_intervals,
    layer_decompose,
    path_order,
    topo_order,
    transitive_closure,
)
from .hpd import hpd_two_trees_build, hpd_two_trees_report
from .explicit import split_unoriented_path


class JRIndex:
    """Facade over the per-class implicit structures."""

    def __init__(self, variant, n, impl):
        self.variant = variant
        self.n = n
        self._impl = impl

    def query(self, b):
        return self.query_counted(b)[0]

    def query_counted(self, b):
        """(sorted predecessor list, structure probes, pair-structures touched)."""
        if not (0 <= b < self.n):
            raise ValueError(f"query vertex {b} out of range")
        found, probes, pairs = self._impl.query_counted(b)
        out = set(found)
        out.add(b)
        return sorted(out), probes, pairs


def query(idx, b):
    return idx.query(b)


# ----------------------------------------------------------------------
# Tree blocks: a rooted tree is one all-core block; an unoriented tree
# contributes one block per layer graph, with fringe trees contracted.


@dataclass
class _Block:
    key: int
    orient: str  # orientation of the core tree
    members: set
    su_iv: dict  # vertex -> doubled interval of its supervertex
    core: dict   # vertex -> bool


def _tree_blocks(g):
    if g.kind in ("out-tree", "in-tree") or _oriented_kind(g):
        kind = g.kind if g.kind in ("out-tree", "in-tree") else _oriented_kind(g)
        t = Digraph(g.n, g.arcs, kind=kind) if g.kind != kind else g
        iv = dfs_intervals(t)
        members = set(range(g.n))
        su_iv = {v: (2 * iv.s[v], 2 * iv.t[v]) for v in members}
        return [_Block(0, "out" if kind == "out-tree" else "in", members,
                       su_iv, {v: True for v in members})]
    if g.kind not in ("utree", "path"):
        raise GraphClassError("expected a tree")
    u = Digraph(g.n, g.arcs, kind="utree") if g.kind != "utree" else g
    dec = layer_decompose(u, 0)
    blocks = []
    for i in range(len(dec.graphs)):
        civ, _root = contracted_intervals(dec, i)
        members = {v for v in range(g.n) if dec.role(v, i) != "absent"}
        core = {v: dec.role(v, i) == "core" for v in members}
        su = {v: v if core[v] else dec.fringe_root[(v, i)] for v in members}
        su_iv = {v: (2 * civ[su[v]][0], 2 * civ[su[v]][1]) for v in members}
        blocks.append(_Block(i, "out" if i % 2 == 0 else "in", members, su_iv, core))
    return blocks


def _oriented_kind(g):
    if g.m != g.n - 1 or not g._underlying_connected():
        return None
    if all(len(p) <= 1 for p in g.inn) and sum(1 for v in range(g.n) if not g.inn[v]) == 1:
        return "out-tree"
    if all(len(s) <= 1 for s in g.out) and sum(1 for v in range(g.n) if not g.out[v]) == 1:
        return "in-tree"
    return None


def _path_runs(p):
    if p.kind != "path":
        raise GraphClassError("expected kind=path")
    if p.is_directed_path():
        return [path_order(p)]
    return split_unoriented_path(p)


# ----------------------------------------------------------------------
# Two paths


class _TwoPaths:
    def __init__(self, p1, p2):
        if p1.n != p2.n:
            raise ValueError("vertex-set mismatch")
        self.n = p1.n
        runs1 = _path_runs(p1)
        runs2 = _path_runs(p2)
        self.structs = {}
        self.pairs_of = {v: [] for v in range(self.n)}
        for i, r1 in enumerate(runs1):
            pos1 = {v: k for k, v in enumerate(r1)}
            for j, r2 in enumerate(runs2):
                common = [v for v in r2 if v in pos1]
                if not common:
                    continue
                pos2 = {v: k for k, v in enumerate(r2)}
                ct = CartesianTree([(pos1[v], pos2[v], v) for v in common])
                self.structs[(i, j)] = (ct, pos1, pos2)
                for v in common:
                    self.pairs_of[v].append((i, j))

    def query_counted(self, b):
        out = set()
        probes = 0
        pairs = []
        for key in self.pairs_of[b]:
            ct, pos1, pos2 = self.structs[key]
            pairs.append(key)
            res, pr = ct.report_dominated(pos1[b], pos2[b])
            out.update(res)
            probes += pr
        return out, probes, pairs


def index_two_paths(p1, p2):
    return JRIndex("two-paths", p1.n, _TwoPaths(p1, p2))


# ----------------------------------------------------------------------
# Tree and path


class _TreePath:
    """Per (tree block, path run) structure.

    Out-core blocks store one horizontal segment per member (the member's
    supervertex interval at its run height) and answer core queries with
    a registered upward ray; fringe queries skip the block. In-core
    blocks store one point per core member and answer grounded range
    queries; fringe queries widen the range to their supervertex's
    interval, inclusive on the left so the fringe root is found.
    """

    def __init__(self, t1, p2):
        if t1.n != p2.n:
            raise ValueError("vertex-set mismatch")
        self.n = t1.n
        blocks = _tree_blocks(t1)
        runs = _path_runs(p2)
        self.structs = {}
        self.pairs_of = {v: [] for v in range(self.n)}
        for blk in blocks:
            for j, run in enumerate(runs):
                members = [v for v in run if v in blk.members]
                if not members:
                    continue
                key = (blk.key, j)
                if blk.orient == "out":
                    # label by height in the run: predecessors sit at or above
                    lab = {v: len(members) - 1 - k for k, v in enumerate(members)}
                    segs = [
                        HSegment(blk.su_iv[v][0], blk.su_iv[v][1], lab[v], v)
                        for v in members
                    ]
                    queries = [
                        (blk.su_iv[v][0] + 1, lab[v], v)
                        for v in members
                        if blk.core[v]
                    ]
                    idx = SegRayIndex(segs, queries)
                    self.structs[key] = ("out", blk, idx, lab)
                else:
                    # label by run position: predecessors sit at or below
                    lab = {v: k for k, v in enumerate(members)}
                    pts = [
                        (blk.su_iv[v][0], lab[v], v) for v in members if blk.core[v]
                    ]
                    ct = CartesianTree(pts) if pts else None
                    self.structs[key] = ("in", blk, ct, lab)
                for v in members:
                    self.pairs_of[v].append(key)

    def query_counted(self, b):
        out = set()
        probes = 0
        pairs = []
        for key in self.pairs_of[b]:
            orient, blk, idx, lab = self.structs[key]
            if orient == "out":
                if not blk.core[b]:
                    continue
                pairs.append(key)
                res, pr = idx.report_registered((blk.su_iv[b][0] + 1, lab[b]))
                out.update(res)
                probes += pr
            else:
                pairs.append(key)
                if idx is None:
                    continue
                lo, hi = blk.su_iv[b]
                if blk.core[b]:
                    lo, hi = lo + 1, hi - 1
                lo_col = bisect_left(idx.colx, lo)
                hi_col = bisect_right(idx.colx, hi) - 1
                res, pr = idx.report_range(lo_col, hi_col, lab[b])
                out.update(res)
                probes += pr
        return out, probes, pairs


def index_tree_path(t1, p2):
    return JRIndex("tree-path", t1.n, _TreePath(t1, p2))


# ----------------------------------------------------------------------
# Two trees


class _TwoTrees:
    def __init__(self, t1, t2):
        if t1.n != t2.n:
            raise ValueError("vertex-set mismatch")
        self.n = t1.n
        self.blocks1 = _tree_blocks(t1)
        self.blocks2 = _tree_blocks(t2)
        self.structs = {}
        for b1 in self.blocks1:
            for b2 in self.blocks2:
                members = sorted(b1.members & b2.members)
                if not members:
                    continue
                self.structs[(b1.key, b2.key)] = self._build_pair(b1, b2, members)

    @staticmethod
    def _storable(blk, v):
        return blk.orient == "out" or blk.core[v]

    def _build_pair(self, b1, b2, members):
        stored = [v for v in members if self._storable(b1, v) and self._storable(b2, v)]
        o1, o2 = b1.orient, b2.orient
        if o1 == "out" and o2 == "out":
            from .geom import Rect, EnclosureIndex

            rects = [
                Rect(b1.su_iv[v][0], b1.su_iv[v][1], b2.su_iv[v][0], b2.su_iv[v][1], v)
                for v in stored
            ]
            return ("enc", b1, b2, EnclosureIndex(rects))
        if o1 == "out" and o2 == "in":
            segs = [HSegment(b1.su_iv[v][0], b1.su_iv[v][1], b2.su_iv[v][0], v) for v in stored]
            return ("seg", b1, b2, SegRayIndex(segs, []))
        if o1 == "in" and o2 == "out":
            segs = [HSegment(b2.su_iv[v][0], b2.su_iv[v][1], b1.su_iv[v][0], v) for v in stored]
            return ("gseg", b1, b2, SegRayIndex(segs, []))
        pts = [(b1.su_iv[v][0], b2.su_iv[v][0], v) for v in stored]
        return ("rt", b1, b2, RangeTree2D(pts))

    @staticmethod
    def _query_interval(blk, b):
        lo, hi = blk.su_iv[b]
        if blk.core[b]:
            return lo + 1, hi - 1
        return lo, hi

    def query_counted(self, b):
        out = set()
        probes = 0
        pairs = []
        for b1 in self.blocks1:
            if b not in b1.members:
                continue
            for b2 in self.blocks2:
                if b not in b2.members:
                    continue
                key = (b1.key, b2.key)
                st = self.structs.get(key)
                if st is None:
                    continue
                kind, _, _, idx = st
                # an out-core block cannot hold predecessors of its fringe
                if (b1.orient == "out" and not b1.core[b]) or (
                    b2.orient == "out" and not b2.core[b]
                ):
                    continue
                pairs.append(key)
                if kind == "enc":
                    res = idx.report(b1.su_iv[b][0] + 1, b2.su_iv[b][0] + 1)
                    probes += len(res) + 1
                elif kind == "seg":
                    lo, hi = self._query_interval(b2, b)
                    res, pr = idx.report_at(b1.su_iv[b][0] + 1, lo, hi)
                    probes += pr
                elif kind == "gseg":
                    lo, hi = self._query_interval(b1, b)
                    res, pr = idx.report_at(b2.su_iv[b][0] + 1, lo, hi)
                    probes += pr
                else:
                    lo1, hi1 = self._query_interval(b1, b)
                    lo2, hi2 = self._query_interval(b2, b)
                    res = []
                    if lo1 <= hi1 and lo2 <= hi2:
                        res = idx.report(lo1, hi1, lo2, hi2)
                    probes += len(res) + 1
                out.update(res)
        return out, probes, pairs


def index_two_trees(t1, t2):
    return JRIndex("two-trees", t1.n, _TwoTrees(t1, t2))


def index_hpd_two_trees(t1, t2):
    """Heavy-path alternative for two rooted trees; one must be an out-tree."""
    if t1.kind != "out-tree" and t2.kind == "out-tree":
        t1, t2 = t2, t1

    class _Hpd:
        def __init__(self):
            self.idx = hpd_two_trees_build(t1, t2)

        def query_counted(self, b):
            res, probes = hpd_two_trees_report(self.idx, b)
            return res, probes, [(0, 0)]

    return JRIndex("hpd-two-trees", t1.n, _Hpd())


# ----------------------------------------------------------------------
# Path covers


class _PathCover:
    """Per cover-path-pair dominance structures plus nonempty lists I(v).

    For a second tree the per-path structure follows the tree-and-path
    geometry with the path rank as threshold; I(v) keeps a query's probes
    proportional to the structures that actually report something.
    """

    def __init__(self, g1, g2, greedy=False):
        if g1.n != g2.n:
            raise ValueError("vertex-set mismatch")
        self.n = g1.n
        if topo_order(g1) is None:
            raise CyclicGraphError("first graph must be acyclic")
        self.pc1 = min_path_cover(g1, greedy=greedy)
        self.fr1 = from_ranks(g1, self.pc1)
        self.mode = None
        if g2.kind in ("out-tree", "in-tree"):
            self._build_tree_side(g2)
        else:
            if topo_order(g2) is None:
                raise CyclicGraphError("second graph must be acyclic")
            if g2.kind == "path" and g2.is_directed_path():
                pc2 = _trivial_cover(g2)
            else:
                pc2 = min_path_cover(g2, greedy=greedy)
            self._build_cover_side(g2, pc2)

    def _build_cover_side(self, g2, pc2):
        self.mode = "cover"
        self.pc2 = pc2
        self.fr2 = from_ranks(g2, pc2)
        self.structs = {}
        for i, p1 in enumerate(self.pc1.paths):
            on1 = set(p1)
            for j, p2 in enumerate(pc2.paths):
                common = [v for v in p2 if v in on1]
                if not common:
                    continue
                pts = [
                    (self.pc1.path_of[v][1], self.pc2.path_of[v][1], v) for v in common
                ]
                self.structs[(i, j)] = CartesianTree(pts)
        self.nonempty = [[] for _ in range(self.n)]
        for v in range(self.n):
            for (i, j), ct in self.structs.items():
                f1 = self.fr1.get(v, i)
                f2 = self.fr2.get(v, j)
                if f1 is None or f2 is None:
                    continue
                hi = bisect_right(ct.colx, f1) - 1
                if hi >= 0 and ct.min_x2_in_range(0, hi) <= f2:
                    self.nonempty[v].append((i, j))

    def _build_tree_side(self, t2):
        self.mode = "tree"
        self.orient2 = "out" if t2.kind == "out-tree" else "in"
        iv = dfs_intervals(t2)
        self.iv2 = iv
        self.structs = {}
        for i, p1 in enumerate(self.pc1.paths):
            if self.orient2 == "out":
                segs = [
                    HSegment(2 * iv.s[v], 2 * iv.t[v], self.pc1.path_of[v][1], v)
                    for v in p1
                ]
                queries = [(2 * iv.s[b] + 1, 0, b) for b in range(self.n)]
                self.structs[i] = SegRayIndex(segs, queries)
            else:
                self.structs[i] = CartesianTree(
                    [(2 * iv.s[v], self.pc1.path_of[v][1], v) for v in p1]
                )
        self.nonempty = [[] for _ in range(self.n)]
        for b in range(self.n):
            for i in range(self.pc1.kappa):
                f1 = self.fr1.get(b, i)
                if f1 is None:
                    continue
                st = self.structs[i]
                if self.orient2 == "out":
                    entry = st.entries[(2 * iv.s[b] + 1, 0)]
                    if entry and entry[-1].key[0] <= f1:
                        self.nonempty[b].append(i)
                else:
                    lo = bisect_left(st.colx, 2 * iv.s[b] + 1)
                    hi = bisect_right(st.colx, 2 * iv.t[b] - 1) - 1
                    if lo <= hi and st.min_x2_in_range(lo, hi) <= f1:
                        self.nonempty[b].append(i)

    def query_counted(self, b):
        out = set()
        probes = 0
        pairs = []
        if self.mode == "cover":
            for (i, j) in self.nonempty[b]:
                pairs.append((i, j))
                ct = self.structs[(i, j)]
                res, pr = ct.report_dominated(self.fr1.get(b, i), self.fr2.get(b, j))
                out.update(res)
                probes += pr
            return out, probes, pairs
        for i in self.nonempty[b]:
            pairs.append((i, 0))
            st = self.structs[i]
            f1 = self.fr1.get(b, i)
            if self.orient2 == "out":
                res, pr = st.report_registered((2 * self.iv2.s[b] + 1, 0), f1)
            else:
                lo = bisect_left(st.colx, 2 * self.iv2.s[b] + 1)
                hi = bisect_right(st.colx, 2 * self.iv2.t[b] - 1) - 1
                res, pr = st.report_range(lo, hi, f1)
            out.update(res)
            probes += pr
        return out, probes, pairs


def _trivial_cover(p):
    order = path_order(p)
    path_of = [None] * p.n
    for r, v in enumerate(order):
        path_of[v] = (0, r)
    return PathCover([order], path_of)


def index_pathcover(g1, g2, greedy=False):
    return JRIndex("pathcover", g1.n, _PathCover(g1, g2, greedy=greedy))


# ----------------------------------------------------------------------
# Planar st-graphs


@dataclass
class KamedaLabels:
    l1: list
    l2: list


def kameda_labels(g):
    """Two-label dominance characterization of planar st-graph reachability.

    Labels come from two depth-first searches that scan out-arcs in
    leftmost-first and rightmost-first embedding order, numbering
    vertices by reverse completion. The label equivalence is validated
    against the closure oracle; inputs failing it are rejected.
    """
    if g.kind != "planar-st" or g.out_order is None:
        raise GraphClassError("kameda labels need a planar-st graph with embedding")
    l1 = _postorder_labels(g, reverse_order=False)
    l2 = _postorder_labels(g, reverse_order=True)
    m = transitive_closure(g)
    for a in range(g.n):
        for b in range(g.n):
            want = m.reach(a, b)
            got = l1[a] <= l1[b] and l2[a] <= l2[b]
            if want != got:
                raise GraphClassError(
                    f"label equivalence fails at pair ({a},{b}); "
                    "input is not a validly embedded planar st-graph"
                )
    return KamedaLabels(l1, l2)


def _postorder_labels(g, reverse_order):
    source = next(v for v in range(g.n) if not g.inn[v])
    labels = [0] * g.n
    next_label = g.n
    seen = [False] * g.n
    order = [tuple(reversed(ws)) if reverse_order else ws for ws in g.out_order]
    stack = [(source, 0)]
    seen[source] = True
    while stack:
        v, k = stack[-1]
        if k < len(order[v]):
            stack[-1] = (v, k + 1)
            w = order[v][k]
            if not seen[w]:
                seen[w] = True
                stack.append((w, 0))
        else:
            stack.pop()
            labels[v] = next_label
            next_label -= 1
    if any(not s for s in seen):
        raise GraphClassError("source does not reach every vertex")
    return labels


class _PlanarSt:
    def __init__(self, g1, p2):
        if g1.n != p2.n:
            raise ValueError("vertex-set mismatch")
        self.n = g1.n
        lab = kameda_labels(g1)
        self.l1, self.l2 = lab.l1, lab.l2
        self.l3 = [0] * self.n
        for r, v in enumerate(path_order(p2)):
            self.l3[v] = r
        self.rt = RangeTree2D([(self.l1[v], self.l2[v], v) for v in range(self.n)])

    def query_counted(self, b):
        cands = self.rt.report(1, self.l1[b], 1, self.l2[b])
        out = {a for a in cands if self.l3[a] <= self.l3[b]}
        return out, len(cands) + 1, [(0, 0)]


def index_planar_st(g1, p2):
    return JRIndex("planar-st", g1.n, _PlanarSt(g1, p2))
