"""Directed-graph substrate shared by every other module.

Provides the adjacency digraph with class tags, bitset reachability
closures, strong-component condensation of a digraph pair, layer
decomposition into 2-layered graphs, DFS intervals on rooted trees, and
constant-time nearest-common-ancestor queries.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field


KINDS = ("digraph", "path", "out-tree", "in-tree", "utree", "planar-st")


class GraphClassError(ValueError):
    """Graph violates the invariants of its declared kind."""


class CyclicGraphError(ValueError):
    """Operation requires an acyclic digraph."""


class Digraph:
    """Simple digraph over vertices 0..n-1.

    Arcs are normalized on construction: self-loops and duplicates are
    dropped and the arc list is stored sorted. Instances are treated as
    immutable after construction.
    """

    __slots__ = ("n", "arcs", "kind", "out", "inn", "out_order")

    def __init__(self, n, arcs, kind="digraph", out_order=None, validate=True):
        if kind not in KINDS:
            raise GraphClassError(f"unknown graph kind {kind!r}")
        self.n = n
        seen = set()
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u},{v}) out of range for n={n}")
            if u != v:
                seen.add((u, v))
        self.arcs = tuple(sorted(seen))
        self.kind = kind
        out = [[] for _ in range(n)]
        inn = [[] for _ in range(n)]
        for u, v in self.arcs:
            out[u].append(v)
            inn[v].append(u)
        self.out = tuple(tuple(a) for a in out)
        self.inn = tuple(tuple(a) for a in inn)
        self.out_order = None
        if out_order is not None:
            order = tuple(tuple(ws) for ws in out_order)
            for v in range(n):
                if sorted(order[v]) != sorted(self.out[v]):
                    raise GraphClassError(
                        f"out-arc order of vertex {v} is not a permutation of its out-arcs"
                    )
            self.out_order = order
        if validate:
            self._validate()

    @property
    def m(self):
        return len(self.arcs)

    @property
    def size(self):
        """Vertex count plus arc count."""
        return self.n + len(self.arcs)

    def _validate(self):
        kind = self.kind
        if kind == "digraph":
            return
        if kind == "path":
            self._require(self.m == self.n - 1, "a path on n vertices needs n-1 arcs")
            deg = [len(self.out[v]) + len(self.inn[v]) for v in range(self.n)]
            self._require(all(d <= 2 for d in deg), "path vertex with degree > 2")
            self._require(self._underlying_connected(), "path is not connected")
        elif kind == "out-tree":
            self._require(self.m == self.n - 1, "a tree on n vertices needs n-1 arcs")
            self._require(all(len(p) <= 1 for p in self.inn), "out-tree vertex with in-degree > 1")
            roots = [v for v in range(self.n) if not self.inn[v]]
            self._require(len(roots) == 1, "out-tree must have exactly one root")
            self._require(self._underlying_connected(), "out-tree is not connected")
        elif kind == "in-tree":
            self._require(self.m == self.n - 1, "a tree on n vertices needs n-1 arcs")
            self._require(all(len(s) <= 1 for s in self.out), "in-tree vertex with out-degree > 1")
            roots = [v for v in range(self.n) if not self.out[v]]
            self._require(len(roots) == 1, "in-tree must have exactly one root")
            self._require(self._underlying_connected(), "in-tree is not connected")
        elif kind == "utree":
            self._require(self.m == self.n - 1, "a tree on n vertices needs n-1 arcs")
            self._require(self._underlying_connected(), "utree is not connected")
        elif kind == "planar-st":
            self._require(topo_order(self) is not None, "planar-st graph must be acyclic")
            sources = [v for v in range(self.n) if not self.inn[v]]
            sinks = [v for v in range(self.n) if not self.out[v]]
            self._require(len(sources) == 1, "planar-st graph must have exactly one source")
            self._require(len(sinks) == 1, "planar-st graph must have exactly one sink")

    def _require(self, cond, msg):
        if not cond:
            raise GraphClassError(f"{self.kind}: {msg}")

    def _underlying_connected(self):
        if self.n == 0:
            return True
        seen = [False] * self.n
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            v = stack.pop()
            for w in self.out[v] + self.inn[v]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        return count == self.n

    def neighbors(self, v):
        """Underlying-tree neighbors of v, sorted ascending."""
        return sorted(set(self.out[v]) | set(self.inn[v]))

    def reverse(self):
        kind = {"out-tree": "in-tree", "in-tree": "out-tree"}.get(self.kind, self.kind)
        if kind == "planar-st":
            kind = "digraph"
        return Digraph(self.n, [(v, u) for u, v in self.arcs], kind=kind)

    def root(self):
        """Root of a rooted tree (out-tree or in-tree)."""
        if self.kind == "out-tree":
            return next(v for v in range(self.n) if not self.inn[v])
        if self.kind == "in-tree":
            return next(v for v in range(self.n) if not self.out[v])
        raise GraphClassError(f"{self.kind} has no canonical root")

    def is_directed_path(self):
        return (
            self.m == self.n - 1
            and all(len(s) <= 1 for s in self.out)
            and all(len(p) <= 1 for p in self.inn)
            and self._underlying_connected()
        )

    def __repr__(self):
        return f"Digraph(n={self.n}, m={self.m}, kind={self.kind!r})"


def path_order(g):
    """Vertex sequence of a fully oriented dipath, source to sink."""
    if not g.is_directed_path():
        raise GraphClassError("graph is not a fully oriented dipath")
    if g.n == 1:
        return [0]
    v = next(x for x in range(g.n) if not g.inn[x])
    seq = [v]
    while g.out[v]:
        v = g.out[v][0]
        seq.append(v)
    return seq


def dipath_of(order):
    """Dipath Digraph visiting `order` front to back."""
    arcs = [(order[i], order[i + 1]) for i in range(len(order) - 1)]
    return Digraph(len(order), arcs, kind="path")


def topo_order(g):
    """Lexicographically smallest topological order, or None if cyclic."""
    indeg = [len(g.inn[v]) for v in range(g.n)]
    heap = [v for v in range(g.n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in g.out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    return order if len(order) == g.n else None


def tarjan_scc(g):
    """Strong components in topological order.

    Returns (comp_of, comps) where comps[i] is the sorted member list of
    the i-th component and i < j implies no arc from comps[j] to comps[i].
    Single-pass iterative Tarjan; emission order is reversed to obtain a
    topological order of the condensation.
    """
    n = g.n
    index_of = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comp_of = [-1] * n
    comps_rev = []
    counter = 0
    for start in range(n):
        if index_of[start] != -1:
            continue
        work = [(start, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index_of[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(g.out[v]):
                w = g.out[v][pi]
                pi += 1
                if index_of[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index_of[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index_of[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps_rev.append(sorted(comp))
    comps = list(reversed(comps_rev))
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    return comp_of, comps


class ReachMatrix:
    """n x n boolean reachability relation stored as packed bit rows.

    rows[a] has bit b set iff b is reachable from a. Always reflexive.
    """

    __slots__ = ("n", "rows")

    def __init__(self, n, rows):
        self.n = n
        self.rows = list(rows)

    def reach(self, a, b):
        return bool(self.rows[a] >> b & 1)

    def row(self, a):
        return self.rows[a]

    def and_with(self, other):
        if self.n != other.n:
            raise ValueError("matrix size mismatch")
        return ReachMatrix(self.n, [x & y for x, y in zip(self.rows, other.rows)])

    def count(self):
        return sum(r.bit_count() for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, ReachMatrix) and self.n == other.n and self.rows == other.rows

    def is_transitive(self):
        for a in range(self.n):
            row = self.rows[a]
            rest = row
            while rest:
                b = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                if self.rows[b] & ~row:
                    return False
        return True


def transitive_closure(g):
    """Reachability oracle: reflexive-transitive closure of g.

    Row-OR sweep in reverse topological order for DAGs; per-source DFS
    otherwise.
    """
    n = g.n
    order = topo_order(g)
    rows = [0] * n
    if order is not None:
        for v in reversed(order):
            r = 1 << v
            for w in g.out[v]:
                r |= rows[w]
            rows[v] = r
        return ReachMatrix(n, rows)
    for s in range(n):
        seen = 1 << s
        stack = [s]
        while stack:
            v = stack.pop()
            for w in g.out[v]:
                if not (seen >> w & 1):
                    seen |= 1 << w
                    stack.append(w)
        rows[s] = seen
    return ReachMatrix(n, rows)


@dataclass
class CondensedPair:
    """Acyclic sibling digraphs over the joint subcomponents of a pair."""

    g1_hat: Digraph
    g2_hat: Digraph
    sub_of: list
    members: list

    @property
    def n_sub(self):
        return len(self.members)


def condense_pair(g1, g2):
    """Condense two digraphs over a common vertex set.

    Vertices share a subcomponent iff they are mutually reachable in both
    inputs. Within each strong component of one graph, its subcomponents
    are chained following the topological order of the other graph's
    condensation, and inter-component arcs run from last subcomponent to
    first, so the join relation over original vertices is preserved.
    """
    if g1.n != g2.n:
        raise ValueError("vertex-set mismatch")
    n = g1.n
    comp1_of, comps1 = tarjan_scc(g1)
    comp2_of, comps2 = tarjan_scc(g2)

    key_to_sub = {}
    members = []
    for key in sorted({(comp1_of[v], comp2_of[v]) for v in range(n)}):
        key_to_sub[key] = len(members)
        members.append([])
    sub_of = [0] * n
    for v in range(n):
        s = key_to_sub[(comp1_of[v], comp2_of[v])]
        sub_of[v] = s
        members[s].append(v)
    for lst in members:
        lst.sort()

    def build_hat(comps_a, comp_a_of, comp_b_of, g):
        # Subcomponents of one a-component, chained by the other graph's
        # topological position; inter-component arcs last-sub -> first-sub.
        arcs = set()
        first_sub = {}
        last_sub = {}
        for ci, comp in enumerate(comps_a):
            subs = sorted({(comp_b_of[v], key_to_sub[(comp_a_of[v], comp_b_of[v])]) for v in comp})
            chain = [s for _, s in subs]
            first_sub[ci] = chain[0]
            last_sub[ci] = chain[-1]
            for i in range(len(chain) - 1):
                arcs.add((chain[i], chain[i + 1]))
        for u, v in g.arcs:
            cu, cv = comp_a_of[u], comp_a_of[v]
            if cu != cv:
                arcs.add((last_sub[cu], first_sub[cv]))
        return Digraph(len(members), sorted(arcs))

    g1_hat = build_hat(comps1, comp1_of, comp2_of, g1)
    # For the second graph the roles of the two condensations swap.
    g2_hat_arcs = set()
    for ci, comp in enumerate(comps2):
        subs = sorted({(comp1_of[v], key_to_sub[(comp1_of[v], comp2_of[v])]) for v in comp})
        chain = [s for _, s in subs]
        for i in range(len(chain) - 1):
            g2_hat_arcs.add((chain[i], chain[i + 1]))
    first_sub2 = {}
    last_sub2 = {}
    for ci, comp in enumerate(comps2):
        subs = sorted({(comp1_of[v], key_to_sub[(comp1_of[v], comp2_of[v])]) for v in comp})
        chain = [s for _, s in subs]
        first_sub2[ci] = chain[0]
        last_sub2[ci] = chain[-1]
    for u, v in g2.arcs:
        cu, cv = comp2_of[u], comp2_of[v]
        if cu != cv:
            g2_hat_arcs.add((last_sub2[cu], first_sub2[cv]))
    g2_hat = Digraph(len(members), sorted(g2_hat_arcs))
    return CondensedPair(g1_hat, g2_hat, sub_of, members)


@dataclass
class LayeredGraph:
    """One 2-layered member of a layer decomposition, over local ids.

    Local vertex 0 is always the root r0. For the first graph of a
    sequence the root is the start vertex itself; later roots stand for
    the contraction of all earlier layers.
    """

    index: int
    digraph: Digraph
    orig_of: list
    local_of: dict

    @property
    def root_local(self):
        return 0


@dataclass
class LayerDecomposition:
    layers: list
    iota: list
    graphs: list
    roles: dict = field(default_factory=dict)
    fringe_root: dict = field(default_factory=dict)

    @property
    def mu(self):
        return len(self.layers)

    def role(self, v, i):
        return self.roles.get((v, i), "absent")

    def graphs_of(self, v):
        """Indices of the graphs where v appears as a non-root vertex."""
        i = self.iota[v]
        out = []
        if i - 1 >= 0:
            out.append(i - 1)
        if i < len(self.graphs):
            out.append(i)
        return out

    def total_size(self):
        return sum(lg.digraph.size for lg in self.graphs)


def layer_decompose(g, v0=None):
    """Partition g into layers and the induced 2-layered graph sequence.

    Layer 0 holds v0 and everything reachable from it; odd layers gather
    the remaining vertices that reach earlier layers, even layers those
    reachable from earlier layers. Graph i is induced by layers i, i+1
    plus a root contracting everything earlier. Requires g acyclic (as a
    digraph) and weakly connected.
    """
    n = g.n
    if v0 is None:
        v0 = 0
    if not (0 <= v0 < n):
        raise ValueError(f"v0={v0} out of range")
    reach = transitive_closure(g)
    reach_rev = transitive_closure(Digraph(n, [(v, u) for u, v in g.arcs]))

    assigned_mask = 0
    iota = [-1] * n
    layers = []
    layer0 = sorted(b for b in range(n) if reach.reach(v0, b))
    for v in layer0:
        assigned_mask |= 1 << v
        iota[v] = 0
    layers.append(layer0)
    full = (1 << n) - 1
    while assigned_mask != full:
        i = len(layers)
        if i % 2 == 1:
            cur = [u for u in range(n) if iota[u] < 0 and reach.rows[u] & assigned_mask]
        else:
            cur = [u for u in range(n) if iota[u] < 0 and reach_rev.rows[u] & assigned_mask]
        if not cur and layers and not layers[-1]:
            raise ValueError("layer decomposition requires a weakly connected graph")
        for v in cur:
            assigned_mask |= 1 << v
            iota[v] = i
        layers.append(cur)
    while layers and not layers[-1]:
        layers.pop()

    mu = len(layers)
    graphs = []
    roles = {}
    for i in range(mu):
        li = layers[i]
        lnext = layers[i + 1] if i + 1 < mu else []
        if i == 0:
            locs = [v0] + [v for v in li if v != v0] + list(lnext)
        else:
            locs = [None] + list(li) + list(lnext)
        local_of = {v: idx for idx, v in enumerate(locs) if v is not None}
        present = set(local_of)
        arcs = set()
        for u, v in g.arcs:
            lu = local_of.get(u, 0 if iota[u] < i else None)
            lv = local_of.get(v, 0 if iota[v] < i else None)
            if lu is None or lv is None or lu == lv:
                continue
            if u not in present and v not in present:
                continue
            arcs.add((lu, lv))
        graphs.append(LayeredGraph(i, Digraph(len(locs), sorted(arcs)), locs, local_of))
        for v in li:
            roles[(v, i)] = "core"
        for v in lnext:
            roles[(v, i)] = "fringe"

    dec = LayerDecomposition(layers, iota, graphs, roles)
    if g.kind == "utree":
        _assign_fringe_roots(g, dec)
    return dec


def _assign_fringe_roots(g, dec):
    # Fringe trees hang off core vertices: walk fringe vertices outward
    # from each core vertex following the hanging-tree orientation.
    for i, lg in enumerate(dec.graphs):
        fringe = {v for v in lg.orig_of if v is not None and dec.roles.get((v, i)) == "fringe"}
        if not fringe:
            continue
        core = [v for v in lg.orig_of if v is not None and dec.roles.get((v, i)) == "core"]
        even = i % 2 == 0
        seeds = list(core)
        if i == 0:
            pass  # v0 already in core
        claimed = {}
        stack = [(c, c) for c in seeds]
        while stack:
            v, root = stack.pop()
            neigh = g.inn[v] if even else g.out[v]
            for w in neigh:
                if w in fringe and w not in claimed:
                    claimed[w] = root
                    stack.append((w, root))
        # Fringe vertices attached directly to the contracted root.
        if i > 0:
            prefix = [u for u in range(g.n) if dec.iota[u] < i]
            stack = [(u, None) for u in prefix]
            while stack:
                v, root = stack.pop()
                neigh = g.inn[v] if even else g.out[v]
                for w in neigh:
                    if w in fringe and w not in claimed:
                        claimed[w] = root
                        stack.append((w, root))
        for v in fringe:
            dec.fringe_root[(v, i)] = claimed.get(v)


def contracted_intervals(dec, i):
    """DFS intervals of layer graph i with its fringe trees contracted.

    Returns (interval per original core vertex, root interval). Core
    vertices form a connected crown at the root, so the contracted tree
    is induced on the root plus the core vertices.
    """
    lg = dec.graphs[i]
    parent = tree_parents(lg.digraph, 0)
    core_locals = [0] + [
        lg.local_of[v]
        for v in lg.orig_of
        if v is not None and dec.role(v, i) == "core" and lg.local_of[v] != 0
    ]
    children = {c: [] for c in core_locals}
    for c in core_locals:
        if c == 0:
            continue
        children[parent[c]].append(c)
    for c in children:
        children[c].sort(key=lambda x: lg.orig_of[x] if lg.orig_of[x] is not None else -1)
    s = {}
    t = {}
    clock = 0
    stack = [(0, False)]
    while stack:
        v, done = stack.pop()
        if done:
            clock += 1
            t[v] = clock
            continue
        clock += 1
        s[v] = clock
        stack.append((v, True))
        for w in reversed(children[v]):
            stack.append((w, False))
    iv = {}
    for c in core_locals:
        orig = lg.orig_of[c]
        if orig is not None:
            iv[orig] = (s[c], t[c])
    return iv, (s[0], t[0])


@dataclass
class DfsIntervals:
    """First/last visit times of a rooted-tree DFS, all 2n values distinct."""

    s: list
    t: list

    def contains(self, a, b):
        """True iff the interval of a contains the interval of b."""
        return self.s[a] <= self.s[b] and self.t[b] <= self.t[a]


def tree_parents(g, root=None):
    """Parent array of the underlying tree of g rooted at `root`.

    Children are explored in increasing vertex id. Raises if the
    underlying graph is not a tree.
    """
    if root is None:
        root = g.root()
    if g.m != g.n - 1:
        raise GraphClassError("not a tree: wrong arc count")
    parent = [-2] * g.n
    parent[root] = -1
    order = [root]
    stack = [root]
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if parent[w] == -2:
                parent[w] = v
                order.append(w)
                stack.append(w)
    if len(order) != g.n:
        raise GraphClassError("not a tree: disconnected")
    return parent


def dfs_intervals(g, root=None):
    """DFS intervals of the underlying rooted tree of g.

    A counter is bumped after every visit and every leave, so the 2n
    assigned values are distinct and ancestry equals interval nesting.
    """
    if root is None:
        root = g.root()
    parent = tree_parents(g, root)
    n = g.n
    s = [0] * n
    t = [0] * n
    clock = 0
    stack = [(root, False)]
    while stack:
        v, done = stack.pop()
        if done:
            clock += 1
            t[v] = clock
            continue
        clock += 1
        s[v] = clock
        stack.append((v, True))
        for w in reversed(g.neighbors(v)):
            if parent[w] == v:
                stack.append((w, False))
    return DfsIntervals(s, t)


class NcaIndex:
    """Nearest common ancestors via Euler tour plus sparse-table RMQ."""

    __slots__ = ("n", "root", "first", "euler", "depths", "table", "logs")

    def __init__(self, parent, root, children=None):
        n = len(parent)
        self.n = n
        self.root = root
        if children is None:
            children = [[] for _ in range(n)]
            for v in range(n):
                if v != root and parent[v] >= 0:
                    children[parent[v]].append(v)
            for c in children:
                c.sort()
        depth = [0] * n
        euler = []
        first = [-1] * n
        stack = [(root, 0, iter(children[root]))]
        first[root] = 0
        euler.append(root)
        while stack:
            v, d, it = stack[-1]
            child = next(it, None)
            if child is None:
                stack.pop()
                if stack:
                    euler.append(stack[-1][0])
                continue
            depth[child] = d + 1
            first[child] = len(euler)
            euler.append(child)
            stack.append((child, d + 1, iter(children[child])))
        m = len(euler)
        depths = [depth[v] for v in euler]
        logs = [0] * (m + 1)
        for i in range(2, m + 1):
            logs[i] = logs[i >> 1] + 1
        table = [list(range(m))]
        k = 1
        while (1 << k) <= m:
            prev = table[-1]
            half = 1 << (k - 1)
            row = []
            for i in range(m - (1 << k) + 1):
                a, b = prev[i], prev[i + half]
                row.append(a if depths[a] <= depths[b] else b)
            table.append(row)
            k += 1
        self.first = first
        self.euler = euler
        self.depths = depths
        self.table = table
        self.logs = logs

    def query(self, a, b):
        i, j = self.first[a], self.first[b]
        if i > j:
            i, j = j, i
        k = self.logs[j - i + 1]
        x = self.table[k][i]
        y = self.table[k][j - (1 << k) + 1]
        return self.euler[x if self.depths[x] <= self.depths[y] else y]


def nca_build(g, root=None):
    if root is None:
        root = g.root()
    parent = tree_parents(g, root)
    return NcaIndex(parent, root)


def nca_query(idx, a, b):
    if not (0 <= a < idx.n and 0 <= b < idx.n):
        raise ValueError("vertex out of range")
    return idx.query(a, b)


# ----------------------------------------------------------------------
# Graph file format: line 1 "n m kind", then m lines "u v"; planar-st
# files append per-vertex clockwise out-arc order lines "v: w1 w2 ...".

def parse_graph(text):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty graph file")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError(f"bad header {lines[0]!r}")
    n, m, kind = int(head[0]), int(head[1]), head[2]
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    arcs = []
    for ln in lines[1 : 1 + m]:
        u, v = ln.split()
        arcs.append((int(u), int(v)))
    out_order = None
    if kind == "planar-st":
        out_order = [[] for _ in range(n)]
        for ln in lines[1 + m :]:
            vpart, _, ws = ln.partition(":")
            out_order[int(vpart)] = [int(w) for w in ws.split()]
    return Digraph(n, arcs, kind=kind, out_order=out_order)


def format_graph(g):
    lines = [f"{g.n} {g.m} {g.kind}"]
    lines.extend(f"{u} {v}" for u, v in g.arcs)
    if g.kind == "planar-st" and g.out_order is not None:
        for v in range(g.n):
            lines.append(f"{v}: " + " ".join(str(w) for w in g.out_order[v]))
    return "\n".join(lines) + "\n"


def read_graph(path):
    with open(path, encoding="utf-8") as f:
        return parse_graph(f.read())


def write_graph(g, path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_graph(g))
