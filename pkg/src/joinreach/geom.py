"""Output-sensitive geometric reporting structures.

Cartesian trees for dominance and grounded range reporting, a
persistence-based sweep for horizontal-segment versus vertical-ray
queries, an interval tree for rectangle point enclosure, and a two-level
range tree for orthogonal range reporting. All structures are immutable
after build; reporting methods return (payloads, probe_count) so callers
can assert output sensitivity.
"""

from __future__ import annotations

import random as _random
from bisect import bisect_left, bisect_right
from typing import NamedTuple

from .graph import NcaIndex


class Point2(NamedTuple):
    x1: int
    x2: int
    payload: int


class HSegment(NamedTuple):
    x1_lo: int
    x1_hi: int
    x2: int
    payload: int


# ----------------------------------------------------------------------
# Cartesian tree


class CartesianTree:
    """Binary tree over points: in-order by x1, heap order (min) on x2.

    Supports the multi-column variant where several points share an
    x1-coordinate: the tree holds the minimum-x2 point of each column and
    the rest sit in per-column overflow lists ordered by increasing x2.
    """

    __slots__ = ("colx", "reps", "overflow", "left", "right", "root", "_nca", "npoints")

    def __init__(self, points, allow_duplicate_x1=False):
        pts = sorted(points)
        if len({(p[0], p[1]) for p in pts}) != len(pts):
            raise ValueError("duplicate (x1, x2) pair")
        by_col = {}
        for p in pts:
            by_col.setdefault(p[0], []).append(p)
        if not allow_duplicate_x1 and any(len(col) > 1 for col in by_col.values()):
            raise ValueError("duplicate x1 coordinate (multi-column variant not requested)")
        self.npoints = len(pts)
        self.colx = sorted(by_col)
        self.reps = [by_col[x][0] for x in self.colx]
        self.overflow = [by_col[x][1:] for x in self.colx]
        m = len(self.colx)
        left = [-1] * m
        right = [-1] * m
        stack = []
        for i in range(m):
            last = -1
            while stack and self._key(stack[-1]) > self._key(i):
                last = stack.pop()
            left[i] = last
            if stack:
                right[stack[-1]] = i
            stack.append(i)
        self.root = stack[0] if stack else -1
        self.left = left
        self.right = right
        parent = [-1] * m
        children = [[] for _ in range(m)]
        for i in range(m):
            for c in (left[i], right[i]):
                if c != -1:
                    parent[c] = i
                    children[i].append(c)
        self._nca = NcaIndex(parent, self.root, children) if m else None

    def _key(self, i):
        p = self.reps[i]
        return (p[1], p[0])

    def range_min(self, lo, hi):
        """Column index of the minimum-x2 point among columns lo..hi."""
        return self._nca.query(lo, hi)

    def col_of_x1(self, x1):
        i = bisect_left(self.colx, x1)
        if i == len(self.colx) or self.colx[i] != x1:
            raise KeyError(f"no column at x1={x1}")
        return i

    def report_range(self, lo_col, hi_col, x2_max):
        """Payloads of points in columns lo..hi with x2 <= x2_max.

        Probe count covers range-minimum lookups plus overflow scans and
        stays within 3k+3 for k reported points.
        """
        out = []
        probes = 0
        if self.root == -1 or lo_col > hi_col:
            return out, probes
        stack = [(lo_col, hi_col)]
        while stack:
            lo, hi = stack.pop()
            probes += 1
            c = self.range_min(lo, hi)
            rep = self.reps[c]
            if rep[1] > x2_max:
                continue
            out.append(rep[2])
            for extra in self.overflow[c]:
                probes += 1
                if extra[1] > x2_max:
                    break
                out.append(extra[2])
            if lo <= c - 1:
                stack.append((lo, c - 1))
            if c + 1 <= hi:
                stack.append((c + 1, hi))
        return out, probes

    def report_dominated(self, x1_max, x2_max):
        """Payloads of points with x1 <= x1_max and x2 <= x2_max."""
        hi = bisect_right(self.colx, x1_max) - 1
        return self.report_range(0, hi, x2_max) if hi >= 0 else ([], 0)

    def min_x2_in_range(self, lo_col, hi_col):
        if self.root == -1 or lo_col > hi_col:
            return None
        return self.reps[self.range_min(lo_col, hi_col)][1]


def ct_build(points, allow_duplicate_x1=False):
    return CartesianTree(points, allow_duplicate_x1=allow_duplicate_x1)


def ct_dominance_report(ct, b):
    """Report {a : x1(a) <= x1(b) and x2(a) <= x2(b)} with probe count."""
    return ct.report_dominated(b[0], b[1])


def ct_range_report(ct, x1_lo, x1_hi, x2_max):
    """Grounded 3-sided report: x1 in [x1_lo, x1_hi], x2 <= x2_max."""
    lo = bisect_left(ct.colx, x1_lo)
    hi = bisect_right(ct.colx, x1_hi) - 1
    return ct.report_range(lo, hi, x2_max)


# ----------------------------------------------------------------------
# Persistent-treap sweep for segment / vertical-ray intersection


class _TNode(NamedTuple):
    key: tuple
    prio: int
    payload: int
    left: object
    right: object


def _merge(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if a.prio <= b.prio:
        return _TNode(a.key, a.prio, a.payload, a.left, _merge(a.right, b))
    return _TNode(b.key, b.prio, b.payload, _merge(a, b.left), b.right)


def _split(t, key):
    """(keys < key, keys >= key), path-copying."""
    if t is None:
        return None, None
    if t.key < key:
        l, r = _split(t.right, key)
        return _TNode(t.key, t.prio, t.payload, t.left, l), r
    l, r = _split(t.left, key)
    return l, _TNode(t.key, t.prio, t.payload, r, t.right)


def _insert(t, key, prio, payload):
    l, r = _split(t, key)
    return _merge(_merge(l, _TNode(key, prio, payload, None, None)), r)


def _delete(t, key):
    l, r = _split(t, key)
    # minimum of r must be the key being removed
    spine = []
    node = r
    while node.left is not None:
        spine.append(node)
        node = node.left
    assert node.key == key
    rebuilt = node.right
    for anc in reversed(spine):
        rebuilt = _TNode(anc.key, anc.prio, anc.payload, rebuilt, anc.right)
    return _merge(l, rebuilt)


def _seed_stack(root, key_lo):
    """Path to the smallest key >= key_lo; the stack drives an in-order walk."""
    stack = []
    node = root
    while node is not None:
        if node.key >= key_lo:
            stack.append(node)
            node = node.left
        else:
            node = node.right
    return tuple(stack)


def _walk(stack_seed, x2_hi, out, counter):
    stack = list(stack_seed)
    while stack:
        node = stack.pop()
        counter[0] += 1
        if x2_hi is not None and node.key[0] > x2_hi:
            break
        out.append(node.payload)
        t = node.right
        while t is not None:
            counter[0] += 1
            stack.append(t)
            t = t.left


class SegRayIndex:
    """Horizontal segments queried by upward vertical rays.

    A query from (x, y) reports exactly the segments with
    x1_lo < x < x1_hi and x2 >= y, in increasing x2 order. Query points
    registered at build time get a precomputed entry stack, so reporting
    does no point-location search; unregistered points pay one binary
    search over sweep versions.
    """

    __slots__ = ("segments", "entries", "_xs", "_mid", "_end")

    def __init__(self, segments, query_points):
        self.segments = list(segments)
        rng = _random.Random(0x5E9)
        prios = [rng.random() for _ in self.segments]
        events = {}
        for i, s in enumerate(self.segments):
            if s.x1_lo >= s.x1_hi:
                raise ValueError("segment with empty x1 span")
            events.setdefault(s.x1_lo, ([], []))[0].append(i)
            events.setdefault(s.x1_hi, ([], []))[1].append(i)
        queries = {}
        for q in query_points:
            queries.setdefault(q[0], []).append(q)
        xs = sorted(set(events) | set(queries))
        root = None
        self.entries = {}
        self._xs = []
        self._mid = []
        self._end = []
        for x in xs:
            ins, dels = events.get(x, ([], []))
            for i in dels:
                root = _delete(root, (self.segments[i].x2, i))
            mid = root
            for q in queries.get(x, []):
                self.entries[(q[0], q[1])] = _seed_stack(root, (q[1], -1))
            for i in ins:
                root = _insert(root, (self.segments[i].x2, i), prios[i], i)
            self._xs.append(x)
            self._mid.append(mid)
            self._end.append(root)

    def report_registered(self, q, x2_hi=None):
        """Report for a query point registered at build time."""
        key = (q[0], q[1])
        if key not in self.entries:
            raise KeyError(f"query point {key} was not registered")
        out = []
        counter = [0]
        _walk(self.entries[key], x2_hi, out, counter)
        return [self.segments[i].payload for i in out], counter[0]

    def report_at(self, x, y_lo, x2_hi=None):
        """Report for an arbitrary point; costs a version search."""
        i = bisect_right(self._xs, x) - 1
        if i < 0:
            return [], 0
        root = self._mid[i] if self._xs[i] == x else self._end[i]
        out = []
        counter = [0]
        _walk(_seed_stack(root, (y_lo, -1)), x2_hi, out, counter)
        return [self.segments[i].payload for i in out], counter[0]


def seg_build(segments, query_points):
    return SegRayIndex(segments, query_points)


def seg_report(idx, q):
    return idx.report_registered(q)


# ----------------------------------------------------------------------
# Rectangle point enclosure via an interval tree on x1 spans


class _ENode(NamedTuple):
    center: int
    by_lo: tuple
    by_hi: tuple
    left: object
    right: object


class Rect(NamedTuple):
    x1_lo: int
    x1_hi: int
    x2_lo: int
    x2_hi: int
    payload: int


def _enclosure_node(rects):
    if not rects:
        return None
    xs = sorted(x for r in rects for x in (r.x1_lo, r.x1_hi))
    center = xs[len(xs) // 2]
    here, left, right = [], [], []
    for r in rects:
        if r.x1_hi < center:
            left.append(r)
        elif r.x1_lo > center:
            right.append(r)
        else:
            here.append(r)
    return _ENode(
        center,
        tuple(sorted(here, key=lambda r: r.x1_lo)),
        tuple(sorted(here, key=lambda r: -r.x1_hi)),
        _enclosure_node(left),
        _enclosure_node(right),
    )


class EnclosureIndex:
    """Interval tree over rectangle x1-spans with per-node sorted lists."""

    __slots__ = ("root", "nrects")

    def __init__(self, rects):
        self.nrects = len(rects)
        self.root = _enclosure_node(list(rects))

    def report(self, qx, qy):
        """Rectangles strictly containing (qx, qy)."""
        out = []
        node = self.root
        while node is not None:
            if qx < node.center:
                for r in node.by_lo:
                    if r.x1_lo >= qx:
                        break
                    if r.x2_lo < qy < r.x2_hi:
                        out.append(r.payload)
                node = node.left
            elif qx > node.center:
                for r in node.by_hi:
                    if r.x1_hi <= qx:
                        break
                    if r.x2_lo < qy < r.x2_hi:
                        out.append(r.payload)
                node = node.right
            else:
                for r in node.by_lo:
                    if r.x1_lo < qx < r.x1_hi and r.x2_lo < qy < r.x2_hi:
                        out.append(r.payload)
                node = None
        return out


def enclosure_build(rects):
    return EnclosureIndex(rects)


def enclosure_report(idx, q):
    return idx.report(q[0], q[1])


# ----------------------------------------------------------------------
# Two-level range tree for orthogonal range reporting


class _RNode(NamedTuple):
    x_lo: int
    x_hi: int
    ys: tuple
    left: object
    right: object


def _range_node(pts):
    if len(pts) == 1:
        p = pts[0]
        return _RNode(p[0], p[0], ((p[1], p[2]),), None, None)
    mid = len(pts) // 2
    left = _range_node(pts[:mid])
    right = _range_node(pts[mid:])
    ys = tuple(sorted(left.ys + right.ys))
    return _RNode(pts[0][0], pts[-1][0], ys, left, right)


class RangeTree2D:
    """Balanced tree on x1 with x2-sorted arrays per node."""

    __slots__ = ("root", "npoints")

    def __init__(self, points):
        pts = sorted(points)
        self.npoints = len(pts)
        self.root = _range_node(pts) if pts else None

    def report(self, x1_lo, x1_hi, x2_lo, x2_hi):
        if x1_lo > x1_hi or x2_lo > x2_hi:
            raise ValueError("malformed rectangle (lo > hi)")
        out = []
        if self.root is None:
            return out
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node is None or node.x_lo > x1_hi or node.x_hi < x1_lo:
                continue
            if x1_lo <= node.x_lo and node.x_hi <= x1_hi:
                lo = bisect_left(node.ys, (x2_lo, -1))
                hi = bisect_right(node.ys, (x2_hi, float("inf")))
                out.extend(p for _, p in node.ys[lo:hi])
                continue
            stack.append(node.left)
            stack.append(node.right)
        return out


def range2d_build(points):
    return RangeTree2D(points)


def range2d_report(idx, rect):
    x1_lo, x1_hi, x2_lo, x2_hi = rect
    return idx.report(x1_lo, x1_hi, x2_lo, x2_hi)
