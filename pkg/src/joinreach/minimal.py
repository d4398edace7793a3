"""Smallest restricted join graph: entrywise AND of two closures followed
by transitive reduction. No auxiliary vertices are introduced, so the
result is the minimum-size digraph over the original vertex set whose
closure equals the AND.
"""

from __future__ import annotations

from .graph import Digraph, transitive_closure


def and_closure(m1, m2):
    """Entrywise AND of two closure matrices; transitive and reflexive."""
    return m1.and_with(m2)


def transitive_reduction(m):
    """Minimum digraph over 0..n-1 whose closure equals the matrix m.

    Mutually-related classes are condensed, the class-level reduction
    keeps exactly the cover arcs, and each class with two or more members
    is re-expanded as a simple cycle in increasing id order. For the
    acyclic part the result is the unique reduction.
    """
    n = m.n
    if any(not (m.rows[a] >> a & 1) for a in range(n)):
        raise ValueError("matrix is not reflexive")
    if not m.is_transitive():
        raise ValueError("matrix is not transitive")

    cls_of = [-1] * n
    classes = []
    for v in range(n):
        if cls_of[v] != -1:
            continue
        cid = len(classes)
        members = [w for w in range(n) if (m.rows[v] >> w & 1) and (m.rows[w] >> v & 1)]
        for w in members:
            cls_of[w] = cid
        classes.append(members)

    c = len(classes)
    crow = [0] * c
    for ci, members in enumerate(classes):
        row = m.rows[members[0]]
        bits = 0
        for cj in range(c):
            if row >> classes[cj][0] & 1:
                bits |= 1 << cj
        crow[ci] = bits

    arcs = []
    for ci, members in enumerate(classes):
        if len(members) > 1:
            for i in range(len(members)):
                arcs.append((members[i], members[(i + 1) % len(members)]))
        # cover arcs: successors not implied through an intermediate class
        cand = crow[ci] & ~(1 << ci)
        covered = 0
        rest = cand
        while rest:
            cj = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            covered |= crow[cj] & ~(1 << cj)
        keep = cand & ~covered
        while keep:
            cj = (keep & -keep).bit_length() - 1
            keep &= keep - 1
            arcs.append((classes[ci][0], classes[cj][0]))
    return Digraph(n, arcs)


def minimal_restricted_join(g1, g2):
    """Minimum join-reachability digraph over the original vertices."""
    if g1.n != g2.n:
        raise ValueError("vertex-set mismatch")
    m = and_closure(transitive_closure(g1), transitive_closure(g2))
    return transitive_reduction(m)
