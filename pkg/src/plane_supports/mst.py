"""Euclidean minimum spanning trees and the zero-weight reuse variant.

All tree computations share one deterministic tie-break: candidate edges are
compared by (weight, min endpoint id, max endpoint id). This makes every
result reproducible and lets the containment lemma (a zero-weight MST is a
subset of the free edges and the Euclidean MST) hold exactly, not just for
instances with unique distances.
"""

from __future__ import annotations

from .geom import distance
from .model import Edge, Hypergraph, SupportGraph, edge_key


class EmptyCoreError(Exception):
    """No vertex is shared by all hyperedges, so the star seed is undefined."""


def weighted_edge_list(ids, free, h: Hypergraph) -> list[tuple[int, int, float]]:
    """All candidate edges on `ids` with their working weights.

    Entries are (u, v, w) with u < v; w is 0 for free edges and the exact
    Euclidean distance otherwise.
    """
    id_list = sorted(set(ids))
    id_set = set(id_list)
    free_set = set()
    for a, b in free:
        e = edge_key(a, b)
        if e[0] not in id_set or e[1] not in id_set:
            raise ValueError(f"free edge {e} has an endpoint outside the vertex set")
        free_set.add(e)
    pos = h.vertices
    out = []
    for i in range(len(id_list)):
        for j in range(i + 1, len(id_list)):
            u, v = id_list[i], id_list[j]
            w = 0.0 if (u, v) in free_set else distance(pos[u], pos[v])
            out.append((u, v, w))
    return out


def mst_with_free_edges(ids, free, h: Hypergraph) -> SupportGraph:
    """Prim's algorithm where edges in `free` weigh zero.

    When a vertex joins the tree, its free neighbours are offered first (at
    weight zero) and marked, then the remaining outside vertices at their
    Euclidean distance. The output is always a subset of `free` united with
    the Euclidean MST of `ids`.
    """
    id_list = sorted(set(ids))
    if not id_list:
        raise ValueError("cannot span an empty vertex set")
    id_set = set(id_list)

    free_adj: dict[int, set[int]] = {v: set() for v in id_list}
    for a, b in free:
        u, v = edge_key(a, b)
        if u not in id_set or v not in id_set:
            raise ValueError(f"free edge ({u}, {v}) has an endpoint outside the vertex set")
        free_adj[u].add(v)
        free_adj[v].add(u)

    if len(id_list) == 1:
        return SupportGraph(frozenset())

    pos = h.vertices
    in_tree = {id_list[0]}
    # best[v] = cheapest known edge into v, keyed (weight, min id, max id)
    best: dict[int, tuple[float, int, int]] = {}
    chosen: list[Edge] = []

    def offer_from(x: int) -> None:
        px = pos[x]
        marked = set()
        for v in free_adj[x]:
            if v in in_tree:
                continue
            cand = (0.0,) + edge_key(x, v)
            if v not in best or cand < best[v]:
                best[v] = cand
            marked.add(v)
        for v in id_list:
            if v in in_tree or v in marked:
                continue
            cand = (distance(px, pos[v]),) + edge_key(x, v)
            if v not in best or cand < best[v]:
                best[v] = cand

    offer_from(id_list[0])
    for _ in range(len(id_list) - 1):
        v_next, key = min(best.items(), key=lambda kv: kv[1])
        del best[v_next]
        chosen.append((key[1], key[2]))
        in_tree.add(v_next)
        offer_from(v_next)

    return SupportGraph(frozenset(chosen))


def emst(ids, h: Hypergraph) -> SupportGraph:
    """Euclidean minimum spanning tree of `ids` under the global tie-break."""
    return mst_with_free_edges(ids, (), h)


def star_support(h: Hypergraph) -> SupportGraph:
    """EMST of the core plus a spoke from each remaining vertex to its
    nearest core vertex (ties broken by smallest id).

    The result is a plane support tree whenever no three vertices are
    collinear. Raises EmptyCoreError when no vertex lies in every hyperedge.
    """
    core = h.core()
    if not core:
        raise EmptyCoreError("no vertex occurs in all hyperedges")
    edges = set(emst(core, h).edges)
    core_sorted = sorted(core)
    pos = h.vertices
    for v in range(h.n):
        if v in core:
            continue
        target = min(core_sorted, key=lambda c: (distance(pos[v], pos[c]), c))
        edges.add(edge_key(v, target))
    return SupportGraph(frozenset(edges))
