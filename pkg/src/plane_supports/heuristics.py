"""The three heuristic solvers.

* mst_approximation: union of one EMST per hyperedge.
* mst_iteration: per-hyperedge trees recomputed with zero weight for edges
  the rest of the support already pays for.
* local_search: hill climbing from the star seed; per round, every support
  edge is tentatively removed and the cheapest reconnection is searched for;
  the single best swap of the round is committed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .geom import segments_conflict
from .model import (ConstraintSet, Edge, Hypergraph, SupportGraph, UNRESTRICTED,
                    edge_key, satisfies, total_length)
from .mst import emst, mst_with_free_edges, star_support

# Gains below this never commit, which keeps termination independent of
# floating-point noise; replacement members must undercut the removed edge
# by more than _STRICT_EPS.
_TIE_EPS = 1e-9
_STRICT_EPS = 1e-12


@dataclass(frozen=True)
class ComputationSequence:
    """Order in which per-hyperedge trees are recomputed.

    Consecutive duplicates are rejected: recomputing a tree twice in a row
    provably changes nothing.
    """

    steps: tuple[int, ...]

    def __post_init__(self):
        if not self.steps:
            raise ValueError("computation sequence is empty")
        for a, b in zip(self.steps, self.steps[1:]):
            if a == b:
                raise ValueError(f"consecutive duplicate step {a} is redundant")


@dataclass(frozen=True)
class SolveReport:
    support: SupportGraph
    length: float
    rounds_or_passes: int
    wall_time: float


def _union_support(trees: dict[int, frozenset[Edge]]) -> SupportGraph:
    edges: set[Edge] = set()
    for t in trees.values():
        edges |= t
    return SupportGraph(frozenset(edges))


def _execute_sequence(h: Hypergraph, steps, trees=None) -> dict[int, frozenset[Edge]]:
    """Run the given recomputation steps, starting from `trees` (or nothing).

    Step s rebuilds tree s with every edge of the *other* trees that lies
    inside hyperedge s available at weight zero. Recomputing an existing tree
    can only shorten the support; that is asserted here.
    """
    trees = dict(trees) if trees else {}
    members = [sorted(s) for s in h.hyperedges]
    for s in steps:
        mset = h.hyperedges[s]
        free: set[Edge] = set()
        for s2, t in trees.items():
            if s2 == s:
                continue
            for u, v in t:
                if u in mset and v in mset:
                    free.add((u, v))
        recompute = s in trees
        before = total_length(_union_support(trees), h) if recompute else 0.0
        trees[s] = frozenset(mst_with_free_edges(members[s], free, h).edges)
        if recompute:
            after = total_length(_union_support(trees), h)
            assert after <= before + 1e-6, "tree recomputation lengthened the support"
    return trees


def mst_approximation(h: Hypergraph) -> SolveReport:
    """Union of per-hyperedge EMSTs; a k-approximation of the optimum."""
    t0 = time.perf_counter()
    trees = {s: frozenset(emst(sorted(h.hyperedges[s]), h).edges) for s in range(h.k)}
    support = _union_support(trees)
    return SolveReport(support, total_length(support, h), 1, time.perf_counter() - t0)


def mst_iteration(h: Hypergraph, sequence=None, max_passes: int = 20) -> SolveReport:
    """Iterated per-hyperedge MSTs with zero-weight reuse of support edges.

    With an explicit sequence the steps run exactly as given. Otherwise, for
    two hyperedges both three-step orders <0,1,0> and <1,0,1> are evaluated
    and the shorter support wins (this is already stable); for more
    hyperedges every tree starts as its isolated EMST and round-robin
    recomputation passes run until a pass leaves the edge set unchanged,
    capped at max_passes. Either way the result is never longer than
    mst_approximation's.
    """
    t0 = time.perf_counter()
    k = h.k
    if sequence is not None:
        steps = list(sequence.steps) if isinstance(sequence, ComputationSequence) \
            else [int(x) for x in sequence]
        if not steps:
            raise ValueError("computation sequence is empty")
        for s in steps:
            if not 0 <= s < k:
                raise IndexError(f"hyperedge index {s} out of range 0..{k - 1}")
        if set(steps) != set(range(k)):
            raise ValueError("computation sequence must contain every hyperedge at least once")
        support = _union_support(_execute_sequence(h, steps))
        return SolveReport(support, total_length(support, h), len(steps),
                           time.perf_counter() - t0)

    if k == 1:
        support = _union_support(_execute_sequence(h, [0]))
        return SolveReport(support, total_length(support, h), 1, time.perf_counter() - t0)

    if k == 2:
        g_a = _union_support(_execute_sequence(h, [0, 1, 0]))
        g_b = _union_support(_execute_sequence(h, [1, 0, 1]))
        len_a = total_length(g_a, h)
        len_b = total_length(g_b, h)
        support, length = (g_b, len_b) if len_b < len_a - _TIE_EPS else (g_a, len_a)
        return SolveReport(support, length, 3, time.perf_counter() - t0)

    # k > 2: start from the approximation state so every later step is a
    # pure recomputation, then iterate passes to stability.
    trees = {s: frozenset(emst(sorted(h.hyperedges[s]), h).edges) for s in range(k)}
    passes = 0
    for _ in range(max_passes):
        before = frozenset(_union_support(trees).edges)
        trees = _execute_sequence(h, list(range(k)), trees)
        passes += 1
        if frozenset(_union_support(trees).edges) == before:
            break
    support = _union_support(trees)
    return SolveReport(support, total_length(support, h), passes, time.perf_counter() - t0)


class _UndoDsu:
    """Union-find without path compression so unions can be rolled back."""

    __slots__ = ("parent", "rank")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            x = p[x]
        return x

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        bumped = self.rank[ra] == self.rank[rb]
        self.parent[rb] = ra
        if bumped:
            self.rank[ra] += 1
        return (rb, ra, bumped)

    def undo(self, token) -> None:
        rb, ra, bumped = token
        self.parent[rb] = rb
        if bumped:
            self.rank[ra] -= 1


class _Searcher:
    """Mutable local-search state shared across rounds of one solve."""

    def __init__(self, h: Hypergraph, c: ConstraintSet, start_edges,
                 max_replacement: int | None = 3):
        self.h = h
        self.c = c
        self.max_replacement = max_replacement
        self.members = [h.hyperedges[s] for s in range(h.k)]
        self.edges: set[Edge] = set(start_edges)
        self.adj: dict[int, set[int]] = {v: set() for v in range(h.n)}
        for u, v in self.edges:
            self.adj[u].add(v)
            self.adj[v].add(u)
        # Per-hyperedge candidate pairs sorted by (length, u, v).
        self.elen: dict[Edge, float] = {}
        self.cands: list[list[tuple[float, int, int]]] = []
        for s in range(h.k):
            mem = sorted(self.members[s])
            lst = []
            for i in range(len(mem)):
                for j in range(i + 1, len(mem)):
                    e = (mem[i], mem[j])
                    w = self.elen.get(e)
                    if w is None:
                        w = h.edge_length(*e)
                        self.elen[e] = w
                    lst.append((w, e[0], e[1]))
            lst.sort()
            self.cands.append(lst)
        for e in self.edges:
            if e not in self.elen:
                self.elen[e] = h.edge_length(*e)
        self._edge_hyps: dict[Edge, tuple[int, ...]] = {}
        self._conflict_memo: dict[tuple[Edge, Edge], bool] = {}
        # Swap results can be reused across rounds only while no hyperedge
        # the edge belongs to changes; under plane/acyclic constraints the
        # feasibility of a swap depends on the whole support, so no caching.
        self.use_cache = not (c.require_plane or c.require_acyclic)
        self.versions = [0] * h.k
        self.cache: dict[Edge, tuple[tuple[int, ...], object]] = {}

    def current_support(self) -> SupportGraph:
        return SupportGraph(frozenset(self.edges))

    def _hyps_of(self, e: Edge) -> tuple[int, ...]:
        out = self._edge_hyps.get(e)
        if out is None:
            u, v = e
            out = tuple(s for s in range(self.h.k)
                        if u in self.members[s] and v in self.members[s])
            self._edge_hyps[e] = out
        return out

    def _conflict(self, e1: Edge, e2: Edge) -> bool:
        key = (e1, e2) if e1 <= e2 else (e2, e1)
        hit = self._conflict_memo.get(key)
        if hit is None:
            hit = segments_conflict(self.h.segment(*e1), self.h.segment(*e2))
            self._conflict_memo[key] = hit
        return hit

    def _side_after_removal(self, e: Edge, s: int):
        """Vertices reachable from e[0] inside hyperedge s once e is gone;
        None if the hyperedge stays connected."""
        members = self.members[s]
        u, v = e
        seen = {u}
        stack = [u]
        adj = self.adj
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in members and y not in seen:
                    if (x == u and y == v) or (x == v and y == u):
                        continue
                    seen.add(y)
                    stack.append(y)
        if v in seen:
            return None
        return seen

    def _best_swap(self, e: Edge):
        """Cheapest feasible replacement set for removing e, or None.

        Returns (gain, replacement_tuple); the replacement is the shortest
        set of cut-crossing candidate edges (each strictly shorter than e)
        that reconnects every hyperedge e's removal breaks, subject to the
        constraint set. An empty tuple means e is simply redundant.
        """
        len_e = self.elen[e]
        broken = []
        for s in self._hyps_of(e):
            side = self._side_after_removal(e, s)
            if side is not None:
                broken.append((s, side))
        if not broken:
            return (len_e, ())

        nb = len(broken)
        full_mask = (1 << nb) - 1
        cand_mask: dict[Edge, int] = {}
        cand_w: dict[Edge, float] = {}
        edges_now = self.edges
        for bit, (s, side) in enumerate(broken):
            limit = len_e - _STRICT_EPS
            for w, a, b in self.cands[s]:
                if w >= limit:
                    break
                if ((a in side) != (b in side)) and (a, b) not in edges_now:
                    ed = (a, b)
                    if ed in cand_mask:
                        cand_mask[ed] |= 1 << bit
                    else:
                        cand_mask[ed] = 1 << bit
                        cand_w[ed] = w

        covered = 0
        for mk in cand_mask.values():
            covered |= mk
        if covered != full_mask:
            return None

        if self.c.require_plane:
            survivors = [s_ed for s_ed in edges_now if s_ed != e]
            for ed in list(cand_mask):
                if any(self._conflict(ed, s_ed) for s_ed in survivors):
                    del cand_mask[ed]
            covered = 0
            for mk in cand_mask.values():
                covered |= mk
            if covered != full_mask:
                return None

        order = sorted(cand_mask, key=lambda ed: (cand_w[ed], ed))
        per_bit: list[list[Edge]] = [[] for _ in range(nb)]
        for ed in order:
            mk = cand_mask[ed]
            for bit in range(nb):
                if mk >> bit & 1:
                    per_bit[bit].append(ed)

        dsu = None
        if self.c.require_acyclic:
            dsu = _UndoDsu(self.h.n)
            for a, b in edges_now:
                if (a, b) != e:
                    dsu.union(a, b)

        cap = nb if self.max_replacement is None else min(self.max_replacement, nb)
        best_total = None
        best_repl = None
        chosen: list[Edge] = []

        def dfs(uncovered: int, total: float) -> None:
            nonlocal best_total, best_repl
            if uncovered == 0:
                repl = tuple(sorted(chosen))
                if (best_total is None or total < best_total - _TIE_EPS
                        or (abs(total - best_total) <= _TIE_EPS and repl < best_repl)):
                    best_total, best_repl = total, repl
                return
            if len(chosen) >= cap:
                return
            bit = (uncovered & -uncovered).bit_length() - 1
            for ed in per_bit[bit]:
                t2 = total + cand_w[ed]
                if t2 >= len_e - _STRICT_EPS:
                    break
                if best_total is not None and t2 > best_total + _TIE_EPS:
                    break
                if ed in chosen:
                    continue
                if self.c.require_plane and any(self._conflict(ed, c2) for c2 in chosen):
                    continue
                token = None
                if dsu is not None:
                    if dsu.connected(ed[0], ed[1]):
                        continue
                    token = dsu.union(ed[0], ed[1])
                chosen.append(ed)
                dfs(uncovered & ~cand_mask[ed], t2)
                chosen.pop()
                if token is not None:
                    dsu.undo(token)

        dfs(full_mask, 0.0)
        if best_total is None:
            return None
        return (len_e - best_total, best_repl)

    def _swap_for(self, e: Edge):
        if not self.use_cache:
            return self._best_swap(e)
        vers = tuple(self.versions[s] for s in self._hyps_of(e))
        hit = self.cache.get(e)
        if hit is not None and hit[0] == vers:
            return hit[1]
        res = self._best_swap(e)
        self.cache[e] = (vers, res)
        return res

    def run_round(self) -> bool:
        """Evaluate every support edge and commit the single best swap.

        Edges are scanned by decreasing length; once the best known gain
        exceeds every remaining edge's length the scan stops early (a swap
        can never gain more than the removed edge's length). Returns False
        and leaves the support untouched when no swap strictly improves it.
        """
        order = sorted(self.edges, key=lambda ed: (-self.elen[ed], ed))
        best_gain = None
        best_e = None
        best_repl = None
        for e in order:
            if best_gain is not None and self.elen[e] < best_gain - _TIE_EPS:
                break
            res = self._swap_for(e)
            if res is None:
                continue
            gain, repl = res
            if gain <= _TIE_EPS:
                continue
            if (best_gain is None or gain > best_gain + _TIE_EPS
                    or (abs(gain - best_gain) <= _TIE_EPS
                        and (e, repl) < (best_e, best_repl))):
                best_gain, best_e, best_repl = gain, e, repl
        if best_e is None:
            return False

        self.edges.remove(best_e)
        self.adj[best_e[0]].discard(best_e[1])
        self.adj[best_e[1]].discard(best_e[0])
        touched = set(self._hyps_of(best_e))
        for r in best_repl:
            self.edges.add(r)
            self.adj[r[0]].add(r[1])
            self.adj[r[1]].add(r[0])
            touched.update(self._hyps_of(r))
        for s in touched:
            self.versions[s] += 1
        self.cache.pop(best_e, None)
        return True


def local_search_round(h: Hypergraph, g: SupportGraph, c: ConstraintSet = UNRESTRICTED,
                       max_replacement: int | None = 3):
    """One round of the hill climber on an existing support.

    Returns (new_support, improved); the input must already satisfy c.
    """
    if not satisfies(g, h, c):
        raise ValueError("input support violates the requested constraints")
    searcher = _Searcher(h, c, g.edges, max_replacement)
    improved = searcher.run_round()
    return searcher.current_support(), improved


def _climb(h: Hypergraph, c: ConstraintSet, start: SupportGraph,
           max_replacement: int | None, t0: float) -> SolveReport:
    searcher = _Searcher(h, c, start.edges, max_replacement)
    rounds = 0
    while searcher.run_round():
        rounds += 1
    support = searcher.current_support()
    return SolveReport(support, total_length(support, h), rounds,
                       time.perf_counter() - t0)


def local_search(h: Hypergraph, c: ConstraintSet = UNRESTRICTED,
                 max_replacement: int | None = 3) -> SolveReport:
    """Hill climbing from the star seed until no swap improves the support.

    Requires a nonempty core (EmptyCoreError otherwise). Each committed
    round strictly shrinks the total length, so the climb terminates.
    """
    t0 = time.perf_counter()
    seed = star_support(h)
    if not satisfies(seed, h, c):
        raise ValueError("star seed violates the requested constraints; "
                         "the input likely has collinear vertices")
    return _climb(h, c, seed, max_replacement, t0)


def local_search_seeded(h: Hypergraph, g0: SupportGraph,
                        c: ConstraintSet = UNRESTRICTED,
                        max_replacement: int | None = 3) -> SolveReport:
    """Same climb as local_search but starting from a caller-supplied seed."""
    t0 = time.perf_counter()
    if not satisfies(g0, h, c):
        raise ValueError("seed support violates the requested constraints")
    return _climb(h, c, g0, max_replacement, t0)
