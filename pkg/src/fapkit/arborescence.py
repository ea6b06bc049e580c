"""Minimum-weight double cover via weighted matroid intersection.

The directed relaxation: replace every edge of F u L by its two orientations
(weight 0 for forest arcs, 1 for link arcs, arcs into the root dropped) and
find a minimum-weight arc set entering every root-avoiding vertex subset at
least twice. Such minimal sets of size 2(n-1) are exactly unions of two
edge-disjoint spanning arborescences rooted at r, i.e. common independent
sets of

  (i)  the 2-fold union of the graphic matroid on underlying edges
       (independent iff the edge multiset splits into two forests), and
  (ii) the partition matroid capping indegree at 2 per non-root vertex.

Weighted intersection runs the textbook exchange-digraph scheme: arcs
x -> y (x in I, y outside) when I - x + y stays independent in (i), arcs
y -> x when it stays independent in (ii), node costs +w(y) / -w(x), and an
augmentation along a minimum-cost, fewest-node path keeps the current set
extreme for its size.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AssertionFailure, Infeasible
from .graph import FOREST
from .instance import Instance


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    aid: int
    eid: int
    weight: int


@dataclass(frozen=True)
class ArcSet:
    """A feasible double cover: chosen arcs, their total weight, the root."""

    arcs: tuple[Arc, ...]
    weight: int
    root: int

    def edge_ids(self) -> frozenset[int]:
        return frozenset(a.eid for a in self.arcs)

    def link_edge_ids(self) -> frozenset[int]:
        return frozenset(a.eid for a in self.arcs if a.weight > 0)


class _TwoForests:
    """A partition of an arc set into two forests over the underlying edges.

    Insertion uses matroid-union augmentation: try a side; if the new edge
    closes a cycle there, any cycle edge may be evicted to the other side,
    searched breadth-first so the applied move chain is shortest.
    """

    def __init__(self, n: int):
        self.n = n
        self.side: dict[int, int] = {}  # aid -> 0/1
        self.ends: dict[int, tuple[int, int]] = {}
        self.adj: tuple[dict[int, list[tuple[int, int]]], ...] = ({}, {})

    def copy(self) -> "_TwoForests":
        other = _TwoForests.__new__(_TwoForests)
        other.n = self.n
        other.side = dict(self.side)
        other.ends = dict(self.ends)
        other.adj = (
            {v: list(lst) for v, lst in self.adj[0].items()},
            {v: list(lst) for v, lst in self.adj[1].items()},
        )
        return other

    def _attach(self, aid: int, s: int) -> None:
        u, v = self.ends[aid]
        self.adj[s].setdefault(u, []).append((v, aid))
        self.adj[s].setdefault(v, []).append((u, aid))
        self.side[aid] = s

    def _detach(self, aid: int) -> None:
        s = self.side.pop(aid)
        u, v = self.ends[aid]
        self.adj[s][u] = [t for t in self.adj[s][u] if t[1] != aid]
        self.adj[s][v] = [t for t in self.adj[s][v] if t[1] != aid]

    def remove(self, aid: int) -> None:
        self._detach(aid)
        del self.ends[aid]

    def _path(self, s: int, u: int, v: int) -> list[int] | None:
        """Arc ids along the unique u-v path in side s, or None."""
        if u == v:
            return []
        parent: dict[int, tuple[int, int]] = {u: (-1, -1)}
        stack = [u]
        while stack:
            x = stack.pop()
            for y, aid in self.adj[s].get(x, ()):  # order irrelevant: path unique
                if y not in parent:
                    parent[y] = (x, aid)
                    if y == v:
                        stack = []
                        break
                    stack.append(y)
        if v not in parent:
            return None
        out = []
        cur = v
        while parent[cur][0] != -1:
            out.append(parent[cur][1])
            cur = parent[cur][0]
        return out

    def insert(self, aid: int, u: int, v: int) -> bool:
        """Place a new element, evicting along a shortest move chain if needed."""
        self.ends[aid] = (u, v)
        seeds = [(aid, 0), (aid, 1)]
        parent: dict[tuple[int, int], tuple[int, int] | None] = {st: None for st in seeds}
        queue = list(seeds)
        qi = 0
        winner: tuple[int, int] | None = None
        while qi < len(queue):
            a, s = queue[qi]
            qi += 1
            au, av = self.ends[a]
            cyc = self._path(s, au, av)
            if cyc is None:
                winner = (a, s)
                break
            for b in cyc:
                st = (b, 1 - s)
                if st not in parent:
                    parent[st] = (a, s)
                    queue.append(st)
        if winner is None:
            del self.ends[aid]
            return False
        chain = []
        cur: tuple[int, int] | None = winner
        while cur is not None:
            chain.append(cur)
            cur = parent[cur]
        for b, t in chain:
            if b in self.side:
                self._detach(b)
            self._attach(b, t)
        return True

    def assert_consistent(self) -> None:
        for s in (0, 1):
            seen: set[int] = set()
            for v in list(self.adj[s]):
                if v in seen:
                    continue
                # BFS counting edges vs vertices detects any cycle
                comp = [v]
                seen.add(v)
                edges = set()
                i = 0
                while i < len(comp):
                    x = comp[i]
                    i += 1
                    for y, aid in self.adj[s].get(x, ()):
                        edges.add(aid)
                        if y not in seen:
                            seen.add(y)
                            comp.append(y)
                if len(edges) != len(comp) - 1:
                    raise AssertionFailure("forest side contains a cycle")


def _build_arcs(inst: Instance, root: int) -> list[Arc]:
    arcs: list[Arc] = []
    aid = 0
    for e in sorted(inst.edges, key=lambda e: e.eid):
        w = 0 if e.kind == FOREST else 1
        for tail, head in ((e.u, e.v), (e.v, e.u)):
            if head == root:
                continue
            arcs.append(Arc(tail, head, aid, e.eid, w))
            aid += 1
    return arcs


def min_double_cover(inst: Instance, root: int = 0) -> ArcSet:
    """Minimum-weight arc set entering every root-avoiding cut twice.

    Returns the common base padded with every free forest arc, so downstream
    consumers can rely on all forest arcs being present.
    """
    n = inst.n
    arcs = _build_arcs(inst, root)
    by_aid = {a.aid: a for a in arcs}
    target = 2 * (n - 1)
    chosen = _min_weight_common_base(n, root, arcs, target)
    chosen_ids = set(chosen)
    for a in arcs:
        if a.weight == 0:
            chosen_ids.add(a.aid)
    out = tuple(sorted((by_aid[i] for i in chosen_ids), key=lambda a: a.aid))
    return ArcSet(arcs=out, weight=sum(a.weight for a in out), root=root)


def _min_weight_common_base(n: int, root: int, arcs: list[Arc], target: int) -> set[int]:
    if target <= 0:
        return set()
    by_aid = {a.aid: a for a in arcs}
    chosen: set[int] = set()
    forests = _TwoForests(n)
    indeg = [0] * n

    for _round in range(target):
        outside = [a for a in arcs if a.aid not in chosen]
        inside = sorted(chosen)

        add_ok: dict[int, bool] = {}
        for a in outside:
            probe = forests.copy()
            add_ok[a.aid] = probe.insert(a.aid, a.tail, a.head)

        # exchange digraph edges, as (from, to) pairs over arc ids
        edges: list[tuple[int, int]] = []
        for a in outside:
            if add_ok[a.aid]:
                for x in inside:
                    edges.append((x, a.aid))
            else:
                for x in inside:
                    probe = forests.copy()
                    probe.remove(x)
                    if probe.insert(a.aid, a.tail, a.head):
                        edges.append((x, a.aid))
            if indeg[a.head] <= 1:
                for x in inside:
                    edges.append((a.aid, x))
            else:
                for x in inside:
                    if by_aid[x].head == a.head:
                        edges.append((a.aid, x))

        def cost(aid: int) -> int:
            return by_aid[aid].weight if aid not in chosen else -by_aid[aid].weight

        sources = [a.aid for a in outside if add_ok[a.aid]]
        sinks = {a.aid for a in outside if indeg[a.head] <= 1}
        dist: dict[int, tuple[int, int]] = {s: (cost(s), 1) for s in sources}
        pred: dict[int, int] = {}
        node_count = len(outside) + len(inside)
        edges.sort()
        for _ in range(node_count):
            improved = False
            for frm, to in edges:
                if frm not in dist:
                    continue
                cand = (dist[frm][0] + cost(to), dist[frm][1] + 1)
                if to not in dist or cand < dist[to]:
                    dist[to] = cand
                    pred[to] = frm
                    improved = True
            if not improved:
                break

        best: int | None = None
        for t in sorted(sinks):
            if t in dist and (best is None or dist[t] < dist[best] or (dist[t] == dist[best] and t < best)):
                best = t
        if best is None:
            raise Infeasible("no augmenting path; the instance admits no double cover")

        path = [best]
        while path[-1] in pred:
            path.append(pred[path[-1]])
            if len(path) > node_count + 1:
                raise AssertionFailure("augmenting path reconstruction cycled")
        if len(path) != len(set(path)):
            raise AssertionFailure("augmenting path repeats a node")

        for aid in path:
            if aid in chosen:
                chosen.remove(aid)
                indeg[by_aid[aid].head] -= 1
            else:
                chosen.add(aid)
                indeg[by_aid[aid].head] += 1

        # rebuild the forest pair from scratch; quadratic overall but tiny
        forests = _TwoForests(n)
        for aid in sorted(chosen):
            a = by_aid[aid]
            if not forests.insert(aid, a.tail, a.head):
                raise AssertionFailure("augmented set is not two-forest partitionable")
        forests.assert_consistent()
        if any(d > 2 for d in indeg):
            raise AssertionFailure("augmented set violates the indegree cap")

    return chosen