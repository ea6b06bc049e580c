"""Maximum-cardinality matching on general graphs, plus the leaf-link setup.

The solver initializes its partial solution with a maximum matching on the
graph whose nodes are forest leaves and whose edges are links joining leaves
of two different paths (links joining the two ends of one path are "bad" and
excluded). General graphs need blossom contraction; a greedy matching is kept
alongside as a deliberately weaker drop-in used by the audit's mutation
tests.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import Edge
from .instance import Instance


def max_matching(n: int, adj: list[list[int]]) -> list[int]:
    """Blossom algorithm; returns mate[] with -1 for unmatched.

    `adj` must be symmetric and parallel-free. Free vertices are scanned in
    ascending id and neighbors in the order given, so the result is a pure
    function of the input.
    """
    match = [-1] * n
    p = [-1] * n
    base = list(range(n))
    used = [False] * n
    blossom = [False] * n

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = p[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = p[match[b]]

    def mark_path(v: int, b: int, child: int) -> None:
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            p[v] = child
            child = match[v]
            v = p[match[v]]

    def find_path(root: int) -> bool:
        nonlocal p, used, base, blossom
        used = [False] * n
        p = [-1] * n
        base = list(range(n))
        used[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and p[match[to]] != -1):
                    # odd cycle: contract the blossom down to the common base
                    cur = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, cur, to)
                    mark_path(to, cur, v)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if match[to] == -1:
                        # augmenting path found; flip along parents
                        u = to
                        while u != -1:
                            pv = p[u]
                            ppv = match[pv]
                            match[u] = pv
                            match[pv] = u
                            u = ppv
                        return True
                    used[match[to]] = True
                    queue.append(match[to])
        return False

    for v in range(n):
        if match[v] == -1:
            find_path(v)
    return match


@dataclass(frozen=True)
class LeafLinkGraph:
    """Forest leaves plus the links eligible for the initial matching."""

    leaves: tuple[int, ...]
    candidates: tuple[Edge, ...]
    bad: tuple[Edge, ...]


def build_leaf_link_graph(inst: Instance) -> LeafLinkGraph:
    leaf_set = set(inst.forest_leaves)
    comp_of: dict[int, int] = {}
    from .graph import connected_components

    for i, comp in enumerate(connected_components(inst.forest_graph)):
        for v in comp:
            comp_of[v] = i
    candidates: list[Edge] = []
    bad: list[Edge] = []
    seen_pairs: set[tuple[int, int]] = set()
    for e in sorted(inst.links, key=lambda e: e.eid):
        if e.u not in leaf_set or e.v not in leaf_set:
            continue
        if comp_of[e.u] == comp_of[e.v]:
            bad.append(e)
            continue
        if e.pair() in seen_pairs:
            continue
        seen_pairs.add(e.pair())
        candidates.append(e)
    return LeafLinkGraph(tuple(inst.forest_leaves), tuple(candidates), tuple(bad))


def _matching_on_candidates(llg: LeafLinkGraph, mode: str) -> frozenset[int]:
    index = {v: i for i, v in enumerate(llg.leaves)}
    if mode == "greedy":
        taken: set[int] = set()
        chosen = []
        for e in llg.candidates:  # ascending id; take whatever still fits
            if e.u not in taken and e.v not in taken:
                taken.update((e.u, e.v))
                chosen.append(e.eid)
        return frozenset(chosen)
    assert mode == "blossom"
    adj: list[list[int]] = [[] for _ in llg.leaves]
    for e in llg.candidates:
        adj[index[e.u]].append(index[e.v])
        adj[index[e.v]].append(index[e.u])
    for lst in adj:
        lst.sort()
    mate = max_matching(len(llg.leaves), adj)
    chosen = []
    pair_to_eid = {e.pair(): e.eid for e in llg.candidates}
    for i, j in enumerate(mate):
        if j > i:
            u, v = llg.leaves[i], llg.leaves[j]
            chosen.append(pair_to_eid[(min(u, v), max(u, v))])
    return frozenset(chosen)


def initial_partial_solution(inst: Instance, *, mode: str = "blossom") -> tuple[frozenset[int], int]:
    """Matching link ids and the count of leaves left unmatched.

    Requires a disjoint-paths instance; every path contributes exactly two
    leaves, so the unmatched count is 2*n_comp - 2|M|.
    """
    assert inst.is_paths_instance(), "initialization expects a disjoint-paths instance"
    llg = build_leaf_link_graph(inst)
    m = _matching_on_candidates(llg, mode)
    return m, 2 * inst.n_comp - 2 * len(m)