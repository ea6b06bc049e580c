"""Shared test utilities: tiny independent oracles and instance builders.

Everything here is deliberately written from the problem definitions, not by
calling back into the library's own search code, so agreement tests mean
something.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from pathlib import Path

from fapkit.graph import FOREST, LINK, Edge, Graph, is_two_edge_connected
from fapkit.instance import Instance

DATA = Path(__file__).parent / "data"


def build(n, forest, links):
    """Instance from 0-based endpoint pairs; forest edges get the low ids."""
    edges = []
    for u, v in forest:
        edges.append(Edge(u, v, len(edges), FOREST))
    for u, v in links:
        edges.append(Edge(u, v, len(edges), LINK))
    return Instance(n=n, edges=tuple(edges))


def graph_of(n, pairs):
    """Plain unlabeled graph, every edge kind forest."""
    return Graph(n, tuple(Edge(u, v, i, FOREST) for i, (u, v) in enumerate(pairs)))


@lru_cache(maxsize=None)
def atlas(max_n=8):
    """All simple graphs on 1..max_n vertices up to isomorphism, frozen on disk."""
    out = []
    for line in (DATA / "graphs_le8.txt").read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        n_str, mask_str = line.split()
        n, mask = int(n_str), int(mask_str, 16)
        if n > max_n:
            continue
        pairs = tuple(p for k, p in enumerate(combinations(range(n), 2)) if mask >> k & 1)
        out.append((n, pairs))
    return out


def brute_matching_size(n, pairs):
    """Maximum matching cardinality by a DP over covered-vertex bitmasks."""
    nbr = [0] * n
    for u, v in pairs:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    full = (1 << n) - 1
    best = [0] * (full + 1)
    for mask in range(1, full + 1):
        v = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << v)
        score = best[rest]
        cand = nbr[v] & rest
        while cand:
            w = cand & -cand
            pick = 1 + best[rest ^ w]
            if pick > score:
                score = pick
            cand ^= w
        best[mask] = score
    return best[full]


def brute_bridges(g):
    """Bridges straight from the definition: deleting the edge must split
    the component it lies in."""

    def n_components(edges):
        parent = list(range(g.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = g.n
        for e in edges:
            ru, rv = find(e.u), find(e.v)
            if ru != rv:
                parent[ru] = rv
                comps -= 1
        return comps

    base = n_components(g.edges)
    out = set()
    for e in g.edges:
        if n_components([f for f in g.edges if f.eid != e.eid]) > base:
            out.add(e.eid)
    return frozenset(out)


def brute_two_edge_connected(g):
    """2-edge-connectivity by deleting every single edge and re-checking
    connectivity; the n <= 1 cases are connected with nothing to delete."""
    if g.n <= 1:
        return True

    def connected(edges):
        seen = {0}
        frontier = [0]
        adj = {}
        for e in edges:
            adj.setdefault(e.u, []).append(e.v)
            adj.setdefault(e.v, []).append(e.u)
        while frontier:
            v = frontier.pop()
            for w in adj.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return len(seen) == g.n

    if not connected(g.edges):
        return False
    return all(connected([f for f in g.edges if f.eid != e.eid]) for e in g.edges)


def tree_path_positions(n, tree_pairs, u, v):
    """Indices into tree_pairs of the unique u-v path, by parent walk."""
    adj = {}
    for i, (a, b) in enumerate(tree_pairs):
        adj.setdefault(a, []).append((b, i))
        adj.setdefault(b, []).append((a, i))
    prev = {u: (None, None)}
    frontier = [u]
    while frontier:
        x = frontier.pop()
        for y, i in adj.get(x, ()):
            if y not in prev:
                prev[y] = (x, i)
                frontier.append(y)
    assert v in prev, "endpoints lie in different trees"
    out = []
    x = v
    while x != u:
        x, i = prev[x]
        out.append(i)
    return out


def wtap_set_cover_min(n_positions, rows):
    """Exact minimum-weight cover by a forward DP over covered-edge masks.

    rows: (cover_mask, weight) per candidate link. Returns None when even
    the union of all rows misses an edge.
    """
    full = (1 << n_positions) - 1
    inf = float("inf")
    best = [inf] * (full + 1)
    best[0] = 0
    for mask in range(full + 1):
        if best[mask] is inf:
            continue
        for cover, w in rows:
            nxt = mask | cover
            if best[mask] + w < best[nxt]:
                best[nxt] = best[mask] + w
    return None if best[full] is inf else best[full]


def random_paths_instance(rng, n, c, n_links, ensure_feasible=True, tries=300):
    """Vertex-disjoint paths plus uniformly sampled links.

    Links may run parallel to forest edges but never duplicate each other.
    With ensure_feasible the sample is redrawn until (V, F u L) is
    2-edge-connected, which makes the instance solvable outright.
    """
    assert 1 <= c <= n
    for _ in range(tries):
        verts = list(range(n))
        rng.shuffle(verts)
        if c == 1:
            sizes = [n]
        else:
            cuts = sorted(rng.sample(range(1, n), c - 1))
            sizes = [b - a for a, b in zip([0] + cuts, cuts + [n])]
        forest = []
        pos = 0
        for s in sizes:
            chunk = verts[pos : pos + s]
            pos += s
            forest.extend(zip(chunk, chunk[1:]))
        pool = [(u, v) for u, v in combinations(range(n), 2)]
        rng.shuffle(pool)
        links = pool[:n_links]
        inst = build(n, forest, links)
        if not ensure_feasible or is_two_edge_connected(inst.graph):
            return inst
    raise RuntimeError(f"no feasible sample in {tries} tries (n={n} c={c} links={n_links})")


def random_forest_instance(rng, n, c, n_links, ensure_feasible=True, tries=300):
    """Random forest (not necessarily paths) plus sampled links."""
    assert 1 <= c <= n
    for _ in range(tries):
        verts = list(range(n))
        rng.shuffle(verts)
        roots = verts[:c]
        forest = []
        placed = list(roots)
        for v in verts[c:]:
            forest.append((rng.choice(placed), v))
            placed.append(v)
        pool = [(u, v) for u, v in combinations(range(n), 2)]
        rng.shuffle(pool)
        links = pool[:n_links]
        inst = build(n, forest, links)
        if not ensure_feasible or is_two_edge_connected(inst.graph):
            return inst
    raise RuntimeError(f"no feasible sample in {tries} tries (n={n} c={c} links={n_links})")


def feasible(inst, link_ids):
    return is_two_edge_connected(inst.with_solution(frozenset(link_ids)))
