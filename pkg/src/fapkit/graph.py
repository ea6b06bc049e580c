"""Undirected multigraph core with stable edge ids.

Vertices are dense ints 0..n-1. Edges carry an id and a kind ("forest" or
"link"); parallel edges are fine, self-loops are not. Every iteration the
module exposes is deterministic: ascending vertex id, then ascending edge id.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidPartition

FOREST = "forest"
LINK = "link"


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    eid: int
    kind: str

    def ends(self) -> tuple[int, int]:
        return (self.u, self.v)

    def other(self, w: int) -> int:
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        raise ValueError(f"vertex {w} is not an endpoint of edge {self.eid}")

    def pair(self) -> tuple[int, int]:
        return (self.u, self.v) if self.u <= self.v else (self.v, self.u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for e in self.edges:
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise ValueError(f"edge {e.eid} has an endpoint outside 0..{self.n - 1}")
            if e.u == e.v:
                raise ValueError(f"edge {e.eid} is a self-loop")
            if e.eid in seen:
                raise ValueError(f"edge id {e.eid} appears twice")
            seen.add(e.eid)

    @cached_property
    def adj(self) -> tuple[tuple[tuple[int, Edge], ...], ...]:
        """Per vertex: (neighbor, edge) pairs sorted by (neighbor, edge id)."""
        out: list[list[tuple[int, Edge]]] = [[] for _ in range(self.n)]
        for e in self.edges:
            out[e.u].append((e.v, e))
            out[e.v].append((e.u, e))
        return tuple(tuple(sorted(lst, key=lambda t: (t[0], t[1].eid))) for lst in out)

    @cached_property
    def edge_by_id(self) -> dict[int, Edge]:
        return {e.eid: e for e in self.edges}

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def subgraph(self, edge_ids: set[int] | frozenset[int]) -> "Graph":
        """Same vertex set, edges restricted to the given ids (ids kept)."""
        return Graph(self.n, tuple(e for e in self.edges if e.eid in edge_ids))


def connected_components(g: Graph) -> tuple[frozenset[int], ...]:
    """Vertex sets of the connected components, sorted by smallest member."""
    seen = [False] * g.n
    comps: list[frozenset[int]] = []
    for s in range(g.n):
        if seen[s]:
            continue
        bucket = [s]
        seen[s] = True
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w, _ in g.adj[v]:
                if not seen[w]:
                    seen[w] = True
                    bucket.append(w)
                    queue.append(w)
        comps.append(frozenset(bucket))
    return tuple(sorted(comps, key=min))


@dataclass(frozen=True)
class BlockDecomposition:
    """Bridges, 2-edge-connected blocks (>= 2 vertices), lonely vertices.

    A lonely vertex is one that is its own 2-edge-connected class: every
    incident edge is a bridge (isolated vertices included). Blocks and
    components are sorted by smallest member; bridges are edge ids.
    """

    bridges: frozenset[int]
    blocks: tuple[frozenset[int], ...]
    lonely: frozenset[int]
    components: tuple[frozenset[int], ...]

    @cached_property
    def _class_index(self) -> dict[int, frozenset[int]]:
        idx: dict[int, frozenset[int]] = {}
        for b in self.blocks:
            for v in b:
                idx[v] = b
        for v in self.lonely:
            idx[v] = frozenset((v,))
        return idx

    def class_of(self, v: int) -> frozenset[int]:
        """The 2-edge-connected class of v (a block or the singleton {v})."""
        return self._class_index[v]

    def classes(self) -> tuple[frozenset[int], ...]:
        out = list(self.blocks) + [frozenset((v,)) for v in sorted(self.lonely)]
        return tuple(sorted(out, key=min))

    @cached_property
    def _component_index(self) -> dict[int, frozenset[int]]:
        return {v: c for c in self.components for v in c}

    def component_of(self, v: int) -> frozenset[int]:
        return self._component_index[v]


def decompose(g: Graph) -> BlockDecomposition:
    """Bridge-and-block decomposition via one iterative lowpoint DFS.

    Parallel edges are handled by skipping only the tree edge's id on the way
    back up, so a doubled edge is never a bridge.
    """
    pre = [-1] * g.n
    low = [0] * g.n
    bridges: set[int] = set()
    clock = 0
    for root in range(g.n):
        if pre[root] != -1:
            continue
        # stack entries: (vertex, incoming edge id, iterator index)
        stack: list[list[int]] = [[root, -1, 0]]
        pre[root] = low[root] = clock
        clock += 1
        while stack:
            v, in_eid, i = stack[-1]
            if i < len(g.adj[v]):
                stack[-1][2] += 1
                w, e = g.adj[v][i]
                if e.eid == in_eid:
                    continue
                if pre[w] == -1:
                    pre[w] = low[w] = clock
                    clock += 1
                    stack.append([w, e.eid, 0])
                else:
                    low[v] = min(low[v], pre[w])
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] > pre[p]:
                        bridges.add(in_eid)

    residual = g.subgraph({e.eid for e in g.edges} - bridges)
    klass = connected_components(residual)
    blocks = tuple(c for c in klass if len(c) >= 2)
    lonely = frozenset(v for c in klass if len(c) == 1 for v in c)
    return BlockDecomposition(
        bridges=frozenset(bridges),
        blocks=blocks,
        lonely=lonely,
        components=connected_components(g),
    )


def is_two_edge_connected(g: Graph) -> bool:
    """Connected and bridgeless; single-vertex and empty graphs count."""
    if g.n <= 1:
        return True
    d = decompose(g)
    return len(d.components) == 1 and not d.bridges


@dataclass(frozen=True)
class ContractedView:
    """A quotient of `base` by a vertex partition.

    Quotient edges keep their base edge ids, so lifting an edge choice back is
    the identity on ids; edges interior to a part become self-loops and are
    dropped. Parts are normalized to ascending-smallest-member order, which
    also fixes the quotient vertex numbering.
    """

    base: Graph
    quotient: Graph
    part_of: tuple[int, ...]
    parts: tuple[frozenset[int], ...]

    def to_quotient(self, v: int) -> int:
        return self.part_of[v]

    def super_vertices(self, qv: int) -> frozenset[int]:
        return self.parts[qv]

    def lift_edge(self, eid: int) -> Edge:
        return self.base.edge_by_id[eid]


def contract(g: Graph, parts: list[frozenset[int]] | tuple[frozenset[int], ...]) -> ContractedView:
    norm = tuple(sorted((frozenset(p) for p in parts), key=min))
    part_of = [-1] * g.n
    for qid, p in enumerate(norm):
        if not p:
            raise InvalidPartition("empty part")
        for v in p:
            if not (0 <= v < g.n):
                raise InvalidPartition(f"vertex {v} outside 0..{g.n - 1}")
            if part_of[v] != -1:
                raise InvalidPartition(f"vertex {v} appears in two parts")
            part_of[v] = qid
    if any(q == -1 for q in part_of):
        missing = [v for v, q in enumerate(part_of) if q == -1]
        raise InvalidPartition(f"vertices not covered: {missing}")
    qedges = tuple(
        Edge(part_of[e.u], part_of[e.v], e.eid, e.kind)
        for e in g.edges
        if part_of[e.u] != part_of[e.v]
    )
    return ContractedView(
        base=g,
        quotient=Graph(len(norm), qedges),
        part_of=tuple(part_of),
        parts=norm,
    )
