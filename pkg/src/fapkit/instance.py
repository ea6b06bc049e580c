"""Problem instances, validation, and the plain-text file format.

An instance is a forest (V, F) plus candidate links L on the same vertices.
The goal everywhere in this package is to pick S subseteq L so that
(V, F u S) is 2-edge-connected.

File format (UTF-8, LF, `#` starts a comment line):

    fap <n> <n_forest_edges> <n_links>
    e <u> <v>        one line per forest edge, 1-based endpoints
    l <u> <v>        one line per link

Solutions are rendered as:

    sol <k>
    l <u> <v>        k lines

Forest edges get ids 0..|F|-1 in line order, links continue from |F|, so
parsing a rendered instance reproduces it id-for-id.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from .errors import Infeasible, MalformedEdge, NotAForest
from .graph import FOREST, LINK, Edge, Graph, connected_components, is_two_edge_connected


@dataclass(frozen=True)
class ReductionRecord:
    """One applied reduction, with enough payload to lift solutions back.

    kind is one of "contract2ec", "split_isolated", "path_split"; the payload
    tuples are interpreted by the reduction that wrote them.
    """

    kind: str
    vertex_map: tuple[tuple[int, int], ...] = ()
    link_map: tuple[tuple[int, int], ...] = ()
    dummy_links: tuple[int, ...] = ()
    detail: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class Instance:
    n: int
    edges: tuple[Edge, ...]
    provenance: tuple[ReductionRecord, ...] = field(default=(), compare=False)

    @cached_property
    def graph(self) -> Graph:
        return Graph(self.n, self.edges)

    @cached_property
    def forest_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.kind == FOREST)

    @cached_property
    def links(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.kind == LINK)

    @cached_property
    def forest_graph(self) -> Graph:
        return Graph(self.n, self.forest_edges)

    @cached_property
    def n_comp(self) -> int:
        return self.n - len(self.forest_edges)

    @cached_property
    def forest_degree(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for e in self.forest_edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return tuple(deg)

    @cached_property
    def forest_leaves(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if self.forest_degree[v] == 1)

    @cached_property
    def isolated(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if self.forest_degree[v] == 0)

    def link_ids(self) -> frozenset[int]:
        return frozenset(e.eid for e in self.links)

    def with_solution(self, link_ids: set[int] | frozenset[int]) -> Graph:
        """The graph (V, F u S) for a chosen link id set S."""
        chosen = tuple(
            e for e in self.edges if e.kind == FOREST or e.eid in link_ids
        )
        return Graph(self.n, chosen)

    def is_paths_instance(self) -> bool:
        """True when every forest component is a path on >= 2 vertices."""
        return all(d in (1, 2) for d in self.forest_degree)


def validate(inst: Instance) -> Instance:
    """Check forest-ness and feasibility; returns the instance unchanged.

    Raises NotAForest when the forest edges contain a cycle and Infeasible
    when even taking every link leaves the graph short of 2-edge-connected.
    """
    forest = inst.forest_edges
    if inst.n - len(forest) != len(connected_components(inst.forest_graph)):
        raise NotAForest(
            f"{len(forest)} forest edges on {inst.n} vertices form a cycle somewhere"
        )
    if not is_two_edge_connected(inst.graph):
        raise Infeasible("the forest plus all links is not 2-edge-connected")
    return inst


def _build(n: int, forest_pairs: list[tuple[int, int]], link_pairs: list[tuple[int, int]]) -> Instance:
    edges = [Edge(u, v, i, FOREST) for i, (u, v) in enumerate(forest_pairs)]
    base = len(edges)
    edges += [Edge(u, v, base + i, LINK) for i, (u, v) in enumerate(link_pairs)]
    return Instance(n, tuple(edges))


def parse_instance(text: str) -> Instance:
    header: tuple[int, int, int] | None = None
    forest: list[tuple[int, int]] = []
    links: list[tuple[int, int]] = []
    seen: set[tuple[int, int, str]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if header is None:
            if tokens[0] != "fap" or len(tokens) != 4:
                raise MalformedEdge(f"line {lineno}: expected 'fap <n> <nF> <nL>' header")
            try:
                header = (int(tokens[1]), int(tokens[2]), int(tokens[3]))
            except ValueError:
                raise MalformedEdge(f"line {lineno}: non-integer header field") from None
            if header[0] < 1 or header[1] < 0 or header[2] < 0:
                raise MalformedEdge(f"line {lineno}: header counts out of range")
            continue
        if tokens[0] not in ("e", "l") or len(tokens) != 3:
            raise MalformedEdge(f"line {lineno}: expected 'e <u> <v>' or 'l <u> <v>'")
        try:
            u, v = int(tokens[1]), int(tokens[2])
        except ValueError:
            raise MalformedEdge(f"line {lineno}: non-integer endpoint") from None
        n = header[0]
        if not (1 <= u <= n and 1 <= v <= n):
            raise MalformedEdge(f"line {lineno}: endpoint outside 1..{n}")
        if u == v:
            raise MalformedEdge(f"line {lineno}: self-loop {u}")
        kind = FOREST if tokens[0] == "e" else LINK
        key = (min(u, v), max(u, v), kind)
        if key in seen:
            raise MalformedEdge(f"line {lineno}: duplicate {tokens[0]} edge {u} {v}")
        seen.add(key)
        (forest if kind == FOREST else links).append((u - 1, v - 1))
    if header is None:
        raise MalformedEdge("no 'fap' header found")
    if len(forest) != header[1] or len(links) != header[2]:
        raise MalformedEdge(
            f"header promised {header[1]} forest edges and {header[2]} links, "
            f"found {len(forest)} and {len(links)}"
        )
    return _build(header[0], forest, links)


def render_instance(inst: Instance, comment: str | None = None) -> str:
    out: list[str] = []
    if comment:
        for line in comment.splitlines():
            out.append(f"# {line}" if line else "#")
    out.append(f"fap {inst.n} {len(inst.forest_edges)} {len(inst.links)}")
    for e in sorted(inst.forest_edges, key=lambda e: e.eid):
        out.append(f"e {e.u + 1} {e.v + 1}")
    for e in sorted(inst.links, key=lambda e: e.eid):
        out.append(f"l {e.u + 1} {e.v + 1}")
    return "\n".join(out) + "\n"


def render_solution(inst: Instance, link_ids: set[int] | frozenset[int]) -> str:
    chosen = sorted(link_ids)
    by_id = inst.graph.edge_by_id
    out = [f"sol {len(chosen)}"]
    for eid in chosen:
        e = by_id[eid]
        out.append(f"l {e.u + 1} {e.v + 1}")
    return "\n".join(out) + "\n"


def parse_solution(text: str, inst: Instance) -> frozenset[int]:
    """Read a `sol` block back into link ids against `inst`.

    A pair matching several parallel links takes the lowest id not used yet.
    """
    count: int | None = None
    chosen: list[int] = []
    used: set[int] = set()
    by_pair: dict[tuple[int, int], list[int]] = {}
    for e in inst.links:
        by_pair.setdefault(e.pair(), []).append(e.eid)
    for ids in by_pair.values():
        ids.sort()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if count is None:
            if tokens[0] != "sol" or len(tokens) != 2:
                raise MalformedEdge(f"line {lineno}: expected 'sol <k>' header")
            count = int(tokens[1])
            continue
        if tokens[0] != "l" or len(tokens) != 3:
            raise MalformedEdge(f"line {lineno}: expected 'l <u> <v>'")
        u, v = int(tokens[1]) - 1, int(tokens[2]) - 1
        pair = (min(u, v), max(u, v))
        options = [eid for eid in by_pair.get(pair, []) if eid not in used]
        if not options:
            raise MalformedEdge(f"line {lineno}: no unused link {u + 1} {v + 1} in the instance")
        used.add(options[0])
        chosen.append(options[0])
    if count is None:
        raise MalformedEdge("no 'sol' header found")
    if len(chosen) != count:
        raise MalformedEdge(f"sol header promised {count} links, found {len(chosen)}")
    return frozenset(chosen)


def strip_provenance(inst: Instance) -> Instance:
    return replace(inst, provenance=())
