"""Preprocessing reductions and their solution lifts.

Three reductions, each recording enough to lift a feasible solution of the
reduced instance back to a feasible solution of the original:

- contract_blocks: collapse 2-edge-connected parts of the non-link subgraph
  so the remaining structure is a forest (lift is the identity on link ids);
- split_isolated_nodes: replace each isolated vertex by a 2-vertex path and
  duplicate its incident links onto both copies (lift deduplicates and, when
  a dropped duplicate leaves a bridge behind, adds one reconnecting link);
- forest_to_paths: split branching vertices until every forest component is a
  path, one dummy vertex + dummy link + dummy forest edge per split (lift
  drops the dummy links).
"""

from __future__ import annotations

from .errors import AssertionFailure
from .graph import FOREST, LINK, Edge, Graph, connected_components, decompose, is_two_edge_connected
from .instance import Instance, ReductionRecord


def contract_blocks(g: Graph) -> Instance:
    """Contract each 2-edge-connected part of the kind-forest subgraph.

    Accepts any graph whose forest-kind edges may contain cycles; the result
    is a proper Instance whose forest part is acyclic. Link ids survive, so a
    solution of the result is a solution of the input verbatim.
    """
    forest_part = Graph(g.n, tuple(e for e in g.edges if e.kind == FOREST))
    klass = decompose(forest_part).classes()
    from .graph import contract  # local import keeps module import order simple

    view = contract(g, klass)
    # Between two distinct classes there can be at most one forest edge
    # (two would close a cycle and merge the classes), so the quotient's
    # forest part is automatically a forest.
    record = ReductionRecord(
        kind="contract2ec",
        vertex_map=tuple((v, view.part_of[v]) for v in range(g.n)),
    )
    return Instance(view.quotient.n, view.quotient.edges, provenance=(record,))


def lift_contract(sol: frozenset[int], rec: ReductionRecord) -> frozenset[int]:
    assert rec.kind == "contract2ec"
    return frozenset(sol)


def split_isolated_nodes(inst: Instance) -> Instance:
    """Replace every isolated forest vertex v by the path v--v2.

    Each link with k isolated endpoints becomes 2^k copies, one per choice of
    copy at each split endpoint; the copy using the original vertices keeps
    the original link id.
    """
    isolated = inst.isolated
    if not isolated:
        return Instance(inst.n, inst.edges, provenance=inst.provenance)
    twin = {}
    n = inst.n
    for v in isolated:
        twin[v] = n
        n += 1
    next_eid = max((e.eid for e in inst.edges), default=-1) + 1
    edges: list[Edge] = list(inst.forest_edges)
    new_forest: list[int] = []
    for v in isolated:
        edges.append(Edge(v, twin[v], next_eid, FOREST))
        new_forest.append(next_eid)
        next_eid += 1
    link_map: list[tuple[int, int]] = []
    for e in inst.links:
        u_opts = (e.u, twin[e.u]) if e.u in twin else (e.u,)
        v_opts = (e.v, twin[e.v]) if e.v in twin else (e.v,)
        first = True
        for uu in u_opts:
            for vv in v_opts:
                if first:
                    edges.append(Edge(uu, vv, e.eid, LINK))
                    first = False
                else:
                    edges.append(Edge(uu, vv, next_eid, LINK))
                    link_map.append((next_eid, e.eid))
                    next_eid += 1
    record = ReductionRecord(
        kind="split_isolated",
        vertex_map=tuple((twin[v], v) for v in isolated),
        link_map=tuple(link_map),
        detail=tuple((v, twin[v], fe) for v, fe in zip(isolated, new_forest)),
    )
    return Instance(n, tuple(edges), provenance=inst.provenance + (record,))


def lift_isolated(sol: frozenset[int], rec: ReductionRecord, original: Instance) -> frozenset[int]:
    """Map copies back to original links, dedup, and repair any bridge left.

    The repair mirrors the reduction's correctness argument: when dropping a
    duplicate turns its survivor into a bridge, any link across that bridge's
    cut restores feasibility, and one always exists because the original
    instance with all links is 2-edge-connected.
    """
    assert rec.kind == "split_isolated"
    back = dict(rec.link_map)
    lifted = {back.get(eid, eid) for eid in sol}
    budget = len(sol)
    all_links = original.link_ids()
    guard = 0
    while True:
        h = original.with_solution(lifted)
        d = decompose(h)
        if len(d.components) == 1 and not d.bridges:
            break
        guard += 1
        if guard > len(all_links) + 1:
            raise AssertionFailure("bridge repair loop did not terminate")
        # pick the lowest-id bridge and the lowest-id link across its cut
        bridge_eid = min(d.bridges) if d.bridges else None
        if bridge_eid is None:
            raise AssertionFailure("lifted solution is disconnected beyond repair")
        rest = h.subgraph({e.eid for e in h.edges} - {bridge_eid})
        side = next(c for c in connected_components(rest) if original.graph.edge_by_id[bridge_eid].u in c)
        candidates = sorted(
            eid
            for eid in all_links - lifted
            if (original.graph.edge_by_id[eid].u in side) != (original.graph.edge_by_id[eid].v in side)
        )
        if not candidates:
            raise AssertionFailure(f"no link crosses the cut of bridge {bridge_eid}")
        lifted.add(candidates[0])
    if len(lifted) > budget:
        raise AssertionFailure("lift enlarged the solution")
    return frozenset(lifted)


def _is_pendant_path(fg: Graph, w: int, cut_eid: int) -> bool:
    """Walking away from the cut edge starting at w, is the far side a path?"""
    cur, came = w, cut_eid
    while True:
        nbrs = [(x, f) for x, f in fg.adj[cur] if f.eid != came]
        if not nbrs:
            return True
        if len(nbrs) > 1:
            return False
        cur, came = nbrs[0][0], nbrs[0][1].eid


def forest_to_paths(inst: Instance) -> Instance:
    """Split branching vertices until every forest component is a path.

    Requires no isolated vertices. Each split removes a forest edge {v,u} at
    a branching vertex v whose far side is a pendant path, then adds a dummy
    vertex w, the dummy link {v,w}, and the dummy forest edge {w,u}. Exactly
    n_leaf - 2*n_comp splits happen.
    """
    assert not inst.isolated, "split isolated vertices first"
    expected = len(inst.forest_leaves) - 2 * inst.n_comp
    cur = Instance(inst.n, inst.edges, provenance=inst.provenance)
    splits: list[tuple[int, int, int, int]] = []  # (v, w, dummy_link, dummy_forest)
    dummy_links: list[int] = []
    while True:
        pick = _pendant_path_candidate(cur)
        if pick is None:
            break
        v, cut = pick
        e = cur.graph.edge_by_id[cut]
        u = e.other(v)
        w = cur.n
        next_eid = max(x.eid for x in cur.edges) + 1
        dummy_link = next_eid
        dummy_forest = next_eid + 1
        edges = tuple(x for x in cur.edges if x.eid != cut) + (
            Edge(v, w, dummy_link, LINK),
            Edge(w, u, dummy_forest, FOREST),
        )
        splits.append((v, w, dummy_link, dummy_forest))
        dummy_links.append(dummy_link)
        rec = ReductionRecord(
            kind="path_split",
            dummy_links=tuple(dummy_links),
            detail=tuple(splits),
        )
        cur = Instance(cur.n + 1, edges, provenance=inst.provenance + (rec,))
    if len(splits) != expected:
        raise AssertionFailure(
            f"expected {expected} path splits, performed {len(splits)}"
        )
    assert all(d in (1, 2) for d in cur.forest_degree)
    return cur


def _pendant_path_candidate(inst: Instance) -> tuple[int, int] | None:
    deg = inst.forest_degree
    fg = inst.forest_graph
    dummy_vertices = {
        item[1]
        for rec in inst.provenance
        if rec.kind == "path_split"
        for item in rec.detail
    }
    for v in range(inst.n):
        if deg[v] < 3:
            continue
        for w, e in fg.adj[v]:
            if v in dummy_vertices or w in dummy_vertices:
                continue
            if _is_pendant_path(fg, w, e.eid):
                return v, e.eid
    return None


def lift_paths(sol: frozenset[int], rec: ReductionRecord) -> frozenset[int]:
    """Drop the dummy links; everything else maps back unchanged."""
    assert rec.kind == "path_split"
    return frozenset(sol) - set(rec.dummy_links)
