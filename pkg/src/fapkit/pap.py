"""Solver for disjoint-path instances: matching, trails, and gluing.

Three phases over the working graph H = (V, F u S):

1. initialize S with a maximum matching on leaf-to-leaf links between
   different paths;
2. while some component C of H has a bridge, contract C's 2-edge-connected
   classes to a tree, pick a leaf x, walk an alternating trail to the
   farthest reachable tree vertex z, and flip the trail's links into S;
   every flip kills at least one bridge;
3. while H is disconnected, glue components along a cycle of the component
   quotient, preferring "good" cycles that let a simple component trade its
   two links away.

Structural facts the correctness argument relies on are asserted at runtime
and raised as AssertionFailure when broken.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .errors import AssertionFailure, NoTrailTarget
from .graph import (
    BlockDecomposition,
    ContractedView,
    Edge,
    Graph,
    LINK,
    contract,
    decompose,
    is_two_edge_connected,
)
from .instance import Instance
from .matching import initial_partial_solution


@dataclass(frozen=True)
class StepRecord:
    step: int
    kind: str  # init | augment | glue_good | glue_plain
    added: tuple[int, ...]
    removed: tuple[int, ...]
    bridges: int
    components: int


class WorkingState:
    """Mutable solver state: the instance, S, and cached decomposition."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.s: set[int] = set()
        self.steps: list[StepRecord] = []
        self._h: Graph | None = None
        self._decomp: BlockDecomposition | None = None

    @property
    def h(self) -> Graph:
        if self._h is None:
            self._h = self.inst.with_solution(self.s)
        return self._h

    @property
    def decomp(self) -> BlockDecomposition:
        if self._decomp is None:
            self._decomp = decompose(self.h)
        return self._decomp

    def apply(self, kind: str, added: set[int], removed: set[int]) -> None:
        assert added.isdisjoint(removed)
        assert removed <= self.s and not (added & self.s)
        self.s |= added
        self.s -= removed
        self._h = None
        self._decomp = None
        self.steps.append(
            StepRecord(
                step=len(self.steps),
                kind=kind,
                added=tuple(sorted(added)),
                removed=tuple(sorted(removed)),
                bridges=len(self.decomp.bridges),
                components=len(self.decomp.components),
            )
        )


@dataclass(frozen=True)
class AlternatingTrail:
    """An expanded trail: outside-path segments joined by tree-path links.

    segments[i] is (vertex path, link ids) in the component quotient; between
    consecutive segments the trail traverses one S-link of the x-z tree path.
    added/removed are base link ids ready to flip into S.
    """

    x: int
    z: int
    segments: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    used_tree_links: tuple[int, ...]
    added: tuple[int, ...]
    removed: tuple[int, ...]


class _TrailContext:
    """Per-iteration view of one bridged component C.

    The full graph (forest + every link) is contracted so that C's
    2-edge-connected classes stay separate while every other component of H
    collapses to one super-vertex. Tree edges are exactly C's bridges; all
    other quotient edges are links outside S.
    """

    def __init__(self, state: WorkingState, comp: frozenset[int]):
        self.state = state
        self.comp = comp
        d = state.decomp
        parts = [k for k in d.classes() if k <= comp]
        parts += [c for c in d.components if c != comp]
        self.view: ContractedView = contract(state.inst.graph, parts)
        q = self.view.quotient
        self.tree_vertices = frozenset(
            i for i, p in enumerate(self.view.parts) if p <= comp
        )
        self.tree_adj: dict[int, list[tuple[int, Edge]]] = {v: [] for v in self.tree_vertices}
        self.outside_adj: dict[int, list[tuple[int, Edge]]] = {v: [] for v in range(q.n)}
        s = state.s
        bridges = d.bridges
        for v in range(q.n):
            for w, e in q.adj[v]:
                if e.eid in bridges:
                    if v in self.tree_vertices:
                        self.tree_adj[v].append((w, e))
                elif e.kind == LINK and e.eid not in s:
                    self.outside_adj[v].append((w, e))
        self._reach: dict[int, dict[int, tuple[tuple[int, ...], tuple[int, ...]]]] = {}

    def reach(self, a: int) -> dict[int, tuple[tuple[int, ...], tuple[int, ...]]]:
        """Tree vertices reachable from a via links with non-tree interiors.

        Values are (vertex path, link ids) of a BFS-shortest outside path,
        deterministic through sorted adjacency.
        """
        if a in self._reach:
            return self._reach[a]
        parent: dict[int, tuple[int, int]] = {a: (-1, -1)}
        found: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {}
        queue = deque([a])
        while queue:
            v = queue.popleft()
            for w, e in self.outside_adj[v]:
                if w in parent:
                    continue
                parent[w] = (v, e.eid)
                if w in self.tree_vertices:
                    verts = [w]
                    eids = []
                    cur = w
                    while parent[cur][0] != -1:
                        eids.append(parent[cur][1])
                        cur = parent[cur][0]
                        verts.append(cur)
                    found[w] = (tuple(reversed(verts)), tuple(reversed(eids)))
                else:
                    queue.append(w)
        self._reach[a] = found
        return found

    def tree_path(self, x: int, z: int) -> tuple[list[int], list[Edge]]:
        parent: dict[int, tuple[int, Edge | None]] = {x: (-1, None)}
        queue = deque([x])
        while queue:
            v = queue.popleft()
            if v == z:
                break
            for w, e in sorted(self.tree_adj[v], key=lambda t: (t[0], t[1].eid)):
                if w not in parent:
                    parent[w] = (v, e)
                    queue.append(w)
        if z not in parent:
            raise AssertionFailure("tree path missing between quotient vertices")
        verts = [z]
        edges: list[Edge] = []
        cur = z
        while parent[cur][0] != -1:
            prev, e = parent[cur]
            edges.append(e)  # type: ignore[arg-type]
            verts.append(prev)
            cur = prev
        return list(reversed(verts)), list(reversed(edges))

    def tree_leaves(self) -> list[int]:
        return [v for v in sorted(self.tree_vertices) if len(self.tree_adj[v]) == 1]

    def tree_distances(self, x: int) -> dict[int, int]:
        dist = {x: 0}
        queue = deque([x])
        while queue:
            v = queue.popleft()
            for w, _ in self.tree_adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def _aux_arcs(self, x: int, z: int) -> tuple[list[Edge], list[list[int]]] :
        """The auxiliary digraph for target z: nodes 0=x, 1..l=path links, l+1=z."""
        verts, edges = self.tree_path(x, z)
        s = self.state.s
        slots: list[tuple[int, int, Edge]] = []  # (u nearer x, v, link edge)
        for i, e in enumerate(edges):
            if e.kind == LINK and e.eid in s:
                slots.append((verts[i], verts[i + 1], e))
        l = len(slots)
        arcs: list[list[int]] = [[] for _ in range(l + 2)]
        if z in self.reach(x):
            arcs[0].append(l + 1)
        for j, (u_j, v_j, _e) in enumerate(slots):
            if v_j in self.reach(x):
                arcs[0].append(j + 1)
        for i, (u_i, _v_i, _e) in enumerate(slots):
            r = self.reach(u_i)
            for j in range(i + 1, l):
                if slots[j][1] in r:
                    arcs[i + 1].append(j + 1)
            if z in r:
                arcs[i + 1].append(l + 1)
        return [e for (_u, _v, e) in slots], arcs


def _aux_shortest(arcs: list[list[int]]) -> list[int] | None:
    """BFS path 0 -> last node; fewest arcs, lexicographic tie-break."""
    last = len(arcs) - 1
    parent: dict[int, int] = {0: -1}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        if v == last:
            out = [v]
            while parent[out[-1]] != -1:
                out.append(parent[out[-1]])
            return list(reversed(out))
        for w in arcs[v]:
            if w not in parent:
                parent[w] = v
                queue.append(w)
    return None


def choose_target(ctx: _TrailContext, x: int) -> int:
    """Farthest tree vertex reachable by a trail; ties to the smallest id."""
    dist = ctx.tree_distances(x)
    best: tuple[int, int] | None = None  # (-distance, vertex)
    for z in sorted(ctx.tree_vertices):
        if z == x:
            continue
        _slots, arcs = ctx._aux_arcs(x, z)
        if _aux_shortest(arcs) is not None:
            key = (-dist[z], z)
            if best is None or key < best:
                best = key
    if best is None:
        raise NoTrailTarget(
            f"no alternating trail leaves leaf {x}; the input cannot be valid"
        )
    return best[1]


def find_alternating_trail(ctx: _TrailContext, x: int, z: int) -> AlternatingTrail | None:
    slot_edges, arcs = ctx._aux_arcs(x, z)
    node_path = _aux_shortest(arcs)
    if node_path is None:
        return None
    verts, edges = ctx.tree_path(x, z)
    slots: list[tuple[int, int, Edge]] = []
    s = ctx.state.s
    for i, e in enumerate(edges):
        if e.kind == LINK and e.eid in s:
            slots.append((verts[i], verts[i + 1], e))
    last = len(slots) + 1

    def from_vertex(node: int) -> int:
        return x if node == 0 else slots[node - 1][0]

    def to_vertex(node: int) -> int:
        return z if node == last else slots[node - 1][1]

    segments: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    used: list[int] = []
    for a, b in zip(node_path, node_path[1:]):
        src, dst = from_vertex(a), to_vertex(b)
        path = ctx.reach(src).get(dst)
        if path is None:
            raise AssertionFailure("auxiliary arc without a realizing outside path")
        segments.append(path)
        if b != last:
            used.append(slots[b - 1][2].eid)

    added: list[int] = []
    interior_seen: set[int] = set()
    edge_seen: set[int] = set()
    for vpath, eids in segments:
        for v in vpath[1:-1]:
            if v in ctx.tree_vertices or v in interior_seen:
                raise AssertionFailure("trail reuses or misplaces an interior vertex")
            interior_seen.add(v)
        for eid in eids:
            if eid in edge_seen:
                raise AssertionFailure("trail reuses a link")
            edge_seen.add(eid)
            added.append(eid)
    assert not set(added) & ctx.state.s
    assert set(used) <= ctx.state.s
    return AlternatingTrail(
        x=x,
        z=z,
        segments=tuple(segments),
        used_tree_links=tuple(used),
        added=tuple(sorted(added)),
        removed=tuple(sorted(used)),
    )


def _assert_cycle_after_flip(ctx: _TrailContext, trail: AlternatingTrail) -> None:
    """The trail's edges, symmetric-differenced with the x-z tree path, must
    form a single cycle visiting every touched quotient vertex exactly twice."""
    verts, edges = ctx.tree_path(trail.x, trail.z)
    tree_eids = [e.eid for e in edges]
    trail_eids = [eid for _vp, eids in trail.segments for eid in eids] + list(trail.used_tree_links)
    sym = set(tree_eids) ^ set(trail_eids)
    deg: dict[int, int] = {}
    adj: dict[int, list[tuple[int, int]]] = {}
    q = ctx.view.quotient
    for eid in sym:
        e = q.edge_by_id[eid]
        deg[e.u] = deg.get(e.u, 0) + 1
        deg[e.v] = deg.get(e.v, 0) + 1
        adj.setdefault(e.u, []).append((e.v, eid))
        adj.setdefault(e.v, []).append((e.u, eid))
    touched = set(verts) | {v for vp, _ in trail.segments for v in vp}
    if set(deg) != touched or any(d != 2 for d in deg.values()):
        raise AssertionFailure("flip residue is not a 2-regular graph on the touched vertices")
    # connectivity: walk from any vertex, must consume every edge
    start = next(iter(deg))
    seen_v = {start}
    seen_e: set[int] = set()
    stack = [start]
    while stack:
        v = stack.pop()
        for w, eid in adj[v]:
            if eid not in seen_e:
                seen_e.add(eid)
                if w not in seen_v:
                    seen_v.add(w)
                    stack.append(w)
    if seen_v != set(deg) or len(seen_e) != len(sym):
        raise AssertionFailure("flip residue is not a single cycle")


def augment_trail(state: WorkingState, ctx: _TrailContext, trail: AlternatingTrail) -> None:
    _assert_cycle_after_flip(ctx, trail)
    bridges_before = len(state.decomp.bridges)
    state.apply("augment", set(trail.added), set(trail.removed))
    if len(state.decomp.bridges) >= bridges_before:
        raise AssertionFailure(
            f"augmentation left {len(state.decomp.bridges)} bridges, had {bridges_before}"
        )


@dataclass(frozen=True)
class GoodCycle:
    component_min: int
    remove: tuple[int, int]
    add: tuple[int, ...]
    case: str  # "corner-pair" or "crossing"


def _simple_component(state: WorkingState, comp: frozenset[int]) -> tuple[list[int], list[int], dict[int, int]] | None:
    """If comp is a cycle with exactly two links, return its structure.

    Returns (P1 endpoints [u1, v1], P2 endpoints [u2, v2], corner link map
    {corner-of-P1: link eid}) or None.
    """
    h = state.h
    comp_edges = [e for e in h.edges if e.u in comp and e.v in comp]
    deg: dict[int, int] = {v: 0 for v in comp}
    for e in comp_edges:
        deg[e.u] += 1
        deg[e.v] += 1
    if any(d != 2 for d in deg.values()):
        return None
    links = [e for e in comp_edges if e.kind == LINK]
    if len(links) != 2:
        return None
    # the two forest paths are whole forest components; find them
    forest_edges = [e for e in comp_edges if e.kind != LINK]
    assert len(forest_edges) == len(comp) - 2, "simple cycle must split into two paths"
    fadj: dict[int, list[int]] = {v: [] for v in comp}
    for e in forest_edges:
        fadj[e.u].append(e.v)
        fadj[e.v].append(e.u)
    ends = sorted(v for v in comp if len(fadj[v]) == 1)
    assert len(ends) == 4, "a simple component has four path endpoints"
    # walk from the smallest endpoint to find P1
    def walk(start: int) -> list[int]:
        out = [start]
        prev = -1
        cur = start
        while True:
            nxt = [w for w in fadj[cur] if w != prev]
            if not nxt:
                return out
            prev, cur = cur, nxt[0]
            out.append(cur)

    paths: list[list[int]] = []
    seen_paths: set[frozenset[int]] = set()
    for v in ends:
        p = walk(v)
        key = frozenset(p)
        if key not in seen_paths:
            seen_paths.add(key)
            paths.append(p)
    assert len(paths) == 2, "two links leave exactly two forest paths"
    p1 = paths[0] if min(comp) in paths[0] else paths[1]
    u1, v1 = (p1[0], p1[-1]) if p1[0] < p1[-1] else (p1[-1], p1[0])
    corner_link: dict[int, int] = {}
    mate: dict[int, int] = {}
    for e in links:
        for corner in (u1, v1):
            if corner in (e.u, e.v):
                corner_link[corner] = e.eid
                mate[corner] = e.other(corner)
    if set(corner_link) != {u1, v1} or corner_link[u1] == corner_link[v1]:
        raise AssertionFailure("simple component links do not sit on P1's endpoints")
    u2, v2 = mate[u1], mate[v1]
    return [u1, v1], [u2, v2], corner_link


def _good_path_search(
    state: WorkingState,
    comp: frozenset[int],
    a: int,
    b: int,
    *,
    allow_direct: bool,
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """BFS from a to b through super-vertices of other components only.

    Returns (vertex path, link ids) in the search quotient, or None. With
    allow_direct=False, single-edge a-b paths are skipped.
    """
    d = state.decomp
    parts = [c for c in d.components if c != comp]
    parts += [frozenset((v,)) for v in comp]
    view = contract(state.inst.graph, parts)
    q = view.quotient
    qa = view.to_quotient(a)
    qb = view.to_quotient(b)
    comp_q = {view.to_quotient(v) for v in comp}
    s = state.s
    direct: Edge | None = None
    parent: dict[int, tuple[int, int]] = {qa: (-1, -1)}
    queue = deque([qa])
    while queue:
        v = queue.popleft()
        for w, e in q.adj[v]:
            if e.kind != LINK or e.eid in s:
                continue
            if v == qa and w == qb:
                if direct is None or e.eid < direct.eid:
                    direct = e
                continue
            if w == qb:
                if w not in parent:
                    parent[w] = (v, e.eid)
                    verts = [w]
                    eids = []
                    cur = w
                    while parent[cur][0] != -1:
                        eids.append(parent[cur][1])
                        cur = parent[cur][0]
                        verts.append(cur)
                    return tuple(reversed(verts)), tuple(reversed(eids))
                continue
            if w in comp_q or w in parent:
                continue
            parent[w] = (v, e.eid)
            queue.append(w)
    if allow_direct and direct is not None:
        return (qa, qb), (direct.eid,)
    return None


def find_good_cycle(state: WorkingState) -> GoodCycle | None:
    d = state.decomp
    if d.bridges:
        raise AssertionFailure("good-cycle search expects a bridgeless graph")
    for comp in d.components:
        structure = _simple_component(state, comp)
        if structure is None:
            continue
        (u1, v1), (u2, v2), corner_link = structure
        # case (a): partner path between one corner pair, length >= 2,
        # keeping the other pair's link
        for a, b, keep_corner in ((v1, v2, u1), (u1, u2, v1)):
            found = _good_path_search(state, comp, a, b, allow_direct=False)
            if found is not None:
                verts, eids = found
                add = set(eids) | {corner_link[keep_corner]}
                return GoodCycle(
                    component_min=min(comp),
                    remove=(corner_link[u1], corner_link[v1]),
                    add=tuple(sorted(add)),
                    case="corner-pair",
                )
        # case (b): both crossing paths, preferring length >= 2, at least
        # one of which must be long; interiors are disjoint or the case (a)
        # search above would have succeeded
        p1 = _good_path_search(state, comp, v1, u2, allow_direct=False)
        if p1 is None:
            p1 = _good_path_search(state, comp, v1, u2, allow_direct=True)
        p2 = _good_path_search(state, comp, u1, v2, allow_direct=False)
        if p2 is None:
            p2 = _good_path_search(state, comp, u1, v2, allow_direct=True)
        if p1 is None or p2 is None:
            continue
        if len(p1[1]) < 2 and len(p2[1]) < 2:
            continue
        int1 = set(p1[0][1:-1])
        int2 = set(p2[0][1:-1])
        if int1 & int2:
            raise AssertionFailure("crossing good paths share an interior super-vertex")
        add = set(p1[1]) | set(p2[1])
        return GoodCycle(
            component_min=min(comp),
            remove=(corner_link[u1], corner_link[v1]),
            add=tuple(sorted(add)),
            case="crossing",
        )
    return None


def _glue_apply(state: WorkingState, kind: str, add: set[int], remove: set[int]) -> None:
    comps_before = len(state.decomp.components)
    new_s = (state.s - remove) | add
    added = new_s - state.s
    removed = state.s - new_s
    state.apply(kind, added, removed)
    if state.decomp.bridges:
        raise AssertionFailure("gluing created a bridge")
    if len(state.decomp.components) >= comps_before:
        raise AssertionFailure("gluing did not reduce the component count")


def glue_good(state: WorkingState, gc: GoodCycle, *, remove_links: bool = True) -> None:
    remove = set(gc.remove) if remove_links else set()
    _glue_apply(state, "glue_good", set(gc.add), remove)


def glue_plain(state: WorkingState) -> None:
    """Add the links of a shortest component-quotient cycle through part 0."""
    d = state.decomp
    view = contract(state.inst.graph, list(d.components))
    q = view.quotient
    best: tuple[int, tuple[int, ...]] | None = None
    for w0, e0 in q.adj[0]:
        # BFS back to 0 avoiding the starting edge
        parent: dict[int, tuple[int, int]] = {w0: (-1, -1)}
        queue = deque([w0])
        closed: tuple[int, ...] | None = None
        while queue and closed is None:
            v = queue.popleft()
            for w, e in q.adj[v]:
                if e.eid == e0.eid:
                    continue
                if w == 0:
                    eids = [e.eid]
                    cur = v
                    while parent[cur][0] != -1:
                        eids.append(parent[cur][1])
                        cur = parent[cur][0]
                    closed = (e0.eid, *reversed(eids))
                    break
                if w not in parent:
                    parent[w] = (v, e.eid)
                    queue.append(w)
        if closed is not None:
            key = (len(closed), closed)
            if best is None or key < best:
                best = key
    if best is None:
        raise AssertionFailure("no cycle through the smallest component in the quotient")
    _glue_apply(state, "glue_plain", set(best[1]), set())


@dataclass(frozen=True)
class PapResult:
    links: frozenset[int]
    steps: tuple[StepRecord, ...]
    matching: frozenset[int]
    unmatched: int


def solve_pap(
    inst: Instance,
    *,
    matching_mode: str = "blossom",
    use_good_cycles: bool = True,
    remove_in_glue: bool = True,
) -> PapResult:
    """Run the three phases and return S with the full step log.

    The keyword knobs exist for the audit's mutation tests and the gluing
    regression comparison; production callers keep the defaults.
    """
    if not inst.is_paths_instance():
        raise ValueError("solver requires every forest component to be a path, no isolated nodes")
    state = WorkingState(inst)
    matching, unmatched = initial_partial_solution(inst, mode=matching_mode)
    state.apply("init", set(matching), set())

    guard = len(state.decomp.bridges) + 1
    while True:
        d = state.decomp
        bridged: frozenset[int] | None = None
        by_id = state.h.edge_by_id
        for eid in sorted(d.bridges):
            comp = d.component_of(by_id[eid].u)
            if bridged is None or min(comp) < min(bridged):
                bridged = comp
        if bridged is None:
            break
        guard -= 1
        if guard < 0:
            raise AssertionFailure("bridge covering failed to terminate")
        ctx = _TrailContext(state, bridged)
        leaves = ctx.tree_leaves()
        assert leaves, "a bridged component quotient must have tree leaves"
        x = leaves[0]
        z = choose_target(ctx, x)
        trail = find_alternating_trail(ctx, x, z)
        if trail is None:
            raise AssertionFailure("chosen target lost its trail")
        augment_trail(state, ctx, trail)

    guard = len(state.decomp.components)
    while len(state.decomp.components) > 1:
        guard -= 1
        if guard < 0:
            raise AssertionFailure("gluing failed to terminate")
        gc = find_good_cycle(state) if use_good_cycles else None
        if gc is not None:
            glue_good(state, gc, remove_links=remove_in_glue)
        else:
            glue_plain(state)

    if not is_two_edge_connected(state.h):
        raise AssertionFailure("final solution is not 2-edge-connected")
    return PapResult(
        links=frozenset(state.s),
        steps=tuple(state.steps),
        matching=frozenset(matching),
        unmatched=unmatched,
    )


def steps_to_jsonl(inst: Instance, steps: tuple[StepRecord, ...]) -> str:
    """Serialize a step log, one JSON object per line.

    Link references carry 1-based endpoints plus the stable id so parallel
    links stay distinguishable; s_after is the full solution after the step.
    """
    by_id = inst.graph.edge_by_id
    out = []
    s: set[int] = set()
    for rec in steps:
        s |= set(rec.added)
        s -= set(rec.removed)

        def ref(eid: int) -> dict:
            e = by_id[eid]
            return {"u": e.u + 1, "v": e.v + 1, "id": eid}

        out.append(
            json.dumps(
                {
                    "step": rec.step,
                    "kind": rec.kind,
                    "added": [ref(i) for i in rec.added],
                    "removed": [ref(i) for i in rec.removed],
                    "bridges": rec.bridges,
                    "components": rec.components,
                    "s_after": [ref(i) for i in sorted(s)],
                },
                separators=(",", ":"),
            )
        )
    return "\n".join(out) + "\n"