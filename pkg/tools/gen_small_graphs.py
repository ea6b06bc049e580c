#!/usr/bin/env python3
"""Enumerate all simple graphs on 1..8 vertices up to isomorphism.

Writes one line per graph: the vertex count and a hex mask of the upper
triangle of the adjacency matrix (pairs (i, j) with i < j in lexicographic
order, bit k = pair number k). Counts per vertex number are checked against
the known sequence 1, 2, 4, 11, 34, 156, 1044, 12346 before anything is
written, so a bug here cannot silently poison the frozen file.

Generation is incremental: every graph on n vertices arises from some graph
on n - 1 vertices by attaching one new vertex to a subset of the old ones.
Each candidate is put into canonical form - the lexicographically smallest
mask over all vertex orders compatible with an iterated degree refinement -
so isomorphic duplicates collapse into one representative.

Takes a couple of minutes; the output is frozen into tests/data/ and the
test suite only ever reads it.
"""

from __future__ import annotations

import argparse
from itertools import combinations, permutations, product
from pathlib import Path

KNOWN_COUNTS = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044, 8: 12346}

_PAIR_IDX = {n: {p: k for k, p in enumerate(combinations(range(n), 2))} for n in range(1, 9)}
_PAIRS = {n: list(combinations(range(n), 2)) for n in range(1, 9)}


def _refine(n: int, adj: list[list[int]]) -> list[int]:
    """Iterated neighbour-multiset refinement; returns a cell rank per vertex.

    The rank is an isomorphism invariant: it starts from degrees and folds in
    sorted neighbour ranks until nothing changes.
    """
    labels = [len(adj[v]) for v in range(n)]
    while True:
        raw = [(labels[v], tuple(sorted(labels[w] for w in adj[v]))) for v in range(n)]
        rank = {key: r for r, key in enumerate(sorted(set(raw)))}
        new = [rank[raw[v]] for v in range(n)]
        if new == labels:
            return labels
        labels = new


def canonical_mask(n: int, edges: list[tuple[int, int]]) -> int:
    """Smallest adjacency mask over all orders that respect the refinement.

    The minimum is attained by an actual relabelling of the graph, so the
    mask pins down the isomorphism class, and refinement invariance makes
    isomorphic inputs search the same candidate set.
    """
    if not edges:
        return 0
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    labels = _refine(n, adj)
    cells: dict[int, list[int]] = {}
    for v in range(n):
        cells.setdefault(labels[v], []).append(v)
    groups = [cells[k] for k in sorted(cells)]
    idx = _PAIR_IDX[n]
    perm = [0] * n
    best: int | None = None
    for combo in product(*[permutations(g) for g in groups]):
        pos = 0
        for g in combo:
            for v in g:
                perm[v] = pos
                pos += 1
        mask = 0
        for u, v in edges:
            a, b = perm[u], perm[v]
            if a > b:
                a, b = b, a
            mask |= 1 << idx[(a, b)]
        if best is None or mask < best:
            best = mask
    assert best is not None
    return best


def _mask_edges(n: int, mask: int) -> list[tuple[int, int]]:
    return [p for k, p in enumerate(_PAIRS[n]) if mask >> k & 1]


def enumerate_atlas() -> dict[int, list[int]]:
    atlas: dict[int, list[int]] = {1: [0]}
    for n in range(2, 9):
        seen: set[int] = set()
        for mask in atlas[n - 1]:
            base = _mask_edges(n - 1, mask)
            for sub in range(1 << (n - 1)):
                edges = base + [(w, n - 1) for w in range(n - 1) if sub >> w & 1]
                seen.add(canonical_mask(n, edges))
        atlas[n] = sorted(seen)
        print(f"n={n}: {len(atlas[n])} graphs")
    return atlas


def main() -> int:
    default_out = Path(__file__).resolve().parents[1] / "tests" / "data" / "graphs_le8.txt"
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=default_out)
    args = ap.parse_args()

    atlas = enumerate_atlas()
    for n, want in KNOWN_COUNTS.items():
        got = len(atlas[n])
        if got != want:
            raise SystemExit(f"n={n}: enumerated {got} graphs, expected {want}; not writing")

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w") as fh:
        fh.write("# simple graphs on 1..8 vertices, one isomorphism class per line\n")
        fh.write("# <n> <hex mask over pairs (i,j), i<j, lexicographic bit order>\n")
        for n in sorted(atlas):
            for mask in atlas[n]:
                fh.write(f"{n} {mask:x}\n")
    total = sum(len(v) for v in atlas.values())
    print(f"wrote {total} graphs to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
