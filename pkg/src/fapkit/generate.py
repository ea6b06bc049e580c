"""Instance generators: one random family and five fixed fixture layouts.

The fixture families (figure1 .. figure6-style) reproduce the hand-drawn
layouts used throughout the tests, scaled by a size parameter. They are
deterministic; the seed only matters for the random family. Vertices are
0-based here and 1-based in the file format.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import UnsatisfiableProfile
from .graph import Edge, FOREST, LINK, is_two_edge_connected
from .instance import Instance, validate

FAMILIES = ("random", "figure1", "figure2", "figure3", "figure5", "figure6-style")


@dataclass(frozen=True)
class GeneratorProfile:
    family: str = "random"
    size: int = 3
    n: int = 8
    n_components: int = 2
    link_density: float = 1.0


def _assemble(n: int, forest: list[tuple[int, int]], links: list[tuple[int, int]]) -> Instance:
    edges = [Edge(u, v, i, FOREST) for i, (u, v) in enumerate(forest)]
    base = len(forest)
    edges += [Edge(u, v, base + i, LINK) for i, (u, v) in enumerate(links)]
    return validate(Instance(n, tuple(edges)))


def _figure1(s: int) -> Instance:
    # s bottom paths in a row plus a four-vertex tower of two paths;
    # one link set chains the bottom row, the other climbs the tower
    if s < 2:
        raise UnsatisfiableProfile("figure1 needs size >= 2")
    a, b, c, d = 2 * s, 2 * s + 1, 2 * s + 2, 2 * s + 3
    forest = [(2 * i, 2 * i + 1) for i in range(s)] + [(a, b), (c, d)]
    links = [(2 * i + 1, 2 * i + 2) for i in range(s - 1)]
    links += [(a, c), (b, d), (0, a), (2, b)]
    links += [(2 * i + 1, 2 * i + 4) for i in range(s - 2)]
    links += [(2 * s - 3, 2 * s - 1)]
    return _assemble(2 * s + 4, forest, links)


def _figure2(s: int) -> Instance:
    # two rows of s two-vertex paths; links are all verticals plus the
    # horizontals between consecutive paths in each row
    if s < 1:
        raise UnsatisfiableProfile("figure2 needs size >= 1")
    forest = [(2 * i, 2 * i + 1) for i in range(s)]
    forest += [(2 * s + 2 * i, 2 * s + 2 * i + 1) for i in range(s)]
    links = [(i, 2 * s + i) for i in range(2 * s)]
    links += [(2 * i + 1, 2 * i + 2) for i in range(s - 1)]
    links += [(2 * s + 2 * i + 1, 2 * s + 2 * i + 2) for i in range(s - 1)]
    return _assemble(4 * s, forest, links)


def _figure3(s: int) -> Instance:
    # a single chain of 2s vertices with s overlapping short links
    if s < 2:
        raise UnsatisfiableProfile("figure3 needs size >= 2")
    forest = [(i, i + 1) for i in range(2 * s - 1)]
    links = [(0, 2)]
    links += [(2 * i + 1, 2 * i + 4) for i in range(s - 2)]
    links += [(2 * s - 3, 2 * s - 1)]
    return _assemble(2 * s, forest, links)


def _figure5(s: int) -> Instance:
    # a chain of s two-vertex paths joined by direct links, with a satellite
    # path between consecutive chain positions and a closing link; trails
    # that pass through the satellites are the interesting runs here
    if s < 1:
        raise UnsatisfiableProfile("figure5 needs size >= 1")
    forest = [(2 * i, 2 * i + 1) for i in range(s)]
    forest += [(2 * s + 2 * j, 2 * s + 2 * j + 1) for j in range(s - 1)]
    links = [(2 * j + 1, 2 * j + 2) for j in range(s - 1)]
    for j in range(s - 1):
        a = 2 * s + 2 * j
        links += [(2 * j, a), (a + 1, 2 * j + 3)]
    links += [(0, 2 * s - 1)]
    return _assemble(2 * s + 2 * (s - 1), forest, links)


def _figure6_style(s: int) -> Instance:
    # s squares, each two three-vertex paths closed by end-to-end links,
    # arranged in a ring through two-vertex satellites whose links attach to
    # path interiors; the interior attachment keeps satellite links out of
    # the leaf matching, so solving starts from simple square components
    if s < 2:
        raise UnsatisfiableProfile("figure6-style needs size >= 2")
    forest: list[tuple[int, int]] = []
    links: list[tuple[int, int]] = []
    for j in range(s):
        q = 6 * j
        forest += [(q, q + 1), (q + 1, q + 2), (q + 3, q + 4), (q + 4, q + 5)]
        links += [(q, q + 3), (q + 2, q + 5)]
    for j in range(s):
        e, f = 6 * s + 2 * j, 6 * s + 2 * j + 1
        forest.append((e, f))
        links += [(6 * j + 1, e), (f, 6 * ((j + 1) % s) + 4)]
    return _assemble(8 * s, forest, links)


def _random(seed: int, profile: GeneratorProfile) -> Instance:
    n, c = profile.n, profile.n_components
    if n < 2 or c < 1 or c > n:
        raise UnsatisfiableProfile(f"cannot split {n} vertices into {c} forest components")
    target = max(1, round(profile.link_density * n))
    max_pairs = n * (n - 1) // 2
    if target > max_pairs and n > 1:
        target = max_pairs
    rng = random.Random(seed)
    for _attempt in range(64):
        cuts = sorted(rng.sample(range(1, n), c - 1)) if c > 1 else []
        bounds = [0, *cuts, n]
        forest: list[tuple[int, int]] = []
        for lo, hi in zip(bounds, bounds[1:]):
            for v in range(lo + 1, hi):
                forest.append((rng.randrange(lo, v), v))
        pairs: set[tuple[int, int]] = set()
        while len(pairs) < target:
            u = rng.randrange(n)
            v = rng.randrange(n)
            if u != v:
                pairs.add((min(u, v), max(u, v)))
        links = sorted(pairs)
        edges = [Edge(u, v, i, FOREST) for i, (u, v) in enumerate(forest)]
        base = len(forest)
        edges += [Edge(u, v, base + i, LINK) for i, (u, v) in enumerate(links)]
        inst = Instance(n, tuple(edges))
        if is_two_edge_connected(inst.graph):
            return validate(inst)
    raise UnsatisfiableProfile(
        f"density {profile.link_density} keeps n={n}, components={c} from being"
        " 2-edge-connectable"
    )


def generate(seed: int, profile: GeneratorProfile) -> Instance:
    if profile.family == "random":
        return _random(seed, profile)
    if profile.family == "figure1":
        return _figure1(profile.size)
    if profile.family == "figure2":
        return _figure2(profile.size)
    if profile.family == "figure3":
        return _figure3(profile.size)
    if profile.family == "figure5":
        return _figure5(profile.size)
    if profile.family == "figure6-style":
        return _figure6_style(profile.size)
    raise UnsatisfiableProfile(f"unknown family {profile.family!r}")
