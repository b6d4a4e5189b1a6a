"""Seeded generators and brute-force reference checks.

Nothing in here calls the rank-encoded kernels; the brute-force routines
work directly on the exact entries so they stay independent of the code
they are used to test.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator

from .core import DistanceMatrix, Partition, UltrametricSpace
from .dendro import Leaf, Node, canonical, ultrametric_from_dendrogram
from .dipgraph import NotMultipartite, SimpleGraph
from .errors import CapExceeded, DegenerateSpace

MULTIPARTITE_SEARCH_CAP = 10

_LEVEL_POOL = sorted({Fraction(p, q) for q in (1, 2, 3, 4) for p in range(1, 4 * q + 1)})


def _rng(seed: int) -> random.Random:
    return random.Random(int(seed) & 0xFFFFFFFFFFFFFFFF)


def _split(points: list[int], k: int, rng: random.Random) -> list[list[int]]:
    """Random assignment of ``points`` to exactly ``k`` nonempty blocks."""
    pts = points[:]
    rng.shuffle(pts)
    blocks = [[p] for p in pts[:k]]
    for p in pts[k:]:
        blocks[rng.randrange(k)].append(p)
    return [sorted(b) for b in blocks]


def _random_tree(points, levels, i, rng, root_non_star=False):
    if len(points) == 1:
        return Leaf(points[0])
    last = len(levels) - 1
    j = i if rng.random() < 0.5 else rng.randint(i, last)
    if j == last:
        blocks = [[p] for p in points]
    else:
        while True:
            blocks = _split(points, rng.randint(2, len(points)), rng)
            star = len(blocks) == 2 and min(len(b) for b in blocks) == 1
            if not (root_non_star and star):
                break
    return Node(levels[j], tuple(_random_tree(b, levels, j + 1, rng) for b in blocks))


def random_dendrogram(n: int, depth: int, seed: int, *, root_non_star: bool = False):
    if n < 1 or depth < 1:
        raise ValueError("need n >= 1 and depth >= 1")
    rng = _rng(seed)
    levels = sorted(rng.sample(_LEVEL_POOL, min(depth, len(_LEVEL_POOL))), reverse=True)
    if root_non_star and n == 3:
        # the only non-star split of three points is into singletons
        return canonical(Node(levels[0], (Leaf(0), Leaf(1), Leaf(2))))
    return canonical(_random_tree(list(range(n)), levels, 0, rng, root_non_star))


def random_ultrametric(n: int, depth: int, seed: int) -> UltrametricSpace:
    """Random space with at most ``depth`` distinct positive distances."""
    return ultrametric_from_dendrogram(random_dendrogram(n, depth, seed))


def random_non_star_ultrametric(n: int, depth: int, seed: int) -> UltrametricSpace:
    """Random space whose diametrical graph is not a star (needs n >= 3)."""
    if n < 3:
        raise ValueError("every space on fewer than three points has a star diametrical graph")
    return ultrametric_from_dendrogram(random_dendrogram(n, depth, seed, root_non_star=True))


def random_partition(n: int, seed: int, min_parts: int = 2) -> Partition:
    if n < min_parts:
        raise ValueError(f"cannot split {n} points into {min_parts} parts")
    rng = _rng(seed)
    return Partition.of(_split(list(range(n)), rng.randint(min_parts, n), rng))


def random_chain(n: int, seed: int):
    """Valid graph chain built by successively merging parts of a partition."""
    from .chains import GraphChain

    if n < 2:
        raise ValueError("chains need at least two vertices")
    rng = _rng(seed)
    parts = [[i] for i in range(n)]
    history = [Partition.of(parts)]
    while len(parts) > 2 and rng.random() < 0.75:
        rng.shuffle(parts)
        m = rng.randint(2, len(parts) - 1)
        parts = [sum(parts[:m], [])] + parts[m:]
        history.append(Partition.of(parts))
    levels, a = [], Fraction(0)
    for _ in history:
        a += Fraction(rng.randint(1, 6), rng.randint(1, 4))
        levels.append(a)
    graphs = tuple(SimpleGraph.complete_multipartite(p) for p in history)
    return GraphChain(n, graphs, tuple(levels))


def random_graph(n: int, seed: int) -> SimpleGraph:
    """Complete multipartite graph, sometimes with one edge flipped."""
    rng = _rng(seed)
    g = SimpleGraph.complete_multipartite(random_partition(n, rng.getrandbits(32), min_parts=1))
    if n >= 2 and rng.random() < 0.5:
        u, v = sorted(rng.sample(range(n), 2))
        g = SimpleGraph(n, g.edges ^ {(u, v)})
    return g


def random_value_set(size: int, seed: int) -> set[Fraction]:
    """``size`` distinct nonnegative rationals including 0."""
    rng = _rng(seed)
    out = {Fraction(0)}
    while len(out) < size:
        out.add(Fraction(rng.randint(1, 60), rng.randint(1, 7)))
    return out


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

def brute_violation(m: DistanceMatrix):
    """First (x, y, z) with d(x,z) > max(d(x,y), d(y,z)), by plain loops."""
    e = m.entries
    n = m.n
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if e[x][z] > max(e[x][y], e[y][z]):
                    return (x, y, z)
    return None


def brute_diam(m: DistanceMatrix, subset) -> Fraction:
    pts = list(subset)
    return max(m.entries[x][y] for x in pts for y in pts)


def brute_dip_pairs(s: UltrametricSpace) -> set[tuple[int, int]]:
    if s.n < 2:
        raise DegenerateSpace("diametrical pairs need at least two points")
    e = s.entries
    top = max(max(row) for row in e)
    return {(x, y) for x in range(s.n) for y in range(s.n) if e[x][y] == top}


def set_partitions(n: int) -> Iterator[list[int]]:
    """Restricted growth strings of length ``n`` in lexicographic order."""
    if n == 0:
        yield []
        return
    a = [0] * n

    def rec(i, top):
        if i == n:
            yield a[:]
            return
        for b in range(top + 2):
            a[i] = b
            yield from rec(i + 1, max(top, b))

    a[0] = 0
    yield from rec(1, 0)


def rgs_to_partition(rgs: list[int]) -> Partition:
    blocks: dict[int, list[int]] = {}
    for i, b in enumerate(rgs):
        blocks.setdefault(b, []).append(i)
    return Partition.of(blocks.values())


def brute_multipartite_search(g: SimpleGraph, cap: int = MULTIPARTITE_SEARCH_CAP):
    """Search set partitions in growth-string order for a complete multipartite one.

    A vertex joins a block only if it is nonadjacent to every earlier vertex
    of that block and adjacent to every earlier vertex outside it, so each
    surviving leaf of the search is a valid partition.
    """
    n = g.n
    if n > cap:
        raise CapExceeded(f"partition search limited to n <= {cap}", {"n": n, "cap": cap})
    if n == 0:
        return NotMultipartite(None)
    adj = [[False] * n for _ in range(n)]
    for u, v in g.edges:
        adj[u][v] = adj[v][u] = True
    a = [0] * n

    def ok(i, b):
        return all(adj[i][j] != (a[j] == b) for j in range(i))

    def rec(i, top):
        if i == n:
            return True
        for b in range(top + 2):
            if ok(i, b):
                a[i] = b
                if rec(i + 1, max(top, b)):
                    return True
        return False

    if rec(1, 0):
        return rgs_to_partition(a)
    return NotMultipartite(None)


def brute_axiom_failure(t, n: int):
    """First (A, B, C) mask triple breaking the three-set inequality, by plain loops."""
    size = 1 << n
    vals = {m: t[m] for m in range(1, size)}
    for a in range(1, size):
        for b in range(1, size):
            for c in range(1, size):
                if vals[a | b] > max(vals[a | c], vals[c | b]):
                    return (a, b, c)
    return None
