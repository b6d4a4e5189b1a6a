"""Diametrical-pair graphs and complete multipartite structure."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from .core import (
    DistanceMatrix,
    Partition,
    UltrametricSpace,
    diam,
    format_scalar,
    parse_scalar,
    restrict,
)
from .errors import (
    ApexTooClose,
    BadScales,
    DegenerateSpace,
    NotCompleteMultipartiteInput,
    ParseError,
    ShapeError,
    UniversalRelation,
)


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected graph on ``0..n-1``; edges are stored as ``(u, v)`` with u < v."""

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise ShapeError("negative vertex count")
        for e in self.edges:
            u, v = e
            if not (0 <= u < v < self.n):
                raise ShapeError(f"bad edge {e} for n={self.n}", {"edge": list(e)})

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "SimpleGraph":
        norm = set()
        for e in edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ShapeError(f"loop at vertex {u}", {"edge": [u, v]})
            norm.add((min(u, v), max(u, v)))
        return cls(n, frozenset(norm))

    @classmethod
    def complete(cls, n: int) -> "SimpleGraph":
        return cls(n, frozenset(combinations(range(n), 2)))

    @classmethod
    def complete_multipartite(cls, p: Partition) -> "SimpleGraph":
        block = p.block_of()
        return cls(p.n, frozenset((u, v) for u, v in combinations(range(p.n), 2)
                                  if block[u] != block[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def complement(self) -> "SimpleGraph":
        return SimpleGraph(self.n, frozenset(e for e in combinations(range(self.n), 2)
                                             if e not in self.edges))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def to_json_obj(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj()) + "\n"

    @classmethod
    def from_json_obj(cls, obj) -> "SimpleGraph":
        try:
            return cls.from_edges(int(obj["n"]), obj["edges"])
        except (KeyError, TypeError, ValueError):
            raise ParseError('expected {"n": int, "edges": [[u, v], ...]}') from None

    @classmethod
    def from_json(cls, raw: str) -> "SimpleGraph":
        try:
            return cls.from_json_obj(json.loads(raw))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: SimpleGraph, labels=None, parts: Partition | None = None, name: str = "dip") -> str:
    """Undirected DOT text; each part becomes a same-rank cluster."""
    label = (lambda i: labels[i]) if labels is not None else str
    lines = [f"graph {name} {{"]
    if parts is not None:
        for b, part in enumerate(parts.parts):
            lines.append(f"  subgraph cluster_{b} {{")
            lines.append("    rank=same;")
            for v in part:
                lines.append(f"    {_dot_id(label(v))};")
            lines.append("  }")
    else:
        for v in range(g.n):
            lines.append(f"  {_dot_id(label(v))};")
    for u, v in g.sorted_edges():
        lines.append(f"  {_dot_id(label(u))} -- {_dot_id(label(v))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------

def dip_graph(s: UltrametricSpace) -> SimpleGraph:
    """Edges are the pairs at distance exactly diam X."""
    if s.n < 2:
        raise DegenerateSpace("diametrical pairs need at least two points")
    R = s.matrix.ranks
    top = R.max()
    us, vs = np.nonzero(np.triu(R == top, k=1))
    return SimpleGraph(s.n, frozenset(zip(us.tolist(), vs.tolist())))


@dataclass(frozen=True)
class NotMultipartite:
    """Two vertices in one complement component that are adjacent in the graph.

    ``witness`` is None when produced by the exhaustive oracle search.
    """

    witness: tuple[int, int] | None
    component: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        return {"witness": None if self.witness is None else list(self.witness),
                "component": None if self.component is None else list(self.component)}


def _components(n: int, adj: list[set[int]]) -> list[list[int]]:
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        stack, comp = [start], []
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_complete_multipartite(g: SimpleGraph) -> Partition | NotMultipartite:
    """Parts are the complement's components, provided each is a clique."""
    n = g.n
    co_adj = [set() for _ in range(n)]
    for u, v in combinations(range(n), 2):
        if (u, v) not in g.edges:
            co_adj[u].add(v)
            co_adj[v].add(u)
    comps = _components(n, co_adj)
    for comp in comps:
        if all(len(co_adj[u]) == len(comp) - 1 for u in comp):
            continue
        for u, v in combinations(comp, 2):
            if v not in co_adj[u]:
                return NotMultipartite((u, v), tuple(comp))
    return Partition.of(comps)


def ultrametric_from_partition(p: Partition, inner=Fraction(1, 2), outer=Fraction(1)) -> UltrametricSpace:
    """``inner`` inside a part, ``outer`` across parts, 0 on the diagonal."""
    inner, outer = parse_scalar(inner), parse_scalar(outer)
    if p.k < 2:
        raise UniversalRelation("a single part admits no finite ultrametric with that diameter relation",
                                {"parts": [list(q) for q in p.parts]})
    if not (0 < inner < outer):
        raise BadScales("need 0 < inner < outer",
                        {"inner": format_scalar(inner), "outer": format_scalar(outer)})
    block = p.block_of()
    zero = Fraction(0)
    rows = tuple(tuple(zero if x == y else inner if block[x] == block[y] else outer
                       for y in range(p.n)) for x in range(p.n))
    return UltrametricSpace(DistanceMatrix(rows))


@dataclass(frozen=True)
class DipReport:
    dip_count: int  # ordered pairs
    edge_count: int  # unordered pairs
    lower_bound: int
    equality: bool
    center: int | None
    parts: Partition
    part_sizes: tuple[int, ...]

    def to_json(self) -> dict:
        return {"n": self.parts.n, "dip_count": self.dip_count, "edge_count": self.edge_count,
                "lower_bound": self.lower_bound, "equality": self.equality,
                "center": self.center, "parts": [list(q) for q in self.parts.parts],
                "part_sizes": list(self.part_sizes)}


def dip_report(s: UltrametricSpace) -> DipReport:
    """Count diametrical ordered pairs and detect the minimal case."""
    g = dip_graph(s)
    parts = is_complete_multipartite(g)
    if not isinstance(parts, Partition):
        raise AssertionError(f"diametrical graph is not complete multipartite: {parts}")
    n = s.n
    sizes = tuple(parts.sizes)
    count = 2 * len(g.edges)
    if count != sum(m * (n - m) for m in sizes):
        raise AssertionError("ordered pair count disagrees with part sizes")
    bound = 2 * (n - 1)
    equality = count == bound
    center = None
    if equality:
        singles = [q[0] for q in parts.parts if len(q) == 1]
        if parts.k != 2 or not singles:
            raise AssertionError(f"minimal pair count without a star structure: {sizes}")
        center = min(singles)
        rest = [x for x in range(n) if x != center]
        if diam(s, rest) >= diam(s):
            raise AssertionError("points other than the center reach the full diameter")
    return DipReport(count, len(g.edges), bound, equality, center, parts, sizes)


def extend_with_apex(s: UltrametricSpace, t) -> UltrametricSpace:
    """Add point ``n`` at distance ``t`` from every existing point."""
    t = parse_scalar(t)
    D = diam(s)
    if not t > D:
        raise ApexTooClose(f"apex level {format_scalar(t)} must exceed diameter {format_scalar(D)}",
                           {"t": format_scalar(t), "diam": format_scalar(D)})
    zero = Fraction(0)
    rows = tuple(row + (t,) for row in s.entries) + (tuple([t] * s.n) + (zero,),)
    labels = None
    if s.labels is not None:
        name, k = "apex", 1
        while name in s.labels:
            k += 1
            name = f"apex{k}"
        labels = s.labels + (name,)
    return UltrametricSpace(DistanceMatrix(rows, labels))


def apex_decomposition(s: UltrametricSpace) -> tuple[UltrametricSpace, int, Fraction] | None:
    """Split a minimal space into (rest, center, level), or None if not minimal."""
    rep = dip_report(s)
    if not rep.equality:
        return None
    rest = [x for x in range(s.n) if x != rep.center]
    return restrict(s, rest), rep.center, diam(s)


def reconstructs_from_apex(s: UltrametricSpace) -> bool:
    """Rebuild ``s`` as rest + apex and compare with ``s`` reordered the same way."""
    parts = apex_decomposition(s)
    if parts is None:
        return False
    rest, center, level = parts
    order = [x for x in range(s.n) if x != center] + [center]
    rebuilt = extend_with_apex(rest, level)
    return rebuilt.entries == restrict(s, order).entries


@dataclass(frozen=True)
class EdgeBoundReport:
    n: int
    edge_count: int
    bound: int
    equality: bool
    star: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def multipartite_edge_bound(g: SimpleGraph, p: Partition) -> EdgeBoundReport:
    """Edge count of a complete multipartite graph against n - 1."""
    if p.n != g.n or p.k < 2 or g != SimpleGraph.complete_multipartite(p):
        raise NotCompleteMultipartiteInput("graph is not the complete multipartite graph of the partition",
                                           {"k": p.k, "n": g.n})
    n = g.n
    count = len(g.edges)
    if 2 * count != sum(m * (n - m) for m in p.sizes):
        raise AssertionError("edge count disagrees with part sizes")
    equality = count == n - 1
    star = p.k == 2 and 1 in p.sizes
    if equality != star:
        raise AssertionError(f"edge bound equality {equality} but star {star} for sizes {p.sizes}")
    return EdgeBoundReport(n, count, n - 1, equality, star)
