"""Nested chains of complete multipartite graphs and spectrum realisation.

A chain G_1, ..., G_n with levels a_1 < ... < a_n encodes an ultrametric
through its threshold graphs: {x, y} is an edge of G_i exactly when
d(x, y) >= a_i.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import (
    DistanceMatrix,
    UltrametricSpace,
    certify_ultrametric,
    format_scalar,
    parse_scalar,
    spectrum,
)
from .dipgraph import NotMultipartite, SimpleGraph, is_complete_multipartite
from .errors import ChainError, DegenerateSpace, InputError, MissingZero, ParseError


class PaperConsistencyAlarm(AssertionError):
    """A chain derived from a space broke the length bound it must satisfy."""


@dataclass(frozen=True)
class GraphChain:
    n_vertices: int
    graphs: tuple[SimpleGraph, ...]
    levels: tuple[Fraction, ...]

    @classmethod
    def of(cls, n_vertices: int, graphs: Iterable, levels: Iterable) -> "GraphChain":
        gs = tuple(g if isinstance(g, SimpleGraph) else SimpleGraph.from_edges(n_vertices, g)
                   for g in graphs)
        return cls(n_vertices, gs, tuple(parse_scalar(a) for a in levels))

    def __len__(self):
        return len(self.graphs)

    def to_json_obj(self) -> dict:
        return {"n_vertices": self.n_vertices,
                "levels": [format_scalar(a) for a in self.levels],
                "graphs": [[list(e) for e in g.sorted_edges()] for g in self.graphs]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj()) + "\n"

    @classmethod
    def from_json_obj(cls, obj) -> "GraphChain":
        try:
            return cls.of(int(obj["n_vertices"]), obj["graphs"], obj["levels"])
        except (KeyError, TypeError, ValueError):
            raise ParseError('expected {"n_vertices": int, "levels": [...], "graphs": [...]}') from None

    @classmethod
    def from_json(cls, raw: str) -> "GraphChain":
        try:
            obj = json.loads(raw, parse_float=str)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        return cls.from_json_obj(obj)


def validate_chain(c: GraphChain) -> None:
    """Raise :class:`ChainError` naming the first broken condition.

    Graph indices in witnesses are 1-based, matching G_1..G_n.
    """
    n, X = len(c.graphs), c.n_vertices
    if n == 0 or len(c.levels) != n:
        raise ChainError("Malformed", f"{n} graphs with {len(c.levels)} levels",
                         {"graphs": n, "levels": len(c.levels)})
    for i, g in enumerate(c.graphs, 1):
        if g.n != X:
            raise ChainError("Malformed", f"G{i} has {g.n} vertices, expected {X}", {"graph": i})
    prev = Fraction(0)
    for i, a in enumerate(c.levels, 1):
        if not a > prev:
            raise ChainError("LevelsNotIncreasing", f"level {i} is {format_scalar(a)}",
                             {"index": i, "level": format_scalar(a), "previous": format_scalar(prev)})
        prev = a
    if n > X - 1:
        raise ChainError("TooLong", f"{n} graphs on {X} vertices", {"length": n, "vertices": X})
    first = SimpleGraph.complete(X)
    if c.graphs[0] != first:
        missing = min(first.edges - c.graphs[0].edges)
        raise ChainError("NotComplete", "G1 misses an edge", {"graph": 1, "edge": list(missing)})
    if not c.graphs[-1].edges:
        raise ChainError("EmptyTop", f"G{n} has no edges", {"graph": n})
    for i, g in enumerate(c.graphs, 1):
        res = is_complete_multipartite(g)
        if isinstance(res, NotMultipartite):
            raise ChainError("NotMultipartite", f"G{i} is not complete multipartite",
                             {"graph": i, "pair": list(res.witness), "component": list(res.component)})
        if i > 1:
            below = c.graphs[i - 2]
            extra = g.edges - below.edges
            if extra:
                raise ChainError("NotNested", f"G{i} has an edge missing from G{i - 1}",
                                 {"graph": i, "edge": list(min(extra))})
            if g.edges == below.edges:
                raise ChainError("NotProperSubset", f"G{i} equals G{i - 1}", {"graph": i})


def ultrametric_from_chain(c: GraphChain) -> UltrametricSpace:
    """d(x, y) is the level of the deepest graph still containing {x, y}."""
    validate_chain(c)
    X = c.n_vertices
    rows = [[Fraction(0)] * X for _ in range(X)]
    for g, a in zip(c.graphs, c.levels):
        for u, v in g.edges:
            rows[u][v] = rows[v][u] = a
    s = certify_ultrametric(DistanceMatrix(tuple(tuple(r) for r in rows)))
    if not isinstance(s, UltrametricSpace):
        raise AssertionError(f"chain produced a non-ultrametric: {s}")
    return s


def chain_from_ultrametric(s: UltrametricSpace) -> GraphChain:
    """Threshold graphs at each positive spectrum value."""
    if s.n < 2:
        raise DegenerateSpace("a chain needs at least two points")
    levels = tuple(spectrum(s)[1:])
    if len(levels) > s.n - 1:
        raise PaperConsistencyAlarm(f"{len(levels)} positive distances on {s.n} points")
    R = s.matrix.ranks
    graphs = []
    for rank in range(1, len(levels) + 1):
        graphs.append(SimpleGraph(s.n, frozenset(
            (u, v) for u in range(s.n) for v in range(u + 1, s.n) if R[u, v] >= rank)))
    c = GraphChain(s.n, tuple(graphs), levels)
    validate_chain(c)
    return c


def realize_spectrum(values: Iterable) -> UltrametricSpace:
    """Space on the given values with d(x, y) = max(x, y) for x != y."""
    pts = sorted({parse_scalar(v) for v in values})
    if pts and pts[0] < 0:
        raise InputError("distances cannot be negative", {"value": format_scalar(pts[0])})
    if not pts or pts[0] != 0:
        raise MissingZero("the value set must contain 0", {"values": [format_scalar(v) for v in pts]})
    rows = tuple(tuple(Fraction(0) if x == y else max(x, y) for y in pts) for x in pts)
    return UltrametricSpace(DistanceMatrix(rows, tuple(format_scalar(v) for v in pts)))
