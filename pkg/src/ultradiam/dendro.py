"""Dendrograms and their correspondence with finite ultrametrics.

The distance between two points is the level of their lowest common
ancestor, and every internal level is the diameter of the cluster below it.
Children are ordered by their smallest leaf, which makes the Newick and JSON
output deterministic.

Newick annotation: by default every internal node is followed by its height
in square brackets, e.g. ``((0,1)[0.5],2)[1];``. With ``branch_lengths`` the
conventional ``:length`` form is written instead, where a branch length is
the parent height minus the child height (leaves sit at height 0).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .core import DistanceMatrix, UltrametricSpace, format_scalar, parse_scalar
from .errors import InvalidDendrogram, ParseError


@dataclass(frozen=True)
class Leaf:
    index: int

    @property
    def height(self) -> Fraction:
        return Fraction(0)

    def leaves(self) -> list[int]:
        return [self.index]


@dataclass(frozen=True)
class Node:
    level: Fraction
    children: tuple["Dendrogram", ...]

    @property
    def height(self) -> Fraction:
        return self.level

    def leaves(self) -> list[int]:
        return [i for c in self.children for i in c.leaves()]


Dendrogram = Union[Leaf, Node]


def node(level, *children) -> Node:
    """Shorthand that accepts ints for leaves and any scalar literal for the level."""
    kids = tuple(Leaf(c) if isinstance(c, int) else c for c in children)
    return Node(parse_scalar(level), kids)


def canonical(d: Dendrogram) -> Dendrogram:
    if isinstance(d, Leaf):
        return d
    kids = sorted((canonical(c) for c in d.children), key=lambda c: min(c.leaves()))
    return Node(d.level, tuple(kids))


def validate_dendrogram(d: Dendrogram) -> int:
    """Raise :class:`InvalidDendrogram` on a bad tree; return the leaf count."""

    def walk(t, path, ceiling):
        if isinstance(t, Leaf):
            return
        if not isinstance(t, Node):
            raise InvalidDendrogram(f"unexpected tree element {t!r}", path)
        if len(t.children) < 2:
            raise InvalidDendrogram("internal node with fewer than two children", path)
        if not t.level > 0:
            raise InvalidDendrogram(f"nonpositive level {format_scalar(t.level)}", path)
        if ceiling is not None and not t.level < ceiling:
            raise InvalidDendrogram(
                f"level {format_scalar(t.level)} not below parent level {format_scalar(ceiling)}", path)
        for k, c in enumerate(t.children):
            walk(c, path + (k,), t.level)

    walk(d, (), None)
    leaves = d.leaves()
    if sorted(leaves) != list(range(len(leaves))):
        raise InvalidDendrogram(f"leaves {sorted(leaves)} do not partition 0..{len(leaves) - 1}", ())
    return len(leaves)


def dendrogram_from_ultrametric(s: UltrametricSpace) -> Dendrogram:
    """Split recursively by the relation d < cluster diameter."""
    e = s.entries

    def build(points: list[int]) -> Dendrogram:
        if len(points) == 1:
            return Leaf(points[0])
        level = max(e[x][y] for x in points for y in points)
        classes: list[list[int]] = []
        for x in points:
            for c in classes:
                if e[x][c[0]] < level:
                    c.append(x)
                    break
            else:
                classes.append([x])
        if len(classes) < 2:
            raise AssertionError("cluster did not split below its diameter")
        return Node(level, tuple(build(c) for c in classes))

    return canonical(build(list(range(s.n))))


def ultrametric_from_dendrogram(d: Dendrogram, labels=None) -> UltrametricSpace:
    """Distances are the levels of lowest common ancestors."""
    n = validate_dendrogram(d)
    rows = [[Fraction(0)] * n for _ in range(n)]

    def fill(t):
        if isinstance(t, Leaf):
            return
        groups = [c.leaves() for c in t.children]
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                for x in groups[a]:
                    for y in groups[b]:
                        rows[x][y] = rows[y][x] = t.level
        for c in t.children:
            fill(c)

    fill(d)
    m = DistanceMatrix(tuple(tuple(r) for r in rows),
                       None if labels is None else tuple(labels))
    return UltrametricSpace(m)


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

_BARE = re.compile(r"^[^\s(),:;\[\]']+$")


def _quote(label: str) -> str:
    if _BARE.match(label):
        return label
    return "'" + label.replace("'", "''") + "'"


def to_newick(d: Dendrogram, labels=None, *, branch_lengths: bool = False) -> str:
    name = (lambda i: _quote(str(labels[i]))) if labels is not None else str
    d = canonical(d)

    def emit(t, parent_level):
        if isinstance(t, Leaf):
            out = name(t.index)
        else:
            inner = ",".join(emit(c, t.level) for c in t.children)
            out = f"({inner})" if branch_lengths else f"({inner})[{format_scalar(t.level)}]"
        if branch_lengths and parent_level is not None:
            out += ":" + format_scalar(parent_level - t.height)
        return out

    return emit(d, None) + ";"


def from_newick(text: str, labels=None) -> Dendrogram:
    """Read the bracketed-height form written by :func:`to_newick`."""
    index = None if labels is None else {str(x): i for i, x in enumerate(labels)}
    src = text.strip()
    pos = 0

    def fail(msg):
        raise ParseError(f"newick: {msg} at offset {pos}", {"offset": pos})

    def parse_label():
        nonlocal pos
        if src.startswith("'", pos):
            pos += 1
            buf = []
            while True:
                j = src.find("'", pos)
                if j < 0:
                    fail("unterminated quoted label")
                buf.append(src[pos:j])
                if src.startswith("''", j):
                    buf.append("'")
                    pos = j + 2
                else:
                    pos = j + 1
                    return "".join(buf)
        m = re.compile(r"[^\s(),:;\[\]']+").match(src, pos)
        if not m:
            fail("expected a label")
        pos = m.end()
        return m.group()

    def parse_tree():
        nonlocal pos
        if src.startswith("(", pos):
            pos += 1
            kids = [parse_tree()]
            while src.startswith(",", pos):
                pos += 1
                kids.append(parse_tree())
            if not src.startswith(")[", pos):
                fail("expected ')[' after children")
            j = src.find("]", pos)
            if j < 0:
                fail("unterminated level")
            level = parse_scalar(src[pos + 2:j])
            pos = j + 1
            return Node(level, tuple(kids))
        label = parse_label()
        if index is not None:
            if label not in index:
                fail(f"unknown label {label!r}")
            return Leaf(index[label])
        try:
            return Leaf(int(label))
        except ValueError:
            fail(f"leaf {label!r} is not an index")

    tree = parse_tree()
    if src[pos:] != ";":
        fail("expected ';' at end")
    validate_dendrogram(tree)
    return canonical(tree)


def to_json_obj(d: Dendrogram) -> dict:
    if isinstance(d, Leaf):
        return {"leaf": d.index}
    return {"level": format_scalar(d.level), "children": [to_json_obj(c) for c in canonical(d).children]}


def from_json_obj(obj) -> Dendrogram:
    def build(o):
        if not isinstance(o, dict):
            raise ParseError("dendrogram nodes must be objects")
        if "leaf" in o:
            return Leaf(int(o["leaf"]))
        try:
            return Node(parse_scalar(o["level"]), tuple(build(c) for c in o["children"]))
        except (KeyError, TypeError):
            raise ParseError('internal nodes need "level" and "children"') from None

    tree = build(obj)
    validate_dendrogram(tree)
    return canonical(tree)


def to_json(d: Dendrogram) -> str:
    return json.dumps(to_json_obj(d)) + "\n"


def from_json(raw: str) -> Dendrogram:
    try:
        obj = json.loads(raw, parse_float=str)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return from_json_obj(obj)
