"""Exact scalars, distance matrices and certified ultrametric spaces."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import (
    DegenerateSpace,
    EmptySubset,
    MetricError,
    NotUltrametricError,
    ParseError,
    PointIndexError,
    ShapeError,
)

Scalar = Fraction

DEFAULT_EPSILON = Fraction(1, 10**9)


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

def parse_scalar(text) -> Fraction:
    """Parse an integer, decimal or ``p/q`` literal exactly.

    Floats are read through their shortest ``repr`` so that ``0.1`` means
    1/10 rather than the nearest binary fraction.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ParseError(f"not a number: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        text = repr(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a number: {text!r}") from None


def format_scalar(x) -> str:
    """Terminating decimal when one exists, otherwise ``p/q``."""
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    if q == 1:
        return str(p)
    rest, twos, fives = q, 0, 0
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        return f"{p}/{q}"
    k = max(twos, fives)
    digits = str(abs(p) * 10**k // q).rjust(k + 1, "0")
    sign = "-" if p < 0 else ""
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


def snap_values(values: Iterable[Fraction], epsilon=DEFAULT_EPSILON) -> dict[Fraction, Fraction]:
    """Map values that chain together within ``epsilon`` onto one representative.

    Groups are formed by single linkage on the sorted values. A group that
    reaches 0 snaps to 0, any other group snaps to its smallest member.
    """
    epsilon = parse_scalar(epsilon)
    ordered = sorted(set(values) | {Fraction(0)})
    mapping = {}
    rep = ordered[0]
    prev = ordered[0]
    for v in ordered:
        if v - prev > epsilon:
            rep = v
        mapping[v] = rep
        prev = v
    return mapping


# ---------------------------------------------------------------------------
# distance matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric matrix of exact nonnegative distances with zero diagonal."""

    entries: tuple[tuple[Fraction, ...], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        n = len(self.entries)
        if n < 1:
            raise ShapeError("distance matrix needs at least one point")
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise ShapeError(f"row {i} has {len(row)} entries, expected {n}",
                                 {"row": i, "length": len(row), "expected": n})
        if self.labels is not None:
            if len(self.labels) != n:
                raise ShapeError(f"{len(self.labels)} labels for {n} points",
                                 {"labels": len(self.labels), "expected": n})
            if len(set(self.labels)) != n:
                raise ParseError("labels must be distinct")
        for i, row in enumerate(self.entries):
            for j, v in enumerate(row):
                if v < 0:
                    raise MetricError(f"negative distance at ({i},{j})", (i, j))
                if i == j and v != 0:
                    raise MetricError(f"nonzero diagonal at ({i},{j})", (i, j))
                if i != j and v == 0:
                    raise MetricError(f"zero distance between distinct points at ({i},{j})", (i, j))
                if i > j and v != self.entries[j][i]:
                    raise MetricError(f"asymmetric entries at ({i},{j})", (i, j))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], labels: Sequence[str] | None = None) -> "DistanceMatrix":
        entries = [tuple(row) for row in _parse_grid(rows)]
        return cls(tuple(entries), None if labels is None else tuple(str(x) for x in labels))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    @cached_property
    def values(self) -> tuple[Fraction, ...]:
        """Sorted distinct entries; position in this tuple is the rank."""
        return tuple(sorted({v for row in self.entries for v in row}))

    @cached_property
    def ranks(self) -> np.ndarray:
        index = {v: r for r, v in enumerate(self.values)}
        R = np.array([[index[v] for v in row] for row in self.entries], dtype=np.int64)
        R.setflags(write=False)
        return R

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def to_json_obj(self) -> dict:
        obj = {}
        if self.labels is not None:
            obj["labels"] = list(self.labels)
        obj["matrix"] = [[format_scalar(v) for v in row] for row in self.entries]
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.labels is not None:
            w.writerow(self.labels)
        for row in self.entries:
            w.writerow([format_scalar(v) for v in row])
        return buf.getvalue()


def _parse_grid(rows) -> list[list[Fraction]]:
    out = []
    for i, row in enumerate(rows):
        parsed = []
        for j, v in enumerate(row):
            try:
                parsed.append(parse_scalar(v))
            except ParseError as exc:
                exc.witness["cell"] = [i, j]
                raise
        out.append(parsed)
    return out


def _parse_csv(raw: str):
    rows = [[c.strip() for c in r] for r in csv.reader(io.StringIO(raw))]
    rows = [r for r in rows if any(r)]
    if not rows:
        raise ParseError("empty CSV input")
    # numeric labels are legal, so a header is also recognised by row count
    if len(rows) == len(rows[0]) + 1:
        return rows[1:], rows[0]
    try:
        [parse_scalar(c) for c in rows[0]]
    except ParseError:
        return rows[1:], rows[0]
    return rows, None


def _parse_json(raw: str):
    try:
        obj = json.loads(raw, parse_float=str, parse_int=str)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if isinstance(obj, list):
        return obj, None
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ParseError('expected an object with a "matrix" key')
    rows = obj["matrix"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ShapeError('"matrix" must be a list of rows')
    return rows, obj.get("labels")


def parse_matrix(raw: str, format: str = "csv", *, epsilon=None) -> DistanceMatrix:
    """Parse CSV or JSON text into a validated :class:`DistanceMatrix`.

    With ``epsilon`` set, values that lie within ``epsilon`` of each other
    are snapped to a common rational before validation.
    """
    if format == "csv":
        rows, labels = _parse_csv(raw)
    elif format == "json":
        rows, labels = _parse_json(raw)
    else:
        raise ValueError(f"unknown matrix format {format!r}")
    if epsilon is None:
        return DistanceMatrix.from_rows(rows, labels)
    exact = _parse_grid(rows)
    mapping = snap_values((v for row in exact for v in row), epsilon)
    return DistanceMatrix.from_rows([[mapping[v] for v in row] for row in exact], labels)


# ---------------------------------------------------------------------------
# ultrametric certification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    """Ordered triple (x, y, z) with d(x,z) > d(x,y) v d(y,z)."""

    x: int
    y: int
    z: int
    d_xz: Fraction
    d_xy: Fraction
    d_yz: Fraction

    def __str__(self):
        return (f"ultrametric inequality fails at ({self.x},{self.y},{self.z}): "
                f"{format_scalar(self.d_xz)} > max({format_scalar(self.d_xy)}, "
                f"{format_scalar(self.d_yz)})")

    def to_json(self) -> dict:
        return {"triple": [self.x, self.y, self.z],
                "d_xz": format_scalar(self.d_xz),
                "d_xy": format_scalar(self.d_xy),
                "d_yz": format_scalar(self.d_yz)}


class UltrametricSpace:
    """A distance matrix known to satisfy the ultrametric inequality.

    Build one with :func:`certify_ultrametric` or :func:`ultrametric`; the
    constructor also certifies and raises :class:`NotUltrametricError`.
    """

    __slots__ = ("matrix", "triples_checked")

    def __init__(self, matrix: DistanceMatrix):
        v = find_violation(matrix)
        if v is not None:
            raise NotUltrametricError(v)
        self.matrix = matrix
        self.triples_checked = matrix.n ** 3

    @classmethod
    def _trusted(cls, matrix: DistanceMatrix) -> "UltrametricSpace":
        obj = object.__new__(cls)
        obj.matrix = matrix
        obj.triples_checked = matrix.n ** 3
        return obj

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def labels(self):
        return self.matrix.labels

    @property
    def entries(self):
        return self.matrix.entries

    def d(self, i: int, j: int) -> Fraction:
        return self.matrix.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, UltrametricSpace):
            return NotImplemented
        return self.matrix.entries == other.matrix.entries

    def __hash__(self):
        return hash(self.matrix.entries)

    def __repr__(self):
        return f"UltrametricSpace(n={self.n}, spectrum={[format_scalar(v) for v in self.matrix.values]})"


def find_violation(m: DistanceMatrix) -> Violation | None:
    hit = _kernels.triple_violation(m.ranks)
    if hit is None:
        return None
    x, y, z = hit
    e = m.entries
    return Violation(x, y, z, e[x][z], e[x][y], e[y][z])


def certify_ultrametric(m: DistanceMatrix) -> UltrametricSpace | Violation:
    """Certified space, or the lexicographically first violating triple."""
    v = find_violation(m)
    if v is not None:
        return v
    return UltrametricSpace._trusted(m)


def ultrametric(rows, labels=None) -> UltrametricSpace:
    """Convenience constructor from raw rows; raises on any defect."""
    m = rows if isinstance(rows, DistanceMatrix) else DistanceMatrix.from_rows(rows, labels)
    return UltrametricSpace(m)


def _check_indices(s: UltrametricSpace, subset) -> list[int]:
    idx = sorted(set(int(i) for i in subset))
    if not idx:
        raise EmptySubset("diameter of the empty set is undefined")
    if idx[0] < 0 or idx[-1] >= s.n:
        raise PointIndexError(f"point indices must lie in 0..{s.n - 1}", {"subset": idx})
    return idx


def diam(s: UltrametricSpace, subset=None) -> Fraction:
    """Largest distance inside ``subset`` (the whole space by default)."""
    if subset is None:
        return s.matrix.values[-1]
    idx = _check_indices(s, subset)
    R = s.matrix.ranks
    return s.matrix.values[int(R[np.ix_(idx, idx)].max())]


def spectrum(s: UltrametricSpace) -> list[Fraction]:
    return list(s.matrix.values)


def restrict(s: UltrametricSpace, indices: Sequence[int]) -> UltrametricSpace:
    """Subspace on ``indices``, in the given order (so it also reorders)."""
    idx = [int(i) for i in indices]
    if not idx:
        raise EmptySubset("cannot restrict to no points")
    if len(set(idx)) != len(idx):
        raise PointIndexError("repeated point index", {"indices": idx})
    _check_indices(s, idx)
    e = s.entries
    labels = None if s.labels is None else tuple(s.labels[i] for i in idx)
    m = DistanceMatrix(tuple(tuple(e[i][j] for j in idx) for i in idx), labels)
    return UltrametricSpace._trusted(m)


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Canonical set partition of ``0..n-1``.

    Parts are sorted by smallest member and members ascend. Use
    :meth:`of` to canonicalise arbitrary input.
    """

    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.parts or any(len(p) == 0 for p in self.parts):
            raise ValueError("a partition needs at least one part and no empty parts")
        seen = sorted(i for p in self.parts for i in p)
        if seen != list(range(len(seen))):
            raise ValueError(f"parts must cover 0..n-1 exactly once, got {self.parts}")
        if any(list(p) != sorted(p) for p in self.parts) or \
                [p[0] for p in self.parts] != sorted(p[0] for p in self.parts):
            raise ValueError("partition is not in canonical order; use Partition.of")

    @classmethod
    def of(cls, parts: Iterable[Iterable[int]]) -> "Partition":
        canon = sorted((tuple(sorted(int(i) for i in p)) for p in parts), key=lambda p: p[:1])
        return cls(tuple(canon))

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def sizes(self) -> list[int]:
        return [len(p) for p in self.parts]

    def block_of(self) -> list[int]:
        out = [0] * self.n
        for b, p in enumerate(self.parts):
            for i in p:
                out[i] = b
        return out

    def to_json_obj(self) -> dict:
        return {"n": self.n, "parts": [list(p) for p in self.parts]}


def equiv_partition(s: UltrametricSpace) -> Partition:
    """Classes of the relation d(x, y) < diam X."""
    if s.n < 2:
        raise DegenerateSpace("the diameter relation needs at least two points")
    D = diam(s)
    e = s.entries
    parts: list[list[int]] = []
    for x in range(s.n):
        for p in parts:
            if e[x][p[0]] < D:
                p.append(x)
                break
        else:
            parts.append([x])
    block = {i: b for b, p in enumerate(parts) for i in p}
    for x in range(s.n):
        for y in range(x + 1, s.n):
            if (block[x] == block[y]) != (e[x][y] < D):
                raise AssertionError(f"diameter relation not transitive at ({x},{y})")
    return Partition.of(parts)
