"""Diameter functions on the nonempty subsets of a finite point set.

Subsets are bitmasks: bit ``i`` set means point ``i`` is a member. A dense
function stores one value per nonempty mask together with its integer rank
(position among the sorted distinct values), which the scan kernels use.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .core import (
    DistanceMatrix,
    UltrametricSpace,
    certify_ultrametric,
    diam,
    format_scalar,
    parse_scalar,
)
from .errors import (
    AxiomViolation,
    CapExceeded,
    DiamMismatch,
    EmptySubset,
    InputError,
    ParseError,
    PointIndexError,
    ShapeError,
)

SubsetId = int

DENSE_CAP = 20
EXHAUSTIVE_MAX_N = 6
DEFAULT_SAMPLES = 200_000
BALL_MAX_N = 5


def mask_of(indices: Iterable[int]) -> SubsetId:
    m = 0
    for i in indices:
        if i < 0:
            raise PointIndexError(f"negative point index {i}")
        m |= 1 << int(i)
    return m


def members(mask: SubsetId) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _check_mask(mask: SubsetId, n: int) -> SubsetId:
    mask = int(mask)
    if mask <= 0:
        raise EmptySubset("subsets must be nonempty")
    if mask >> n:
        raise PointIndexError(f"subset {members(mask)} has points outside 0..{n - 1}")
    return mask


class DiameterFunction:
    """A map from nonempty subsets of ``0..n-1`` to nonnegative rationals.

    Dense functions hold a full table. A lazy function wraps an
    :class:`UltrametricSpace` and evaluates diameters on demand; it can be
    made dense with :meth:`materialize` while ``n`` fits the cap.
    """

    def __init__(self, n: int, table=None, *, space: UltrametricSpace | None = None):
        if n < 1:
            raise ShapeError("a diameter function needs at least one point")
        self.n = n
        self.space = space
        self._values: tuple[Fraction, ...] | None = None
        self._ranks: np.ndarray | None = None
        if table is not None:
            self._set_table(table)
        elif space is None:
            raise ValueError("need either a table or a backing space")

    def _set_table(self, table):
        size = 1 << self.n
        if isinstance(table, Mapping):
            missing = [m for m in range(1, size) if m not in table]
            if missing:
                raise ShapeError(f"no value for subset {members(missing[0])}",
                                 {"missing": members(missing[0])})
            table = [None] + [table[m] for m in range(1, size)]
        if len(table) != size:
            raise ShapeError(f"table has {len(table)} slots, expected {size}")
        vals = [None] + [parse_scalar(v) for v in table[1:]]
        for m in range(1, size):
            if vals[m] < 0:
                raise InputError(f"negative value on subset {members(m)}",
                                 {"subset": members(m), "value": format_scalar(vals[m])})
        self._values = tuple(sorted(set(vals[1:])))
        index = {v: r for r, v in enumerate(self._values)}
        ranks = np.full(size, -1, dtype=np.int64)
        ranks[1:] = [index[v] for v in vals[1:]]
        ranks.setflags(write=False)
        self._ranks = ranks

    @classmethod
    def _from_ranks(cls, n, values, ranks, space=None) -> "DiameterFunction":
        obj = cls.__new__(cls)
        obj.n, obj.space = n, space
        obj._values = tuple(values)
        obj._ranks = ranks
        obj._ranks.setflags(write=False)
        return obj

    @property
    def dense(self) -> bool:
        return self._ranks is not None

    def materialize(self, cap: int = DENSE_CAP) -> "DiameterFunction":
        if self.dense:
            return self
        return tau_from_space(self.space, cap=cap)

    @property
    def ranks(self) -> np.ndarray:
        if not self.dense:
            raise CapExceeded("operation needs a dense diameter function")
        return self._ranks

    @property
    def value_set(self) -> tuple[Fraction, ...]:
        if not self.dense:
            raise CapExceeded("operation needs a dense diameter function")
        return self._values

    def __getitem__(self, subset) -> Fraction:
        mask = subset if isinstance(subset, int) else mask_of(subset)
        mask = _check_mask(mask, self.n)
        if self.dense:
            return self._values[int(self._ranks[mask])]
        return diam(self.space, members(mask))

    def __call__(self, subset) -> Fraction:
        return self[subset]

    def items(self):
        for m in range(1, 1 << self.n):
            yield m, self[m]

    def __eq__(self, other):
        if not isinstance(other, DiameterFunction):
            return NotImplemented
        return self.n == other.n and list(self.items()) == list(other.items())

    def __repr__(self):
        kind = "dense" if self.dense else "lazy"
        return f"DiameterFunction(n={self.n}, {kind})"

    def to_json_obj(self) -> dict:
        return {"n": self.n,
                "entries": [{"subset": members(m), "value": format_scalar(v)}
                            for m, v in self.items()]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2) + "\n"

    @classmethod
    def from_json_obj(cls, obj) -> "DiameterFunction":
        if not isinstance(obj, dict) or "n" not in obj or "entries" not in obj:
            raise ParseError('expected an object with "n" and "entries"')
        try:
            n = int(obj["n"])
        except (TypeError, ValueError):
            raise ParseError('"n" must be an integer') from None
        if n < 1 or n > DENSE_CAP:
            raise CapExceeded(f"n={n} outside 1..{DENSE_CAP}")
        table = {}
        for k, e in enumerate(obj["entries"]):
            try:
                subset = [int(i) for i in e["subset"]]
                value = parse_scalar(e["value"])
            except (KeyError, TypeError, ValueError):
                raise ParseError(f"malformed entry #{k}", {"entry": k}) from None
            if len(set(subset)) != len(subset):
                raise ParseError(f"entry #{k} repeats a point", {"entry": k})
            mask = _check_mask(mask_of(subset), n)
            if mask in table:
                raise ParseError(f"subset {sorted(subset)} listed twice", {"subset": sorted(subset)})
            table[mask] = value
        return cls(n, table)

    @classmethod
    def from_json(cls, raw: str) -> "DiameterFunction":
        try:
            obj = json.loads(raw, parse_float=str)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        return cls.from_json_obj(obj)


def tau_from_space(s: UltrametricSpace, *, lazy: bool = False, cap: int = DENSE_CAP) -> DiameterFunction:
    """Diameter of every nonempty subset of ``s``."""
    if lazy:
        return DiameterFunction(s.n, space=s)
    if s.n > cap:
        raise CapExceeded(f"dense table for n={s.n} exceeds cap {cap}", {"n": s.n, "cap": cap})
    ranks = _kernels.subset_max(s.matrix.ranks)
    return DiameterFunction._from_ranks(s.n, s.matrix.values, ranks, space=s)


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomWitness:
    clause: str  # "i1" or "i2"
    subsets: tuple[SubsetId, ...]
    values: tuple[Fraction, ...]

    def to_json(self) -> dict:
        names = "ABC"
        out = {"clause": self.clause}
        for name, m in zip(names, self.subsets):
            out[name] = members(m)
        if self.clause == "i1":
            out["tau_A"] = format_scalar(self.values[0])
        else:
            out["tau_AuB"], out["tau_AuC"], out["tau_CuB"] = (format_scalar(v) for v in self.values)
        return out


@dataclass(frozen=True)
class AxiomReport:
    i1_ok: bool
    i2_ok: bool
    witness: AxiomWitness | None
    mode: str  # "exhaustive" or "sampled"
    triples_checked: int

    @property
    def ok(self) -> bool:
        return self.i1_ok and self.i2_ok

    def to_json(self) -> dict:
        return {"i1_ok": self.i1_ok, "i2_ok": self.i2_ok, "mode": self.mode,
                "triples_checked": self.triples_checked,
                "witness": None if self.witness is None else self.witness.to_json()}


def check_axioms(t: DiameterFunction, *, exhaustive_max_n: int = EXHAUSTIVE_MAX_N,
                 samples: int = DEFAULT_SAMPLES, seed: int = 0) -> AxiomReport:
    """Check zero-exactly-on-singletons and the three-set max inequality.

    Up to ``exhaustive_max_n`` points every ordered triple of subsets is
    scanned; beyond that ``samples`` seeded random triples are drawn.
    """
    T = t.ranks
    size = 1 << t.n
    values = t.value_set
    masks = np.arange(size, dtype=np.int64)
    single = (masks & (masks - 1)) == 0
    zero = values.index(Fraction(0)) if values[0] == 0 else -2
    bad1 = np.flatnonzero((T[1:] == zero) != single[1:])
    witness = None
    if bad1.size:
        a = int(bad1[0]) + 1
        witness = AxiomWitness("i1", (a,), (values[int(T[a])],))

    if t.n <= exhaustive_max_n:
        mode = "exhaustive"
        checked = (size - 1) ** 3
        hit = _kernels.i2_violation(T)
    else:
        mode = "sampled"
        checked = samples
        rng = np.random.default_rng(seed)
        A, B, C = (rng.integers(1, size, size=samples, dtype=np.int64) for _ in range(3))
        hit = _kernels.i2_violation_sampled(T, A, B, C)
    if hit is not None and witness is None:
        a, b, c = hit
        witness = AxiomWitness("i2", hit, tuple(values[int(T[m])] for m in (a | b, a | c, c | b)))
    return AxiomReport(not bad1.size, hit is None, witness, mode, checked)


def synthesize_ultrametric(t: DiameterFunction, **check_kwargs) -> UltrametricSpace:
    """The unique ultrametric whose pair distances are the values on 2-sets."""
    report = check_axioms(t, **check_kwargs)
    if not report.ok:
        raise AxiomViolation(report)
    n, T = t.n, t.ranks
    pair = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            pair[x, y] = T[(1 << x) | (1 << y)]
    values = t.value_set
    m = DistanceMatrix(tuple(tuple(values[int(r)] for r in row) for row in pair))
    s = certify_ultrametric(m)
    if not isinstance(s, UltrametricSpace):
        # only reachable when the i2 scan was sampled and missed this triple
        w = AxiomWitness("i2", (1 << s.x, 1 << s.z, 1 << s.y), (s.d_xz, s.d_xy, s.d_yz))
        raise AxiomViolation(AxiomReport(report.i1_ok, False, w, report.mode, report.triples_checked))
    D = _kernels.subset_max(pair)
    bad = np.flatnonzero(D[1:] != T[1:])
    if bad.size:
        a = int(bad[0]) + 1
        raise DiamMismatch(f"value on {members(a)} differs from its diameter",
                           {"subset": members(a), "tau": format_scalar(values[int(T[a])]),
                            "diam": format_scalar(values[int(D[a])])})
    return s


# ---------------------------------------------------------------------------
# balls
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubsetBall:
    center: SubsetId
    radius: Fraction
    members: frozenset = field(default_factory=frozenset)

    def to_json(self) -> dict:
        return {"center": members(self.center), "radius": format_scalar(self.radius),
                "members": [members(m) for m in sorted(self.members)]}


def _radius_rank(values, radius) -> int:
    return bisect.bisect_right(values, radius) - 1


def ball(t: DiameterFunction, center, radius) -> SubsetBall:
    """All subsets C whose union with ``center`` has value at most ``radius``."""
    center = _check_mask(center if isinstance(center, int) else mask_of(center), t.n)
    radius = parse_scalar(radius)
    T = t.ranks
    others = np.arange(1, 1 << t.n, dtype=np.int64)
    inside = others[T[center | others] <= _radius_rank(t.value_set, radius)]
    return SubsetBall(center, radius, frozenset(int(m) for m in inside))


@dataclass(frozen=True)
class DichotomyReport:
    ok: bool
    balls: int
    pairs_checked: int
    counterexample: dict | None

    def to_json(self) -> dict:
        return {"ok": self.ok, "balls": self.balls, "pairs_checked": self.pairs_checked,
                "counterexample": self.counterexample}


def ball_radii(t: DiameterFunction) -> list[Fraction]:
    """Value set plus one radius strictly between 0 and the least positive value."""
    values = list(t.value_set)
    positive = [v for v in values if v > 0]
    if positive:
        values.append(positive[0] / 2)
    return sorted(set(values))


def check_ball_dichotomy(t: DiameterFunction, *, max_n: int = BALL_MAX_N) -> DichotomyReport:
    """Recentering and disjoint-or-nested checks over every nonempty ball."""
    if t.n > max_n:
        raise CapExceeded(f"ball enumeration limited to n <= {max_n}", {"n": t.n, "cap": max_n})
    T = t.ranks
    values = t.value_set
    subsets = np.arange(1, 1 << t.n, dtype=np.int64)
    radii = ball_radii(t)
    rr = [_radius_rank(values, r) for r in radii]
    # inside[c, k, s]: subset s lies in the ball of radius radii[k] at centre c
    unions = T[subsets[:, None] | subsets[None, :]]
    inside = unions[:, None, :] <= np.array(rr)[None, :, None]

    for k, r in enumerate(radii):
        layer = inside[:, k, :]
        for ci in range(len(subsets)):
            row = layer[ci]
            if not row.any():
                continue
            same = (layer[row] == row).all(axis=1)
            if not same.all():
                member = int(subsets[np.flatnonzero(row)[np.argmin(same)]])
                return DichotomyReport(False, 0, 0, {
                    "kind": "recentering", "center": members(int(subsets[ci])),
                    "radius": format_scalar(r), "member": members(member)})

    flat = inside.reshape(-1, len(subsets))
    centre_idx, radius_idx = np.divmod(np.arange(flat.shape[0]), len(radii))
    keep = flat.any(axis=1)
    B = flat[keep].astype(np.int64)
    cidx, ridx = centre_idx[keep], radius_idx[keep]
    meet = (B @ B.T) > 0
    outside = (B @ (1 - B).T)  # outside[i, j] = |B_i minus B_j|
    ordered = ridx[:, None] >= ridx[None, :]
    bad = ordered & meet & (outside.T != 0)  # need B_j inside B_i
    pairs = int(ordered.sum())
    if bad.any():
        i, j = divmod(int(np.argmax(bad)), len(B))
        return DichotomyReport(False, len(B), pairs, {
            "kind": "dichotomy",
            "A1": members(int(subsets[cidx[i]])), "r1": format_scalar(radii[ridx[i]]),
            "A2": members(int(subsets[cidx[j]])), "r2": format_scalar(radii[ridx[j]])})
    return DichotomyReport(True, len(B), pairs, None)
