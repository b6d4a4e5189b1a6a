"""Hot loops over rank-encoded distances.

All kernels take int64 arrays whose entries are *ranks* of exact rational
values (position in the sorted list of distinct values). Ranks preserve
order, and every check in this package only compares and takes maxima, so
working on ranks is exact.

Each kernel exists twice: a numba ``@njit`` loop and a vectorised numpy
version. The module-level names dispatch to numba when it is importable and
``ULTRADIAM_DISABLE_NUMBA`` is unset (or 0/false/no).
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("ULTRADIAM_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _flag not in ("", "0", "false", "no")

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

BACKEND = "numba" if NUMBA_AVAILABLE and not DISABLED_BY_ENV else "numpy"

NO_HIT = (-1, -1, -1)


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def triple_violation_numpy(R):
    """First (x, y, z) in lexicographic order with R[x,z] > max(R[x,y], R[y,z])."""
    n = R.shape[0]
    for x in range(n):
        bound = np.maximum(R[x, :, None], R)  # indexed [y, z]
        bad = R[x][None, :] > bound
        if bad.any():
            y, z = divmod(int(np.argmax(bad)), n)
            return (x, y, z)
    return NO_HIT


def subset_max_numpy(R):
    n = R.shape[0]
    T = np.full(1 << n, -1, dtype=np.int64)
    for b in range(n):
        lo = 1 << b
        # far[m] = max rank from point b to any point of m (m below bit b)
        far = np.full(lo, R[b, b], dtype=np.int64)
        for j in range(b):
            w = 1 << j
            far[w:2 * w] = np.maximum(far[:w], R[b, j])
        T[lo:2 * lo] = np.maximum(T[:lo], far)
    return T


def i2_violation_numpy(T):
    size = T.shape[0]
    masks = np.arange(1, size, dtype=np.int64)
    union_cb = T[masks[:, None] | masks[None, :]]  # symmetric, so also [b, c]
    for a in masks:
        with_a = T[a | masks]
        bad = with_a[:, None] > np.maximum(with_a[None, :], union_cb)  # [b, c]
        if bad.any():
            b, c = divmod(int(np.argmax(bad)), size - 1)
            return (int(a), int(masks[b]), int(masks[c]))
    return NO_HIT


def i2_violation_sampled_numpy(T, A, B, C):
    bad = T[A | B] > np.maximum(T[A | C], T[C | B])
    if not bad.any():
        return NO_HIT
    idx = np.flatnonzero(bad)
    order = np.lexsort((C[idx], B[idx], A[idx]))
    k = idx[order[0]]
    return (int(A[k]), int(B[k]), int(C[k]))


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def triple_violation_numba(R):
        n = R.shape[0]
        for x in range(n):
            for y in range(n):
                rxy = R[x, y]
                for z in range(n):
                    ryz = R[y, z]
                    if R[x, z] > (rxy if rxy > ryz else ryz):
                        return (x, y, z)
        return (-1, -1, -1)

    @njit(cache=True)
    def subset_max_numba(R):
        n = R.shape[0]
        T = np.full(1 << n, -1, dtype=np.int64)
        for m in range(1, 1 << n):
            low = 0
            while not (m >> low) & 1:
                low += 1
            rest = m & (m - 1)
            best = R[low, low]
            if rest:
                best = T[rest]
                for j in range(low + 1, n):
                    if (rest >> j) & 1 and R[low, j] > best:
                        best = R[low, j]
            T[m] = best
        return T

    @njit(cache=True)
    def i2_violation_numba(T):
        size = T.shape[0]
        for a in range(1, size):
            for b in range(1, size):
                lhs = T[a | b]
                for c in range(1, size):
                    left = T[a | c]
                    right = T[c | b]
                    if lhs > (left if left > right else right):
                        return (a, b, c)
        return (-1, -1, -1)

    @njit(cache=True)
    def i2_violation_sampled_numba(T, A, B, C):
        best_a, best_b, best_c = -1, -1, -1
        for k in range(A.shape[0]):
            a, b, c = A[k], B[k], C[k]
            left = T[a | c]
            right = T[c | b]
            if T[a | b] > (left if left > right else right):
                if (best_a < 0 or a < best_a or (a == best_a and b < best_b)
                        or (a == best_a and b == best_b and c < best_c)):
                    best_a, best_b, best_c = a, b, c
        return (best_a, best_b, best_c)


def _pick(name):
    if BACKEND == "numba":
        return globals()[name + "_numba"]
    return globals()[name + "_numpy"]


_triple = _pick("triple_violation")
_subset_max = _pick("subset_max")
_i2 = _pick("i2_violation")
_i2_sampled = _pick("i2_violation_sampled")


def _as_ranks(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def _hit(t):
    return None if t[0] < 0 else (int(t[0]), int(t[1]), int(t[2]))


def triple_violation(R):
    """Lexicographically first ultrametric violation, or None."""
    return _hit(_triple(_as_ranks(R)))


def subset_max(R):
    """Max rank over pairs of every subset, indexed by bitmask (entry 0 is -1)."""
    return _subset_max(_as_ranks(R))


def i2_violation(T):
    """First (A, B, C) by mask order with T[A|B] > max(T[A|C], T[C|B]), or None."""
    return _hit(_i2(_as_ranks(T)))


def i2_violation_sampled(T, A, B, C):
    return _hit(_i2_sampled(_as_ranks(T), _as_ranks(A), _as_ranks(B), _as_ranks(C)))
