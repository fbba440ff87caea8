"""
The cyclic shift on ordered tuples, orbits of pair indices, and the
orbit geometric means ``D_k``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .core import PlueckerVector, Tolerance, DEFAULT_TOL, _check_increasing, is_positive


def sigma_tuple(t, n: int) -> tuple[int, ...]:
    """Right cyclic shift of a strictly increasing tuple of ``[n]``.

    ``(i_1, ..., i_k) -> (i_1+1, ..., i_k+1)`` when ``i_k < n``, otherwise
    ``(1, i_1+1, ..., i_{k-1}+1)``.
    """
    t = tuple(int(x) for x in t)
    if not t:
        raise ValueError("empty tuple")
    _check_increasing(t, n)
    if t[-1] < n:
        return tuple(x + 1 for x in t)
    return (1,) + tuple(x + 1 for x in t[:-1])


def sigma_power(t, n: int, m: int) -> tuple[int, ...]:
    """``σ^m`` applied to ``t``; ``m`` may be any integer."""
    for _ in range(m % n):
        t = sigma_tuple(t, n)
    return tuple(t)


def orbit(k: int, n: int) -> tuple[tuple[int, int], ...]:
    """The multiset ``O_k`` in shift order, starting at ``(1, k+1)``."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} outside [1, {n - 1}]")
    out = [(1, k + 1)]
    for _ in range(n - 1):
        out.append(sigma_tuple(out[-1], n))
    return tuple(out)


@dataclass(frozen=True)
class OrbitTable:
    n: int
    d: int
    orbits: dict = field(repr=False)

    def orbit(self, k: int) -> tuple[tuple[int, int], ...]:
        return self.orbits[k]

    def distinct(self, k: int) -> frozenset:
        return frozenset(self.orbits[k])

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(range(1, self.d + 1))

    @property
    def distinct_count(self) -> int:
        return self.d

    def orbit_of(self, pair) -> int:
        """Representative ``k`` in ``[1, d]`` of the orbit containing ``pair``."""
        i, j = pair
        g = j - i
        return min(g, self.n - g)

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "orbits": {
                str(k): [list(p) for p in self.orbits[k]]
                for k in range(1, self.n)
            },
            "distinct": {
                str(k): sorted(list(p) for p in self.distinct(k))
                for k in self.representatives
            },
        }


@lru_cache(maxsize=None)
def orbit_table(n: int) -> OrbitTable:
    if n < 3:
        raise ValueError(f"n={n} < 3")
    d = n // 2
    orbits = {k: orbit(k, n) for k in range(1, n)}
    # Orbit structure sanity: involution, gap law, partition of all pairs.
    for k in range(1, n):
        if set(orbits[k]) != set(orbits[n - k]):
            raise AssertionError(f"O_{k} != O_{n - k}")
        if any(j - i not in (k, n - k) for i, j in orbits[k]):
            raise AssertionError(f"gap law fails on O_{k}")
    sets = [set(orbits[k]) for k in range(1, d + 1)]
    if sum(map(len, sets)) != n * (n - 1) // 2 or len(set().union(*sets)) != n * (n - 1) // 2:
        raise AssertionError("orbits O_1..O_d do not partition the pairs")
    return OrbitTable(n=n, d=d, orbits=orbits)


@lru_cache(maxsize=None)
def _orbit_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    """0-based (row, col) index arrays of shape (n-1, n); row k-1 is O_k."""
    table = orbit_table(n)
    idx = np.array([table.orbits[k] for k in range(1, n)]) - 1
    idx.setflags(write=False)
    return idx[..., 0], idx[..., 1]


def sines(n: int) -> np.ndarray:
    """``s_k = sin(k π / n)`` for ``k = 1..n-1`` (index 0 holds ``s_1``)."""
    return np.sin(np.arange(1, n) * np.pi / n)


@dataclass(frozen=True, eq=False)
class GeoMeans:
    """Orbit geometric means; ``D[k-1]`` holds ``D_k``."""

    n: int
    D: np.ndarray

    def __post_init__(self):
        D = np.array(self.D, dtype=float)
        if D.shape != (self.n - 1,):
            raise ValueError(f"expected {self.n - 1} means, got shape {D.shape}")
        if not np.all(D > 0):
            raise ValueError("geometric means must be positive")
        D.setflags(write=False)
        object.__setattr__(self, "D", D)

    @property
    def d(self) -> int:
        return self.n // 2

    def __getitem__(self, k: int) -> float:
        if not 1 <= k <= self.n - 1:
            raise IndexError(k)
        return float(self.D[k - 1])

    @cached_property
    def a(self) -> np.ndarray:
        """Normalized logs ``log(D_k / s_k)``, without any precondition check."""
        a = np.log(self.D) - np.log(sines(self.n))
        a.setflags(write=False)
        return a

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "D_k", "a_k"])
        for k in range(1, self.n):
            w.writerow([k, repr(self[k]), repr(float(self.a[k - 1]))])
        return buf.getvalue()


def geometric_means(P: PlueckerVector) -> GeoMeans:
    """Geometric mean of ``Δ`` over each orbit multiset, computed in log space."""
    n = P.n
    I, J = _orbit_index(n)
    vals = P.matrix[I, J]
    if not np.all(vals > 0):
        k, m = np.argwhere(vals <= 0)[0]
        raise ValueError(
            f"non-positive coordinate {vals[k, m]:.3g} at pair "
            f"({I[k, m] + 1},{J[k, m] + 1}) on orbit O_{k + 1}")
    return GeoMeans(n=n, D=np.exp(np.log(vals).mean(axis=1)))


def geometric_means_array(minor_stack: np.ndarray) -> np.ndarray:
    """Batch version over (m, n, n) antisymmetric arrays; returns (m, n-1)."""
    n = minor_stack.shape[-1]
    I, J = _orbit_index(n)
    return np.exp(np.log(minor_stack[..., I, J]).mean(axis=-1))


def normalize(P: PlueckerVector, tol: Tolerance = DEFAULT_TOL) -> PlueckerVector:
    """Rescale ``P`` so that ``D_1 = D_{n-1} = sin(π/n)``."""
    if not is_positive(P, tol):
        raise ValueError("normalize requires a positive Plücker vector")
    G = geometric_means(P)
    return P.scaled(np.sin(np.pi / P.n) / G[1])


def shifted_pairs(quad, n: int, m: int):
    """The six shifted pairs ``σ^m(i,k), σ^m(j,l), σ^m(i,j), σ^m(k,l), σ^m(i,l), σ^m(j,k)``."""
    i, j, k, l = quad
    _check_increasing(quad, n)
    return tuple(sigma_power(p, n, m) for p in
                 [(i, k), (j, l), (i, j), (k, l), (i, l), (j, k)])


def shifted_relation_residual(P: PlueckerVector, quad, m: int) -> float:
    a, b, c, e, f, g = shifted_pairs(quad, P.n, m)
    return P[a] * P[b] - P[c] * P[e] - P[f] * P[g]


@lru_cache(maxsize=None)
def _shifted_quad_index(n: int):
    from .core import quads

    Q = np.array(quads(n)) - 1
    if Q.size == 0:
        return None
    i, j, k, l = Q.T
    shifts = np.arange(n)[:, None]
    out = []
    for a, b in [(i, k), (j, l), (i, j), (k, l), (i, l), (j, k)]:
        a2, b2 = (a + shifts) % n, (b + shifts) % n
        out.append((np.minimum(a2, b2), np.maximum(a2, b2)))
    return out


def shifted_relation_residuals(P: PlueckerVector) -> tuple[np.ndarray, np.ndarray]:
    """Residuals for all shifts ``m`` (rows) and quads (columns), plus the
    largest monomial magnitude for each."""
    idx = _shifted_quad_index(P.n)
    if idx is None:
        return np.zeros((P.n, 0)), np.zeros((P.n, 0))
    m = P.matrix
    v = [m[a, b] for a, b in idx]
    mono = np.stack([v[0] * v[1], v[2] * v[3], v[4] * v[5]])
    return mono[0] - mono[1] - mono[2], np.abs(mono).max(axis=0)
