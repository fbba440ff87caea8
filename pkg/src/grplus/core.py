"""
Planar linear algebra and Plücker coordinates of 2 x n matrices.

Indices follow the usual 1-based convention for pairs ``(i, j)``; the
arrays underneath are 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self):
        if self.rel < 0 or self.abs < 0:
            raise ValueError("tolerances must be non-negative")

    def to_dict(self):
        return {"rel": self.rel, "abs": self.abs}


DEFAULT_TOL = Tolerance()


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class PointMatrix:
    """A 2 x n real matrix viewed as n planar column vectors.

    Parameters
    ----------
    columns : array-like, shape (n, 2)
        The column vectors ``x_i = (u_i, v_i)``.
    """

    __slots__ = ("_array",)

    def __init__(self, columns):
        cols = np.asarray(columns, dtype=float)
        if cols.ndim != 2 or cols.shape[1] != 2:
            raise ValueError(f"expected shape (n, 2), got {cols.shape}")
        if cols.shape[0] < 3:
            raise ValueError("need at least 3 columns")
        if not np.all(np.isfinite(cols)):
            raise ValueError("columns must be finite")
        zero = np.flatnonzero(~np.any(cols != 0.0, axis=1))
        if zero.size:
            raise ValueError(f"column {zero[0] + 1} is the zero vector")
        self._array = _readonly(cols.T)

    @classmethod
    def from_rows(cls, rows) -> PointMatrix:
        return cls(np.asarray(rows, dtype=float).T)

    @property
    def n(self) -> int:
        return self._array.shape[1]

    @property
    def array(self) -> np.ndarray:
        """Read-only (2, n) array."""
        return self._array

    @property
    def columns(self) -> np.ndarray:
        """Read-only (n, 2) view of the column vectors."""
        return self._array.T

    def column(self, i: int) -> np.ndarray:
        return self._array[:, i - 1]

    def __eq__(self, other):
        if not isinstance(other, PointMatrix):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._array, other._array)

    def __hash__(self):
        return hash(self._array.tobytes())

    def __repr__(self):
        return f"PointMatrix(n={self.n}, columns={self.columns.tolist()})"

    def to_json_obj(self):
        return {"n": self.n, "columns": self.columns.tolist()}

    @classmethod
    def from_json_obj(cls, obj) -> PointMatrix:
        cols = obj["columns"]
        if "n" in obj and int(obj["n"]) != len(cols):
            raise ValueError(f"n={obj['n']} but {len(cols)} columns given")
        return cls(cols)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def loads(cls, text: str) -> PointMatrix:
        return cls.from_json_obj(json.loads(text))


def pairs(n: int) -> list[tuple[int, int]]:
    """All ordered pairs ``i < j`` of ``[n]`` in lexicographic order."""
    return list(combinations(range(1, n + 1), 2))


def quads(n: int) -> list[tuple[int, int, int, int]]:
    return list(combinations(range(1, n + 1), 4))


def _pair_key(i, j):
    return f"{i},{j}"


def _parse_pair_key(key: str) -> tuple[int, int]:
    try:
        i, j = (int(s) for s in key.split(","))
    except ValueError:
        raise ValueError(f"bad pair key {key!r}, expected 'i,j'") from None
    return i, j


class PlueckerVector:
    """The minors ``Δ_{i,j}`` of a 2 x n matrix.

    Stored as a full antisymmetric (n, n) array, so ``P[j, i] == -P[i, j]``
    holds exactly.  Indexing is 1-based: ``P[1, 2]`` is ``Δ_{1,2}``.
    """

    __slots__ = ("_m",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("expected a square antisymmetric array")
        # Rebuild from the strict upper triangle so antisymmetry is exact.
        upper = np.triu(m, 1)
        self._m = _readonly(upper - upper.T)

    @classmethod
    def from_mapping(cls, n: int, entries: Mapping) -> PlueckerVector:
        """Build from ``{(i, j): value}`` or ``{"i,j": value}`` with i < j.

        Every ordered pair must be present exactly once.
        """
        m = np.zeros((n, n))
        seen = set()
        for key, value in entries.items():
            i, j = _parse_pair_key(key) if isinstance(key, str) else key
            if not 1 <= i < j <= n:
                raise ValueError(f"pair {(i, j)} is not an ordered pair of [{n}]")
            m[i - 1, j - 1] = value
            seen.add((i, j))
        if len(seen) != n * (n - 1) // 2:
            raise ValueError(f"expected {n * (n - 1) // 2} entries, got {len(seen)}")
        return cls(m)

    @classmethod
    def from_values(cls, n: int, values: Sequence[float]) -> PlueckerVector:
        """Build from values listed in :func:`pairs` order."""
        values = np.asarray(values, dtype=float)
        I, J = np.triu_indices(n, 1)
        if values.shape != I.shape:
            raise ValueError(f"expected {I.size} values, got {values.size}")
        m = np.zeros((n, n))
        m[I, J] = values
        return cls(m)

    @property
    def n(self) -> int:
        return self._m.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    def values(self) -> np.ndarray:
        """Entries over ordered pairs, in :func:`pairs` order."""
        return self._m[np.triu_indices(self.n, 1)]

    def __getitem__(self, ij) -> float:
        i, j = ij
        n = self.n
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexError(f"pair {ij} outside [{n}]")
        return float(self._m[i - 1, j - 1])

    def __len__(self):
        return self.n * (self.n - 1) // 2

    def items(self) -> Iterable[tuple[tuple[int, int], float]]:
        for (i, j), v in zip(pairs(self.n), self.values()):
            yield (i, j), float(v)

    def max(self) -> float:
        return float(self.values().max())

    def min(self) -> float:
        return float(self.values().min())

    def scaled(self, lam: float) -> PlueckerVector:
        return PlueckerVector(lam * self._m)

    def __mul__(self, lam):
        if not np.isscalar(lam):
            return NotImplemented
        return self.scaled(float(lam))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PlueckerVector):
            return NotImplemented
        return np.array_equal(self._m, other._m)

    def __hash__(self):
        return hash(self._m.tobytes())

    def __repr__(self):
        return f"PlueckerVector(n={self.n}, values={self.values().tolist()})"

    def to_json_obj(self) -> dict:
        return {_pair_key(i, j): v for (i, j), v in self.items()}

    @classmethod
    def from_json_obj(cls, obj: Mapping, n: int | None = None) -> PlueckerVector:
        if n is None:
            n = max(max(_parse_pair_key(k)) for k in obj)
        return cls.from_mapping(n, obj)


def wedge(u, v) -> float:
    """Determinant of the column matrix ``[u, v]``."""
    return float(u[0] * v[1] - u[1] * v[0])


def minors(X: PointMatrix) -> PlueckerVector:
    u, v = X.array
    return PlueckerVector(np.outer(u, v) - np.outer(v, u))


def minors_array(arrays) -> np.ndarray:
    """Vectorized minors for a stack of (2, n) arrays; returns (..., n, n)."""
    a = np.asarray(arrays, dtype=float)
    u, v = a[..., 0, :], a[..., 1, :]
    return u[..., :, None] * v[..., None, :] - v[..., :, None] * u[..., None, :]


def is_positive(P: PlueckerVector, tol: Tolerance = DEFAULT_TOL) -> bool:
    return bool(np.all(P.values() > tol.abs))


def proportional(P: PlueckerVector, Q: PlueckerVector, tol: Tolerance = DEFAULT_TOL,
                 return_factor: bool = False):
    """Test whether ``Q = λ P`` for some nonzero ``λ``.

    ``λ`` is read off the largest-magnitude entry of ``P``; the entrywise
    check is ``|Q - λ P| <= tol.rel * max|Q| + tol.abs``.
    """
    if P.n != Q.n:
        raise ValueError(f"size mismatch: n={P.n} vs n={Q.n}")
    p, q = P.values(), Q.values()
    k = int(np.argmax(np.abs(p)))
    if p[k] == 0.0:
        raise ValueError("P is identically zero, proportionality factor undefined")
    lam = q[k] / p[k]
    ok = lam != 0.0 and bool(
        np.all(np.abs(q - lam * p) <= tol.rel * np.max(np.abs(q)) + tol.abs))
    if return_factor:
        return ok, float(lam)
    return ok


def _check_increasing(t, n):
    if any(a >= b for a, b in zip(t, t[1:])) or t[0] < 1 or t[-1] > n:
        raise ValueError(f"{tuple(t)} is not strictly increasing within [{n}]")


def plucker_monomials(P: PlueckerVector, quad) -> tuple[float, float, float]:
    """The three monomials ``Δ_ik Δ_jl``, ``Δ_ij Δ_kl``, ``Δ_il Δ_jk``."""
    i, j, k, l = quad
    _check_increasing(quad, P.n)
    return (P[i, k] * P[j, l], P[i, j] * P[k, l], P[i, l] * P[j, k])


def plucker_residual(P: PlueckerVector, quad) -> float:
    lhs, r1, r2 = plucker_monomials(P, quad)
    return lhs - r1 - r2


def plucker_residuals(P: PlueckerVector) -> tuple[np.ndarray, np.ndarray]:
    """Residuals and largest monomial magnitudes over every increasing quad."""
    Q = np.array(quads(P.n)).T - 1
    if Q.size == 0:
        return np.zeros(0), np.zeros(0)
    i, j, k, l = Q
    m = P.matrix
    mono = np.stack([m[i, k] * m[j, l], m[i, j] * m[k, l], m[i, l] * m[j, k]])
    return mono[0] - mono[1] - mono[2], np.abs(mono).max(axis=0)


def uvw_residual(u, v, w) -> float:
    """Max-norm of ``(u∧v) w - (u∧w) v + (v∧w) u``, which vanishes identically."""
    u, v, w = (np.asarray(x, dtype=float) for x in (u, v, w))
    r = wedge(u, v) * w - wedge(u, w) * v + wedge(v, w) * u
    return float(np.max(np.abs(r)))
