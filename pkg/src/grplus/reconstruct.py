"""
Rebuild a point of the positive Grassmannian (n odd) from its Plücker
coordinates on the two outer orbits O_1 and O_d.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, PlueckerVector, PointMatrix, Tolerance
from .cyclic import orbit_table, sigma_power


def _require_odd(n: int):
    if n % 2 == 0 or n < 3:
        raise ValueError(f"outer-orbit reconstruction needs odd n >= 3, got n={n}")


def outer_pairs(n: int) -> frozenset:
    table = orbit_table(n)
    return table.distinct(1) | table.distinct(table.d)


@dataclass(frozen=True)
class CSequence:
    n: int
    c: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        return self.c[k]

    def __len__(self):
        return len(self.c)


def c_sequence(n: int) -> CSequence:
    """Orbit of 1 under ``σ^d``: ``c(k) = σ^{kd} 1`` for ``k = 0..n-1``."""
    _require_odd(n)
    d = n // 2
    c = [1]
    for _ in range(n - 1):
        c.append(sigma_power((c[-1],), n, d)[0])
    return CSequence(n=n, c=tuple(c))


class OuterOrbitData:
    """Plücker coordinates restricted to ``set(O_1) ∪ set(O_d)``.

    Lookups go through :meth:`get`, which handles transposed pairs and
    refuses pairs outside the outer orbits.
    """

    def __init__(self, n: int, values):
        _require_odd(n)
        allowed = outer_pairs(n)
        vals = {}
        for key, v in dict(values).items():
            if isinstance(key, str):
                key = tuple(int(s) for s in key.split(","))
            key = (int(key[0]), int(key[1]))
            if key not in allowed:
                raise ValueError(f"pair {key} is not on an outer orbit for n={n}")
            vals[key] = float(v)
        # 2n pairs, except n = 3 where O_1 and O_d coincide.
        if len(vals) != len(allowed):
            raise ValueError(f"expected {len(allowed)} outer-orbit values, got {len(vals)}")
        if not all(v > 0 for v in vals.values()):
            raise ValueError("outer-orbit values must be positive")
        self.n = n
        self.values = vals

    def get(self, i: int, j: int) -> float:
        if (i, j) in self.values:
            return self.values[i, j]
        if (j, i) in self.values:
            return -self.values[j, i]
        raise KeyError(f"pair ({i},{j}) is not on an outer orbit")

    def __len__(self):
        return len(self.values)

    def to_json_obj(self) -> dict:
        return {f"{i},{j}": v for (i, j), v in sorted(self.values.items())}

    @classmethod
    def from_json_obj(cls, obj, n: int | None = None) -> OuterOrbitData:
        if n is None:
            n = max(int(x) for key in obj for x in key.split(","))
        return cls(n, obj)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj())


def extract_outer(P: PlueckerVector) -> OuterOrbitData:
    _require_odd(P.n)
    return OuterOrbitData(P.n, {p: P[p] for p in outer_pairs(P.n)})


def reconstruct(data: OuterOrbitData, tol: Tolerance = DEFAULT_TOL) -> PointMatrix:
    """Run the three-term column recurrence along ``c(0), c(1), ...``.

    Seeds are ``x_{c(0)} = (1, 0)`` and ``x_{c(1)} = (0, Δ_{c(0),c(1)})`` so
    the minors of the result equal the input data, not just up to scale.
    """
    n = data.n
    c = c_sequence(n)
    X = np.zeros((n, 2))
    X[c[0] - 1] = (1.0, 0.0)
    X[c[1] - 1] = (0.0, data.get(c[0], c[1]))
    for k in range(2, n):
        a, b, e = c[k - 2], c[k - 1], c[k]
        den = data.get(a, b)
        if abs(den) <= tol.abs:
            raise ValueError(f"vanishing denominator Δ_{{{a},{b}}} = {den!r}")
        X[e - 1] = (data.get(a, e) * X[b - 1] - data.get(b, e) * X[a - 1]) / den
    return PointMatrix(X)
