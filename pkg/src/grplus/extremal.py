"""
The cyclic matrix, the loss functions E, L and B, and the chain of
inequalities that certifies ``E(x) >= s_d / s_1`` at a given point.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, asdict
from functools import lru_cache
from itertools import combinations

import numpy as np

from .core import (
    DEFAULT_TOL,
    PlueckerVector,
    PointMatrix,
    Tolerance,
    minors,
    plucker_residuals,
)
from .cyclic import GeoMeans, geometric_means, normalize, orbit_table, sines


def _bound(tol: Tolerance, scale: float) -> float:
    return tol.rel * scale + tol.abs


@dataclass(frozen=True, eq=False)
class SineTable:
    n: int
    s: np.ndarray

    def __getitem__(self, k: int) -> float:
        if not 1 <= k <= self.n - 1:
            raise IndexError(k)
        return float(self.s[k - 1])

    @property
    def d(self) -> int:
        return self.n // 2

    @property
    def optimum(self) -> float:
        """``s_d / s_1``, the minimum of E over the positive Grassmannian."""
        return self[self.d] / self[1]


@lru_cache(maxsize=None)
def sine_table(n: int) -> SineTable:
    if n < 3:
        raise ValueError(f"n={n} < 3")
    s = sines(n)
    s.setflags(write=False)
    return SineTable(n=n, s=s)


def optimal_loss(n: int) -> float:
    return sine_table(n).optimum


@dataclass(frozen=True)
class WeightPair:
    p: float
    q: float


def _check_triple(j, k, l, n):
    if not (1 <= j < k < l <= n - 1):
        raise ValueError(f"({j},{k},{l}) is not strictly increasing within [{n - 1}]")


def weights(j: int, k: int, l: int, n: int) -> WeightPair:
    """Convex weights ``p = s_j s_{l-k} / (s_k s_{l-j})``, ``q = s_l s_{k-j} / (s_k s_{l-j})``."""
    _check_triple(j, k, l, n)
    s = sine_table(n)
    den = s[k] * s[l - j]
    return WeightPair(p=s[j] * s[l - k] / den, q=s[l] * s[k - j] / den)


def cyclic_matrix(n: int) -> PointMatrix:
    if n < 3:
        raise ValueError(f"n={n} < 3")
    t = np.arange(n) * np.pi / n
    return PointMatrix(np.column_stack([np.cos(t), np.sin(t)]))


def _require_positive(P: PlueckerVector):
    v = P.values()
    if not np.all(v > 0):
        raise ValueError(f"Plücker vector is not positive (min entry {v.min():.3g})")
    return v


def loss_E(P: PlueckerVector) -> float:
    """Ratio of the largest to the smallest Plücker coordinate."""
    v = _require_positive(P)
    return float(v.max() / v.min())


def loss_L(G: GeoMeans) -> float:
    return G[G.d] / G[1]


def loss_B(X: PointMatrix) -> float:
    v = np.abs(minors(X).values())
    if np.any(v == 0):
        raise ValueError("matrix has a zero minor, loss B is undefined")
    return float(v.max() / v.min())


def b_reduction(X: PointMatrix) -> PointMatrix:
    """Move every column into the upper half-plane and sort counterclockwise.

    The result has strictly positive minors whose multiset equals the
    absolute values of the minors of ``X``.
    """
    cols = np.array(X.columns)
    u, v = cols[:, 0], cols[:, 1]
    flip = (v < 0) | ((v == 0) & (u < 0))
    cols[flip] *= -1.0
    ang = np.arctan2(cols[:, 1], cols[:, 0])
    order = np.argsort(ang, kind="stable")
    ang = ang[order]
    cols = cols[order]
    if np.any(np.diff(ang) == 0):
        raise ValueError("collinear columns, a minor vanishes")
    out = PointMatrix(cols)
    if not np.all(minors(out).values() > 0):
        raise ValueError("collinear columns, a minor vanishes")
    return out


@lru_cache(maxsize=None)
def _triples(n: int):
    t = np.array(list(combinations(range(1, n), 3)), dtype=int).reshape(-1, 3)
    t.setflags(write=False)
    return t


@lru_cache(maxsize=None)
def _triple_weights(n: int):
    t = _triples(n)
    s = np.concatenate(([0.0], sines(n)))  # s[k] = s_k
    j, k, l = t.T
    den = s[k] * s[l - j]
    return s[j] * s[l - k] / den, s[l] * s[k - j] / den


def geomean_slacks(G: GeoMeans) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Triples, slacks ``D_k D_{l-j} - D_j D_{l-k} - D_l D_{k-j}`` and lhs scale."""
    t = _triples(G.n)
    D = np.concatenate(([np.nan], G.D))
    j, k, l = t.T
    lhs = D[k] * D[l - j]
    return t, lhs - D[j] * D[l - k] - D[l] * D[k - j], lhs


def check_geomean_inequalities(G: GeoMeans) -> list[tuple[tuple[int, int, int], float]]:
    t, slack, _ = geomean_slacks(G)
    return [(tuple(int(x) for x in tr), float(s)) for tr, s in zip(t, slack)]


def normalized_logs(G: GeoMeans, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """``a_k = log(D_k / s_k)``; requires ``D_1 = D_{n-1} = s_1``."""
    s1 = sine_table(G.n)[1]
    for k in (1, G.n - 1):
        if abs(G[k] - s1) > _bound(tol, s1):
            raise ValueError(f"D_{k} = {G[k]!r} violates the normalization D_1 = s_1 = {s1!r}")
    return np.array(G.a)


def linear_slacks(a, n: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float)
    if a.shape != (n - 1,):
        raise ValueError(f"expected {n - 1} normalized logs, got shape {a.shape}")
    t = _triples(n)
    p, q = _triple_weights(n)
    A = np.concatenate(([np.nan], a))
    j, k, l = t.T
    return t, A[k] + A[l - j] - p * (A[j] + A[l - k]) - q * (A[l] + A[k - j])


def check_linear_inequalities(a, n: int) -> list[tuple[tuple[int, int, int], float]]:
    t, slack = linear_slacks(a, n)
    return [(tuple(int(x) for x in tr), float(s)) for tr, s in zip(t, slack)]


def contraction_weights(n: int) -> np.ndarray:
    """``q_k = s_{k+1} s_{k-1} / s_k^2`` for ``k = 2..n-2``."""
    s = np.concatenate(([0.0], sines(n)))
    k = np.arange(2, n - 1)
    return s[k + 1] * s[k - 1] / s[k] ** 2


def operator_S(a, n: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Averaging operator ``y_k = q_k (a_{k+1} + a_{k-1}) / 2`` with zero boundary."""
    a = np.asarray(a, dtype=float)
    if a.shape != (n - 1,):
        raise ValueError(f"expected length {n - 1}, got shape {a.shape}")
    if abs(a[0]) > tol.abs or abs(a[-1]) > tol.abs:
        raise ValueError("operator S acts on vectors with a_1 = a_{n-1} = 0")
    y = np.zeros_like(a)
    y[1:-1] = contraction_weights(n) * (a[2:] + a[:-2]) / 2
    return y


@dataclass
class CertificateReport:
    n: int
    relation_max_residual: float
    geomean_violations: list = field(default_factory=list)
    linear_violations: list = field(default_factory=list)
    a_min: float = 0.0
    E_value: float = float("nan")
    L_value: float = float("nan")
    lower_bound_gap: float = float("nan")
    passed: bool = False
    geomean_min_slack: float = 0.0
    linear_min_slack: float = 0.0
    optimum: float = float("nan")
    tolerance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("geomean_violations", "linear_violations"):
            out[key] = [[list(t), s] for t, s in out[key]]
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def slacks_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "k", "l", "slack"])
    for (j, k, l), s in rows:
        w.writerow([j, k, l, repr(float(s))])
    return buf.getvalue()


def certify_point(X: PointMatrix, tol: Tolerance = DEFAULT_TOL) -> CertificateReport:
    """Evaluate every identity and inequality of the lower-bound argument at ``X``."""
    n = X.n
    P = minors(X)
    if not np.all(P.values() > 0):
        raise ValueError("certify_point needs a matrix with all minors positive")
    Pn = normalize(P, tol)
    res, scale = plucker_residuals(Pn)
    rel = float(np.max(np.abs(res) / scale)) if res.size else 0.0

    G = geometric_means(Pn)
    t, gslack, glhs = geomean_slacks(G)
    gbad = gslack < -(tol.rel * glhs + tol.abs)
    a = normalized_logs(G, tol)
    _, lslack = linear_slacks(a, n)
    lbad = lslack < -_bound(tol, 1.0)

    E = loss_E(Pn)
    opt = optimal_loss(n)
    gap = E - opt
    a_min = float(a.min())
    passed = (not gbad.any() and not lbad.any()
              and a_min >= -_bound(tol, 1.0) and gap >= -_bound(tol, opt))

    def rows(mask, slack):
        return [(tuple(int(x) for x in tr), float(s)) for tr, s in zip(t[mask], slack[mask])]

    return CertificateReport(
        n=n,
        relation_max_residual=rel,
        geomean_violations=rows(gbad, gslack),
        linear_violations=rows(lbad, lslack),
        a_min=a_min,
        E_value=E,
        L_value=loss_L(G),
        lower_bound_gap=gap,
        passed=bool(passed),
        geomean_min_slack=float(gslack.min()) if gslack.size else 0.0,
        linear_min_slack=float(lslack.min()) if lslack.size else 0.0,
        optimum=opt,
        tolerance=tol.to_dict(),
    )


def extremal_structure(P: PlueckerVector) -> dict:
    """Deviations of a positive point from the structure every minimizer has.

    For a minimizer, after normalization, ``D_k = s_k`` for all ``k``, all
    coordinates lie in ``[s_1, s_d]``, and the coordinates on ``O_1`` and
    ``O_d`` are constant equal to ``s_1`` and ``s_d``.  Each returned
    number is zero at a minimizer.
    """
    n = P.n
    s = sine_table(n)
    Pn = normalize(P, Tolerance(rel=0.0, abs=0.0))
    G = geometric_means(Pn)
    v = Pn.values()
    table = orbit_table(n)
    outer = 0.0
    for k in (1, s.d):
        vals = np.array([Pn[p] for p in table.distinct(k)])
        outer = max(outer, float(np.max(np.abs(vals - s[k]))))
    return {
        "max_abs_a": float(np.max(np.abs(G.a))),
        "below_s1": float(max(0.0, s[1] - v.min())),
        "above_sd": float(max(0.0, v.max() - s[s.d])),
        "outer_orbit_deviation": outer,
    }
