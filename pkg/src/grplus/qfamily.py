"""
The q-transform family ``C^q``: for ``n % 4 == 2`` a one-parameter curve of
distinct points that all attain the minimal loss.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .core import DEFAULT_TOL, PointMatrix, Tolerance, minors, proportional
from .extremal import cyclic_matrix, loss_E, sine_table


def q_transform(X: PointMatrix, q: float) -> PointMatrix:
    """Scale column ``i`` (1-based) by ``q ** (-1) ** i``."""
    if not q > 0:
        raise ValueError(f"q must be positive, got {q}")
    i = np.arange(1, X.n + 1)
    factor = np.where(i % 2 == 0, q, 1.0 / q)
    return PointMatrix(X.columns * factor[:, None])


def _inner_mask(n: int):
    d = n // 2
    I, J = np.triu_indices(n, 1)
    gap = J - I
    k = np.minimum(gap, n - gap)
    return (k > 1) & (k < d)


def _inside(n: int, q: float) -> bool:
    s = sine_table(n)
    v = minors(q_transform(cyclic_matrix(n), q)).values()[_inner_mask(n)]
    return bool(np.all((v > s[1]) & (v < s[s.d])))


@lru_cache(maxsize=None)
def admissible_interval(n: int, rtol: float = 1e-14) -> tuple[float, float]:
    """Largest interval around 1 where every inner-orbit coordinate of
    ``C^q`` stays strictly between ``s_1`` and ``s_d``.

    Found by bisection in ``log q`` on each side, which is valid because
    each coordinate is monotone in ``q``.
    """
    if not _inner_mask(n).any():
        return 0.0, float("inf")

    def edge(direction):
        lo, hi = 0.0, 1.0
        while _inside(n, np.exp(direction * hi)):
            lo, hi = hi, 2 * hi
            if hi > 64:
                return np.inf
        while hi - lo > rtol:
            mid = 0.5 * (lo + hi)
            if _inside(n, np.exp(direction * mid)):
                lo = mid
            else:
                hi = mid
        return lo

    up, down = edge(+1), edge(-1)
    return float(np.exp(-down)), float(np.exp(up))


@dataclass
class QFamilyReport:
    n: int
    q: float
    E_Cq: float
    E_C: float
    equal_loss: bool
    proportional_to_C: bool
    odd_orbit_max_change: float
    even_orbit_scale_check: bool
    interval: tuple
    inside_interval: bool
    loss_rtol: float

    def to_dict(self):
        d = asdict(self)
        d["interval"] = list(self.interval)
        return d

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def verify_nonuniqueness(n: int, q: float, tol: Tolerance = DEFAULT_TOL,
                         loss_rtol: float = 1e-12) -> QFamilyReport:
    if n % 4 != 2:
        raise ValueError(f"the q-family needs n % 4 == 2, got n={n}")
    if not q > 0:
        raise ValueError(f"q must be positive, got {q}")
    C = cyclic_matrix(n)
    P, Pq = minors(C), minors(q_transform(C, q))
    E_C, E_Cq = loss_E(P), loss_E(Pq)

    I, J = np.triu_indices(n, 1)
    v, vq = P.values(), Pq.values()
    odd = (J - I) % 2 == 1
    # Even orbits scale by q^{2(-1)^i}, i 1-based.
    expected = np.where((I + 1) % 2 == 0, q ** 2, q ** -2.0)
    ratio = vq[~odd] / v[~odd]
    even_ok = bool(np.all(np.abs(ratio - expected[~odd]) <= 1e-12 * expected[~odd]))

    lo, hi = admissible_interval(n)
    return QFamilyReport(
        n=n,
        q=float(q),
        E_Cq=E_Cq,
        E_C=E_C,
        equal_loss=bool(abs(E_Cq - E_C) <= loss_rtol * E_C),
        proportional_to_C=bool(proportional(P, Pq, tol)),
        odd_orbit_max_change=float(np.max(np.abs(vq[odd] - v[odd]))),
        even_orbit_scale_check=even_ok,
        interval=(lo, hi),
        inside_interval=bool(lo < q < hi),
        loss_rtol=loss_rtol,
    )


def plateau_csv(n: int, qs) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "E"])
    C = cyclic_matrix(n)
    for q in qs:
        w.writerow([repr(float(q)), repr(loss_E(minors(q_transform(C, q))))])
    return buf.getvalue()
