"""
Derivative-free minimization of the loss E over the positive Grassmannian.

Points are parametrized by column angles ``0 < θ_1 < ... < θ_n < π`` and
positive radii, so every minor ``r_i r_j sin(θ_j - θ_i)`` is positive by
construction.  The search runs Nelder-Mead on an unconstrained chart:

* angles come from ``n + 1`` positive increments ``exp(z)`` rescaled to sum
  to ``π`` (the first increment is pinned to ``exp(0)``),
* radii are ``exp(ρ)`` with ``ρ_1 = 0``.

``log E = max log Δ - min log Δ`` is nonsmooth and a plain simplex search
stalls on its kinks for ``n >= 8``.  Each restart therefore first follows a
continuation path through log-sum-exp smoothings of the max and min
(temperatures ``smoothing``), then polishes on the exact objective.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .core import PointMatrix, minors
from .extremal import loss_E, optimal_loss

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AngleRadiusParam:
    n: int
    theta: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        r = np.array(self.r, dtype=float)
        if theta.shape != (self.n,) or r.shape != (self.n,):
            raise ValueError("theta and r must both have length n")
        if not (theta[0] > 0 and theta[-1] < np.pi and np.all(np.diff(theta) > 0)):
            raise ValueError("angles must be strictly increasing inside (0, pi)")
        if not np.all(r > 0):
            raise ValueError("radii must be positive")
        theta.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "r", r)

    def __eq__(self, other):
        if not isinstance(other, AngleRadiusParam):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.theta, other.theta)
                and np.array_equal(self.r, other.r))

    def to_json_obj(self):
        return {"n": self.n, "theta": self.theta.tolist(), "r": self.r.tolist()}


def to_matrix(p: AngleRadiusParam) -> PointMatrix:
    return PointMatrix(p.r[:, None] * np.column_stack([np.cos(p.theta), np.sin(p.theta)]))


def cyclic_param(n: int) -> AngleRadiusParam:
    """The cyclic matrix rotated by ``π/(2n)`` so no angle sits on the boundary.

    A rotation has determinant one, so the minors are those of C.
    """
    return AngleRadiusParam(n, (np.arange(n) + 0.5) * np.pi / n, np.ones(n))


SAMPLE_GAP = 1e-3


def sample_positive(n: int, seed: int, delta: float = SAMPLE_GAP) -> AngleRadiusParam:
    """Seeded random point: angles in ``(δ, π-δ)`` with gaps ``>= δ``, log-radii in ``[-1, 1]``."""
    if n < 3:
        raise ValueError(f"n={n} < 3")
    if (n + 1) * delta >= np.pi:
        raise ValueError("gap too large for n angles in (0, pi)")
    rng = np.random.default_rng(seed)
    u = np.sort(rng.uniform(0.0, np.pi - (n + 1) * delta, size=n))
    theta = u + delta * np.arange(1, n + 1)
    r = np.exp(rng.uniform(-1.0, 1.0, size=n))
    return AngleRadiusParam(n, theta, r)


def encode(p: AngleRadiusParam) -> np.ndarray:
    """Chart coordinates ``z`` of length ``2n - 1`` for a parameter."""
    g = np.diff(np.concatenate(([0.0], p.theta, [np.pi])))
    logr = np.log(p.r)
    return np.concatenate((np.log(g[1:] / g[0]), logr[1:] - logr[0]))


def decode(z, n: int) -> AngleRadiusParam:
    theta, rho = _angles_and_logradii(np.asarray(z, dtype=float), n)
    return AngleRadiusParam(n, theta, np.exp(rho))


def _angles_and_logradii(z, n):
    g = np.empty(n + 1)
    g[0] = 1.0
    g[1:] = np.exp(z[:n])
    c = np.cumsum(g)
    theta = (np.pi / c[-1]) * c[:n]
    rho = np.empty(n)
    rho[0] = 0.0
    rho[1:] = z[n:]
    return theta, rho


class _Objective:
    """Log-minors on the chart, with exact and smoothed ``max - min``."""

    def __init__(self, n):
        self.n = n
        self.I, self.J = np.triu_indices(n, 1)
        self.evaluations = 0

    def log_minors(self, z):
        theta, rho = _angles_and_logradii(z, self.n)
        with np.errstate(divide="ignore", invalid="ignore"):
            return rho[self.I] + rho[self.J] + np.log(np.sin(theta[self.J] - theta[self.I]))

    def exact(self, z):
        self.evaluations += 1
        v = self.log_minors(z)
        f = v.max() - v.min()
        return f if np.isfinite(f) else np.inf

    def smoothed(self, tau):
        def f(z):
            self.evaluations += 1
            v = self.log_minors(z) / tau
            if not np.all(np.isfinite(v)):
                return np.inf
            hi, lo = v.max(), v.min()
            return tau * (hi - lo + np.log(np.exp(v - hi).sum())
                          + np.log(np.exp(lo - v).sum()))
        return f


@dataclass(frozen=True)
class OptimizerConfig:
    n: int
    restarts: int = 20
    max_iters: int | None = None
    seed: int = 0
    simplex_scale: float = 0.5
    ftol: float = 1e-12
    smoothing: tuple = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)
    polish_rounds: int = 2

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"n={self.n} < 3")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.ftol <= 0 or self.simplex_scale <= 0:
            raise ValueError("tolerances and simplex scale must be positive")
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if any(t <= 0 for t in self.smoothing):
            raise ValueError("smoothing temperatures must be positive")

    @property
    def stage_iters(self) -> int:
        """Nelder-Mead iteration cap per stage."""
        return self.max_iters if self.max_iters is not None else 40 * (2 * self.n - 1)

    def to_dict(self):
        return {
            "n": self.n, "restarts": self.restarts, "max_iters": self.stage_iters,
            "seed": self.seed, "simplex_scale": self.simplex_scale, "ftol": self.ftol,
            "smoothing": list(self.smoothing), "polish_rounds": self.polish_rounds,
        }


@dataclass
class OptimizationResult:
    n: int
    best_E: float
    best_param: AngleRadiusParam
    gap_to_theory: float
    traces: list = field(default_factory=list)
    iterations: int = 0
    best_restart: int = 0

    @property
    def matrix(self) -> PointMatrix:
        return to_matrix(self.best_param)

    def to_dict(self):
        return {
            "n": self.n,
            "best_E": self.best_E,
            "optimum": optimal_loss(self.n),
            "gap_to_theory": self.gap_to_theory,
            "best_restart": self.best_restart,
            "iterations": self.iterations,
            "matrix": self.matrix.to_json_obj(),
            "param": self.best_param.to_json_obj(),
            "traces": self.traces,
        }


def _simplex(z, scale):
    return np.vstack([z, z + scale * np.eye(z.size)])


def _nelder_mead(f, z, scale, cfg):
    return _scipy_minimize(
        f, z, method="Nelder-Mead",
        options=dict(maxiter=cfg.stage_iters, xatol=np.inf, fatol=cfg.ftol,
                     adaptive=True, initial_simplex=_simplex(z, scale)))


def _run_restart(obj, z, cfg):
    best_f, best_z = obj.exact(z), z
    start_f = best_f
    iters = 0
    scale = cfg.simplex_scale
    for tau in cfg.smoothing:
        res = _nelder_mead(obj.smoothed(tau), z, scale, cfg)
        iters += res.nit
        z = res.x
        scale = max(10 * tau, 1e-3)
        fz = obj.exact(z)
        if fz < best_f:
            best_f, best_z = fz, z
    stop = "max_iters"
    z = best_z
    for _ in range(cfg.polish_rounds):
        res = _nelder_mead(obj.exact, z, 1e-4, cfg)
        iters += res.nit
        stop = "spread" if res.status == 0 else "max_iters"
        improved = best_f - res.fun
        if res.fun < best_f:
            best_f, best_z = res.fun, res.x
        z = best_z
        if improved < 1e-15:
            break
    return best_f, best_z, start_f, iters, stop


def minimize(cfg: OptimizerConfig, initial: AngleRadiusParam | None = None) -> OptimizationResult:
    """Multi-restart search for the minimum of E over the positive Grassmannian.

    Restart ``i`` starts at ``sample_positive(n, seed_i)`` with ``seed_i``
    split from ``cfg.seed``; if ``initial`` is given it replaces the start of
    restart 0.  The best point over all restarts is returned, ties going to
    the lower restart index.
    """
    n = cfg.n
    obj = _Objective(n)
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)]
    best = None
    traces = []
    total = 0
    for i, s in enumerate(seeds):
        start = initial if (i == 0 and initial is not None) else sample_positive(n, s)
        if start.n != n:
            raise ValueError(f"initial point has n={start.n}, config has n={n}")
        f, z, f0, iters, stop = _run_restart(obj, encode(start), cfg)
        total += iters
        traces.append({
            "restart": i, "seed": s, "start_E": float(np.exp(f0)),
            "final_E": float(np.exp(f)), "iterations": iters, "stop": stop,
        })
        logger.debug("restart %d: E=%.12g (%s)", i, np.exp(f), stop)
        if np.isfinite(f) and (best is None or f < best[0]):
            best = (f, z, i)
    if best is None:
        raise RuntimeError("no restart produced a finite objective")
    _, z, idx = best
    param = decode(z, n)
    E = loss_E(minors(to_matrix(param)))
    return OptimizationResult(
        n=n, best_E=E, best_param=param, gap_to_theory=E - optimal_loss(n),
        traces=traces, iterations=total, best_restart=idx)
