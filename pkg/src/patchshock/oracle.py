"""Trusted solutions: Cole-Hopf quadrature and a brute-force fine grid.

The quadrature oracle evaluates the exact infinite-line Burgers solution

.. math::

    u(x, t) = \\frac{\\int (x - y) e^{(v(x, y) - C)/\\epsilon} dy}
                   {t \\int e^{(v(x, y) - C)/\\epsilon} dy},
    \\qquad v(x, y) = -\\frac{(x - y)^2}{4 t} - \\frac12 \\int_0^y u_0,

with both integrals restricted to a window around the maximiser ``y*`` of
``v`` and the exponent shifted by ``C = v(x, y*)``. It only applies to
constant diffusivity and relies on the archetypes having ``u = 0`` at the
domain ends for all time.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numba
import numpy as np
from scipy import integrate

from patchshock.model import ProblemSpec

logger = logging.getLogger(__name__)

_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


class OracleError(ValueError):
    pass


class OracleBlowup(RuntimeError):
    pass


# {{{ Cole-Hopf quadrature


@dataclass(frozen=True)
class QuadratureConfig:
    tol_window: float = 5.0
    opt_samples: int = 2001
    quad_rel_tol: float = 1.0e-10

    def __post_init__(self) -> None:
        if not self.tol_window > 0:
            raise ValueError(f"tol_window must be positive, got {self.tol_window}")
        if self.opt_samples < 3:
            raise ValueError(f"opt_samples must be >= 3, got {self.opt_samples}")


def _require_cole_hopf(problem: ProblemSpec) -> float:
    if not problem.diffusivity.is_constant:
        raise OracleError(
            f"problem {problem.name} has a nonlinear diffusivity "
            f"(eps2 = {problem.diffusivity.eps2}); the Cole-Hopf quadrature "
            "only applies to constant diffusivity"
        )
    return problem.diffusivity.eps1


def _exponent(x: float, t: float, problem: ProblemSpec):
    ic = problem.initial_condition

    def v(y):
        return -((x - y) ** 2) / (4.0 * t) - 0.5 * ic.integral(y)

    return v


def _golden_max(f, a: float, b: float, tol: float = 1.0e-12) -> float:
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _local_maxima(
    x: float, t: float, problem: ProblemSpec, cfg: QuadratureConfig, threshold: float
) -> tuple[float, list[float]]:
    """Global maximiser of ``v`` and every other local maximiser within *threshold*."""
    v = _exponent(x, t, problem)
    w = cfg.tol_window
    y = np.linspace(problem.x_lo - w, problem.x_hi + w, cfg.opt_samples)
    vy = v(y)

    kmax = int(np.argmax(vy))
    candidates = [kmax]
    inner = np.flatnonzero((vy[1:-1] >= vy[:-2]) & (vy[1:-1] >= vy[2:])) + 1
    candidates.extend(int(k) for k in inner if vy[k] >= vy[kmax] - threshold and k != kmax)

    def scalar(z: float) -> float:
        return float(v(z))

    peaks = []
    for k in candidates:
        lo, hi = y[max(k - 1, 0)], y[min(k + 1, y.size - 1)]
        peaks.append(_golden_max(scalar, lo, hi))

    values = [scalar(p) for p in peaks]
    best = peaks[int(np.argmax(values))]
    return best, sorted(peaks)


def argmax_v(x: float, t: float, problem: ProblemSpec, cfg: QuadratureConfig | None = None) -> float:
    """Maximiser ``y*(x)`` of the Cole-Hopf exponent ``v(x, .)``."""
    if not t > 0:
        raise OracleError(f"the Cole-Hopf exponent needs t > 0, got {t}")
    cfg = cfg or QuadratureConfig()
    eps = problem.diffusivity.eps1
    best, _ = _local_maxima(x, t, problem, cfg, threshold=60.0 * eps)
    return best


def cole_hopf_eval(
    x: float,
    t: float,
    problem: ProblemSpec,
    cfg: QuadratureConfig | None = None,
    *,
    shift: float = 0.0,
) -> float:
    """Evaluate the windowed and shifted Cole-Hopf quotient at one point.

    *shift* is added to ``C(x)``; it cancels between numerator and
    denominator and only exists to check that.
    """
    if not t > 0:
        raise OracleError(f"the Cole-Hopf quotient needs t > 0, got {t}")
    eps = _require_cole_hopf(problem)
    cfg = cfg or QuadratureConfig()

    v = _exponent(x, t, problem)
    ystar, peaks = _local_maxima(x, t, problem, cfg, threshold=60.0 * eps)
    C = float(v(ystar)) + shift

    a, b = ystar - cfg.tol_window, ystar + cfg.tol_window
    width = math.sqrt(2.0 * eps * t)
    points = sorted(
        {p + s * k * width for p in peaks for k in (0.0, 1.0, 4.0, 16.0) for s in (-1.0, 1.0)}
    )
    points = [p for p in points if a < p < b]

    def weight(y: float) -> float:
        return math.exp((float(v(y)) - C) / eps)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            den, _ = integrate.quad(
                weight, a, b, points=points, limit=2000, epsabs=0.0, epsrel=cfg.quad_rel_tol
            )
            if not (den > 0 and math.isfinite(den)):
                raise OracleError(f"denominator underflow at x = {x}, t = {t}")
            num, _ = integrate.quad(
                lambda y: (x - y) * weight(y),
                a,
                b,
                points=points,
                limit=2000,
                epsabs=cfg.quad_rel_tol * t * den,
                epsrel=cfg.quad_rel_tol,
            )
        except integrate.IntegrationWarning as exc:
            raise OracleError(f"quadrature failed at x = {x}, t = {t}: {exc}") from exc

    return num / (t * den)


class ColeHopfOracle:
    """Vectorised trusted solution ``u(x, t)`` for constant diffusivity."""

    name = "quadrature"

    def __init__(self, problem: ProblemSpec, cfg: QuadratureConfig | None = None) -> None:
        _require_cole_hopf(problem)
        self.problem = problem
        self.cfg = cfg or QuadratureConfig()

    def __call__(self, x, t: float) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        if t < 0:
            raise OracleError(f"negative time {t}")
        if t == 0:
            return np.asarray(self.problem.initial_condition(x), dtype=np.float64)
        return np.array([cole_hopf_eval(float(xi), t, self.problem, self.cfg) for xi in x])


# }}}


# {{{ fine grid


@dataclass(frozen=True)
class FineGridConfig:
    """Fine-grid solver settings.

    ``points`` counts interior grid points; the grid spacing is
    ``(x_hi - x_lo) / (points + 1)``. ``scheme`` is ``"euler"`` (forward
    Euler) or ``"rk4"``.
    """

    points: int = 1600
    dt: float | None = None
    snapshot_times: tuple[float, ...] = ()
    scheme: str = "euler"

    def __post_init__(self) -> None:
        object.__setattr__(self, "snapshot_times", tuple(float(t) for t in self.snapshot_times))
        if self.points < 3:
            raise ValueError(f"need at least 3 grid points, got {self.points}")
        if self.scheme not in ("euler", "rk4"):
            raise ValueError(f"unknown time stepping scheme {self.scheme!r}")
        if any(b < a for a, b in zip(self.snapshot_times[:-1], self.snapshot_times[1:])):
            raise ValueError("snapshot times must be sorted")

    def spacing(self, problem: ProblemSpec) -> float:
        return problem.length / (self.points + 1)

    def time_step(self, problem: ProblemSpec) -> float:
        d = self.spacing(problem)
        return self.dt if self.dt is not None else 0.5 * d**2


def fine_grid_rhs(u: np.ndarray, d: float, eps1: float, eps2: float) -> np.ndarray:
    """Time derivative at the interior points of a full grid (boundaries included in *u*)."""
    ui = u[1:-1]
    return (eps1 + eps2 * np.abs(ui)) / (d * d) * (u[2:] - 2.0 * ui + u[:-2]) - ui / (
        2.0 * d
    ) * (u[2:] - u[:-2])


@numba.njit(cache=True)
def _euler_steps(u, h, d, eps1, eps2, left, right):
    """Forward Euler steps in place; ``left``/``right`` hold the boundary values after each step."""
    n = u.size
    du = np.empty(n)
    inv_d2 = 1.0 / (d * d)
    inv_2d = 1.0 / (2.0 * d)
    for step in range(left.size):
        for i in range(1, n - 1):
            ui = u[i]
            du[i] = (eps1 + eps2 * abs(ui)) * inv_d2 * (u[i + 1] - 2.0 * ui + u[i - 1]) - (
                ui * inv_2d * (u[i + 1] - u[i - 1])
            )
        for i in range(1, n - 1):
            u[i] += h * du[i]
        u[0] = left[step]
        u[n - 1] = right[step]


@dataclass
class FineGridSolution:
    x: np.ndarray
    times: np.ndarray
    snapshots: np.ndarray
    problem: ProblemSpec | None = field(default=None, repr=False)

    name = "brute"

    def __call__(self, x, t: float) -> np.ndarray:
        return brute_force_eval(x, t, self)


def brute_force_solve(problem: ProblemSpec, cfg: FineGridConfig | None = None) -> FineGridSolution:
    cfg = cfg or FineGridConfig()
    d = cfg.spacing(problem)
    dt = cfg.time_step(problem)
    eps1, eps2 = problem.diffusivity.eps1, problem.diffusivity.eps2
    eps_max = float(problem.diffusivity(problem.u_bound()))
    if dt > d**2 / (2.0 * eps_max) * (1.0 + 1.0e-12):
        raise ValueError(
            f"time step {dt:.3e} exceeds the diffusive stability bound "
            f"{d**2 / (2.0 * eps_max):.3e}"
        )

    times = cfg.snapshot_times or (problem.final_time,)
    if times[0] < 0:
        raise ValueError("snapshot times must be non-negative")

    x = problem.x_lo + d * np.arange(cfg.points + 2)
    x[-1] = problem.x_hi
    u = np.asarray(problem.initial_condition(x), dtype=np.float64).copy()
    u[0], u[-1] = problem.left_value(0.0), problem.right_value(0.0)

    def pin(t: float, w: np.ndarray) -> np.ndarray:
        w[0], w[-1] = problem.left_value(t), problem.right_value(t)
        return w

    def rhs(w: np.ndarray) -> np.ndarray:
        du = np.zeros_like(w)
        du[1:-1] = fine_grid_rhs(w, d, eps1, eps2)
        return du

    logger.info(
        "brute force %s: %d points, dt = %.3e, scheme %s", problem.name, cfg.points, dt, cfg.scheme
    )
    t = 0.0
    snapshots = []
    for t_out in times:
        nsteps = math.ceil((t_out - t) / dt - 1.0e-9)
        if nsteps > 0:
            h = (t_out - t) / nsteps
            if cfg.scheme == "euler":
                after = t + h * np.arange(1, nsteps + 1)
                left = np.array([problem.left_value(tk) for tk in after])
                right = np.array([problem.right_value(tk) for tk in after])
                _euler_steps(u, h, d, eps1, eps2, left, right)
            else:
                for k in range(nsteps):
                    tk = t + k * h
                    k1 = rhs(u)
                    k2 = rhs(pin(tk + 0.5 * h, u + 0.5 * h * k1))
                    k3 = rhs(pin(tk + 0.5 * h, u + 0.5 * h * k2))
                    k4 = rhs(pin(tk + h, u + h * k3))
                    u = pin(tk + h, u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
            if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > 1.0e3:
                raise OracleBlowup(f"fine-grid solution blew up before t = {t_out}")
            t = t_out
        snapshots.append(u.copy())

    return FineGridSolution(x, np.array(times), np.array(snapshots), problem)


def brute_force_eval(x, t: float, solution: FineGridSolution) -> np.ndarray:
    """Linear interpolation of the stored snapshots in space and time."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    times = solution.times
    span = 1.0e-12 * max(1.0, abs(times[-1]))
    if t < times[0] - span or t > times[-1] + span:
        raise OracleError(f"time {t} outside the stored snapshots [{times[0]}, {times[-1]}]")
    xg = solution.x
    if np.any(x < xg[0] - 1.0e-12) or np.any(x > xg[-1] + 1.0e-12):
        raise OracleError(f"positions outside the fine grid [{xg[0]}, {xg[-1]}]")

    k = int(np.searchsorted(times, t))
    if k < times.size and abs(times[k] - t) <= span:
        return np.interp(x, xg, solution.snapshots[k])
    if k > 0 and abs(times[k - 1] - t) <= span:
        return np.interp(x, xg, solution.snapshots[k - 1])

    t0, t1 = times[k - 1], times[k]
    theta = (t - t0) / (t1 - t0)
    u0 = np.interp(x, xg, solution.snapshots[k - 1])
    u1 = np.interp(x, xg, solution.snapshots[k])
    return (1.0 - theta) * u0 + theta * u1


def sample_grid(
    problem: ProblemSpec, nx: int, times: Sequence[float]
) -> tuple[np.ndarray, np.ndarray]:
    """``nx`` equispaced interior positions (endpoints excluded) and the given times."""
    x = problem.x_lo + problem.length * np.arange(1, nx + 1) / (nx + 1)
    return x, np.asarray(times, dtype=np.float64)


# }}}
