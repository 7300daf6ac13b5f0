"""Error reports against trusted solutions and the coupling-order study."""

from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from patchshock.dynamics import StepperConfig, Trajectory, default_dt, simulate
from patchshock.mesh import NodeRole, uniform_layout
from patchshock.model import Diffusivity, InitialCondition, ProblemSpec
from patchshock.oracle import FineGridConfig, brute_force_solve

logger = logging.getLogger(__name__)

Oracle = Callable[[np.ndarray, float], np.ndarray]


@dataclass
class ErrorReport:
    times: np.ndarray
    per_time: np.ndarray
    per_node: np.ndarray
    positions: np.ndarray
    global_max: float
    worst_time: float
    worst_position: float
    worst_role: NodeRole
    outside_max: float | None

    def to_text(self) -> str:
        lines = [
            f"global_max: {self.global_max:.12g}",
            f"worst_time: {self.worst_time:.12g}",
            f"worst_position: {self.worst_position:.12g}",
            f"worst_role: {self.worst_role.value}",
        ]
        if self.outside_max is not None:
            lines.append(f"outside_double_max: {self.outside_max:.12g}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("time,max_error\n")
        for t, e in zip(self.times, self.per_time):
            out.write(f"{t:.12g},{e:.12g}\n")
        return out.getvalue()


def max_error(
    trajectory: Trajectory, oracle: Oracle, times: Sequence[float] | None = None
) -> ErrorReport:
    """Max-norm error at the macro nodes, over the requested output times."""
    if times is None:
        rows = np.arange(trajectory.times.size)
    else:
        rows = []
        for t in times:
            k = int(np.argmin(np.abs(trajectory.times - t)))
            if abs(trajectory.times[k] - t) > 1.0e-12 * max(1.0, abs(t)):
                raise ValueError(f"time {t} is not an output time of the trajectory")
            rows.append(k)
        rows = np.array(rows)

    err = np.array(
        [
            np.abs(trajectory.macro[k] - np.asarray(oracle(trajectory.positions, trajectory.times[k])))
            for k in rows
        ]
    )
    k, i = np.unravel_index(int(np.argmax(err)), err.shape)

    centre = np.array([r == NodeRole.CENTRE for r in trajectory.roles])
    outside = None
    if not centre.all():
        outside = float(err[:, centre].max()) if centre.any() else 0.0

    return ErrorReport(
        times=trajectory.times[rows],
        per_time=err.max(axis=1),
        per_node=err.max(axis=0),
        positions=trajectory.positions,
        global_max=float(err.max()),
        worst_time=float(trajectory.times[rows[k]]),
        worst_position=float(trajectory.positions[i]),
        worst_role=trajectory.roles[i],
        outside_max=outside,
    )


# {{{ convergence


@dataclass
class ConvergenceReport:
    gamma: int
    spacings: np.ndarray
    errors: np.ndarray
    slope: float | None
    exact: bool = False
    monotone: bool = True
    notes: list[str] = field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"gamma: {self.gamma}"]
        lines.append("slope: exact" if self.exact else f"slope: {self.slope:.12g}")
        lines.append(f"monotone: {str(self.monotone).lower()}")
        lines.append("H,max_error")
        lines.extend(f"{H:.12g},{e:.12g}" for H, e in zip(self.spacings, self.errors))
        return "\n".join(lines) + "\n"


def smooth_problem(eps: float = 0.1, final_time: float = 0.5) -> ProblemSpec:
    """``-sin x`` data with enough diffusion to stay shock-free until *final_time*."""
    return ProblemSpec(
        x_lo=-np.pi,
        x_hi=np.pi,
        initial_condition=InitialCondition("sine"),
        diffusivity=Diffusivity(eps),
        final_time=final_time,
        name=f"smooth-eps{eps:g}",
    )


def fit_slope(spacings, errors) -> float:
    return float(np.polyfit(np.log(spacings), np.log(errors), 1)[0])


def convergence_study(
    problem: ProblemSpec,
    gamma: int,
    H_list: Sequence[float],
    *,
    n: int = 2,
    refinement: int = 10,
) -> ConvergenceReport:
    """Error at the final time of uniform standard-patch layouts, one per ``H``.

    Every ``H`` must divide the domain into a whole number of intervals.
    Patches keep ``n`` and the micro spacing fixed; the micro grids of all
    runs sit on one fine grid so the reference is the same microscale
    discretisation over the whole domain and the measured error is the
    coupling error alone.
    """
    if len(H_list) < 3:
        raise ValueError(f"a slope fit needs at least 3 spacings, got {len(H_list)}")

    counts = []
    for H in H_list:
        m = problem.length / H
        if abs(m - round(m)) > 1.0e-9 * m:
            raise ValueError(f"H = {H} does not divide the domain length {problem.length}")
        counts.append(int(round(m)))

    base = math.lcm(*counts) * refinement
    dx = problem.length / base
    layouts = [uniform_layout(problem.x_lo, problem.x_hi, m, n, dx, gamma) for m in counts]

    dt = min(default_dt(layout, problem) for layout in layouts)
    final = (problem.final_time,)
    reference = brute_force_solve(
        problem, FineGridConfig(points=base - 1, dt=dt, snapshot_times=final, scheme="rk4")
    )

    spacings = problem.length / np.array(counts, dtype=np.float64)
    errors = []
    for layout in layouts:
        trajectory = simulate(problem, layout, StepperConfig(dt=dt, output_times=final))
        errors.append(max_error(trajectory, reference).global_max)
        logger.info("H = %.4g: max error %.3e", problem.length / len(layout.patches), errors[-1])
    errors = np.array(errors)

    order = np.argsort(spacings)
    spacings, errors = spacings[order], errors[order]

    if np.all(errors == 0.0):
        return ConvergenceReport(gamma, spacings, errors, None, exact=True)

    notes = []
    monotone = bool(np.all(np.diff(errors) > 0))
    if not monotone:
        notes.append("error does not decrease monotonically with H")
    return ConvergenceReport(
        gamma, spacings, errors, fit_slope(spacings, errors), monotone=monotone, notes=notes
    )


# }}}
