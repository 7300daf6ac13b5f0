"""Microscale right-hand side and method-of-lines integration of the patches."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from patchshock.coupling import MacroSample, get_coupler
from patchshock.mesh import NodeRole, PatchLayout, macro_node_list
from patchshock.model import Diffusivity, ProblemSpec

logger = logging.getLogger(__name__)


class SimulationBlowup(RuntimeError):
    def __init__(self, message: str, time: float, patch: int | None) -> None:
        super().__init__(message)
        self.time = time
        self.patch = patch


def micro_rhs(u_prev, u_here, u_next, d, diff: Diffusivity):
    """Centred second-order discretisation of ``-u u_x + eps(u) u_xx``."""
    return diff(u_here) / d**2 * (u_next - 2.0 * u_here + u_prev) - u_here / (2.0 * d) * (
        u_next - u_prev
    )


@dataclass
class SimulationState:
    t: float
    values: np.ndarray
    layout: PatchLayout

    @property
    def patches(self) -> list[np.ndarray]:
        sizes = [p.points for p in self.layout.patches]
        return np.split(self.values, np.cumsum(sizes)[:-1])

    def patch(self, j: int) -> np.ndarray:
        return self.patches[j]


@dataclass(frozen=True)
class StepperConfig:
    dt: float | None = None
    safety: float = 0.5
    output_times: tuple[float, ...] = ()
    blowup_bound: float = 10.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "output_times", tuple(float(t) for t in self.output_times))
        if self.dt is not None and not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not 0 < self.safety <= 1:
            raise ValueError(f"safety must lie in (0, 1], got {self.safety}")
        if any(b < a for a, b in zip(self.output_times[:-1], self.output_times[1:])):
            raise ValueError("output times must be sorted")


def uniform_output_times(final_time: float, count: int = 61) -> tuple[float, ...]:
    return tuple(float(t) for t in np.linspace(0.0, final_time, count))


def default_dt(layout: PatchLayout, problem: ProblemSpec, safety: float = 0.5) -> float:
    u_bound = problem.u_bound()
    eps_max = float(problem.diffusivity(u_bound))
    bound = math.inf
    for p in layout.patches:
        bound = min(bound, p.dx**2 / (2.0 * eps_max))
        if u_bound > 0:
            bound = min(bound, p.dx / u_bound)
    return safety * bound


class PatchSystem:
    """All patch micro grids flattened into one vector, plus the coupling."""

    def __init__(self, problem: ProblemSpec, layout: PatchLayout) -> None:
        if abs(layout.x_lo - problem.x_lo) > 1e-12 or abs(layout.x_hi - problem.x_hi) > 1e-12:
            raise ValueError("layout domain does not match the problem domain")

        self.problem = problem
        self.layout = layout
        self.coupler = get_coupler(layout)
        self.nodes = macro_node_list(layout)

        sizes = np.array([p.points for p in layout.patches])
        self.offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
        self.size = int(sizes.sum())

        self.x = np.concatenate([p.grid() for p in layout.patches])
        self.left = self.offsets.copy()
        self.right = self.offsets + sizes - 1

        interior = np.concatenate(
            [off + np.arange(1, p.points - 1) for off, p in zip(self.offsets, layout.patches)]
        )
        self.interior = interior
        self.d = np.concatenate([np.full(p.points - 2, p.dx) for p in layout.patches])
        self.patch_of = np.repeat(np.arange(len(layout.patches)), sizes)

        self.sources = np.array(
            [self.offsets[node.patch] + layout.patches[node.patch].n + node.micro
             for node in self.nodes]
        )
        self.node_positions = np.array([node.position for node in self.nodes])
        self.node_roles = tuple(node.role for node in self.nodes)

        # stencil rows ordered (patch, side) -> flat edge indices
        self.edge_index = np.stack([self.left, self.right], axis=1).ravel()

    def initial_state(self) -> np.ndarray:
        u = np.asarray(self.problem.initial_condition(self.x), dtype=np.float64).copy()
        self.apply_edges(0.0, u)
        return u

    def macro_values(self, u: np.ndarray) -> np.ndarray:
        return u[self.sources]

    def macro_sample(self, u: np.ndarray) -> MacroSample:
        return MacroSample(self.node_positions.copy(), self.macro_values(u).copy(), self.node_roles)

    def apply_edges(self, t: float, u: np.ndarray) -> np.ndarray:
        """Overwrite every patch's edge points with the coupled values, in place."""
        ext = np.empty(self.sources.size + 2)
        ext[0] = self.problem.left_value(t)
        ext[1:-1] = u[self.sources]
        ext[-1] = self.problem.right_value(t)
        u[self.edge_index] = self.coupler.matrix @ ext
        return u

    def rhs(self, t: float, u: np.ndarray) -> np.ndarray:
        u = self.apply_edges(t, u.copy())
        i = self.interior
        du = np.zeros_like(u)
        du[i] = micro_rhs(u[i - 1], u[i], u[i + 1], self.d, self.problem.diffusivity)
        return du

    def check(self, t: float, u: np.ndarray, bound: float) -> None:
        bad = ~np.isfinite(u) | (np.abs(u) > bound)
        if np.any(bad):
            k = int(np.argmax(bad))
            patch = int(self.patch_of[k])
            raise SimulationBlowup(
                f"solution left |u| <= {bound:g} at t = {t:.6g} in patch {patch} "
                f"(x = {self.x[k]:.6g}, u = {u[k]:.6g})",
                t,
                patch,
            )


def system_rhs(state: SimulationState, layout: PatchLayout, problem: ProblemSpec) -> np.ndarray:
    return PatchSystem(problem, layout).rhs(state.t, state.values)


def rk4_step(f, t: float, u: np.ndarray, h: float) -> np.ndarray:
    k1 = f(t, u)
    k2 = f(t + 0.5 * h, u + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, u + 0.5 * h * k2)
    k4 = f(t + h, u + h * k3)
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass
class Trajectory:
    """Macro node values (and optionally full states) at the output times."""

    times: np.ndarray
    positions: np.ndarray
    roles: tuple[NodeRole, ...]
    macro: np.ndarray
    states: list[SimulationState] = field(default_factory=list)
    layout: PatchLayout | None = None

    def sample(self, k: int) -> MacroSample:
        return MacroSample(self.positions, self.macro[k], self.roles)


def simulate(
    problem: ProblemSpec,
    layout: PatchLayout,
    stepper: StepperConfig | None = None,
) -> Trajectory:
    if stepper is None:
        stepper = StepperConfig()
    system = PatchSystem(problem, layout)

    dt = stepper.dt if stepper.dt is not None else default_dt(layout, problem, stepper.safety)
    times = stepper.output_times or uniform_output_times(problem.final_time)
    if times[0] < 0 or times[-1] > problem.final_time + 1e-12:
        raise ValueError(f"output times must lie in [0, {problem.final_time}]")
    logger.info("simulate %s on %s: dt = %.3e, %d outputs", problem.name, layout.name, dt, len(times))

    t = 0.0
    u = system.initial_state()
    states = []
    for t_out in times:
        nsteps = math.ceil((t_out - t) / dt - 1.0e-9)
        if nsteps > 0:
            h = (t_out - t) / nsteps
            for k in range(nsteps):
                u = rk4_step(system.rhs, t + k * h, u, h)
                system.check(t + (k + 1) * h, u, stepper.blowup_bound)
            t = t_out
        system.apply_edges(t, u)
        states.append(SimulationState(t, u.copy(), layout))

    return Trajectory(
        times=np.array(times),
        positions=system.node_positions,
        roles=system.node_roles,
        macro=np.array([system.macro_values(s.values) for s in states]),
        states=states,
        layout=layout,
    )

