"""Modified Burgers' equation ``u_t + u u_x = eps(u) u_xx`` and its archetypes.

The four archetype problems all live on ``[-pi, pi]`` with homogeneous
Dirichlet data and an odd initial condition that steepens into (or starts
as) a stationary shock at ``x = 0``:

* ``M1``: constant diffusivity, tanh initial shock,
* ``M2``: constant diffusivity, ``-sin x`` that forms a shock near ``t = 1.2``,
* ``M3``: ``eps(u) = 0.001 + 0.05 |u|`` with the tanh data of ``M1``,
* ``M4``: ``eps(u) = 0.001 + 0.05 |u|`` with the sine data of ``M2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Union

import numpy as np
from scipy import optimize

BoundaryData = Union[float, Callable[[float], float]]


class ArchetypeId(str, enum.Enum):
    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    M4 = "M4"

    @classmethod
    def parse(cls, name: ArchetypeId | str) -> ArchetypeId:
        try:
            return cls(str(name.value if isinstance(name, cls) else name).upper())
        except ValueError:
            raise ValueError(
                f"unknown archetype {name!r}; expected one of "
                f"{', '.join(m.value for m in cls)}"
            ) from None


@dataclass(frozen=True)
class Diffusivity:
    """Diffusion coefficient ``eps1 + eps2 * |u|``."""

    eps1: float
    eps2: float = 0.0

    def __post_init__(self) -> None:
        if not (self.eps1 > 0 and math.isfinite(self.eps1)):
            raise ValueError(f"eps1 must be positive, got {self.eps1}")
        if not (self.eps2 >= 0 and math.isfinite(self.eps2)):
            raise ValueError(f"eps2 must be non-negative, got {self.eps2}")

    @property
    def is_constant(self) -> bool:
        return self.eps2 == 0.0

    def __call__(self, u):
        return self.eps1 + self.eps2 * np.abs(u)

    evaluate = __call__


def lncosh(a):
    """``log(cosh(a))`` without overflow for large ``|a|``."""
    a = np.abs(a)
    return a + np.log1p(np.exp(-2.0 * a)) - math.log(2.0)


@dataclass(frozen=True)
class InitialCondition:
    """The initial data families used by the archetypes.

    ``kind`` is one of

    * ``"tanh"``: ``(x / pi - tanh(2 x / width)) / tanh(2 pi / width)``,
    * ``"sine"``: ``-amplitude * sin(x)``,
    * ``"zero"``: ``u = 0``.
    """

    kind: str
    amplitude: float = 1.0
    width: float = 1.0e-3

    def __post_init__(self) -> None:
        if self.kind not in ("tanh", "sine", "zero"):
            raise ValueError(f"unknown initial condition kind {self.kind!r}")
        if self.kind == "tanh" and not self.width > 0:
            raise ValueError("tanh initial condition needs a positive width")

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "tanh":
            return (x / np.pi - np.tanh(2.0 * x / self.width)) / math.tanh(
                2.0 * np.pi / self.width
            )
        if self.kind == "sine":
            return -self.amplitude * np.sin(x)
        return np.zeros_like(x)

    def integral(self, y):
        """Closed form of the antiderivative ``int_0^y u0(z) dz``."""
        y = np.asarray(y, dtype=np.float64)
        if self.kind == "tanh":
            eps = self.width
            return (y**2 / (2.0 * np.pi) - 0.5 * eps * lncosh(2.0 * y / eps)) / math.tanh(
                2.0 * np.pi / eps
            )
        if self.kind == "sine":
            return self.amplitude * (np.cos(y) - 1.0)
        return np.zeros_like(y)


def _as_boundary(value: BoundaryData) -> Callable[[float], float]:
    if callable(value):
        return value
    v = float(value)
    return lambda t: v


@dataclass(frozen=True)
class ProblemSpec:
    x_lo: float
    x_hi: float
    initial_condition: InitialCondition
    diffusivity: Diffusivity
    final_time: float = 3.0
    boundary_left: BoundaryData = 0.0
    boundary_right: BoundaryData = 0.0
    name: str = "custom"

    _left: Callable[[float], float] = field(init=False, repr=False, compare=False)
    _right: Callable[[float], float] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.x_lo < self.x_hi:
            raise ValueError(f"empty domain [{self.x_lo}, {self.x_hi}]")
        if not self.final_time > 0:
            raise ValueError(f"final_time must be positive, got {self.final_time}")

        object.__setattr__(self, "_left", _as_boundary(self.boundary_left))
        object.__setattr__(self, "_right", _as_boundary(self.boundary_right))

        for x, bc, side in (
            (self.x_lo, self._left, "left"),
            (self.x_hi, self._right, "right"),
        ):
            mismatch = abs(float(self.initial_condition(x)) - float(bc(0.0)))
            if mismatch > 1.0e-8:
                raise ValueError(
                    f"initial condition disagrees with the {side} boundary value "
                    f"by {mismatch:.3e} at t = 0"
                )

    def left_value(self, t: float) -> float:
        return float(self._left(t))

    def right_value(self, t: float) -> float:
        return float(self._right(t))

    @property
    def length(self) -> float:
        return self.x_hi - self.x_lo

    def u_bound(self, samples: int = 4001) -> float:
        """Largest ``|u|`` in the initial and (initial) boundary data."""
        x = np.linspace(self.x_lo, self.x_hi, samples)
        k = int(np.argmax(np.abs(self.initial_condition(x))))
        # refine around the sampled peak; sharp layers fall between samples
        lo, hi = x[max(k - 1, 0)], x[min(k + 1, samples - 1)]
        res = optimize.minimize_scalar(
            lambda z: -abs(float(self.initial_condition(z))),
            bounds=(lo, hi), method="bounded", options={"xatol": 1e-12},
        )
        return max(
            float(np.abs(self.initial_condition(x[k]))),
            -float(res.fun),
            abs(self.left_value(0.0)),
            abs(self.right_value(0.0)),
        )

    def with_final_time(self, final_time: float) -> ProblemSpec:
        return replace(self, final_time=final_time)


# {{{ archetypes

_EPS1 = 1.0e-3
_EPS2 = 0.05


def make_archetype(id: ArchetypeId | str, final_time: float = 3.0) -> ProblemSpec:
    aid = ArchetypeId.parse(id)
    if aid in (ArchetypeId.M1, ArchetypeId.M2):
        diff = Diffusivity(_EPS1)
    else:
        diff = Diffusivity(_EPS1, _EPS2)

    if aid in (ArchetypeId.M1, ArchetypeId.M3):
        # the transition width uses the constant part of the diffusivity
        ic = InitialCondition("tanh", width=_EPS1)
    else:
        ic = InitialCondition("sine")

    return ProblemSpec(
        x_lo=-np.pi,
        x_hi=np.pi,
        initial_condition=ic,
        diffusivity=diff,
        final_time=final_time,
        name=aid.value,
    )


def initial_integral(problem: ArchetypeId | str | ProblemSpec, y):
    """Evaluate ``int_0^y u0(z) dz`` for a constant-diffusivity problem."""
    if not isinstance(problem, ProblemSpec):
        problem = make_archetype(problem)
    if not problem.diffusivity.is_constant:
        raise ValueError(
            f"problem {problem.name} has a nonlinear diffusivity; "
            "its initial integral is not used by any Cole-Hopf evaluation"
        )
    return problem.initial_condition.integral(y)


# }}}
