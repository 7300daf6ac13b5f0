"""Patch geometry: standard patches, the double patch and macroscale nodes."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence, Union

import numpy as np

from patchshock.model import ArchetypeId


class NodeRole(str, enum.Enum):
    CENTRE = "centre"
    SHOCK_LEFT = "shock_left"
    SHOCK_RIGHT = "shock_right"


@dataclass(frozen=True)
class Standard:
    pass


@dataclass(frozen=True)
class Double:
    """A patch resolving a shock, sampled at two interior shock nodes.

    Offsets count micro spacings inward from the left and right patch edges.
    """

    left_offset: int = 1
    right_offset: int = 1


PatchKind = Union[Standard, Double]

_TOL = 1.0e-12


@dataclass(frozen=True)
class Patch:
    centre: float
    n: int
    dx: float
    kind: Standard | Double = field(default_factory=Standard)

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"patch needs n >= 2 (5 or more points), got n = {self.n}")
        if not self.dx > 0:
            raise ValueError(f"micro spacing must be positive, got {self.dx}")
        if isinstance(self.kind, Double):
            lo, hi = self.kind.left_offset, self.kind.right_offset
            if not (0 < lo < 2 * self.n and 0 < hi < 2 * self.n):
                raise ValueError(
                    f"shock node offsets ({lo}, {hi}) must lie strictly inside "
                    f"a patch of {2 * self.n} micro spacings"
                )
            if not self.shock_left_index < self.shock_right_index:
                raise ValueError("left shock node must lie left of the right shock node")

    @classmethod
    def from_width(
        cls, centre: float, width: float, points: int, kind: Standard | Double | None = None
    ) -> Patch:
        if points % 2 == 0:
            raise ValueError(f"a patch needs an odd number of points, got {points}")
        n = (points - 1) // 2
        return cls(centre, n, width / (2 * n), kind if kind is not None else Standard())

    @property
    def is_double(self) -> bool:
        return isinstance(self.kind, Double)

    @property
    def half_width(self) -> float:
        return self.n * self.dx

    @property
    def points(self) -> int:
        return 2 * self.n + 1

    @property
    def left_edge(self) -> float:
        return self.centre - self.half_width

    @property
    def right_edge(self) -> float:
        return self.centre + self.half_width

    @property
    def shock_left_index(self) -> int:
        return -self.n + self.kind.left_offset

    @property
    def shock_right_index(self) -> int:
        return self.n - self.kind.right_offset

    def grid(self) -> np.ndarray:
        return self.centre + self.dx * np.arange(-self.n, self.n + 1)

    def position(self, i: int) -> float:
        return self.centre + self.dx * i


class MacroNode(NamedTuple):
    position: float
    role: NodeRole
    patch: int
    micro: int


@dataclass(frozen=True)
class PatchLayout:
    patches: tuple[Patch, ...]
    gamma: int
    x_lo: float
    x_hi: float
    name: str = "custom"

    def __post_init__(self) -> None:
        object.__setattr__(self, "patches", tuple(self.patches))
        if self.gamma < 1:
            raise ValueError(f"coupling order must be >= 1, got {self.gamma}")
        if not self.patches:
            raise ValueError("layout has no patches")

        for k, p in enumerate(self.patches):
            if p.left_edge < self.x_lo - _TOL or p.right_edge > self.x_hi + _TOL:
                raise ValueError(
                    f"patch {k} [{p.left_edge:g}, {p.right_edge:g}] leaves the "
                    f"domain [{self.x_lo:g}, {self.x_hi:g}]"
                )
        for k, (a, b) in enumerate(zip(self.patches[:-1], self.patches[1:])):
            if not a.centre < b.centre:
                raise ValueError(f"patches {k} and {k + 1} are not sorted by centre")
            if not a.right_edge < b.left_edge:
                raise ValueError(f"patches {k} and {k + 1} overlap")

        doubles = [k for k, p in enumerate(self.patches) if p.is_double]
        if len(doubles) > 1:
            raise ValueError(f"at most one double patch is supported, got {len(doubles)}")
        if doubles:
            s = doubles[0]
            if s == 0 or s == len(self.patches) - 1:
                raise ValueError(
                    "the double patch needs at least one standard patch on each side"
                )

    @property
    def double_index(self) -> int | None:
        for k, p in enumerate(self.patches):
            if p.is_double:
                return k
        return None

    def __len__(self) -> int:
        return len(self.patches)


def macro_node_list(layout: PatchLayout) -> list[MacroNode]:
    """Macro nodes with the patch and micro index each value is read from."""
    nodes = []
    for j, p in enumerate(layout.patches):
        if p.is_double:
            il, ir = p.shock_left_index, p.shock_right_index
            nodes.append(MacroNode(p.position(il), NodeRole.SHOCK_LEFT, j, il))
            nodes.append(MacroNode(p.position(ir), NodeRole.SHOCK_RIGHT, j, ir))
        else:
            nodes.append(MacroNode(p.centre, NodeRole.CENTRE, j, 0))
    return nodes


def macro_nodes(layout: PatchLayout) -> list[tuple[float, NodeRole]]:
    return [(node.position, node.role) for node in macro_node_list(layout)]


def simulated_fraction(layout: PatchLayout) -> float:
    covered = sum(2.0 * p.half_width for p in layout.patches)
    return covered / (layout.x_hi - layout.x_lo)


def recommend_shock_offset(eps: float, H: float, gamma: int) -> float:
    """Distance from the shock centre at which to place a shock node.

    Keeps the exponential tail of the shock, ``exp(-X / eps)``, below the
    ``H**(2 gamma)`` consistency of the coupling at about three digits.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if not H > 0:
        raise ValueError(f"macro spacing must be positive, got {H}")
    if gamma < 1:
        raise ValueError(f"coupling order must be >= 1, got {gamma}")

    offset = (7.0 - 2.0 * gamma * math.log(H)) * eps
    if offset <= 0:
        raise ValueError(
            f"macro spacing H = {H} gives a non-positive shock node offset {offset}"
        )
    return offset


# {{{ layouts


def _spread(lo: float, hi: float, count: int) -> np.ndarray:
    """*count* equispaced points strictly between *lo* and *hi*."""
    return lo + (hi - lo) * np.arange(1, count + 1) / (count + 1)


def shock_layout(
    x_lo: float,
    x_hi: float,
    *,
    double_width: float,
    double_points: int,
    centres: Sequence[float],
    width: float,
    points: int,
    gamma: int,
    offsets: tuple[int, int] = (1, 1),
    name: str = "custom",
) -> PatchLayout:
    """A double patch centred at the origin with standard patches at *centres*."""
    double = Patch.from_width(0.0, double_width, double_points, Double(*offsets))
    patches = [Patch.from_width(c, width, points) for c in centres]
    patches.append(double)
    patches.sort(key=lambda p: p.centre)
    return PatchLayout(tuple(patches), gamma, x_lo, x_hi, name=name)


_ARCHETYPE_LAYOUTS = {
    # double width, double points, patches per side, width, points, gamma
    ArchetypeId.M1: (0.05, 25, 2, 0.01, 5, 1),
    ArchetypeId.M2: (0.2, 101, 17, 0.01, 5, 3),
    ArchetypeId.M3: (0.6, 181, 2, 0.02, 5, 1),
    ArchetypeId.M4: (0.6, 181, 17, 0.02, 5, 3),
}


def archetype_layout(
    id: ArchetypeId | str, offsets: tuple[int, int] = (1, 1)
) -> PatchLayout:
    aid = ArchetypeId.parse(id)
    x_lo, x_hi = -np.pi, np.pi
    dwidth, dpoints, per_side, width, points, gamma = _ARCHETYPE_LAYOUTS[aid]

    if per_side == 2:
        right = x_hi * np.array([1.0, 2.0]) / 3.0
    else:
        right = _spread(dwidth / 2, x_hi, per_side)
    centres = np.concatenate([-right[::-1], right])

    return shock_layout(
        x_lo,
        x_hi,
        double_width=dwidth,
        double_points=dpoints,
        centres=centres,
        width=width,
        points=points,
        gamma=gamma,
        offsets=offsets,
        name=aid.value,
    )


def uniform_layout(
    x_lo: float, x_hi: float, intervals: int, n: int, dx: float, gamma: int
) -> PatchLayout:
    """Standard patches at the ``intervals - 1`` interior nodes of a uniform grid."""
    if intervals < 2:
        raise ValueError("need at least two macro intervals")
    H = (x_hi - x_lo) / intervals
    patches = tuple(Patch(x_lo + k * H, n, dx) for k in range(1, intervals))
    return PatchLayout(patches, gamma, x_lo, x_hi, name=f"uniform-{intervals}")


def whole_domain_layout(x_lo: float, x_hi: float, points: int, gamma: int = 1) -> PatchLayout:
    """One standard patch whose edges are the domain boundaries."""
    patch = Patch.from_width(0.5 * (x_lo + x_hi), x_hi - x_lo, points)
    return PatchLayout((patch,), gamma, x_lo, x_hi, name="whole-domain")


def without_double_patch(layout: PatchLayout) -> PatchLayout:
    """The same geometry with the double patch treated as a standard patch."""
    patches = tuple(replace(p, kind=Standard()) for p in layout.patches)
    return replace(layout, patches=patches, name=f"{layout.name}-standard")


# }}}
