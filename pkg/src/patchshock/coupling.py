"""Inter-patch coupling by Lagrange interpolation of macroscale samples.

Macro values are gathered into one vector laid out as::

    [bc_left, U_0, ..., U_s^l, U_s^r, ..., U_last, bc_right]

so the Dirichlet boundary values act as interpolation nodes at ``x_lo`` and
``x_hi``. A double patch splits this vector into a left and a right
macro-domain; stencils never reach across the split. Each patch edge
interpolates through the nodes of its macro-domain whose index lies within
``gamma`` of the patch's own node, so stencils are centred away from the
shock and the boundaries and truncated (constant bandwidth) near them.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from patchshock.mesh import NodeRole, PatchLayout, macro_node_list


class CouplingError(ValueError):
    pass


def lagrange_weights(nodes: Sequence[float], target: float) -> np.ndarray:
    """Weights ``w_i = prod_{k != i} (target - X_k) / (X_i - X_k)``."""
    nodes = np.asarray(nodes, dtype=np.float64)
    if nodes.ndim != 1 or nodes.size < 2:
        raise CouplingError(f"need at least two interpolation nodes, got {nodes.size}")
    if np.unique(nodes).size != nodes.size:
        raise CouplingError(f"degenerate stencil with repeated nodes {nodes.tolist()}")

    w = np.ones(nodes.size)
    for i in range(nodes.size):
        for k in range(nodes.size):
            if k != i:
                w[i] *= (target - nodes[k]) / (nodes[i] - nodes[k])
    return w


@dataclass(frozen=True)
class MacroSample:
    positions: np.ndarray
    values: np.ndarray
    roles: tuple[NodeRole, ...]

    def __post_init__(self) -> None:
        if self.positions.shape != self.values.shape:
            raise ValueError("positions and values differ in length")
        if len(self.roles) != self.positions.size:
            raise ValueError("roles and positions differ in length")
        if np.any(np.diff(self.positions) <= 0):
            raise ValueError("macro node positions must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("macro sample contains non-finite values")


@dataclass(frozen=True)
class Stencil:
    patch: int
    side: int
    target: float
    indices: tuple[int, ...]
    positions: tuple[float, ...]
    weights: tuple[float, ...]


class Coupler:
    """Cached stencils of a layout and their assembled weight matrix.

    ``matrix`` has one row per patch edge, ordered ``(0, left), (0, right),
    (1, left), ...``, and one column per entry of the extended macro vector.
    """

    def __init__(self, layout: PatchLayout) -> None:
        self.layout = layout
        nodes = macro_node_list(layout)

        self.positions = np.array(
            [layout.x_lo] + [node.position for node in nodes] + [layout.x_hi]
        )
        if np.any(np.diff(self.positions) <= 0):
            raise CouplingError("macro nodes must lie strictly inside the domain")

        # index of each patch's own node(s) in the extended vector
        own: list[tuple[int, int]] = []
        split = None
        g = 1
        for p in layout.patches:
            if p.is_double:
                own.append((g, g + 1))
                split = g + 1
                g += 2
            else:
                own.append((g, g))
                g += 1

        ntotal = self.positions.size
        domains = [(0, ntotal)] if split is None else [(0, split), (split, ntotal)]

        def domain_of(index: int) -> tuple[int, int]:
            for lo, hi in domains:
                if lo <= index < hi:
                    return lo, hi
            raise AssertionError(index)

        stencils = []
        matrix = np.zeros((2 * len(layout.patches), ntotal))
        for j, p in enumerate(layout.patches):
            for side, (index, target) in enumerate(
                zip(own[j], (p.left_edge, p.right_edge))
            ):
                lo, hi = domain_of(index)
                idx = np.arange(max(lo, index - layout.gamma), min(hi, index + layout.gamma + 1))
                if idx.size < 2:
                    raise CouplingError(
                        f"patch {j} {'right' if side else 'left'} edge has a "
                        f"single-node stencil"
                    )
                w = lagrange_weights(self.positions[idx], target)
                matrix[2 * j + side, idx] = w
                stencils.append(
                    Stencil(
                        j,
                        side,
                        float(target),
                        tuple(int(i) for i in idx),
                        tuple(float(x) for x in self.positions[idx]),
                        tuple(float(v) for v in w),
                    )
                )

        self.stencils: tuple[Stencil, ...] = tuple(stencils)
        self.matrix = matrix
        self.matrix.setflags(write=False)

    def extend(self, values: np.ndarray, bc_left: float, bc_right: float) -> np.ndarray:
        return np.concatenate([[bc_left], values, [bc_right]])

    def edges(self, values: np.ndarray, bc_left: float, bc_right: float) -> np.ndarray:
        """Edge values with shape ``(npatches, 2)``."""
        return (self.matrix @ self.extend(values, bc_left, bc_right)).reshape(-1, 2)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("patch,side,target,node_position,weight\n")
        for st in self.stencils:
            side = "right" if st.side else "left"
            for x, w in zip(st.positions, st.weights):
                out.write(f"{st.patch},{side},{st.target:.12g},{x:.12g},{w:.12g}\n")
        return out.getvalue()


@lru_cache(maxsize=32)
def get_coupler(layout: PatchLayout) -> Coupler:
    return Coupler(layout)


def compute_edge_values(
    samples: MacroSample, layout: PatchLayout, bc_left: float, bc_right: float
) -> np.ndarray:
    coupler = get_coupler(layout)
    if samples.positions.size != coupler.positions.size - 2 or not np.allclose(
        samples.positions, coupler.positions[1:-1], rtol=0.0, atol=1.0e-12
    ):
        raise CouplingError("macro sample does not match the layout's macro nodes")
    return coupler.edges(samples.values, bc_left, bc_right)
