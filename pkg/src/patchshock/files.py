"""Comma-separated output files (12 significant digits) and their readers."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable

import numpy as np

from patchshock.dynamics import Trajectory
from patchshock.mesh import NodeRole


def fmt(value: float) -> str:
    return f"{value:.12g}"


def quantize(values):
    """Round to the printed precision so in-memory and on-disk results agree."""
    return np.vectorize(lambda v: float(fmt(v)), otypes=[np.float64])(values)


def trajectory_csv(trajectory: Trajectory) -> str:
    out = io.StringIO()
    out.write("time,node_position,node_role,value\n")
    for t, row in zip(trajectory.times, trajectory.macro):
        for x, role, u in zip(trajectory.positions, trajectory.roles, row):
            out.write(f"{fmt(t)},{fmt(x)},{role.value},{fmt(u)}\n")
    return out.getvalue()


def micro_csv(trajectory: Trajectory) -> str:
    out = io.StringIO()
    out.write("time,patch,x,value\n")
    for state in trajectory.states:
        for j, (patch, values) in enumerate(zip(state.layout.patches, state.patches)):
            for x, u in zip(patch.grid(), values):
                out.write(f"{fmt(state.t)},{j},{fmt(x)},{fmt(u)}\n")
    return out.getvalue()


def read_trajectory_csv(source: str | Path | Iterable[str]) -> Trajectory:
    if isinstance(source, (str, Path)) and Path(source).exists():
        with open(source, newline="") as f:
            rows = list(csv.DictReader(f))
    else:
        rows = list(csv.DictReader(io.StringIO(source) if isinstance(source, str) else source))
    if not rows:
        raise ValueError("empty trajectory file")

    times: list[float] = []
    for r in rows:
        t = float(r["time"])
        if not times or times[-1] != t:
            times.append(t)

    nnodes = len(rows) // len(times)
    if nnodes * len(times) != len(rows):
        raise ValueError("trajectory file does not have the same nodes at every time")

    first = rows[:nnodes]
    positions = np.array([float(r["node_position"]) for r in first])
    roles = tuple(NodeRole(r["node_role"]) for r in first)
    macro = np.array([float(r["value"]) for r in rows]).reshape(len(times), nnodes)
    return Trajectory(np.array(times), positions, roles, macro)


def samples_csv(x: np.ndarray, times: np.ndarray, values: np.ndarray) -> str:
    """Rows ``x, t, u`` for ``values[k, i] = u(x[i], times[k])``."""
    out = io.StringIO()
    out.write("x,t,u\n")
    for t, row in zip(times, values):
        for xi, u in zip(x, row):
            out.write(f"{fmt(xi)},{fmt(t)},{fmt(u)}\n")
    return out.getvalue()
