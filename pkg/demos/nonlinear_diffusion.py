"""Solution-dependent diffusion, ``eps(u) = 0.001 + 0.05|u|``, against a fine grid.

No closed form exists here, so the reference is the same finite-difference
scheme on 1600 points across the whole domain.

Run with ``python demos/nonlinear_diffusion.py``.
"""

# %%

import numpy as np

from patchshock.analysis import max_error
from patchshock.dynamics import simulate
from patchshock.mesh import archetype_layout, shock_layout
from patchshock.model import make_archetype
from patchshock.oracle import FineGridConfig, brute_force_solve

for aid in ("M3", "M4"):
    problem = make_archetype(aid)
    trajectory = simulate(problem, archetype_layout(aid))
    fine = brute_force_solve(problem, FineGridConfig(snapshot_times=tuple(trajectory.times)))
    r = max_error(trajectory, fine)
    print(f"{aid}: max error {r.global_max:.4f} at {r.worst_role.value}, "
          f"away from the shock {r.outside_max:.5f}")

# %%
# The shock layer is now wider: with |u| near 0.5 on either side the
# effective diffusivity is about 0.03. With two coarse patches per side
# (M3) the layer's tail reaches the double patch edges, and the error
# there depends on how wide the double patch is. Same micro spacing,
# three widths:

problem = make_archetype("M3")
centres = np.pi * np.array([-2, -1, 1, 2]) / 3
fine = None
for width, points in ((0.6, 181), (0.8, 241), (1.0, 301)):
    layout = shock_layout(
        problem.x_lo, problem.x_hi,
        double_width=width, double_points=points,
        centres=centres, width=0.02, points=5, gamma=1,
    )
    trajectory = simulate(problem, layout)
    if fine is None:
        fine = brute_force_solve(problem, FineGridConfig(snapshot_times=tuple(trajectory.times)))
    print(f"double patch width {width:.1f}: max error {max_error(trajectory, fine).global_max:.5f}")
