import numpy as np
import pytest

from patchshock.analysis import convergence_study, fit_slope, max_error, smooth_problem
from patchshock.dynamics import Trajectory
from patchshock.mesh import NodeRole
from patchshock.model import Diffusivity, InitialCondition, ProblemSpec


def _trajectory():
    positions = np.array([-2.0, -0.1, 0.1, 2.0])
    roles = (NodeRole.CENTRE, NodeRole.SHOCK_LEFT, NodeRole.SHOCK_RIGHT, NodeRole.CENTRE)
    times = np.array([0.0, 0.5, 1.0])
    macro = np.outer(1.0 + times, np.sin(positions))
    return Trajectory(times, positions, roles, macro)


def _exact(x, t):
    return (1.0 + t) * np.sin(x)


def test_zero_error():
    report = max_error(_trajectory(), _exact)
    assert report.global_max == 0.0
    assert report.outside_max == 0.0


def test_constant_offset():
    report = max_error(_trajectory(), lambda x, t: _exact(x, t) + 0.01)
    assert report.global_max == pytest.approx(0.01, abs=1e-15)
    np.testing.assert_allclose(report.per_time, 0.01, atol=1e-15)


def test_worst_point_and_outside():
    def oracle(x, t):
        u = _exact(x, t)
        if t == 0.5:
            u = u + np.array([0.0, 0.3, 0.0, 0.02])
        return u

    report = max_error(_trajectory(), oracle)
    assert report.global_max == pytest.approx(0.3)
    assert report.worst_time == 0.5
    assert report.worst_position == -0.1
    assert report.worst_role is NodeRole.SHOCK_LEFT
    assert report.outside_max == pytest.approx(0.02)
    assert "worst_role: shock_left" in report.to_text()


def test_error_is_a_seminorm():
    rng = np.random.default_rng(3)
    tr = _trajectory()
    a = rng.normal(size=tr.macro.shape)
    b = rng.normal(size=tr.macro.shape)
    err = lambda d: max_error(Trajectory(tr.times, tr.positions, tr.roles, tr.macro + d), _exact).global_max
    assert err(a + b) <= err(a) + err(b) + 1e-15
    assert err(-2.5 * a) == pytest.approx(2.5 * err(a))


def test_restricted_times():
    report = max_error(_trajectory(), _exact, times=[1.0])
    assert report.times.tolist() == [1.0]
    with pytest.raises(ValueError):
        max_error(_trajectory(), _exact, times=[0.7])


def test_fit_slope():
    H = np.array([0.1, 0.2, 0.4])
    assert fit_slope(H, 3.0 * H**2) == pytest.approx(2.0)


def test_convergence_zero_data_is_exact():
    problem = ProblemSpec(-np.pi, np.pi, InitialCondition("zero"), Diffusivity(0.1), final_time=0.05)
    report = convergence_study(problem, 1, [2 * np.pi / m for m in (4, 6, 8)], refinement=2)
    assert report.exact
    assert "slope: exact" in report.to_text()


def test_convergence_needs_three_spacings():
    with pytest.raises(ValueError, match="at least 3"):
        convergence_study(smooth_problem(), 1, [0.5, 0.25])


def test_convergence_needs_aligned_spacings():
    with pytest.raises(ValueError, match="divide"):
        convergence_study(smooth_problem(), 1, [0.5, 0.3, 0.25])
