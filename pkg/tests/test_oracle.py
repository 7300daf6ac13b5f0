import numpy as np
import pytest

from patchshock.model import Diffusivity, InitialCondition, ProblemSpec, make_archetype
from patchshock.oracle import (
    ColeHopfOracle,
    FineGridConfig,
    OracleError,
    QuadratureConfig,
    argmax_v,
    brute_force_eval,
    brute_force_solve,
    cole_hopf_eval,
    sample_grid,
)


def _zero_problem(eps=0.001, eps2=0.0):
    return ProblemSpec(-np.pi, np.pi, InitialCondition("zero"), Diffusivity(eps, eps2), final_time=1.0)


def test_argmax_zero_data():
    problem = _zero_problem()
    assert argmax_v(0.7, 0.5, problem) == pytest.approx(0.7, abs=1e-9)


def test_argmax_is_stationary():
    problem = make_archetype("M2")
    y = argmax_v(1.0, 1.0, problem)
    u0 = problem.initial_condition
    # d/dy [-(x - y)^2 / (2 t) - F(y)] = (x - y) / t - u0(y)
    assert abs((1.0 - y) / 1.0 - u0(y)) <= 1e-8


def test_cole_hopf_zero_data():
    assert cole_hopf_eval(0.3, 1.0, _zero_problem()) == pytest.approx(0.0, abs=1e-12)


def test_cole_hopf_origin_is_zero():
    for t in (0.5, 1.0, 3.0):
        assert cole_hopf_eval(0.0, t, make_archetype("M1")) == pytest.approx(0.0, abs=1e-12)


def test_cole_hopf_odd():
    problem = make_archetype("M2")
    for x in (0.3, 1.0, 2.5):
        assert cole_hopf_eval(-x, 1.4, problem) == pytest.approx(-cole_hopf_eval(x, 1.4, problem), abs=1e-9)


def test_cole_hopf_shift_invariance():
    problem = make_archetype("M2")
    a = cole_hopf_eval(0.8, 1.2, problem)
    # shifts must stay a few eps wide or exp underflows
    b = cole_hopf_eval(0.8, 1.2, problem, shift=0.02)
    assert a == pytest.approx(b, abs=1e-9)


def test_cole_hopf_window_converged():
    problem = make_archetype("M1")
    a = cole_hopf_eval(0.01, 2.0, problem, QuadratureConfig(tol_window=5.0))
    b = cole_hopf_eval(0.01, 2.0, problem, QuadratureConfig(tol_window=10.0))
    assert abs(a - b) < 1e-9


def test_cole_hopf_refusals():
    with pytest.raises(OracleError, match="nonlinear"):
        cole_hopf_eval(0.1, 1.0, make_archetype("M3"))
    with pytest.raises(OracleError):
        cole_hopf_eval(0.1, 0.0, make_archetype("M1"))
    with pytest.raises(OracleError):
        cole_hopf_eval(0.1, -1.0, make_archetype("M1"))


def test_oracle_initial_time():
    problem = make_archetype("M2")
    x = np.linspace(-3, 3, 7)
    np.testing.assert_array_equal(ColeHopfOracle(problem)(x, 0.0), problem.initial_condition(x))


def test_brute_force_zero_data():
    problem = _zero_problem(0.01, 0.05)
    sol = brute_force_solve(problem, FineGridConfig(points=99, snapshot_times=(0.1, 0.2)))
    assert np.all(sol.snapshots == 0.0)


def test_brute_force_eval_identities():
    problem = make_archetype("M2")
    sol = brute_force_solve(problem, FineGridConfig(points=399, dt=2e-4, snapshot_times=(0.0, 0.1, 0.2)))
    np.testing.assert_array_equal(brute_force_eval(sol.x, 0.1, sol), sol.snapshots[1])
    # halfway in time is the average of the neighbouring snapshots
    np.testing.assert_allclose(
        brute_force_eval(sol.x, 0.15, sol), 0.5 * (sol.snapshots[1] + sol.snapshots[2]), atol=1e-15
    )
    with pytest.raises(OracleError):
        brute_force_eval([0.0], 0.3, sol)
    with pytest.raises(OracleError):
        brute_force_eval([4.0], 0.1, sol)


def test_brute_force_stability_guard():
    with pytest.raises(ValueError, match="stability"):
        brute_force_solve(make_archetype("M2"), FineGridConfig(points=399, dt=1.0))


def test_sample_grid():
    x, t = sample_grid(make_archetype("M1"), 20, [0.6, 1.2])
    assert x.size == 20 and x[0] > -np.pi and x[-1] < np.pi
    np.testing.assert_allclose(x, -x[::-1], atol=1e-14)


def test_oracles_agree_before_shock():
    problem = make_archetype("M2").with_final_time(1.0)
    sol = brute_force_solve(problem, FineGridConfig(points=3199, snapshot_times=(1.0,)))
    assert abs(cole_hopf_eval(1.0, 1.0, problem) - sol(np.array([1.0]), 1.0)[0]) <= 2e-3


@pytest.mark.slow
def test_brute_force_self_convergence():
    # nested grids: every coarse point is also a fine point
    problem = make_archetype("M3")
    sols = {
        m: brute_force_solve(problem, FineGridConfig(points=m - 1, snapshot_times=(3.0,)))
        for m in (800, 1600, 3200)
    }
    ref = sols[3200].snapshots[-1]
    e800 = np.max(np.abs(sols[800].snapshots[-1] - ref[::4]))
    e1600 = np.max(np.abs(sols[1600].snapshots[-1] - ref[::2]))
    assert 3.0 <= e800 / e1600 <= 5.5
