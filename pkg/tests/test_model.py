import numpy as np
import pytest
from scipy import integrate

from patchshock.model import (
    ArchetypeId,
    Diffusivity,
    InitialCondition,
    ProblemSpec,
    initial_integral,
    lncosh,
    make_archetype,
)


def test_archetype_diffusivities():
    for name in ("M1", "M2"):
        d = make_archetype(name).diffusivity
        assert (d.eps1, d.eps2) == (0.001, 0.0)
    for name in ("M3", "M4"):
        d = make_archetype(name).diffusivity
        assert (d.eps1, d.eps2) == (0.001, 0.05)


def test_archetype_defaults():
    for aid in ArchetypeId:
        p = make_archetype(aid)
        assert p.x_lo == -np.pi and p.x_hi == np.pi
        assert p.final_time == 3.0
        assert p.left_value(0.7) == 0.0 and p.right_value(2.0) == 0.0


def test_sine_initial_values():
    u0 = make_archetype("M2").initial_condition
    assert u0(0.0) == 0.0
    assert u0(-np.pi / 2) == pytest.approx(1.0, abs=1e-15)


def test_tanh_initial_condition_is_odd():
    u0 = make_archetype("M1").initial_condition
    assert u0(0.0) == 0.0
    x = np.linspace(0.01, 3.0, 50)
    np.testing.assert_allclose(u0(-x), -u0(x), rtol=0, atol=1e-15)


@pytest.mark.parametrize("aid", list(ArchetypeId))
def test_all_initial_conditions_odd(aid):
    u0 = make_archetype(aid).initial_condition
    x = np.random.default_rng(0).uniform(-np.pi, np.pi, 1000)
    assert np.max(np.abs(u0(-x) + u0(x))) <= 1e-12


def test_unknown_archetype():
    with pytest.raises(ValueError, match="M9"):
        make_archetype("M9")


def test_initial_integral_sine():
    assert initial_integral("M2", 0.0) == 0.0
    assert initial_integral("M2", np.pi) == pytest.approx(-2.0, abs=1e-15)


def test_initial_integral_tanh_matches_quadrature():
    u0 = make_archetype("M1").initial_condition
    expected, _ = integrate.quad(lambda z: float(u0(z)), 0.0, 1.0, points=[0.0, 0.005], epsabs=1e-13, epsrel=1e-13, limit=200)
    assert initial_integral("M1", 1.0) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("aid", ["M1", "M2"])
def test_initial_integral_even(aid):
    y = np.linspace(0.0, 6.0, 97)
    np.testing.assert_allclose(initial_integral(aid, -y), initial_integral(aid, y), atol=1e-13)


@pytest.mark.parametrize("aid", ["M3", "M4"])
def test_initial_integral_rejects_nonlinear_diffusivity(aid):
    with pytest.raises(ValueError, match="nonlinear"):
        initial_integral(aid, 1.0)


def test_lncosh_overflow_safe():
    a = np.array([0.0, 0.3, -2.0, 20.0])
    np.testing.assert_allclose(lncosh(a), np.log(np.cosh(a)), rtol=1e-14, atol=1e-15)
    # cosh(2 pi / 1e-4) overflows
    assert lncosh(2 * np.pi / 1e-4) == pytest.approx(2 * np.pi / 1e-4 - np.log(2.0))


def test_diffusivity():
    d = make_archetype("M3").diffusivity
    assert d(2.0) == pytest.approx(0.101)
    u = np.linspace(-2, 2, 401)
    assert np.all(d(u) >= d.eps1)
    with pytest.raises(ValueError):
        Diffusivity(0.0)
    with pytest.raises(ValueError):
        Diffusivity(0.1, -1.0)


def test_problem_spec_validation():
    ic = InitialCondition("sine")
    with pytest.raises(ValueError, match="empty domain"):
        ProblemSpec(1.0, -1.0, ic, Diffusivity(0.1))
    with pytest.raises(ValueError, match="final_time"):
        ProblemSpec(-np.pi, np.pi, ic, Diffusivity(0.1), final_time=0.0)
    with pytest.raises(ValueError, match="boundary"):
        ProblemSpec(-np.pi, np.pi, ic, Diffusivity(0.1), boundary_left=0.5)


def test_time_dependent_boundary():
    p = ProblemSpec(
        -np.pi, np.pi, InitialCondition("zero"), Diffusivity(0.1),
        boundary_left=lambda t: np.sin(t), boundary_right=0.0,
    )
    assert p.left_value(np.pi / 2) == pytest.approx(1.0)
