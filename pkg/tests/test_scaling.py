import math

import numpy as np
import pytest

from zenerwave import (
    PhysicalMaterial,
    ScaleFactors,
    ZenerParams,
    fdtd_solve,
    nondimensionalize,
    scale_lemma_check,
    wave_front_speed,
)


def test_elastic_material_gives_tau_one():
    p, _ = nondimensionalize(PhysicalMaterial(E=3.0, rho=2.0, tau_sigma=0.5, tau_eps=0.5, alpha=0.4))
    assert p == ZenerParams(0.4, 1.0)


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
def test_unit_material(alpha):
    _, sf = nondimensionalize(PhysicalMaterial(E=1.0, rho=1.0, tau_sigma=0.2, tau_eps=1.0, alpha=alpha))
    assert sf.X_star == 1.0 and sf.T_star == 1.0


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
def test_scale_factor_arithmetic(alpha):
    m = PhysicalMaterial(E=4.0, rho=1.0, tau_sigma=1.0, tau_eps=2.0**alpha, alpha=alpha)
    p, sf = nondimensionalize(m)
    np.testing.assert_allclose(sf.T_star, 2.0, rtol=1e-14)
    np.testing.assert_allclose(sf.X_star, 4.0, rtol=1e-14)
    # (T*)**alpha = tau_eps and the speed invariant (X*/T*)**2 rho/E = 1
    np.testing.assert_allclose(sf.T_star**alpha, m.tau_eps, rtol=1e-14)
    np.testing.assert_allclose((sf.X_star / sf.T_star) ** 2 * m.rho / m.E, 1.0, rtol=1e-14)
    np.testing.assert_allclose(p.tau, 2.0**-alpha, rtol=1e-14)


def test_material_validation():
    with pytest.raises(ValueError):
        PhysicalMaterial(E=1.0, rho=1.0, tau_sigma=2.0, tau_eps=1.0, alpha=0.5)
    with pytest.raises(ValueError):
        PhysicalMaterial(E=-1.0, rho=1.0, tau_sigma=0.5, tau_eps=1.0, alpha=0.5)
    with pytest.raises(ValueError, match="alpha = 0"):
        nondimensionalize(PhysicalMaterial(E=1.0, rho=1.0, tau_sigma=0.5, tau_eps=1.0, alpha=0.0))


def test_scale_factor_round_trip():
    sf = ScaleFactors(3.0, 0.5)
    x, t = sf.to_dimensionless([3.0, 6.0], [1.0, 2.0])
    np.testing.assert_allclose(x, [1.0, 2.0])
    np.testing.assert_allclose(t, [2.0, 4.0])
    xp, tp = sf.to_physical(x, t)
    np.testing.assert_allclose(xp, [3.0, 6.0])
    np.testing.assert_allclose(tp, [1.0, 2.0])
    np.testing.assert_allclose(sf.velocity_to_dimensionless(6.0), 1.0)


def test_scale_lemma_trivial_cases():
    y = lambda t: np.sin(t) + t**2
    assert scale_lemma_check(y, 0.0, 3.7) == 0.0
    assert scale_lemma_check(y, 0.5, 1.0, n_steps=200) < 1e-2


def test_scale_lemma_converges_for_ramp():
    # the first GL step on a ramp is off by O(dt**(1 - alpha)), which sets the rate
    errs = np.array([scale_lemma_check(lambda t: t, 0.5, 2.0, n_steps=n) for n in (250, 500, 1000, 2000)])
    rate = np.log2(errs[:-1] / errs[1:])
    np.testing.assert_allclose(rate, 0.5, atol=0.05)
    assert errs[-1] < 2e-3
    with pytest.raises(ValueError):
        scale_lemma_check(lambda t: t, 0.5, 0.0)


def test_wave_front_speed_examples():
    assert wave_front_speed(PhysicalMaterial(E=2.0, rho=2.0, tau_sigma=0.3, tau_eps=0.3, alpha=0.5)) == 1.0
    m = PhysicalMaterial(E=1.0, rho=1.0, tau_sigma=0.004, tau_eps=1.0, alpha=0.23)
    np.testing.assert_allclose(wave_front_speed(m), 15.811388300841896, rtol=1e-14)
    m = PhysicalMaterial(E=4.0, rho=1.0, tau_sigma=0.25, tau_eps=1.0, alpha=0.5)
    assert wave_front_speed(m) == pytest.approx(4.0)


def test_wave_front_speed_is_the_redimensionalized_cone():
    m = PhysicalMaterial(E=7.0, rho=3.0, tau_sigma=0.02, tau_eps=0.3, alpha=0.6)
    p, sf = nondimensionalize(m)
    np.testing.assert_allclose(wave_front_speed(m), sf.X_star / sf.T_star / math.sqrt(p.tau), rtol=1e-14)


def test_fdtd_front_arrival_in_physical_units():
    # E = 4, rho = 1, tau = 0.25: the front travels at 4 m/s. alpha close to 1
    # keeps the front sharp enough for a threshold crossing to track it
    m = PhysicalMaterial(E=4.0, rho=1.0, tau_sigma=0.25, tau_eps=1.0, alpha=0.9)
    p, sf = nondimensionalize(m)
    x = np.linspace(-10.0, 10.0, 2001)
    dx = x[1] - x[0]
    dt = dx * math.sqrt(p.tau)
    u0 = np.where(np.abs(x) < 0.5, (1 - (x / 0.5) ** 2) ** 4, 0.0)
    res = fdtd_solve(u0, np.zeros_like(x), dx, p, dt, 900)
    receivers = np.array([3.0, 5.0, 7.0])
    arrivals = []
    for xr in receivers:
        j = np.searchsorted(x, xr)
        arrivals.append(res.times[np.argmax(np.abs(res.u[:, j]) > 1e-12)])
    slope = np.polyfit(arrivals, receivers, 1)[0]
    speed = slope * sf.X_star / sf.T_star
    assert abs(speed - wave_front_speed(m)) / wave_front_speed(m) < 0.02
