import math

import numpy as np
import pytest

from zenerwave.fundsol import (
    ConeBoundaryError,
    QuadratureConfig,
    SpacetimePoint,
    fundamental_solution,
    fundsol_dt,
    hat_moments,
    integrand,
    integrand_dt,
    laplace_image_S,
    sample_fundamental_solution,
    select_routes,
)
from zenerwave.oracles import bromwich_invert
from zenerwave.zener_kernel import ZenerParams

FIG2 = ZenerParams(0.23, 0.004)


def test_laplace_image_examples():
    assert laplace_image_S(0.0, 1.0, FIG2) == pytest.approx(0.5 * math.sqrt(1.004 / 2), rel=1e-14)
    s = np.array([0.5, 1 + 2j, 3 - 1j])
    np.testing.assert_allclose(laplace_image_S(0.7, s, ZenerParams(0.5, 1.0)), np.exp(-0.7 * s) / (2 * s), rtol=1e-14)
    np.testing.assert_allclose(laplace_image_S(0.3, np.conj(s), FIG2), np.conj(laplace_image_S(0.3, s, FIG2)), rtol=1e-14)
    with pytest.raises(ValueError):
        laplace_image_S(0.0, -1.0, FIG2)


def test_integrand_elastic_vanishes():
    q = np.geomspace(1e-3, 1e3, 20)
    np.testing.assert_allclose(integrand(q, SpacetimePoint(0.4, 1.0), ZenerParams(0.5, 1.0)), 0.0, atol=1e-16)


def test_integrand_small_q():
    p = FIG2
    c = (p.tau - 1) * math.sin(p.alpha * math.pi) / (4 * math.pi)
    q = np.array([1e-10, 1e-12, 1e-14])
    ratio = integrand(q, SpacetimePoint(1.0, 1.0), p) / (c * q ** (p.alpha - 1))
    np.testing.assert_allclose(ratio, 1.0, rtol=1e-2)
    assert c < 0


def test_integrand_large_q_decay():
    p = ZenerParams(0.5, 0.25)
    pt = SpacetimePoint(1.0, 1.0)
    d = pt.t - abs(pt.x) * math.sqrt(p.tau)
    q = np.geomspace(1e3, 1e5, 30)
    assert np.all(np.abs(integrand(q, pt, p)) <= np.exp(-q * d / 2))
    np.testing.assert_allclose(integrand_dt(q, pt, p), -q * integrand(q, pt, p), rtol=1e-13)
    with pytest.raises(ValueError):
        integrand(0.0, pt, p)


def test_zero_outside_cone():
    rng = np.random.default_rng(3)
    for p in (FIG2, ZenerParams(0.75, 0.25), ZenerParams(0.0, 0.5)):
        t = rng.uniform(0.01, 3.0, 300)
        x = t / math.sqrt(p.tau) * rng.uniform(1.0, 3.0, 300) * rng.choice([-1, 1], 300)
        assert np.all(sample_fundamental_solution(x, t, p) == 0.0)


def test_elastic_limit():
    p = ZenerParams(0.5, 1.0)
    assert fundamental_solution(SpacetimePoint(0.3, 1.0), p) == 0.5
    assert fundamental_solution(SpacetimePoint(-0.99, 1.0), p) == 0.5
    assert fundamental_solution(SpacetimePoint(1.01, 1.0), p) == 0.0
    assert fundsol_dt(SpacetimePoint(0.3, 1.0), p) == 0.0


def test_alpha_zero_closed_form():
    p = ZenerParams(0.0, 0.5)
    c = math.sqrt(2 / 1.5)
    x = np.array([0.0, 0.5, 0.9 * c, 1.1 * c])
    np.testing.assert_allclose(sample_fundamental_solution(x, 1.0, p), [0.5 / c] * 3 + [0.0])


def test_against_bromwich():
    pt = SpacetimePoint(0.5, 1.0)
    want = bromwich_invert(lambda s: laplace_image_S(pt.x, s, FIG2), pt.t)
    assert abs(fundamental_solution(pt, FIG2) - want) < 1e-6
    np.testing.assert_allclose(fundamental_solution(pt, FIG2), 0.34678768, atol=1e-8)


@pytest.mark.parametrize("p", [ZenerParams(0.23, 0.25), ZenerParams(0.5, 0.25)])
def test_routes_agree(p):
    # the real-axis route and the vertical-line route are independent integrals;
    # these points keep both well conditioned
    only_a = QuadratureConfig(route_a_preferred=40.0, cancellation_limit=40.0)
    only_b = QuadratureConfig(cancellation_limit=-1.0)
    t = np.array([0.5, 1.0, 1.0, 1.5])
    x = np.array([0.3, 0.2, 0.5, 0.4]) * t / math.sqrt(p.tau)
    assert np.all(select_routes(x, t, p, only_a) == "A")
    assert np.all(select_routes(x, t, p, only_b) == "B")
    for deriv in (False, True):
        a = sample_fundamental_solution(x, t, p, only_a, derivative=deriv)
        b = sample_fundamental_solution(x, t, p, only_b, derivative=deriv)
        np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-11)


def test_route_choice():
    fig = ZenerParams(0.25, 0.004)
    # small growth: real axis
    assert select_routes(0.3, 1.0, fig)[0] == "A"
    # large growth and a fast-decaying line integrand: vertical line
    assert select_routes(2.43, 1.0, fig, derivative=True)[0] == "B"
    # alpha near 1: the line integrand barely decays, so the real axis is kept
    assert select_routes(4.472, 2.0, ZenerParams(0.99, 0.05))[0] == "A"


def test_dt_far_from_origin():
    # growth exponent about 19: the real-axis derivative would lose ~1e-7 here
    p = ZenerParams(0.25, 0.004)
    got = sample_fundamental_solution(2.43, 1.0, p, derivative=True)
    want = bromwich_invert(lambda s: s * laplace_image_S(2.43, s, p), 1.0)
    np.testing.assert_allclose(got, want, rtol=1e-4, atol=1e-14)


def test_dt_matches_finite_difference():
    pt = SpacetimePoint(0.5, 1.0)
    h = 1e-4
    fd = (
        fundamental_solution(SpacetimePoint(pt.x, pt.t + h), FIG2)
        - fundamental_solution(SpacetimePoint(pt.x, pt.t - h), FIG2)
    ) / (2 * h)
    assert abs(fundsol_dt(pt, FIG2) - fd) < 1e-5


def test_dt_profile_has_single_interior_peak():
    x = np.linspace(0, 3, 301)
    u = sample_fundamental_solution(x, 1.0, FIG2, derivative=True)
    i = int(np.argmax(u))
    assert 0 < i < len(x) - 1
    assert np.all(np.diff(u[: i + 1]) > 0)
    assert np.all(np.diff(u[i:]) <= 0)
    assert u[-1] < 1e-6 * u[i]


def test_cone_boundary_error():
    t = 1.0
    x = t / math.sqrt(FIG2.tau) - 1e-11
    with pytest.raises(ConeBoundaryError):
        fundamental_solution(SpacetimePoint(x, t), FIG2)
    with pytest.raises(ValueError):
        sample_fundamental_solution(0.0, 0.0, FIG2)


@pytest.mark.parametrize("p", [FIG2, ZenerParams(0.5, 0.25), ZenerParams(0.0, 0.5), ZenerParams(0.6, 1.0)])
def test_hat_moment_sums(p):
    # sum over all hats is the integral of S (= t) or of dS/dt (= 1)
    t, h = 0.8, 0.01
    n = int(t / math.sqrt(p.tau) / h) + 3
    k = hat_moments(t, n, h, p)
    kd = hat_moments(t, n, h, p, derivative=True)
    assert k[0] + 2 * k[1:].sum() == pytest.approx(t, rel=1e-8)
    assert kd[0] + 2 * kd[1:].sum() == pytest.approx(1.0, rel=1e-8)


def test_hat_moments_match_pointwise_quadrature():
    t, h = 1.0, 0.05
    k = hat_moments(t, 6, h, FIG2)
    z = np.linspace(-h, h, 2001)[1:-1]
    for m in range(1, 6):
        vals = sample_fundamental_solution(m * h + z, t, FIG2) * (1 - np.abs(z) / h)
        assert k[m] == pytest.approx(np.trapezoid(vals, m * h + z), rel=1e-5)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        SpacetimePoint(0.0, -1.0)
