import math

import numpy as np
import pytest
from scipy.special import binom, gamma

from zenerwave.fraccalc import TimeGrid, f_alpha_kernel, fractional_integral, gl_weights, rl_derivative


def test_gl_weights_examples():
    np.testing.assert_array_equal(gl_weights(0.0, 3), [1, 0, 0, 0])
    np.testing.assert_allclose(gl_weights(1.0, 3), [1, -1, 0, 0], atol=0)
    np.testing.assert_allclose(gl_weights(0.5, 3), [1, -0.5, -0.125, -0.0625], rtol=1e-15)


@pytest.mark.parametrize("alpha", [0.1, 0.23, 0.5, 0.77, 0.99])
def test_gl_weights_match_binomials(alpha):
    k = np.arange(60)
    want = (-1.0) ** k * binom(alpha, k)
    np.testing.assert_allclose(gl_weights(alpha, 59), want, rtol=1e-12, atol=1e-300)


def test_gl_weights_sum_to_zero_slowly():
    # sum_k w_k = (1 - 1)^alpha = 0; the partial sums decay like n^-alpha
    w = gl_weights(0.5, 10_000)
    assert abs(w.sum()) < 1e-2
    assert np.all(w[1:] < 0)


def test_rl_derivative_of_ramp():
    grid = TimeGrid(1e-4, 10_000)
    d = rl_derivative(grid.times, 0.5, grid)
    np.testing.assert_allclose(d[-1], 1.0 / gamma(1.5), rtol=1e-3)
    np.testing.assert_allclose(1.0 / gamma(1.5), 1.128379, rtol=1e-6)


def test_rl_derivative_of_constant():
    grid = TimeGrid(1e-4, 10_000)
    d = rl_derivative(np.ones(len(grid)), 0.5, grid)
    np.testing.assert_allclose(d[-1], 1.0 / math.sqrt(math.pi), rtol=1e-3)


def test_rl_derivative_order_zero_is_identity():
    grid = TimeGrid(0.1, 10)
    y = np.full(len(grid), 3.25)
    out = rl_derivative(y, 0.0, grid)
    np.testing.assert_array_equal(out, y)
    out[0] = 0.0
    assert y[0] == 3.25


def test_rl_derivative_first_order():
    errs = []
    for n in (100, 200, 400, 800):
        grid = TimeGrid(1.0 / n, n)
        d = rl_derivative(grid.times, 0.3, grid)
        errs.append(abs(d[-1] - 1.0 / gamma(2 - 0.3)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders > 0.9)


def test_rl_derivative_rejects_bad_input():
    grid = TimeGrid(0.1, 10)
    with pytest.raises(ValueError):
        rl_derivative(np.zeros(5), 0.5, grid)
    with pytest.raises(ValueError):
        rl_derivative(np.zeros(11), 1.0, grid)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 10)


def test_f_alpha_kernel_examples():
    assert f_alpha_kernel(1.0, 7.0) == pytest.approx(1.0)
    assert f_alpha_kernel(2.0, 3.0) == pytest.approx(3.0)
    assert f_alpha_kernel(0.5, 1.0) == pytest.approx(0.5641895835, rel=1e-9)
    with pytest.raises(ValueError):
        f_alpha_kernel(0.5, 0.0)
    with pytest.raises(ValueError):
        f_alpha_kernel(0.0, 1.0)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.5])
def test_fractional_integral_of_ramp(alpha):
    # I^a t = t^(1+a) / Gamma(2+a), exact for piecewise-linear data
    grid = TimeGrid(0.01, 100)
    out = fractional_integral(grid.times, alpha, grid)
    want = grid.times ** (1 + alpha) / gamma(2 + alpha)
    np.testing.assert_allclose(out, want, rtol=1e-12, atol=1e-15)


def test_fractional_integral_inverts_derivative():
    # D^a I^a y = y, up to the first-order error of the GL scheme
    grid = TimeGrid(1e-3, 1000)
    y = np.sin(3 * grid.times)
    back = rl_derivative(fractional_integral(y, 0.4, grid), 0.4, grid)
    np.testing.assert_allclose(back[200:], y[200:], atol=5e-3)
