"""Discrete fractional calculus on uniform time grids.

The left Riemann-Liouville derivative of order ``0 <= alpha < 1`` is realized by
the Grünwald-Letnikov (GL) scheme

.. math::

    {}_0D_t^\\alpha y(t_n) \\approx \\Delta t^{-\\alpha} \\sum_{k=0}^{n} w_k\\, y_{n-k},

where :math:`w_k` are the coefficients of :math:`(1 - z)^\\alpha`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma


def _check_order(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"fractional order must satisfy 0 <= alpha < 1, got {alpha}")
    return alpha


@dataclass(frozen=True)
class TimeGrid:
    """Uniform samples ``t_k = k * dt`` for ``k = 0, ..., n_steps``."""

    dt: float
    n_steps: int

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.n_steps < 1:
            raise ValueError("n_steps must be a positive integer")

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1)

    @property
    def t_end(self) -> float:
        return self.dt * self.n_steps

    def __len__(self) -> int:
        return self.n_steps + 1


def gl_weights(alpha: float, n: int) -> np.ndarray:
    """Return the Grünwald-Letnikov weights ``w_0, ..., w_n``.

    The weights are the Taylor coefficients of :math:`(1 - z)^\\alpha`, built with
    the multiplicative recurrence ``w_k = w_{k-1} (k - 1 - alpha) / k`` so that no
    factorials (and no overflow) appear for large ``n``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    k = np.arange(1, n + 1, dtype=float)
    w = np.empty(n + 1)
    w[0] = 1.0
    if n:
        w[1:] = np.cumprod((k - 1.0 - alpha) / k)
    return w


def _gl_sum(samples: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # causal convolution along the first axis
    n = samples.shape[0]
    if samples.ndim == 1:
        return np.convolve(weights, samples)[:n]
    out = np.empty_like(samples, dtype=float)
    for j in range(n):
        out[j] = np.tensordot(weights[: j + 1][::-1], samples[: j + 1], axes=(0, 0))
    return out


def rl_derivative(samples, alpha: float, grid: TimeGrid) -> np.ndarray:
    """Grünwald-Letnikov approximation of the Riemann-Liouville derivative.

    Parameters
    ----------
    samples : array_like
        Values ``y(t_k)`` on ``grid`` (time along the first axis).
    alpha : float
        Order in ``[0, 1)``. ``alpha = 0`` returns the samples unchanged.
    grid : TimeGrid
        The sampling grid.

    Returns
    -------
    numpy.ndarray
        First-order accurate approximation of :math:`{}_0D_t^\\alpha y` at every
        grid point.
    """
    alpha = _check_order(alpha)
    y = np.asarray(samples, dtype=float)
    if y.shape[0] != len(grid):
        raise ValueError(
            f"samples have {y.shape[0]} time points but the grid has {len(grid)}"
        )
    if alpha == 0.0:
        return y.copy()
    w = gl_weights(alpha, y.shape[0] - 1)
    return grid.dt ** (-alpha) * _gl_sum(y, w)


def f_alpha_kernel(alpha, t):
    """The kernel ``f_alpha(t) = t**(alpha - 1) / Gamma(alpha)`` for ``t > 0``.

    Only the locally integrable members (``alpha > 0``) are available; the
    distributional members ``alpha <= 0`` act through :func:`rl_derivative`.
    """
    alpha = float(alpha)
    t_arr = np.asarray(t, dtype=float)
    if alpha <= 0:
        raise ValueError("f_alpha_kernel requires alpha > 0")
    if np.any(t_arr <= 0):
        raise ValueError("f_alpha_kernel requires t > 0")
    out = t_arr ** (alpha - 1.0) / gamma(alpha)
    return float(out) if out.ndim == 0 else out


def fractional_integral(samples, alpha: float, grid: TimeGrid) -> np.ndarray:
    """Riemann-Liouville integral ``f_alpha * y`` by product integration.

    The samples are interpolated linearly and convolved exactly with
    :func:`f_alpha_kernel`, which gives second-order accuracy for smooth ``y``.
    """
    alpha = float(alpha)
    if alpha <= 0:
        raise ValueError("fractional_integral requires alpha > 0")
    y = np.asarray(samples, dtype=float)
    if y.shape[0] != len(grid):
        raise ValueError("samples do not match the grid")
    n = y.shape[0] - 1
    p = alpha + 1.0
    j = np.arange(n + 2, dtype=float)
    jp = j**p
    # c[m] = (m+1)^p - 2 m^p + (m-1)^p for m >= 1
    c = np.zeros(n + 1)
    c[1:] = jp[2 : n + 2] - 2.0 * jp[1 : n + 1] + jp[0:n]
    scale = grid.dt**alpha / gamma(alpha + 2.0)
    out = np.zeros_like(y)
    for m in range(1, n + 1):
        w = np.empty(m + 1)
        w[m] = 1.0  # weight of y_m (last sample)
        w[1:m] = c[m - np.arange(1, m)]
        w[0] = (m - 1.0) ** p - (m - p) * m**alpha
        out[m] = scale * np.tensordot(w, y[: m + 1], axes=(0, 0))
    return out

