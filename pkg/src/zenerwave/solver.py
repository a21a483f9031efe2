"""Cauchy problem by convolution with the fundamental solution.

For initial displacement ``u0``, initial velocity ``v0`` and body force ``f``

.. math::

    u(\\cdot, t) = \\partial_t S(\\cdot, t) * u_0 + S(\\cdot, t) * v_0
        + \\int_0^t S(\\cdot, t - s) * f(\\cdot, s)\\, ds.

Node values are read as the piecewise-linear interpolant, so each spatial
convolution is a discrete convolution with the hat-function moments of ``S``
or ``dS/dt`` (see :func:`.fundsol.hat_moments`). The moments are exact
integrals, which keeps the jump of the closed-form cases and the steep
near-front profile of small ``alpha`` resolved on coarse grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fraccalc import TimeGrid
from .fundsol import QuadratureConfig, classical_speed, hat_moments
from .zener_kernel import ZenerParams, delta_weight, relaxation_kernel_integral

__all__ = [
    "Grid1D",
    "CauchyData",
    "GridTooNarrowError",
    "solve",
    "recover_strain_stress",
    "delta_data",
    "gaussian_data",
]


class GridTooNarrowError(ValueError):
    """The grid cannot hold the data support dilated by the front travel."""


@dataclass(frozen=True)
class Grid1D:
    """Uniform nodes ``x_min + k dx``, ``k = 0, ..., n - 1``."""

    x_min: float
    dx: float
    n: int

    def __post_init__(self) -> None:
        if not self.dx > 0:
            raise ValueError("dx must be positive")
        if self.n < 2:
            raise ValueError("a grid needs at least two nodes")

    @classmethod
    def from_range(cls, x_min: float, x_max: float, n: int) -> "Grid1D":
        return cls(x_min, (x_max - x_min) / (n - 1), n)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def x_max(self) -> float:
        return self.x_min + self.dx * (self.n - 1)


@dataclass
class CauchyData:
    """Initial data and optional body force.

    Attributes
    ----------
    u0, v0 : numpy.ndarray
        Node values of displacement and velocity at ``t = 0``.
    f : numpy.ndarray, optional
        ``(len(f_grid), n)`` body force samples.
    f_grid : TimeGrid, optional
        Sample times of ``f``.
    """

    u0: np.ndarray
    v0: np.ndarray
    f: np.ndarray | None = None
    f_grid: TimeGrid | None = field(default=None)

    def __post_init__(self) -> None:
        self.u0 = np.asarray(self.u0, dtype=float)
        self.v0 = np.asarray(self.v0, dtype=float)
        if self.u0.shape != self.v0.shape or self.u0.ndim != 1:
            raise ValueError("u0 and v0 must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(self.u0)) and np.all(np.isfinite(self.v0))):
            raise ValueError("initial data must be finite")
        if self.f is not None:
            self.f = np.asarray(self.f, dtype=float)
            if self.f_grid is None:
                raise ValueError("a body force needs its time grid")
            if self.f.shape != (len(self.f_grid), self.u0.size):
                raise ValueError("f must have shape (len(f_grid), n)")
            if not np.all(np.isfinite(self.f)):
                raise ValueError("body force must be finite")


def delta_data(grid: Grid1D, x0: float = 0.0) -> CauchyData:
    """``u0`` a unit impulse at the node nearest ``x0`` (height ``1/dx``), ``v0 = 0``."""
    u0 = np.zeros(grid.n)
    j = int(round((x0 - grid.x_min) / grid.dx))
    if not 0 <= j < grid.n:
        raise ValueError("impulse location is off the grid")
    u0[j] = 1.0 / grid.dx
    return CauchyData(u0, np.zeros(grid.n))


def gaussian_data(grid: Grid1D, width: float, x0: float = 0.0) -> CauchyData:
    """``u0 = exp(-(x - x0)**2 / (2 width**2))``, ``v0 = 0``."""
    u0 = np.exp(-0.5 * ((grid.x - x0) / width) ** 2)
    return CauchyData(u0, np.zeros(grid.n))


def _front_speed(p: ZenerParams) -> float:
    c = classical_speed(p)
    return c if c is not None else 1.0 / math.sqrt(p.tau)


def _support(values: list[np.ndarray], rel_tol: float) -> tuple[int, int] | None:
    mag = np.zeros_like(values[0])
    for v in values:
        mag = np.maximum(mag, np.abs(v))
    peak = mag.max()
    if peak == 0.0:
        return None
    idx = np.flatnonzero(mag > rel_tol * peak)
    return int(idx[0]), int(idx[-1])


def _check_cone(data: CauchyData, grid: Grid1D, reach: float, rel_tol: float) -> None:
    values = [data.u0, data.v0]
    if data.f is not None:
        values.append(np.abs(data.f).max(axis=0))
    sup = _support(values, rel_tol)
    if sup is None:
        return
    lo = grid.x_min + sup[0] * grid.dx - reach
    hi = grid.x_min + sup[1] * grid.dx + reach
    # one cell of slack: the interpolant of an end node reaches one cell out
    if lo < grid.x_min - grid.dx * 1e-9 or hi > grid.x_max + grid.dx * 1e-9:
        raise GridTooNarrowError(
            f"data support dilated by the front travel spans [{lo:.4g}, {hi:.4g}], "
            f"beyond the grid [{grid.x_min:.4g}, {grid.x_max:.4g}]"
        )


def _convolve_even(kernel: np.ndarray, values: np.ndarray) -> np.ndarray:
    # out_i = sum_j kernel[|i - j|] values_j
    n = len(values)
    full = np.concatenate((kernel[:0:-1], kernel))
    return np.convolve(values, full)[n - 1 : 2 * n - 1]


def solve(
    data: CauchyData,
    p: ZenerParams,
    grid: Grid1D,
    times,
    cfg: QuadratureConfig | None = None,
    support_tol: float = 1e-14,
) -> np.ndarray:
    """Displacement ``u(x, t)`` on ``grid`` at each of ``times``.

    Parameters
    ----------
    data : CauchyData
        Node values on ``grid``; zero beyond it.
    p : ZenerParams
    grid : Grid1D
    times : sequence of float
        Output times, all positive.
    cfg : QuadratureConfig, optional
    support_tol : float
        Data below ``support_tol`` times its peak counts as outside the support
        for the cone check.

    Returns
    -------
    numpy.ndarray
        ``(len(times), grid.n)``.

    Raises
    ------
    GridTooNarrowError
        If the support of the data, dilated by the distance the front travels
        by ``max(times)``, leaves the grid.
    """
    cfg = cfg or QuadratureConfig()
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times <= 0):
        raise ValueError("output times must be positive")
    if data.u0.size != grid.n:
        raise ValueError("data length does not match the grid")
    _check_cone(data, grid, _front_speed(p) * times.max(), support_tol)

    n = grid.n
    out = np.zeros((len(times), n))
    has_u0 = np.any(data.u0 != 0.0)
    has_v0 = np.any(data.v0 != 0.0)
    lag_cache: dict[float, np.ndarray] = {}

    def s_moments(lag: float) -> np.ndarray:
        key = round(lag, 14)
        if key not in lag_cache:
            lag_cache[key] = hat_moments(lag, n, grid.dx, p, cfg)
        return lag_cache[key]

    for i, t in enumerate(times):
        if has_u0:
            k_dt = hat_moments(t, n, grid.dx, p, cfg, derivative=True)
            out[i] += _convolve_even(k_dt, data.u0)
        if has_v0:
            out[i] += _convolve_even(s_moments(t), data.v0)
        if data.f is not None:
            out[i] += _forcing(data, t, n, s_moments)
    return out


def _forcing(data: CauchyData, t: float, n: int, s_moments) -> np.ndarray:
    # trapezoid in s over the force samples up to t; S(., 0) = 0 kills the s = t end
    fs = data.f_grid.times
    keep = fs < t - 1e-14 * max(t, 1.0)
    if not keep.any():
        return np.zeros(n)
    nodes = np.append(fs[keep], t)
    w = np.zeros(len(nodes))
    dn = np.diff(nodes)
    w[:-1] += 0.5 * dn
    w[1:] += 0.5 * dn
    acc = np.zeros(n)
    for s_j, w_j, f_j in zip(nodes[:-1], w[:-1], data.f[keep]):
        if w_j == 0.0 or not np.any(f_j):
            continue
        acc += w_j * _convolve_even(s_moments(t - s_j), f_j)
    return acc


def _lag_weights(p: ZenerParams, dt: float, n_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Product-integration weights of the regular kernel for linear data.

    Returns ``(w, w_end)``: ``w[l]`` multiplies ``eps[n - l]`` for ``0 <= l < n``
    and ``w_end[n]`` multiplies ``eps[0]``.
    """
    t = dt * np.arange(n_steps + 2)
    k2 = relaxation_kernel_integral(t, p, order=2)
    k1 = relaxation_kernel_integral(t, p, order=1)
    w = np.empty(n_steps + 1)
    w[0] = k2[1] / dt
    w[1:] = (k2[2:] - 2.0 * k2[1:-1] + k2[:-2])[: n_steps] / dt
    w_end = np.zeros(n_steps + 1)
    w_end[1:] = k1[1 : n_steps + 1] - (k2[1 : n_steps + 1] - k2[: n_steps]) / dt
    return w, w_end


def recover_strain_stress(u, p: ZenerParams, dt: float, dx: float) -> tuple[np.ndarray, np.ndarray]:
    """Strain and stress from displacement samples.

    Parameters
    ----------
    u : array_like
        ``(n_t, n)`` displacement at times ``k dt``, ``k = 0, ..., n_t - 1``; row 0
        is the initial displacement.
    p : ZenerParams
    dt, dx : float
        Time and space steps.

    Returns
    -------
    eps, sigma : numpy.ndarray
        ``eps = u_x`` by central differences (one-sided at the ends) and
        ``sigma = eps / tau + int_0^t k(t - s) eps(s) ds``. The time integral is
        exact for the piecewise-linear interpolant of ``eps``; its weights come
        from closed-form repeated integrals of ``k``.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 2 or u.shape[0] < 1 or u.shape[1] < 2:
        raise ValueError("u must be a (n_t, n) array with n >= 2")
    if not (dt > 0 and dx > 0):
        raise ValueError("dt and dx must be positive")
    eps = np.gradient(u, dx, axis=1)
    if p.tau == 1.0:
        return eps, eps.copy()
    if p.alpha == 0.0:
        return eps, 2.0 * eps / (1.0 + p.tau)
    n_t = u.shape[0]
    w, w_end = _lag_weights(p, dt, n_t - 1)
    sigma = delta_weight(p) * eps
    for n in range(1, n_t):
        # lags 0 .. n-1 act on eps[n], ..., eps[1]; the end weight on eps[0]
        sigma[n] += w[:n] @ eps[n:0:-1] + w_end[n] * eps[0]
    return eps, sigma
