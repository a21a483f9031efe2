"""Physical units and the dimensionless model.

The fractional Zener law

.. math::

    \\sigma + \\tau_\\sigma\\, {}_0D_t^\\alpha \\sigma
        = E\\left(\\varepsilon + \\tau_\\varepsilon\\, {}_0D_t^\\alpha \\varepsilon\\right)

with density ``rho`` becomes the dimensionless system with parameters
``(alpha, tau = tau_sigma / tau_eps)`` under

``T* = tau_eps**(1/alpha)``, ``X* = T* sqrt(E/rho)``,
``x = X* xbar``, ``t = T* tbar``, ``u = X* ubar``, ``sigma = E sigmabar``.

A Riemann-Liouville derivative picks up ``(T*)**alpha`` under ``t = T* tbar``,
so ``(T*)**alpha = tau_eps`` is what cancels ``tau_eps`` from the law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fraccalc import TimeGrid, rl_derivative
from .zener_kernel import ZenerParams

__all__ = [
    "PhysicalMaterial",
    "ScaleFactors",
    "nondimensionalize",
    "scale_lemma_check",
    "wave_front_speed",
]


@dataclass(frozen=True)
class PhysicalMaterial:
    """Fractional Zener material in SI units.

    Parameters
    ----------
    E : float
        Modulus in Pa.
    rho : float
        Density in kg/m^3.
    tau_sigma, tau_eps : float
        Relaxation constants in s**alpha, ``tau_eps >= tau_sigma > 0``
        (equality is the elastic limit).
    alpha : float
        Fractional order in ``(0, 1)``.
    """

    E: float
    rho: float
    tau_sigma: float
    tau_eps: float
    alpha: float

    def __post_init__(self) -> None:
        if not (self.E > 0 and self.rho > 0):
            raise ValueError("E and rho must be positive")
        if not 0.0 < self.tau_sigma <= self.tau_eps:
            raise ValueError("relaxation constants must satisfy tau_eps >= tau_sigma > 0")
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError("alpha must satisfy 0 <= alpha < 1")


@dataclass(frozen=True)
class ScaleFactors:
    """Length and time units ``X*`` (m) and ``T*`` (s)."""

    X_star: float
    T_star: float

    def to_dimensionless(self, x, t):
        """Map physical ``(x, t)`` to ``(xbar, tbar)``."""
        return np.asarray(x) / self.X_star, np.asarray(t) / self.T_star

    def to_physical(self, xbar, tbar):
        """Map ``(xbar, tbar)`` back to physical ``(x, t)``."""
        return np.asarray(xbar) * self.X_star, np.asarray(tbar) * self.T_star

    def velocity_to_dimensionless(self, v):
        """``vbar = v T* / X*``."""
        return np.asarray(v) * self.T_star / self.X_star


def nondimensionalize(m: PhysicalMaterial) -> tuple[ZenerParams, ScaleFactors]:
    """Dimensionless parameters and scale factors of a material.

    Raises
    ------
    ValueError
        For ``alpha = 0``: ``T*`` is undefined. Give ``(alpha, tau)`` directly
        in that case.
    """
    if m.alpha == 0.0:
        raise ValueError(
            "alpha = 0 admits no time scale tau_eps**(1/alpha); "
            "construct ZenerParams(0, tau_sigma/tau_eps) directly"
        )
    t_star = m.tau_eps ** (1.0 / m.alpha)
    x_star = t_star * math.sqrt(m.E / m.rho)
    return ZenerParams(m.alpha, m.tau_sigma / m.tau_eps), ScaleFactors(x_star, t_star)


def wave_front_speed(m: PhysicalMaterial) -> float:
    """Physical speed of the support cone, ``sqrt(E/rho) sqrt(tau_eps/tau_sigma)`` in m/s.

    It is the dimensionless cone ``|xbar| < tbar / sqrt(tau)`` mapped back with
    ``x = X* xbar`` and ``t = T* tbar``. It does not need ``alpha > 0``.
    """
    return math.sqrt(m.E / m.rho) * math.sqrt(m.tau_eps / m.tau_sigma)


def scale_lemma_check(y, alpha: float, T_star: float, t_end: float = 1.0, n_steps: int = 1000) -> float:
    """Discrete check of ``D_tbar^a ybar(tbar) = (T*)**a D_t^a y(t)`` for ``ybar(tbar) = y(T* tbar)``.

    The left side is computed on ``2 n_steps`` steps over ``tbar`` in
    ``[0, t_end / T*]``; the right side on ``n_steps`` steps over ``t`` in
    ``[0, t_end]``. Both use the Grünwald-Letnikov scheme and are compared at
    the shared physical times ``t > 0``. Using different resolutions keeps
    the check from being an identity of the discrete scheme.

    Parameters
    ----------
    y : callable
        Vectorized function of physical time.
    alpha : float
        Order in ``[0, 1)``.
    T_star : float
        Time unit, ``T* > 0``.

    Returns
    -------
    float
        Largest absolute deviation.
    """
    if not T_star > 0:
        raise ValueError("T_star must be positive")
    grid = TimeGrid(t_end / n_steps, n_steps)
    fine = TimeGrid(t_end / T_star / (2 * n_steps), 2 * n_steps)
    # physical sample times of the fine grid; every other one is a coarse time
    t_fine = np.arange(2 * n_steps + 1) * (t_end / (2 * n_steps))
    samples = np.asarray(y(t_fine), dtype=float)
    rhs = T_star**alpha * rl_derivative(samples[::2], alpha, grid)
    lhs = rl_derivative(samples, alpha, fine)[::2]
    return float(np.abs(lhs[1:] - rhs[1:]).max())
