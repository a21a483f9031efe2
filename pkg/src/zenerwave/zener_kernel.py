"""Material functions of the dimensionless fractional Zener model.

In dimensionless form the stress-strain law reads

.. math::

    \\sigma + \\tau\\, {}_0D_t^\\alpha \\sigma = \\varepsilon + {}_0D_t^\\alpha \\varepsilon,

so in the Laplace domain :math:`\\tilde\\sigma = \\frac{1 + s^\\alpha}{1 + \\tau s^\\alpha} \\tilde\\varepsilon`.
The wave equation then involves

.. math::

    \\omega(s) = s^2 \\frac{1 + \\tau s^\\alpha}{1 + s^\\alpha}.

Complex powers use the principal branch, ``arg s`` in ``(-pi, pi]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mittag_leffler import mittag_leffler

__all__ = [
    "ZenerParams",
    "zener_symbol",
    "omega",
    "omega_polar",
    "sector_margin",
    "mittag_leffler",
    "relaxation_kernel_regular",
    "relaxation_kernel_integral",
    "relaxation_kernel_laplace",
    "delta_weight",
]


@dataclass(frozen=True)
class ZenerParams:
    """Dimensionless material pair.

    Parameters
    ----------
    alpha : float
        Fractional order, ``0 <= alpha < 1``.
    tau : float
        Ratio ``tau_sigma / tau_eps``, ``0 < tau <= 1``. ``tau = 1`` is the
        elastic limit.
    """

    alpha: float
    tau: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must satisfy 0 <= alpha < 1, got {self.alpha}")
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"tau must satisfy 0 < tau <= 1, got {self.tau}")

    @property
    def front_speed(self) -> float:
        """Dimensionless speed ``1/sqrt(tau)`` of the support cone."""
        return 1.0 / math.sqrt(self.tau)

    @property
    def is_elastic(self) -> bool:
        return self.tau == 1.0


def _as_complex(s) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    on_cut = (s.imag == 0.0) & (s.real <= 0.0)
    if np.any(on_cut):
        raise ValueError("s lies on the branch cut (-inf, 0]")
    return s


def _s_alpha(s: np.ndarray, alpha: float) -> np.ndarray:
    # numpy's complex power uses the principal branch
    if alpha == 0.0:
        return np.ones_like(s)
    return s**alpha


def zener_symbol(s, p: ZenerParams):
    """Return ``(1 + s**alpha) / (1 + tau * s**alpha)``.

    Raises
    ------
    ValueError
        If any ``s`` lies on ``(-inf, 0]``.
    """
    s = _as_complex(s)
    sa = _s_alpha(s, p.alpha)
    out = (1.0 + sa) / (1.0 + p.tau * sa)
    return out[()] if out.ndim == 0 else out


def omega(s, p: ZenerParams):
    """Return ``s**2 (1 + tau s**alpha) / (1 + s**alpha)``."""
    s = _as_complex(s)
    sa = _s_alpha(s, p.alpha)
    out = s * s * (1.0 + p.tau * sa) / (1.0 + sa)
    return out[()] if out.ndim == 0 else out


def omega_polar(rho, phi, p: ZenerParams):
    """Real and imaginary parts of ``omega(rho * exp(i phi))`` in closed form.

    Written out with the real quantities

    ``A = (1 + rho**a cos(a phi))**2 + rho**(2a) sin(a phi)**2``,
    ``B = 1 + rho**a (1 + tau) cos(a phi) + tau rho**(2a)`` and
    ``C = rho**a (1 - tau) sin(a phi)``,

    so that ``Re = rho**2 (B cos 2phi + C sin 2phi) / A`` and
    ``Im = rho**2 (B sin 2phi - C cos 2phi) / A``.

    Parameters
    ----------
    rho : float or array_like
        Modulus, ``rho > 0``.
    phi : float or array_like
        Argument in ``(-pi/2, pi/2)``.
    p : ZenerParams

    Returns
    -------
    (re, im) : tuple of float or numpy.ndarray
    """
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(rho <= 0) or np.any(np.abs(phi) >= math.pi / 2):
        raise ValueError("omega_polar needs rho > 0 and |phi| < pi/2")
    a, tau = p.alpha, p.tau
    ra = rho**a
    ca = np.cos(a * phi)
    sa = np.sin(a * phi)
    big_a = (1.0 + ra * ca) ** 2 + ra * ra * sa * sa
    big_b = 1.0 + ra * (1.0 + tau) * ca + tau * ra * ra
    big_c = ra * (1.0 - tau) * sa
    c2 = np.cos(2.0 * phi)
    s2 = np.sin(2.0 * phi)
    re = rho**2 / big_a * (big_b * c2 + big_c * s2)
    im = rho**2 / big_a * (big_b * s2 - big_c * c2)
    if re.ndim == 0:
        return float(re), float(im)
    return re, im


def sector_margin(
    p: ZenerParams,
    sample_count: int,
    rho_range: tuple[float, float] = (1e-3, 1e3),
) -> float:
    """Smallest distance from ``omega(s)`` to the cut ``(-inf, 0]`` over a lattice.

    ``s`` runs over a log-polar lattice of the open right half plane: about
    ``sqrt(sample_count)`` moduli log-spaced in ``rho_range`` times as many
    arguments at cell midpoints of ``(-pi/2, pi/2)``. A positive value is a
    numerical witness that ``omega`` maps the right half plane off the cut.
    It is a sampling check, not a proof.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    n = max(1, math.isqrt(sample_count - 1) + 1)
    if n == 1:
        rho = np.array([math.sqrt(rho_range[0] * rho_range[1])])
    else:
        rho = np.geomspace(rho_range[0], rho_range[1], n)
    phi = -math.pi / 2 + math.pi * (np.arange(n) + 0.5) / n
    rr, pp = np.meshgrid(rho, phi, indexing="ij")
    w = omega(rr * np.exp(1j * pp), p)
    dist = np.where(w.real >= 0.0, np.abs(w), np.abs(w.imag))
    return float(dist.min())


def delta_weight(p: ZenerParams) -> float:
    """Weight ``1/tau`` of the instantaneous (delta) part of the relaxation kernel."""
    return 1.0 / p.tau


def _kernel_prefactor(p: ZenerParams) -> float:
    return (1.0 / p.tau) * (1.0 - 1.0 / p.tau)


def _check_kernel_args(t, p: ZenerParams) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if p.alpha == 0.0:
        raise ValueError(
            "alpha = 0 has no regular kernel; the law is sigma = 2/(1+tau) * eps"
        )
    if np.any(t <= 0):
        raise ValueError("relaxation kernel needs t > 0")
    return t


def relaxation_kernel_regular(t, p: ZenerParams):
    """Regular part ``k(t)`` of the relaxation kernel.

    From the split ``(1 + s**a)/(1 + tau s**a) = 1/tau + (1 - 1/tau)(1/tau)/(s**a + 1/tau)``
    the kernel is ``(1/tau) delta(t) + k(t)`` with

    .. math::

        k(t) = \\frac{1}{\\tau}\\left(1 - \\frac{1}{\\tau}\\right)
               t^{\\alpha - 1} E_{\\alpha,\\alpha}(-t^\\alpha/\\tau).

    Parameters
    ----------
    t : float or array_like
        Times, ``t > 0``.
    p : ZenerParams
        ``alpha > 0``.

    Returns
    -------
    float or numpy.ndarray
        ``k(t)``, negative for ``tau < 1`` and identically zero for ``tau = 1``.
    """
    t = _check_kernel_args(t, p)
    a = p.alpha
    if p.tau == 1.0:
        return np.zeros_like(t)[()] if t.ndim == 0 else np.zeros_like(t)
    out = _kernel_prefactor(p) * t ** (a - 1.0) * mittag_leffler(a, a, -(t**a) / p.tau)
    return out


def relaxation_kernel_integral(t, p: ZenerParams, order: int = 1):
    """Repeated integrals of ``k`` from 0.

    ``order = 1`` gives ``int_0^t k``, ``order = 2`` gives ``int_0^t int_0^u k``.
    Both follow from ``int_0^t s**(b-1) E_{a,b}(-c s**a) ds = t**b E_{a,b+1}(-c t**a)``.
    Accepts ``t >= 0``.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    t = np.asarray(t, dtype=float)
    if p.alpha == 0.0:
        raise ValueError("alpha = 0 has no regular kernel")
    if np.any(t < 0):
        raise ValueError("kernel integral needs t >= 0")
    a = p.alpha
    out = np.zeros_like(t)
    pos = t > 0
    if p.tau < 1.0 and np.any(pos):
        tp = t[pos]
        out[pos] = (
            _kernel_prefactor(p)
            * tp ** (a + order - 1.0)
            * mittag_leffler(a, a + order, -(tp**a) / p.tau)
        )
    return out[()] if out.ndim == 0 else out


def relaxation_kernel_laplace(s, p: ZenerParams):
    """Laplace image of ``k``: ``(1/tau)(1 - 1/tau) / (s**alpha + 1/tau)``."""
    s = _as_complex(s)
    out = _kernel_prefactor(p) / (_s_alpha(s, p.alpha) + 1.0 / p.tau)
    return out[()] if out.ndim == 0 else out
