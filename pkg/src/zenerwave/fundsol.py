"""Fundamental solution of the fractional Zener wave equation.

The fundamental solution ``S`` has Laplace image

.. math::

    \\tilde S(x, s) = \\frac{\\sqrt{r(s)}}{2s}\\, e^{-|x| s \\sqrt{r(s)}},
    \\qquad r(s) = \\frac{1 + \\tau s^\\alpha}{1 + s^\\alpha},

and is supported in the cone ``|x| < t / sqrt(tau)``. Collapsing the Bromwich
contour onto the negative real axis gives, inside the cone,

.. math::

    S(x, t) = \\frac12 + \\frac{1}{2\\pi} \\int_0^\\infty
        \\operatorname{Im}\\left[\\sqrt{r_+(q)}\\, e^{-q (t - |x| \\sqrt{r_+(q)})}\\right]
        \\frac{dq}{q},
    \\qquad r_+(q) = \\frac{1 + \\tau q^\\alpha e^{i\\alpha\\pi}}{1 + q^\\alpha e^{i\\alpha\\pi}}.

Two evaluation routes are used.

Route ``"A"``
    The real-axis integral above. The factor ``exp(q |x| Re sqrt(r_+))`` can
    grow by many orders of magnitude before the ``exp(-q t)`` decay takes over,
    and the final value is then a small difference of huge numbers: about
    ``exp(E) * 1e-16`` is lost for a peak growth exponent ``E``.
Route ``"B"``
    The Bromwich integral itself on a vertical line ``Re s = sigma``, with
    ``sigma`` placed at the minimum of the integrand modulus. It has no
    cancellation, but its integrand decays only like
    ``exp(-c |x| v**(1 - alpha))`` along the line, so it is unreliable near
    ``x = 0`` and for ``alpha`` close to 1, worse still for ``dS/dt``.

Route A is taken while ``E <= cfg.route_a_preferred``. Beyond that Route B is
taken if its integrand falls by ``cfg.route_b_min_decay`` (natural-log units)
between ``v = 0`` and ``v = 1e6``, and Route A otherwise, up to
``E = cfg.cancellation_limit``. Past that limit Route B is the only option.

The same machinery integrates ``S`` against piecewise-linear hat functions
in closed form, which is what the Cauchy solver convolves with.

The elastic case ``tau = 1`` and the case ``alpha = 0`` have closed forms
``S = H(c t - |x|) / (2 c)`` with ``c = 1`` and ``c = sqrt(2 / (1 + tau))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec

from .zener_kernel import ZenerParams

__all__ = [
    "LEADING_CONSTANT",
    "QuadratureConfig",
    "SpacetimePoint",
    "ConeBoundaryError",
    "integrand",
    "integrand_dt",
    "fundamental_solution",
    "fundsol_dt",
    "sample_fundamental_solution",
    "hat_moments",
    "laplace_image_S",
    "conditioning_exponent",
    "select_routes",
    "classical_speed",
]

# value of the small-circle term; the elastic limit H(t - |x|)/2 pins it at 1/2
LEADING_CONSTANT = 0.5


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and truncation rules for the improper integrals.

    Parameters
    ----------
    rel_tol, abs_tol : float
        Targets handed to the adaptive integrator.
    max_subdivisions : int
        Subinterval budget of the adaptive integrator.
    tail_decay_target : float
        The real-axis integral is truncated where its exponent falls below
        ``-tail_decay_target``.
    cone_margin_min : float
        Point evaluations with ``0 < t - |x| sqrt(tau) < cone_margin_min`` raise
        :class:`ConeBoundaryError`.
    route_a_preferred : float
        Growth exponent up to which Route A is always used.
    route_b_min_decay : float
        Log-decay of the Route B integrand that counts as well resolved.
    cancellation_limit : float
        Largest admissible growth exponent for Route A.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    max_subdivisions: int = 2000
    tail_decay_target: float = 40.0
    cone_margin_min: float = 1e-9
    route_a_preferred: float = 8.0
    route_b_min_decay: float = 35.0
    cancellation_limit: float = 20.0

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")
        if not self.tail_decay_target > 0:
            raise ValueError("tail_decay_target must be positive")
        if self.cone_margin_min < 0:
            raise ValueError("cone_margin_min must be non-negative")


@dataclass(frozen=True)
class SpacetimePoint:
    """A point ``(x, t)`` with ``t >= 0``."""

    x: float
    t: float

    def __post_init__(self) -> None:
        if not self.t >= 0:
            raise ValueError(f"t must be non-negative, got {self.t}")


class ConeBoundaryError(ArithmeticError):
    """Raised for points so close to the cone boundary that the integral stalls."""


def classical_speed(p: ZenerParams) -> float | None:
    """Front speed of the closed-form cases, or None when ``S`` has no jump."""
    if p.tau == 1.0:
        return 1.0
    if p.alpha == 0.0:
        return math.sqrt(2.0 / (1.0 + p.tau))
    return None


# ---------------------------------------------------------------------------
# complex building blocks


def _sqrt_r(s: np.ndarray, p: ZenerParams) -> np.ndarray:
    sa = s**p.alpha
    return np.sqrt((1.0 + p.tau * sa) / (1.0 + sa))


def _sqrt_r_plus(q: np.ndarray, p: ZenerParams) -> np.ndarray:
    # upper lip of the cut, s = q exp(i pi); the square root of r is analytic off the cut
    z = q**p.alpha * np.exp(1j * p.alpha * math.pi)
    return np.sqrt((1.0 + p.tau * z) / (1.0 + z))


def laplace_image_S(x: float, s, p: ZenerParams):
    """Laplace image ``sqrt(r)/(2 s) exp(-|x| s sqrt(r))`` of ``S(x, .)``.

    ``s * sqrt(r(s))`` is used in place of ``sqrt(omega(s))``; the two agree on the
    right half plane and the former stays analytic up to the negative axis.
    """
    s = np.asarray(s, dtype=complex)
    if np.any((s.imag == 0.0) & (s.real <= 0.0)):
        raise ValueError("s lies on the branch cut (-inf, 0]")
    sr = _sqrt_r(s, p)
    out = sr / (2.0 * s) * np.exp(-abs(x) * s * sr)
    return out[()] if out.ndim == 0 else out


def integrand(q, pt: SpacetimePoint, p: ZenerParams):
    """Real-axis integrand of ``S``: ``Im[sqrt(r_+) exp(-q (t - |x| sqrt(r_+)))] / (2 pi q)``."""
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0):
        raise ValueError("integrand needs q > 0")
    sr = _sqrt_r_plus(q, p)
    out = (sr * np.exp(-q * (pt.t - abs(pt.x) * sr))).imag / (2.0 * math.pi * q)
    return out[()] if out.ndim == 0 else out


def integrand_dt(q, pt: SpacetimePoint, p: ZenerParams):
    """Real-axis integrand of ``dS/dt``, i.e. ``-q`` times :func:`integrand`."""
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0):
        raise ValueError("integrand needs q > 0")
    sr = _sqrt_r_plus(q, p)
    out = -(sr * np.exp(-q * (pt.t - abs(pt.x) * sr))).imag / (2.0 * math.pi)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# test-function profiles
#
# Each evaluation target is a test function phi integrated against S(., t):
# a point mass at |x| (kind 0), the hat on [-h, h] (kind 1) or the hat centred
# at m h, m >= 1, together with its mirror image (kind 2). The transform
#     Phi(beta) = int phi(z) exp(beta |z|) dz
# is written as exp(beta z_ref) g(beta), with z_ref the support edge where
# Re(beta z) peaks, so that g stays O(1).

_POINT, _HAT0, _HAT = 0, 1, 2


@dataclass
class _Targets:
    kind: np.ndarray
    z_near: np.ndarray
    z_far: np.ndarray
    h: np.ndarray
    t: np.ndarray

    @property
    def mass(self) -> np.ndarray:
        return np.where(self.kind == _POINT, 1.0, self.h)

    def subset(self, mask: np.ndarray) -> "_Targets":
        return _Targets(self.kind[mask], self.z_near[mask], self.z_far[mask], self.h[mask], self.t[mask])

    def __len__(self) -> int:
        return len(self.kind)


def _expm1_ratio(w: np.ndarray) -> np.ndarray:
    # expm1(w) / w
    out = np.ones_like(w)
    big = np.abs(w) > 1e-8
    out[big] = np.expm1(w[big]) / w[big]
    out[~big] = 1.0 + 0.5 * w[~big]
    return out


def _second_ratio(u: np.ndarray) -> np.ndarray:
    # (exp(u) - 1 - u) / u**2
    out = np.empty_like(u)
    small = np.abs(u) < 0.05
    us = u[small]
    out[small] = 0.5 + us * (1 / 6 + us * (1 / 24 + us * (1 / 120 + us * (1 / 720 + us / 5040))))
    ub = u[~small]
    out[~small] = (np.expm1(ub) - ub) / (ub * ub)
    return out


def _profile(beta: np.ndarray, tg: _Targets, growing: bool) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(z_ref, g)`` with ``Phi(beta) = exp(beta z_ref) g``.

    ``growing`` is True when ``Re beta >= 0`` (real-axis route) and False when
    ``Re beta <= 0`` (vertical-line route, ``beta = -lambda``).
    """
    g = np.ones_like(beta)
    z_ref = tg.z_far if growing else tg.z_near
    u = beta * tg.h
    hat = tg.kind == _HAT
    if np.any(hat):
        w = -u[hat] if growing else u[hat]
        g[hat] = tg.h[hat] * _expm1_ratio(w) ** 2
    hat0 = tg.kind == _HAT0
    if np.any(hat0):
        u0 = u[hat0]
        h0 = tg.h[hat0]
        if growing:
            # e^{-u} (e^u - 1 - u) / u^2 without forming e^u
            small = np.abs(u0) < 1.0
            us = np.where(small, u0, 0.0)
            ub = np.where(small, 1.0, u0)
            g[hat0] = 2.0 * h0 * np.where(
                small,
                np.exp(-us) * _second_ratio(us),
                (-np.expm1(-ub) - ub * np.exp(-ub)) / (ub * ub),
            )
        else:
            g[hat0] = 2.0 * h0 * _second_ratio(u0)
    return z_ref, g


# ---------------------------------------------------------------------------
# route selection


_Q_SCAN = np.geomspace(1e-6, 1e9, 800)


def _growth_profile(z: np.ndarray, t: np.ndarray, p: ZenerParams) -> tuple[np.ndarray, np.ndarray]:
    """Exponent ``E(q) = -q (t - z Re sqrt(r_+(q)))`` on a per-target scan grid."""
    q = _Q_SCAN[None, :] / t[:, None]
    sr = _sqrt_r_plus(q, p)
    return q, -q * (t[:, None] - z[:, None] * sr.real)


def conditioning_exponent(x, t, p: ZenerParams) -> np.ndarray:
    """Peak growth exponent of the real-axis integrand at ``(x, t)``.

    Route A loses about ``exp(E) * 1e-16`` in absolute accuracy.
    """
    x = np.atleast_1d(np.abs(np.asarray(x, dtype=float)))
    t = np.broadcast_to(np.asarray(t, dtype=float), x.shape)
    _, e = _growth_profile(x, np.asarray(t, dtype=float), p)
    return e.max(axis=1)


def _route_a_limits(tg: _Targets, p: ZenerParams, cfg: QuadratureConfig):
    """Return (E, admissible, q_max) for Route A on each target."""
    q, e = _growth_profile(tg.z_far, tg.t, p)
    e_max = e.max(axis=1)
    peak = e.argmax(axis=1)
    below = (e < -cfg.tail_decay_target) & (np.arange(q.shape[1])[None, :] > peak[:, None])
    reached = below.any(axis=1)
    first = np.where(reached, below.argmax(axis=1), q.shape[1] - 1)
    q_max = q[np.arange(len(tg)), first]
    d = tg.t - tg.z_far * math.sqrt(p.tau)
    ok = reached & (e_max <= cfg.cancellation_limit) & (d > 0)
    return e_max, ok, q_max


def _route_b_decay(tg: _Targets, p: ZenerParams, derivative: bool) -> np.ndarray:
    """Drop of ``log |integrand|`` of Route B from ``v = 0`` to ``v = 1e6``.

    Uses the point integrand at ``z_near``; the hat profiles only add decay.
    """
    sigma = _route_b_sigma(tg, p)

    def log_mod(v: float) -> np.ndarray:
        s = sigma * (1.0 + 1j * v)
        sr = _sqrt_r(s, p)
        val = np.log(np.abs(sr)) + (s * (tg.t - sr * tg.z_near)).real
        return val if derivative else val - np.log(np.abs(s))

    return log_mod(0.0) - log_mod(1e6)


def _choose_routes(tg: _Targets, p: ZenerParams, cfg: QuadratureConfig, derivative: bool):
    """Return (use_a, q_max) per target."""
    e_max, ok, q_max = _route_a_limits(tg, p, cfg)
    use_a = ok & (e_max <= cfg.route_a_preferred)
    band = ok & ~use_a
    if band.any():
        decay = _route_b_decay(tg.subset(band), p, derivative)
        use_a[np.flatnonzero(band)[decay < cfg.route_b_min_decay]] = True
    return use_a, q_max


def select_routes(x, t, p: ZenerParams, cfg: QuadratureConfig | None = None, derivative: bool = False) -> np.ndarray:
    """Route label per point: ``"zero"``, ``"classical"``, ``"A"`` or ``"B"``."""
    cfg = cfg or QuadratureConfig()
    x, t = np.broadcast_arrays(np.abs(np.asarray(x, dtype=float)), np.asarray(t, dtype=float))
    x = x.ravel()
    t = t.ravel()
    out = np.full(x.shape, "B", dtype="<U9")
    outside = x * math.sqrt(p.tau) >= t
    if classical_speed(p) is not None:
        out[:] = "classical"
        out[outside] = "zero"
        return out
    tg = _Targets(np.zeros(x.shape, int), x, x, np.zeros(x.shape), t)
    use_a, _ = _choose_routes(tg, p, cfg, derivative)
    out[use_a] = "A"
    out[outside] = "zero"
    return out


# ---------------------------------------------------------------------------
# the two routes


def _quad(f, lo, hi, cfg: QuadratureConfig) -> np.ndarray:
    val, _ = quad_vec(
        f,
        lo,
        hi,
        epsabs=cfg.abs_tol,
        epsrel=cfg.rel_tol,
        limit=cfg.max_subdivisions,
        norm="max",
    )
    return np.asarray(val)


def _route_a(tg: _Targets, q_max: np.ndarray, p: ZenerParams, cfg: QuadratureConfig, derivative: bool, c0: float):
    a = p.alpha
    q1 = np.minimum(1.0 / tg.t, q_max)
    log_span = np.log(q_max / q1)

    def core(q: np.ndarray) -> np.ndarray:
        # integrand of S (times q) or of dS/dt
        sr = _sqrt_r_plus(q, p)
        beta = q * sr
        z_ref, g = _profile(beta, tg, growing=True)
        val = (sr * g * np.exp(-q * tg.t + beta * z_ref)).imag / (2.0 * math.pi)
        return -q * val if derivative else val

    def near(v: float) -> np.ndarray:
        # q = q1 v**(1/a): dq/q = dv / (a v), absorbs the q**(a - 1) endpoint
        if v <= 0.0:
            return np.zeros(len(tg))
        q = q1 * v ** (1.0 / a)
        return core(q) / (a * v)

    def far(w: float) -> np.ndarray:
        # q = q1 exp(w log_span): dq/q = log_span dw
        q = q1 * np.exp(w * log_span)
        return core(q) * log_span

    total = _quad(near, 0.0, 1.0, cfg) + _quad(far, 0.0, 1.0, cfg)
    if derivative:
        return total
    return c0 * tg.mass + total


def _route_b_sigma(tg: _Targets, p: ZenerParams) -> np.ndarray:
    # minimize the modulus of the integrand at y = 0 over sigma
    grid = np.geomspace(0.05, 1e6, 500)[None, :] / tg.t[:, None]
    sr = _sqrt_r(grid.astype(complex), p).real
    phi = grid * (tg.t[:, None] - tg.z_near[:, None] * sr) + np.log(sr / (2.0 * grid))
    return grid[np.arange(len(tg)), phi.argmin(axis=1)]


def _route_b(tg: _Targets, p: ZenerParams, cfg: QuadratureConfig, derivative: bool):
    sigma = _route_b_sigma(tg, p)

    def f(v: float) -> np.ndarray:
        s = sigma * (1.0 + 1j * v)
        sr = _sqrt_r(s, p)
        lam = s * sr
        z_ref, g = _profile(-lam, tg, growing=False)
        val = 0.5 * sr * g * np.exp(s * tg.t - lam * z_ref)
        if not derivative:
            val = val / s
        return sigma * val.real / math.pi

    return _quad(f, 0.0, np.inf, cfg)


def _classical(tg: _Targets, speed: float, derivative: bool, c0: float) -> np.ndarray:
    """Closed forms for ``S = 2 c0 H(c t - |x|) / (2 c)``."""
    amp = 2.0 * c0 / (2.0 * speed)
    front = speed * tg.t
    out = np.zeros(len(tg))
    pt = tg.kind == _POINT
    hat = ~pt
    if derivative:
        # d/dt int_{|z| < ct} phi = c (phi(ct) + phi(-ct)); zero off the front for points
        hh = tg.h[hat]
        centre = np.where(tg.kind[hat] == _HAT0, 0.0, 0.5 * (tg.z_near[hat] + tg.z_far[hat]))
        phi = np.clip(1.0 - np.abs(front[hat] - centre) / hh, 0.0, None)
        mirror = np.where(tg.kind[hat] == _HAT0, 2.0, 1.0)
        out[hat] = amp * speed * phi * mirror
        return out
    out[pt] = np.where(tg.z_far[pt] < front[pt], amp, 0.0)
    hh = tg.h[hat]
    centre = np.where(tg.kind[hat] == _HAT0, 0.0, 0.5 * (tg.z_near[hat] + tg.z_far[hat]))
    # integral of the hat over (-inf, front], mirrored hats see the same front
    cdf = _hat_cdf(front[hat], centre, hh)
    total = np.where(tg.kind[hat] == _HAT0, 2.0 * cdf - hh, cdf)
    out[hat] = amp * total
    return out


def _hat_cdf(z: np.ndarray, c: np.ndarray, h: np.ndarray) -> np.ndarray:
    # integral of max(0, 1 - |y - c|/h) over y < z
    left = np.clip(z - (c - h), 0.0, 2.0 * h)
    return np.where(left <= h, left**2 / (2 * h), h - (2 * h - left) ** 2 / (2 * h))


def _evaluate(tg: _Targets, p: ZenerParams, cfg: QuadratureConfig, derivative: bool, c0: float) -> np.ndarray:
    out = np.zeros(len(tg))
    speed = classical_speed(p)
    if speed is not None:
        return _classical(tg, speed, derivative, c0)
    live = tg.z_near * math.sqrt(p.tau) < tg.t
    if not live.any():
        return out
    idx = np.flatnonzero(live)
    sub = tg.subset(live)
    ok, q_max = _choose_routes(sub, p, cfg, derivative)
    # group by time so that one adaptive integration serves targets of similar scale
    for route_ok in (True, False):
        for t_val in np.unique(sub.t):
            sel = (ok == route_ok) & (sub.t == t_val)
            if not sel.any():
                continue
            part = sub.subset(sel)
            if route_ok:
                out[idx[sel]] = _route_a(part, q_max[sel], p, cfg, derivative, c0)
            else:
                out[idx[sel]] = _route_b(part, p, cfg, derivative)
    return out


# ---------------------------------------------------------------------------
# public evaluators


def _point_targets(x, t, p: ZenerParams, cfg: QuadratureConfig):
    x, t = np.broadcast_arrays(np.abs(np.asarray(x, dtype=float)), np.asarray(t, dtype=float))
    if np.any(t <= 0):
        raise ValueError("the fundamental solution is evaluated for t > 0")
    shape = x.shape
    x = x.ravel()
    t = t.ravel()
    d = t - x * math.sqrt(p.tau)
    near = (d > 0) & (d < cfg.cone_margin_min)
    if classical_speed(p) is None and near.any():
        i = int(np.flatnonzero(near)[0])
        raise ConeBoundaryError(
            f"(x, t) = ({x[i]}, {t[i]}) lies {d[i]:.3g} inside the cone boundary; "
            "the integral cannot be resolved there"
        )
    return _Targets(np.zeros(x.shape, int), x, x, np.zeros(x.shape), t), shape


def sample_fundamental_solution(
    x,
    t,
    p: ZenerParams,
    cfg: QuadratureConfig | None = None,
    derivative: bool = False,
    c0: float = LEADING_CONSTANT,
) -> np.ndarray:
    """Vectorized ``S(x, t)`` (or ``dS/dt`` with ``derivative=True``).

    ``x`` and ``t`` broadcast against each other. Points outside the cone
    (``|x| sqrt(tau) >= t``) give exactly 0.

    Parameters
    ----------
    c0 : float
        Constant term of the real-axis formula. Only meant to be changed for
        fault-injection checks of the verification harness.

    Raises
    ------
    ConeBoundaryError
        If a point lies inside the cone by less than ``cfg.cone_margin_min``.
    """
    cfg = cfg or QuadratureConfig()
    tg, shape = _point_targets(x, t, p, cfg)
    return _evaluate(tg, p, cfg, derivative, c0).reshape(shape)


def fundamental_solution(pt: SpacetimePoint, p: ZenerParams, cfg: QuadratureConfig | None = None) -> float:
    """``S(x, t)`` at a single point; see :func:`sample_fundamental_solution`."""
    return float(sample_fundamental_solution(pt.x, pt.t, p, cfg))


def fundsol_dt(pt: SpacetimePoint, p: ZenerParams, cfg: QuadratureConfig | None = None) -> float:
    """``dS/dt (x, t)`` at a single point.

    In the closed-form cases the derivative is a moving delta; away from the
    front it is 0, which is what is returned.
    """
    return float(sample_fundamental_solution(pt.x, pt.t, p, cfg, derivative=True))


def hat_moments(
    t: float,
    n: int,
    h: float,
    p: ZenerParams,
    cfg: QuadratureConfig | None = None,
    derivative: bool = False,
    c0: float = LEADING_CONSTANT,
) -> np.ndarray:
    """Integrals of ``S(., t)`` against the hat functions of a uniform grid.

    Returns ``k_0, ..., k_{n-1}`` with ``k_m = int S(z, t) phi(z - m h) dz`` and
    ``phi(z) = max(0, 1 - |z|/h)``. Since ``S`` is even in ``x``, ``k_{-m} = k_m``.
    Convolving node values with ``k`` is then the exact convolution of ``S``
    with the piecewise-linear interpolant of those values.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    if not h > 0:
        raise ValueError("h must be positive")
    cfg = cfg or QuadratureConfig()
    m = np.arange(n)
    kind = np.where(m == 0, _HAT0, _HAT)
    z_near = np.where(m == 0, 0.0, (m - 1) * h)
    z_far = (m + 1) * h
    tg = _Targets(kind, z_near, z_far, np.full(n, float(h)), np.full(n, float(t)))
    return _evaluate(tg, p, cfg, derivative, c0)
