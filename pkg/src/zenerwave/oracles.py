"""Independent reference computations.

* :func:`bromwich_invert` inverts a Laplace image on a vertical line with the
  trapezoidal (Fourier series) rule and Wynn's epsilon acceleration.
* :func:`forward_laplace` is the trapezoidal Laplace transform of samples.
* :func:`dalembert` is the classical wave solution for linearly interpolated data.
* :func:`fdtd_solve` time-steps the displacement/stress system directly, with
  the constitutive law discretized by Grünwald-Letnikov sums.

None of these share code with the real-axis evaluation in :mod:`.fundsol`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fraccalc import TimeGrid, gl_weights
from .zener_kernel import ZenerParams

__all__ = [
    "bromwich_invert",
    "wynn_epsilon",
    "forward_laplace",
    "dalembert",
    "FDTDResult",
    "fdtd_solve",
    "gl_stress_update",
]


# ---------------------------------------------------------------------------
# Laplace inversion


def wynn_epsilon(partial_sums) -> float:
    """Accelerated limit of a sequence by Wynn's epsilon algorithm.

    Returns the deepest even-column entry that is finite.
    """
    e_prev = np.zeros(len(partial_sums))
    e_cur = np.asarray(partial_sums, dtype=float).copy()
    best = float(e_cur[-1])
    col = 0
    while len(e_cur) > 1:
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            diff = np.diff(e_cur)
            e_next = e_prev[1 : len(e_cur)] + 1.0 / diff
        e_prev, e_cur = e_cur, e_next
        col += 1
        if col % 2 == 0:
            if not np.all(np.isfinite(e_cur)):
                break
            best = float(e_cur[-1])
    return best


def bromwich_invert(
    F,
    t: float,
    a: float | None = None,
    h: float | None = None,
    n_terms: int = 400,
    accel_terms: int = 40,
) -> float:
    """Invert a Laplace image at time ``t``.

    The Bromwich integral on ``Re s = a`` is discretized with step ``h`` in
    ``Im s``. Conjugate symmetry ``F(conj s) = conj F(s)`` folds it onto
    ``Im s >= 0``:

    .. math::

        f(t) \\approx \\frac{h e^{a t}}{\\pi}\\left[\\frac{F(a)}{2}
            + \\sum_{k=1}^{N} \\operatorname{Re}\\left(F(a + i k h) e^{i k h t}\\right)\\right].

    The rule is the Fourier series of ``f e^{-a t}`` on a period ``2 pi / h``;
    its aliasing error is about ``exp(-2 pi a / h)``. The partial sums are
    accelerated with Wynn's epsilon algorithm.

    Parameters
    ----------
    F : callable
        Vectorized image ``F(s)`` for complex arrays ``s``.
    t : float
        Time, ``t > 0``.
    a : float, optional
        Abscissa of the line. Defaults to ``7.5 / t``.
    h : float, optional
        Step along the line. Defaults to ``pi / (2 t)``.
    n_terms : int
        Number of terms ``N``.
    accel_terms : int
        Number of trailing partial sums handed to the accelerator.

    Returns
    -------
    float

    Raises
    ------
    ValueError
        If the terms do not decay along the line (``F`` is not an image of
        an ordinary function, for example ``F = 1``).
    """
    if not t > 0:
        raise ValueError("t must be positive")
    period = 2.0 * t
    a = 15.0 / period if a is None else float(a)
    h = math.pi / period if h is None else float(h)
    if not (a > 0 and h > 0 and n_terms > 8):
        raise ValueError("need a > 0, h > 0 and n_terms > 8")
    k = np.arange(n_terms + 1)
    s = a + 1j * k * h
    vals = np.asarray(F(s), dtype=complex)
    mags = np.abs(vals)
    if not np.all(np.isfinite(mags)):
        raise ValueError("image is not finite on the inversion line")
    head = mags[1 : n_terms // 4 + 1].max()
    tail = mags[-max(n_terms // 8, 2) :].max()
    if head > 0 and tail > 0.5 * head:
        raise ValueError("image does not decay along the inversion line")
    terms = (vals * np.exp(1j * k * h * t)).real
    terms[0] *= 0.5
    partial = np.cumsum(terms) * h * math.exp(a * t) / math.pi
    m = min(accel_terms, len(partial))
    return wynn_epsilon(partial[-m:])


# ---------------------------------------------------------------------------
# forward transform


def forward_laplace(samples, grid: TimeGrid, s: complex, tail_tol: float = 1e-8) -> complex:
    """Trapezoidal ``int_0^T y(t) exp(-s t) dt`` over the samples of ``grid``.

    Raises
    ------
    ValueError
        If ``Re s <= 0``, the lengths disagree, or the grid is too short: the
        neglected tail, estimated as ``max|y| exp(-Re s T) / Re s``, exceeds
        ``tail_tol`` times the result.
    """
    y = np.asarray(samples, dtype=float)
    if len(y) != len(grid):
        raise ValueError("samples do not match the time grid")
    s = complex(s)
    if not s.real > 0:
        raise ValueError("forward_laplace needs Re s > 0")
    t = grid.times
    f = y * np.exp(-s * t)
    val = grid.dt * (f.sum() - 0.5 * (f[0] + f[-1]))
    tail = np.abs(y[-max(1, len(y) // 10) :]).max() * math.exp(-s.real * grid.t_end) / s.real
    if tail > tail_tol * max(abs(val), 1e-300):
        raise ValueError(
            f"time grid too short for Re s = {s.real}: estimated tail {tail:.2e}"
        )
    return complex(val)


# ---------------------------------------------------------------------------
# classical wave


def _padded(x: np.ndarray, v: np.ndarray):
    # zero extension that keeps the interpolant continuous
    dx = x[1] - x[0]
    xp = np.concatenate(([x[0] - dx], x, [x[-1] + dx]))
    vp = np.concatenate(([0.0], v, [0.0]))
    return xp, vp


def _linear_antiderivative(x: np.ndarray, v: np.ndarray, at: np.ndarray) -> np.ndarray:
    # int_{-inf}^{at} of the piecewise-linear interpolant (zero outside)
    xp, vp = _padded(x, v)
    cum = np.concatenate(([0.0], np.cumsum(0.5 * (vp[1:] + vp[:-1]) * np.diff(xp))))
    at = np.asarray(at, dtype=float)
    j = np.clip(np.searchsorted(xp, at, side="right") - 1, 0, len(xp) - 2)
    dxp = xp[j + 1] - xp[j]
    frac = np.clip((at - xp[j]) / dxp, 0.0, 1.0)
    slope = vp[j + 1] - vp[j]
    part = dxp * (vp[j] * frac + 0.5 * slope * frac**2)
    out = cum[j] + part
    out = np.where(at <= xp[0], 0.0, out)
    return np.where(at >= xp[-1], cum[-1], out)


def dalembert(u0, v0, x_nodes, c: float, x, t):
    """Classical solution ``(u0(x-ct) + u0(x+ct))/2 + (1/2c) int_{x-ct}^{x+ct} v0``.

    ``u0`` and ``v0`` are node values on the uniform grid ``x_nodes``; they are
    interpolated linearly and extended by zero (the interpolant ramps to zero
    over one cell beyond each end).

    Parameters
    ----------
    u0, v0 : array_like
        Node values.
    x_nodes : array_like
        Uniform grid.
    c : float
        Wave speed, ``c > 0``.
    x, t : float or array_like
        Evaluation points; broadcast against each other.
    """
    if not c > 0:
        raise ValueError("wave speed must be positive")
    xn = np.asarray(x_nodes, dtype=float)
    u0 = np.asarray(u0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    if not (u0.shape == v0.shape == xn.shape):
        raise ValueError("u0, v0 and x_nodes must have the same length")
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    xp, up = _padded(xn, u0)
    lo = x - c * t
    hi = x + c * t
    disp = 0.5 * (np.interp(lo, xp, up, left=0.0, right=0.0) + np.interp(hi, xp, up, left=0.0, right=0.0))
    vel = (_linear_antiderivative(xn, v0, hi) - _linear_antiderivative(xn, v0, lo)) / (2.0 * c)
    out = disp + vel
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# finite differences


def gl_stress_update(eps_hist: np.ndarray, sig_hist: np.ndarray, n: int, weights: np.ndarray, p: ZenerParams, dt: float) -> np.ndarray:
    """Stress at step ``n`` from the Grünwald-Letnikov constitutive law.

    Solves ``sigma_n + tau D^a sigma_n = eps_n + D^a eps_n`` for ``sigma_n``, where
    ``D^a y_n = dt**-a sum_{k=0}^{n} w_k y_{n-k}``. Rows ``0..n`` of ``eps_hist``
    and rows ``0..n-1`` of ``sig_hist`` are used.
    """
    if p.alpha == 0.0:
        # GL^0 is the identity: sigma (1 + tau) = 2 eps
        return 2.0 * eps_hist[n] / (1.0 + p.tau)
    c = dt ** (-p.alpha)
    rhs = eps_hist[n] * (1.0 + c)
    if n:
        w = weights[1 : n + 1][::-1]
        rhs = rhs + c * (w @ (eps_hist[:n] - p.tau * sig_hist[:n]))
    return rhs / (1.0 + p.tau * c)


@dataclass
class FDTDResult:
    """Output of :func:`fdtd_solve`.

    Attributes
    ----------
    times : numpy.ndarray
        ``(n_steps + 1,)`` sample times.
    u : numpy.ndarray
        ``(n_steps + 1, n)`` displacement at the nodes.
    eps, sigma : numpy.ndarray
        ``(n_steps + 1, n - 1)`` strain and stress at cell midpoints.
    """

    times: np.ndarray
    u: np.ndarray
    eps: np.ndarray
    sigma: np.ndarray


def fdtd_solve(
    u0,
    v0,
    dx: float,
    p: ZenerParams,
    dt: float,
    n_steps: int,
    safety_factor: float = 1.0,
    force=None,
    memory_budget: float = 2e9,
) -> FDTDResult:
    """Leapfrog scheme for ``u_tt = sigma_x`` with the fractional Zener law.

    Displacement lives at the nodes, strain and stress at cell midpoints. The
    stress at each step solves the GL-discretized constitutive law, which puts
    weight 1 on the current sample and so needs one scalar division per cell.
    The end nodes are held at zero; the domain must be wide enough that the
    front never reaches them.

    Parameters
    ----------
    u0, v0 : array_like
        Initial displacement and velocity at the nodes.
    dx : float
        Node spacing.
    p : ZenerParams
    dt : float
        Time step, at most ``safety_factor * dx * sqrt(tau)``.
    n_steps : int
        Number of steps.
    force : callable, optional
        ``force(t)`` returning body force node values at time ``t``.
    memory_budget : float
        Bytes allowed for the stored strain and stress histories.

    Raises
    ------
    ValueError
        On a step violating the stability bound.
    MemoryError
        If the histories would exceed ``memory_budget``.
    """
    u0 = np.asarray(u0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    if u0.shape != v0.shape or u0.ndim != 1:
        raise ValueError("u0 and v0 must be 1-D arrays of equal length")
    limit = safety_factor * dx * math.sqrt(p.tau)
    if dt > limit * (1.0 + 1e-12):
        raise ValueError(f"dt = {dt} exceeds the stability bound {limit}")
    n = len(u0)
    need = 2.0 * (n_steps + 1) * (n - 1) * 8.0
    if need > memory_budget:
        raise MemoryError(f"strain/stress history needs {need:.3g} bytes")
    weights = gl_weights(p.alpha, n_steps)
    u = np.zeros((n_steps + 1, n))
    eps = np.zeros((n_steps + 1, n - 1))
    sig = np.zeros((n_steps + 1, n - 1))

    def accel(k: int) -> np.ndarray:
        eps[k] = np.diff(u[k]) / dx
        sig[k] = gl_stress_update(eps, sig, k, weights, p, dt)
        a = np.zeros(n)
        a[1:-1] = np.diff(sig[k]) / dx
        if force is not None:
            a[1:-1] += np.asarray(force(k * dt), dtype=float)[1:-1]
        return a

    u[0] = u0
    a0 = accel(0)
    u[1] = u0 + dt * v0 + 0.5 * dt * dt * a0
    u[1, [0, -1]] = 0.0
    for k in range(1, n_steps):
        u[k + 1] = 2.0 * u[k] - u[k - 1] + dt * dt * accel(k)
        u[k + 1, [0, -1]] = 0.0
    eps[n_steps] = np.diff(u[n_steps]) / dx
    sig[n_steps] = gl_stress_update(eps, sig, n_steps, weights, p, dt)
    return FDTDResult(dt * np.arange(n_steps + 1), u, eps, sig)
