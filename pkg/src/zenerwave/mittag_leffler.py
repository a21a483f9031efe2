"""Two-parameter Mittag-Leffler function on the real line.

.. math::

    E_{a,b}(z) = \\sum_{k=0}^{\\infty} \\frac{z^k}{\\Gamma(ak + b)}

Three evaluation paths are used:

* the power series in double precision when it converges quickly and without
  cancellation (small ``|z|`` or ``z > 0``);
* for ``z < 0`` and ``0 < a < 1``, the integral along the branch cut of the
  Laplace image ``s**(a-b) / (s**a - z)``, which is free of cancellation;
* for ``z < 0`` and ``a > 1``, the large-argument expansion (residues at the
  poles plus the algebraic tail) when it reaches double precision;
* otherwise the power series in extended precision with the working precision
  sized to the largest term.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy import integrate
from scipy.special import gammaln, rgamma

_SERIES_MAX_TERMS = 20000
_EPS = np.finfo(float).eps


def mittag_leffler(a: float, b: float, z):
    """Evaluate :math:`E_{a,b}(z)` for real ``z``.

    Parameters
    ----------
    a : float
        First parameter, ``a > 0``.
    b : float
        Second parameter (any real).
    z : float or array_like
        Real argument(s).

    Returns
    -------
    float or numpy.ndarray

    Raises
    ------
    ValueError
        If ``a <= 0`` or the requested regime has no convergent evaluation path.
    OverflowError
        If the result exceeds the double-precision range.
    """
    a = float(a)
    b = float(b)
    if not a > 0:
        raise ValueError(f"Mittag-Leffler parameter a must be positive, got {a}")
    z_arr = np.asarray(z, dtype=float)
    if z_arr.ndim == 0:
        return _ml_scalar(a, b, float(z_arr))
    return np.vectorize(lambda v: _ml_scalar(a, b, v), otypes=[float])(z_arr)


def _ml_scalar(a: float, b: float, z: float) -> float:
    if not math.isfinite(z):
        raise ValueError("Mittag-Leffler argument must be finite")
    if z == 0.0:
        return float(rgamma(b))
    if z > 0:
        # leading growth is exp(z**(1/a))
        if z ** (1.0 / a) > 700.0:
            raise OverflowError(f"E_{{{a},{b}}}({z}) exceeds double precision")
        return _series(a, b, z)
    value = _series_if_benign(a, b, z)
    if value is not None:
        return value
    if a < 1.0:
        return _negative_axis_integral(a, b, -z)
    if a == 1.0 and b == 1.0:
        return math.exp(z)
    if a > 1.0:
        value = _asymptotic_negative(a, b, z)
        if value is not None:
            return value
    return _series_mp(a, b, z)


def _term_logs(a: float, b: float, logz: float, n: int) -> np.ndarray:
    k = np.arange(n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return k * logz - gammaln(a * k + b)


def _n_terms(a: float, b: float, absz: float, extra_digits: float = 0.0) -> int | None:
    """Number of series terms needed, or None if too many.

    Terms are kept until they fall ``extra_digits`` decades below machine
    precision relative to the largest term.
    """
    n = 64
    logz = math.log(absz)
    drop = math.log(_EPS) - 5.0 - extra_digits * math.log(10.0)
    while n <= _SERIES_MAX_TERMS:
        logs = _term_logs(a, b, logz, n)
        finite = np.isfinite(logs)
        peak = logs[finite].max() if finite.any() else 0.0
        # terms decay monotonically once a*k + b is past the gamma minimum
        if finite[-1] and logs[-1] < peak + drop and logs[-1] < logs[-2]:
            return n
        n *= 2
    return None


def _peak_log10(a: float, b: float, absz: float, n: int) -> float:
    logs = _term_logs(a, b, math.log(absz), n)
    return float(np.nanmax(np.where(np.isfinite(logs), logs, np.nan))) / math.log(10.0)


def _terms(a: float, b: float, z: float, n: int) -> np.ndarray:
    # log-domain magnitudes keep z**k and 1/Gamma from overflowing separately
    k = np.arange(n, dtype=float)
    arg = a * k + b
    sign = np.sign(rgamma(arg)) * np.sign(z) ** k
    with np.errstate(over="ignore"):
        mag = np.exp(k * math.log(abs(z)) - gammaln(arg))
    return np.where(sign == 0.0, 0.0, sign * mag)


def _series(a: float, b: float, z: float) -> float:
    n = _n_terms(a, b, abs(z))
    if n is None:
        raise ValueError(f"power series for E_{{{a},{b}}}({z}) does not converge in reach")
    return math.fsum(_terms(a, b, z, n))


def _series_if_benign(a: float, b: float, z: float) -> float | None:
    """Double-precision series for ``z < 0`` when cancellation is mild."""
    n = _n_terms(a, b, abs(z))
    # with terms above ~10 the rounding error is no longer small next to the result
    if n is None or _peak_log10(a, b, abs(z), n) > 1.0:
        return None
    terms = _terms(a, b, z, n)
    total = math.fsum(terms)
    biggest = np.abs(terms).max()
    if total != 0.0 and biggest <= 1e3 * abs(total):
        return total
    return None


def _series_mp(a: float, b: float, z: float) -> float:
    n0 = _n_terms(a, b, abs(z))
    if n0 is None:
        raise ValueError(f"power series for E_{{{a},{b}}}({z}) does not converge in reach")
    peak = max(_peak_log10(a, b, abs(z), n0), 0.0)
    # the result can be as small as 10**-peak, so resolve that many extra digits
    n = _n_terms(a, b, abs(z), extra_digits=peak)
    if n is None:
        raise ValueError(f"power series for E_{{{a},{b}}}({z}) does not converge in reach")
    dps = int(2 * peak) + 30
    with mpmath.workdps(dps):
        zm = mpmath.mpf(z)
        am = mpmath.mpf(a)
        bm = mpmath.mpf(b)
        total = mpmath.mpf(0)
        term_z = mpmath.mpf(1)
        for k in range(n):
            total += term_z * mpmath.rgamma(am * k + bm)
            term_z *= zm
        return float(total)


def _asymptotic_negative(a: float, b: float, z: float) -> float | None:
    """Large-argument expansion for ``z < 0`` and ``a > 1``.

    Residues at the roots of ``s**a = z`` inside the principal sheet plus the
    algebraic series ``-sum z**-k / Gamma(b - a k)``, truncated at its smallest
    term. Returns None when that term is not below double precision.
    """
    x = -z
    root = x ** (1.0 / a)
    poles = 0.0
    m = 0
    while (2 * m + 1) * math.pi < a * math.pi:
        phase = (2 * m + 1) * math.pi / a
        s = root * complex(math.cos(phase), math.sin(phase))
        # the pole pair at +-phase contributes twice the real part
        poles += 2.0 * (s ** (1.0 - b) * np.exp(s)).real / a
        m += 1
    tail = 0.0
    smallest = math.inf
    for k in range(1, 200):
        arg = b - a * k
        size = math.exp(-k * math.log(x) - gammaln(arg))
        sign = float(np.sign(rgamma(arg)))
        if sign == 0.0:
            # b - a k at a pole of Gamma: the term vanishes and says nothing
            # about convergence
            continue
        term = -((-1.0) ** k) * sign * size
        if size > smallest:
            break
        smallest = size
        tail += term
    total = poles + tail
    # near-poles of 1/Gamma can make single terms tiny; the truncation error of
    # the expansion is still of order exp(-|z|**(1/a))
    error = max(smallest, math.exp(-root))
    if error > 1e-16 * max(abs(total), 1e-300):
        return None
    return total


def _negative_axis_integral(a: float, b: float, x: float) -> float:
    """:math:`E_{a,b}(-x)` for ``x > 0`` and ``0 < a < 1``.

    Uses ``t**(b-1) E_{a,b}(-x t**a) = L^{-1}[s**(a-b) / (s**a + x)]`` at ``t = 1``
    collapsed onto the negative real axis. The collapse is valid for
    ``0 < b < 1 + a``; other ``b`` are brought into range by the recurrences
    ``E_{a,b} = 1/Gamma(b) + z E_{a,a+b}`` and ``E_{a,b} = (E_{a,b-a} - 1/Gamma(b-a)) / z``.
    """
    z = -x
    if b <= 0.0:
        return float(rgamma(b)) + z * _negative_axis_integral(a, b + a, x)
    if b >= 1.0 + a:
        return (_negative_axis_integral(a, b - a, x) - float(rgamma(b - a))) / z

    sab = math.sin(math.pi * (a - b))
    sb = math.sin(math.pi * b)
    ca = math.cos(math.pi * a)
    p = a - b  # r**p endpoint behaviour, p > -1

    def density(r):
        ra = r**a
        return (ra * sb - x * sab) / (x * x + 2.0 * x * ra * ca + ra * ra)

    # r = w**m removes the r**p endpoint singularity: integrand ~ w**(m(p+1)-1)
    m = 1.0 / (p + 1.0)

    def f(w):
        if w <= 0.0:
            return 0.0
        r = w**m
        return m * w ** (m * (p + 1.0) - 1.0) * math.exp(-r) * density(r)

    # scale of the denominator minimum, r**a ~ x
    r_peak = x ** (1.0 / a)
    breaks = sorted({1.0, min(r_peak, 60.0)})
    w_breaks = [rb ** (1.0 / m) for rb in breaks]
    w_end = 80.0 ** (1.0 / m)
    edges = [0.0] + [wb for wb in w_breaks if 0.0 < wb < w_end] + [w_end]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=1e-13, limit=400)
        total += val
    return total / math.pi
