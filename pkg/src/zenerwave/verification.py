"""Oracle suite shared by the ``verify`` command and the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .fraccalc import TimeGrid
from .fundsol import (
    LEADING_CONSTANT,
    QuadratureConfig,
    classical_speed,
    laplace_image_S,
    sample_fundamental_solution,
)
from .mittag_leffler import mittag_leffler
from .oracles import bromwich_invert, fdtd_solve, forward_laplace
from .solver import Grid1D, gaussian_data, solve
from .zener_kernel import (
    ZenerParams,
    delta_weight,
    relaxation_kernel_regular,
    sector_margin,
    zener_symbol,
)

__all__ = [
    "CheckResult",
    "check_bromwich",
    "check_classical",
    "check_fdtd",
    "check_sector",
    "check_laplace_roundtrip",
    "check_mittag_leffler",
    "check_kernel_transform",
    "run_suite",
    "interior_lattice",
    "kernel_forward_transform",
]


@dataclass
class CheckResult:
    """Outcome of one oracle comparison.

    ``value`` is an error that must not exceed ``threshold``, or with
    ``lower_bound=True`` a margin that must exceed it.
    """

    name: str
    value: float
    threshold: float
    detail: str = ""
    lower_bound: bool = False

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return False
        if self.lower_bound:
            return bool(self.value > self.threshold)
        return bool(self.value <= self.threshold)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        if self.lower_bound:
            return f"{tag}  {self.name}: margin={self.value:.3e} must exceed {self.threshold:g}{extra}"
        return f"{tag}  {self.name}: error={self.value:.3e} threshold={self.threshold:.1e}{extra}"


def interior_lattice(p: ZenerParams, times=(0.5, 0.75, 1.0, 1.25, 1.5), n_x: int = 5, margin: float = 0.1):
    """``n_x`` positions per time, from 0 to ``margin`` inside the cone."""
    pts = []
    for t in times:
        edge = t / math.sqrt(p.tau) - margin
        for x in np.linspace(0.0, edge, n_x):
            pts.append((float(x), float(t)))
    return pts


def check_bromwich(p: ZenerParams, points=None, cfg: QuadratureConfig | None = None, c0: float = LEADING_CONSTANT) -> CheckResult:
    """Quadrature of ``S`` against Bromwich inversion of its image."""
    points = interior_lattice(p) if points is None else points
    x = np.array([q[0] for q in points])
    t = np.array([q[1] for q in points])
    s_quad = sample_fundamental_solution(x, t, p, cfg, c0=c0)
    s_ref = np.array([bromwich_invert(lambda s, xx=xx: laplace_image_S(xx, s, p), tt) for xx, tt in points])
    err = float(np.abs(s_quad - s_ref).max())
    return CheckResult("fundamental solution vs Bromwich inversion", err, 1e-6, f"{len(points)} points")


def check_classical(c0: float = LEADING_CONSTANT, cfg: QuadratureConfig | None = None) -> CheckResult:
    """``tau = 1``: S is 1/2 inside ``|x| < t`` and 0 outside."""
    p = ZenerParams(0.5, 1.0)
    rng = np.random.default_rng(7)
    t = rng.uniform(0.1, 3.0, 200)
    x = rng.uniform(-4.0, 4.0, 200)
    keep = np.abs(np.abs(x) - t) > 1e-6
    x, t = x[keep], t[keep]
    got = sample_fundamental_solution(x, t, p, cfg, c0=c0)
    want = np.where(np.abs(x) < t, 0.5, 0.0)
    return CheckResult("elastic limit tau=1", float(np.abs(got - want).max()), 1e-8)


def check_fdtd(p: ZenerParams, n: int = 400, t_end: float = 0.5, width: float = 0.2, cfg: QuadratureConfig | None = None, dt: float | None = None) -> CheckResult:
    """Relative L2 gap between the convolution solution and the FDTD scheme."""
    speed = classical_speed(p) or 1.0 / math.sqrt(p.tau)
    half = speed * t_end + 8.0 * width + 0.2
    grid = Grid1D.from_range(-half, half, n)
    data = gaussian_data(grid, width)
    n_steps = n if dt is None else int(math.ceil(t_end / dt))
    step = t_end / n_steps
    bound = grid.dx * math.sqrt(p.tau)
    if step > bound:
        n_steps = int(math.ceil(t_end / bound))
        step = t_end / n_steps
    fd = fdtd_solve(data.u0, data.v0, grid.dx, p, step, n_steps)
    u = solve(data, p, grid, [t_end], cfg)[0]
    err = float(np.linalg.norm(u - fd.u[-1]) / np.linalg.norm(u))
    return CheckResult("convolution solution vs FDTD", err, 0.05, f"{n} nodes x {n_steps} steps, t={t_end}")


def check_sector(p: ZenerParams, samples: int = 10_000) -> CheckResult:
    """omega keeps the sampled right half plane off the cut ``(-inf, 0]``."""
    m = sector_margin(p, samples)
    return CheckResult("sector property of omega", m, 0.0, f"{samples} samples", lower_bound=True)


# (step, end) of each uniform piece after the front; steps grow with distance
_ROUNDTRIP_PIECES = (
    (1e-7, 1e-5),
    (1e-6, 1e-4),
    (1e-5, 1e-3),
    (1e-4, 1e-2),
    (1e-3, 0.1),
    (2.5e-3, 1.0),
    (2e-2, None),
)


def check_laplace_roundtrip(p: ZenerParams, x: float = 0.5, s_values=(1.0, 2.0, 5.0), cfg: QuadratureConfig | None = None, c0: float = LEADING_CONSTANT) -> CheckResult:
    """Forward transform of sampled ``S(x, .)`` against the closed-form image.

    ``S(x, .)`` vanishes before the front time ``t0``, so the samples start
    there and each piece of the transform picks up ``exp(-s t_start)``. The
    profile can rise steeply just behind the front, so the uniform trapezoid
    pieces grade from fine to coarse.
    """
    speed = classical_speed(p)
    t0 = abs(x) / (speed or 1.0 / math.sqrt(p.tau))
    t_end = math.log(1e10) / min(s_values)
    pieces = ((1e-3, None),) if speed is not None else _ROUNDTRIP_PIECES
    totals = np.zeros(len(s_values), dtype=complex)
    start = 0.0
    for dt, stop in pieces:
        n_steps = int(math.ceil((t_end - start) / dt)) if stop is None else int(round((stop - start) / dt))
        grid = TimeGrid(dt, n_steps)
        stop = start + grid.t_end
        # keep the first sample outside the refused boundary layer
        t = t0 + np.maximum(start + grid.times, 1e-7)
        samples = sample_fundamental_solution(x, t, p, cfg, c0=c0)
        last = n_steps == int(math.ceil((t_end - start) / dt))
        for k, s in enumerate(s_values):
            part = forward_laplace(samples, grid, s, tail_tol=1e-8 if last else math.inf)
            totals[k] += part * math.exp(-s * (t0 + start))
        start = stop
    worst = 0.0
    for total, s in zip(totals, s_values):
        want = complex(laplace_image_S(x, s, p))
        worst = max(worst, abs(total - want) / abs(want))
    return CheckResult("Laplace round trip", worst, 1e-4, f"x={x}, s={list(s_values)}")


def check_mittag_leffler() -> CheckResult:
    """``E_{1,1} = exp``, ``E_{2,1}(-x^2) = cos x`` and ``E_{a,b}(0) = 1/Gamma(b)``."""
    z = np.linspace(-20.0, 20.0, 81)
    e1 = np.abs(mittag_leffler(1.0, 1.0, z) / np.exp(z) - 1.0).max()
    xs = np.linspace(0.0, 6.0, 61)
    e2 = np.abs(mittag_leffler(2.0, 1.0, -(xs**2)) - np.cos(xs)).max()
    e3 = 0.0
    for a in (0.1, 0.5, 1.0, 2.5):
        for b in (0.3, 1.0, 2.0, 3.7):
            e3 = max(e3, abs(mittag_leffler(a, b, 0.0) - 1.0 / math.gamma(b)) * math.gamma(b))
    return CheckResult("Mittag-Leffler identities", float(max(e1, e2, e3)), 1e-10)


def kernel_forward_transform(p: ZenerParams, s: float) -> float:
    """``1/tau + int_0^inf k(t) exp(-s t) dt`` by adaptive quadrature.

    The substitution ``t = u**(1/alpha)`` removes the ``t**(alpha - 1)`` endpoint.
    """
    a = p.alpha

    def g(u: float) -> float:
        if u <= 0.0:
            return 0.0
        t = u ** (1.0 / a)
        return float(relaxation_kernel_regular(t, p)) * math.exp(-s * t) * u ** (1.0 / a - 1.0) / a

    u_max = (50.0 / s) ** a
    edges = [0.0, 1e-4 * u_max, 1e-2 * u_max, 0.1 * u_max, u_max]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate.quad(g, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)[0]
    return delta_weight(p) + total


def check_kernel_transform(p: ZenerParams, s_values=None) -> CheckResult:
    """Forward transform of the Mittag-Leffler kernel against the Zener symbol."""
    s_values = np.linspace(0.5, 10.0, 20) if s_values is None else np.asarray(s_values)
    worst = 0.0
    for s in s_values:
        want = complex(zener_symbol(s, p)).real
        worst = max(worst, abs(kernel_forward_transform(p, float(s)) - want) / abs(want))
    return CheckResult("relaxation kernel transform", worst, 1e-6, f"{len(s_values)} points")


def run_suite(p: ZenerParams, cfg: QuadratureConfig | None = None, c0: float = LEADING_CONSTANT, dt: float | None = None) -> list[CheckResult]:
    """Every oracle check for one parameter pair."""
    results = [
        check_bromwich(p, cfg=cfg, c0=c0),
        check_classical(c0=c0, cfg=cfg),
        check_fdtd(p, cfg=cfg, dt=dt),
        check_sector(p),
        check_laplace_roundtrip(p, cfg=cfg, c0=c0),
        check_mittag_leffler(),
    ]
    if p.alpha > 0 and p.tau < 1:
        results.append(check_kernel_transform(p, np.linspace(0.5, 10.0, 5)))
    return results
