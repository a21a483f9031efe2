"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line through the ``acceptance`` fixture; the
lines are printed in the terminal summary in criterion order.
"""

import math

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from zenerwave import (
    Grid1D,
    TimeGrid,
    ZenerParams,
    bromwich_invert,
    dalembert,
    fdtd_solve,
    gaussian_data,
    laplace_image_S,
    rl_derivative,
    sample_fundamental_solution,
    sector_margin,
    select_routes,
    solve,
)
from zenerwave.mittag_leffler import mittag_leffler
from zenerwave.verification import check_fdtd, check_kernel_transform, check_laplace_roundtrip

FIG2 = ZenerParams(0.23, 0.004)


def _oracle_points():
    """25 interior points over the six parameter pairs, at least 0.1 inside the cone."""
    fractions = (0.0, 0.35, 0.7, 1.0)
    times = (0.5, 1.0, 1.5, 1.0)
    pts = []
    for a in (0.23, 0.5, 0.75):
        for tau in (0.004, 0.25):
            for frac, t in zip(fractions, times):
                pts.append((ZenerParams(a, tau), frac * (t / math.sqrt(tau) - 0.1), t))
    pts.append((FIG2, 0.5, 1.0))
    return pts


def test_01_oracle_agreement(acceptance):
    worst = 0.0
    routes = {}
    for p, x, t in _oracle_points():
        got = float(sample_fundamental_solution(x, t, p))
        want = bromwich_invert(lambda s: laplace_image_S(x, s, p), t)
        worst = max(worst, abs(got - want))
        r = str(select_routes(x, t, p)[0])
        routes[r] = routes.get(r, 0) + 1
    ok = worst <= 1e-6
    acceptance(1, ok, f"quadrature vs Bromwich at 25 points: max error {worst:.2e} (<= 1e-6), routes {routes}")
    assert ok


def test_02_elastic_limit(acceptance):
    p = ZenerParams(0.5, 1.0)
    rng = np.random.default_rng(2)
    t = rng.uniform(0.05, 4.0, 500)
    x = rng.uniform(-5.0, 5.0, 500)
    keep = np.abs(np.abs(x) - t) > 1e-9
    s = sample_fundamental_solution(x[keep], t[keep], p)
    s_err = float(np.abs(s - np.where(np.abs(x[keep]) < t[keep], 0.5, 0.0)).max())

    grid = Grid1D.from_range(-4.0, 4.0, 400)
    data = gaussian_data(grid, 0.2)
    times = [0.5, 1.0, 1.5]
    u = solve(data, p, grid, times)
    ref = np.array([dalembert(data.u0, data.v0, grid.x, 1.0, grid.x, ti) for ti in times])
    u_err = float(np.abs(u - ref).max())
    ok = s_err <= 1e-8 and u_err <= 1e-3
    acceptance(2, ok, f"tau=1: |S - H/2| {s_err:.1e} (<= 1e-8); solve vs d'Alembert L-inf {u_err:.2e} (<= 1e-3)")
    assert ok


def test_03_alpha_to_zero(acceptance):
    p = ZenerParams(1e-3, 0.25)
    grid = Grid1D.from_range(-4.0, 4.0, 400)
    data = gaussian_data(grid, 0.2)
    times = [0.5, 1.0]
    c = math.sqrt(2.0 / (1.0 + p.tau))
    u = solve(data, p, grid, times)
    ref = np.array([dalembert(data.u0, data.v0, grid.x, c, grid.x, ti) for ti in times])
    err = float(np.abs(u - ref).max())
    ok = err <= 1e-2
    acceptance(3, ok, f"alpha=1e-3, tau=0.25 vs d'Alembert c=sqrt(2/(1+tau)): L-inf {err:.2e} (<= 1e-2)")
    assert ok


def test_04_cone_support(acceptance):
    rng = np.random.default_rng(4)
    nonzero = 0
    for p in (FIG2, ZenerParams(0.5, 0.25), ZenerParams(0.9, 0.9), ZenerParams(0.5, 1.0)):
        t = rng.uniform(0.01, 3.0, 1000)
        x = np.sign(rng.uniform(-1, 1, 1000)) * t / math.sqrt(p.tau) * rng.uniform(1.0, 3.0, 1000)
        nonzero += int(np.count_nonzero(sample_fundamental_solution(x, t, p)))
        nonzero += int(np.count_nonzero(sample_fundamental_solution(x, t, p, derivative=True)))

    p = ZenerParams(0.5, 0.25)
    x = np.linspace(-8.0, 8.0, 1601)
    dx = x[1] - x[0]
    u0 = np.where(np.abs(x) < 0.5, (1 - (x / 0.5) ** 2) ** 4, 0.0)
    leak = 0.0
    for courant in (0.9, 0.95, 1.0):
        dt = courant * dx * math.sqrt(p.tau)
        steps = int(2.0 / dt)
        res = fdtd_solve(u0, np.zeros_like(x), dx, p, dt, steps)
        for k in range(0, steps + 1, 50):
            beyond = np.abs(x) > 0.5 + res.times[k] / math.sqrt(p.tau) + 3 * dx
            leak = max(leak, float(np.abs(res.u[k][beyond]).max(initial=0.0)))
    ok = nonzero == 0 and leak < 1e-8
    acceptance(4, ok, f"4000 outside-cone points: {nonzero} nonzero values of S or dS/dt; FDTD beyond cone + 3dx {leak:.1e} (< 1e-8)")
    assert ok


def test_05_solver_vs_fdtd(acceptance):
    r = check_fdtd(FIG2)
    acceptance(5, r.passed, f"convolution vs FDTD, alpha=0.23, tau=0.004, 400x400: relative L2 {r.value:.2e} (<= 5e-2)")
    assert r.passed


def test_06_kernel_identity(acceptance):
    worst = 0.0
    for a in (0.23, 0.5, 0.75):
        for tau in (0.004, 0.25, 0.9):
            worst = max(worst, check_kernel_transform(ZenerParams(a, tau)).value)
    ok = worst <= 1e-6
    acceptance(6, ok, f"kernel forward transform vs symbol, 9 pairs x 20 s: max relative error {worst:.2e} (<= 1e-6)")
    assert ok


def test_07_sector_property(acceptance):
    worst = math.inf
    for a in (0.05, 0.25, 0.5, 0.75, 0.95):
        for tau in (0.004, 0.05, 0.25, 0.5, 0.9):
            worst = min(worst, sector_margin(ZenerParams(a, tau), 10_000))
    ok = worst > 0.0
    acceptance(7, ok, f"omega off the cut on a 100x100 lattice, 5x5 pairs: smallest margin {worst:.2e} (> 0)")
    assert ok


def test_08_rl_convergence(acceptance):
    worst = math.inf
    for a in (0.1, 0.23, 0.5, 0.75, 0.9):
        errs = []
        for n in (100, 200, 400, 800):
            grid = TimeGrid(1.0 / n, n)
            errs.append(abs(rl_derivative(grid.times, a, grid)[-1] - 1.0 / math.gamma(2.0 - a)))
        worst = min(worst, float(np.log2(np.array(errs[:-1]) / np.array(errs[1:])).min()))
    ok = worst >= 0.9
    acceptance(8, ok, f"GL derivative of y=t at t=1 under dt halving: smallest observed order {worst:.3f} (>= 0.9)")
    assert ok


def _peak_and_width(p: ZenerParams, t: float, n: int = 801):
    """Peak of ``u = dS/dt`` on ``x >= 0`` and the width of ``{u >= peak/2}``."""
    edge = t / math.sqrt(p.tau) * (1.0 - 1e-7)
    x = np.linspace(0.0, edge, n)
    u = sample_fundamental_solution(x, t, p, derivative=True)

    def f(z):
        return float(sample_fundamental_solution(z, t, p, derivative=True))

    i = int(np.argmax(u))
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, n - 1)]
    res = minimize_scalar(lambda z: -f(z), bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    top = max(-res.fun, u[i])
    half = 0.5 * top
    above = np.flatnonzero(u >= half)
    j0, j1 = above[0], above[-1]
    left = 0.0 if j0 == 0 else brentq(lambda z: f(z) - half, x[j0 - 1], x[j0])
    right = edge if j1 == n - 1 else brentq(lambda z: f(z) - half, x[j1], x[j1 + 1])
    return top, right - left


def test_09_figure_claims(acceptance):
    times = (0.5, 1.0, 1.5)
    stats = {}
    for a in (0.1, 0.23, 0.25, 0.5, 0.75):
        for t in times:
            stats[a, t] = _peak_and_width(ZenerParams(a, 0.004), t)
    # (a) the peak falls as t grows, at every alpha shown
    claim_a = all(stats[a, 0.5][0] > stats[a, 1.0][0] > stats[a, 1.5][0] for a in (0.23, 0.25, 0.5, 0.75))
    # (b) at fixed t a larger alpha gives a lower, wider peak
    claim_b = all(
        stats[0.25, t][0] > stats[0.5, t][0] > stats[0.75, t][0]
        and stats[0.25, t][1] < stats[0.5, t][1] < stats[0.75, t][1]
        for t in times
    )
    # (c) toward alpha = 0 the peak grows monotonically
    claim_c = all(
        stats[0.75, t][0] < stats[0.5, t][0] < stats[0.25, t][0] < stats[0.1, t][0] for t in times
    )
    ok = claim_a and claim_b and claim_c
    peaks = ", ".join(f"{a}:{stats[a, 1.0][0]:.3f}" for a in (0.75, 0.5, 0.25, 0.1))
    acceptance(
        9,
        ok,
        f"figure claims (a) {'ok' if claim_a else 'violated'}, (b) {'ok' if claim_b else 'violated'}, "
        f"(c) {'ok' if claim_c else 'violated'}; peaks at t=1 by alpha {peaks}",
    )
    assert ok


def test_10_laplace_round_trip(acceptance):
    r = check_laplace_roundtrip(FIG2, x=0.5, s_values=(1.0, 2.0, 5.0))
    acceptance(10, r.passed, f"forward transform of S(0.5, .) vs image at s=1,2,5: relative error {r.value:.2e} (<= 1e-4)")
    assert r.passed


def test_11_mittag_leffler(acceptance):
    z = np.linspace(-30.0, 30.0, 241)
    e_exp = float(np.abs(mittag_leffler(1.0, 1.0, z) / np.exp(z) - 1.0).max())
    xs = np.linspace(0.0, 8.0, 161)
    e_cos = float(np.abs(mittag_leffler(2.0, 1.0, -(xs**2)) - np.cos(xs)).max())
    e_zero = 0.0
    for a in (0.05, 0.23, 0.5, 0.75, 1.0, 1.5, 2.5):
        for b in (0.2, 0.5, 1.0, 1.7, 2.0, 3.3):
            e_zero = max(e_zero, abs(mittag_leffler(a, b, 0.0) * math.gamma(b) - 1.0))
    ok = max(e_exp, e_cos, e_zero) <= 1e-10
    acceptance(
        11,
        ok,
        f"E_1,1=exp on [-30,30] (rel) {e_exp:.1e}, E_2,1(-x^2)=cos x on [0,8] {e_cos:.1e}, "
        f"E_a,b(0)=1/Gamma(b) (rel) {e_zero:.1e} (each <= 1e-10)",
    )
    assert ok


def test_12_front_speed(acceptance):
    p = ZenerParams(0.9, 0.25)
    n = 1201
    x = np.linspace(-12.0, 12.0, n)
    dx = x[1] - x[0]
    dt = dx * math.sqrt(p.tau)
    u0 = np.where(np.abs(x) < 0.5, (1 - (x / 0.5) ** 2) ** 4, 0.0)
    steps = int(round(5.0 / dt))
    res = fdtd_solve(u0, np.zeros_like(x), dx, p, dt, steps)
    receivers = np.array([3.0, 5.0, 7.0, 9.0])
    arrivals = []
    for xr in receivers:
        j = int(np.argmin(np.abs(x - xr)))
        arrivals.append(res.times[int(np.argmax(np.abs(res.u[:, j]) > 1e-12))])
    arrivals = np.array(arrivals)
    predicted = (receivers - 0.5) * math.sqrt(p.tau)
    lag = float(np.abs(arrivals - predicted).max())
    speed = float(np.polyfit(arrivals, receivers, 1)[0])
    cone = 1.0 / math.sqrt(p.tau)
    # the other candidate: sqrt(rho/E) sqrt(tau_sigma/tau_eps) = sqrt(tau) in these units
    printed = math.sqrt(p.tau)
    ok = lag <= 3 * dt and abs(speed - cone) / cone <= 0.02 and abs(speed - printed) / printed > 0.5
    acceptance(
        12,
        ok,
        f"FDTD front speed {speed:.4f} vs 1/sqrt(tau) = {cone:g} (within 2%), arrival lag {lag / dt:.1f} dt (<= 3); "
        f"sqrt(tau) = {printed:g} rejected",
    )
    assert ok
