"""Cauchy problem: convolution with S against an FDTD simulation.

Run with ``python3 demos/cauchy_problem.py``.
"""

import numpy as np

from zenerwave import Grid1D, ZenerParams, dalembert, fdtd_solve, gaussian_data, recover_strain_stress, solve

p = ZenerParams(alpha=0.5, tau=0.25)
grid = Grid1D.from_range(-5.0, 5.0, 401)
data = gaussian_data(grid, width=0.2)

# %%
# Convolution solution at a few times
times = [0.25, 0.5, 1.0]
u = solve(data, p, grid, times)
for t, row in zip(times, u):
    print(f"t = {t:4.2f}   max u = {row.max():.6f}   at x = {grid.x[row.argmax()]:+.3f}")

# %%
# The same problem stepped forward by the finite-difference oracle
dt = 0.5 * grid.dx * np.sqrt(p.tau)
steps = int(round(1.0 / dt))
dt = 1.0 / steps
res = fdtd_solve(data.u0, data.v0, grid.dx, p, dt, steps)
print(f"FDTD vs convolution at t = 1: max diff {np.abs(res.u[-1] - u[-1]).max():.3e}")

# %%
# Strain and stress from the convolution solution sampled on the FDTD time grid
hist = solve(data, p, grid, dt * np.arange(1, 41))
hist = np.vstack([data.u0, hist])
eps, sig = recover_strain_stress(hist, p, dt, grid.dx)
print(f"peak |stress| over the first {40 * dt:.3f} time units: {np.abs(sig).max():.4f}")

# %%
# With tau = 1 the medium is elastic and d'Alembert is exact
el = ZenerParams(0.5, 1.0)
u_el = solve(data, el, grid, [1.0])[0]
ref = dalembert(data.u0, data.v0, grid.x, 1.0, grid.x, 1.0)
print(f"elastic limit vs d'Alembert: {np.abs(u_el - ref).max():.2e}")
