"""Fundamental solution of the fractional Zener wave equation.

Run with ``python3 demos/fundamental_solution.py``. Prints S and dS/dt
on a few points, which quadrature route served each point, and a
comparison against numerical Laplace inversion.
"""

import numpy as np

from zenerwave import (
    ZenerParams,
    bromwich_invert,
    laplace_image_S,
    sample_fundamental_solution,
    select_routes,
)

# %%
# A strongly dispersive material: small alpha, small tau
p = ZenerParams(alpha=0.23, tau=0.004)
t = 1.0
front = t / np.sqrt(p.tau)
x = np.array([0.0, 0.5, 2.0, 8.0, 14.0, front + 1.0])

S = sample_fundamental_solution(x, t, p)
dS = sample_fundamental_solution(x, t, p, derivative=True)
print(f"cone edge at |x| = {front:.4f}")
for xi, a, b in zip(x, S, dS):
    print(f"  x = {xi:8.4f}   S = {a: .10f}   dS/dt = {b: .10f}")

# %%
# Points beyond the front are exactly zero; inside, each point picks a route
use_a = select_routes(x[:-1], t, p)
print("route per interior point:", ["real axis" if a else "vertical line" for a in use_a])

# %%
# Independent check: invert the Laplace image numerically
for xi in (0.5, 2.0, 8.0):
    ref = bromwich_invert(lambda s: laplace_image_S(xi, s, p), t)
    got = float(sample_fundamental_solution(xi, t, p))
    print(f"  x = {xi}: quadrature {got:.10f}  inversion {ref:.10f}  diff {abs(got - ref):.2e}")

# %%
# The elastic limit tau = 1 gives the step H(t - |x|) / 2
S_el = sample_fundamental_solution(np.array([0.5, 0.99, 1.01]), 1.0, ZenerParams(0.5, 1.0))
print("tau = 1:", S_el)
