"""From a physical material to dimensionless parameters and back.

Run with ``python3 demos/physical_units.py``.
"""

import numpy as np

from zenerwave import PhysicalMaterial, nondimensionalize, sample_fundamental_solution, wave_front_speed

# a soft viscoelastic solid
m = PhysicalMaterial(E=1e6, rho=1e3, tau_sigma=0.01, tau_eps=0.04, alpha=0.5)
p, sf = nondimensionalize(m)
print(f"alpha = {p.alpha}, tau = {p.tau}")
print(f"X* = {sf.X_star:.6g} m, T* = {sf.T_star:.6g} s")
print(f"front speed {wave_front_speed(m):.6g} m/s")

# %%
# Sample S at physical positions 1 ms after the impulse
x_phys = np.linspace(0.0, 0.1, 6)
xb, tb = sf.to_dimensionless(x_phys, 1e-3)
S = sample_fundamental_solution(xb, tb, p)
for xp, v in zip(x_phys, S):
    print(f"  x = {xp:5.3f} m   S = {v:.6f}")
