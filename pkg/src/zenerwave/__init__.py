"""Wave propagation in fractional Zener media.

The dimensionless model is ``u_tt = d/dx sigma`` with the constitutive law
``sigma + tau D^a sigma = eps + D^a eps``, ``eps = u_x``, parametrized by
``(alpha, tau)`` with ``0 <= alpha < 1`` and ``0 < tau <= 1``.
"""

from .fraccalc import TimeGrid, f_alpha_kernel, fractional_integral, gl_weights, rl_derivative
from .fundsol import (
    LEADING_CONSTANT,
    ConeBoundaryError,
    QuadratureConfig,
    SpacetimePoint,
    fundamental_solution,
    fundsol_dt,
    hat_moments,
    integrand,
    integrand_dt,
    laplace_image_S,
    sample_fundamental_solution,
    select_routes,
)
from .mittag_leffler import mittag_leffler
from .oracles import FDTDResult, bromwich_invert, dalembert, fdtd_solve, forward_laplace, gl_stress_update
from .scaling import PhysicalMaterial, ScaleFactors, nondimensionalize, scale_lemma_check, wave_front_speed
from .solver import (
    CauchyData,
    Grid1D,
    GridTooNarrowError,
    delta_data,
    gaussian_data,
    recover_strain_stress,
    solve,
)
from .zener_kernel import (
    ZenerParams,
    delta_weight,
    omega,
    omega_polar,
    relaxation_kernel_integral,
    relaxation_kernel_laplace,
    relaxation_kernel_regular,
    sector_margin,
    zener_symbol,
)

__version__ = "0.1.0"
