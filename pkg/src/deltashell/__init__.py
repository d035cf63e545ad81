"""Bound states of a 2+1-dimensional Dirac particle in an attractive
delta-shell potential V(r) = -a delta(r - r0), natural units hbar = c = 1.

Two independent routes to every eigenvalue:

* analytic: modified-Bessel solutions matched across the shell through an
  SO(2) rotation of the radial pair (``dirac``, ``spectrum``);
* numeric: shooting integration of the radial system with a regularized
  bump potential, extrapolated to zero width (``shooting``).

The hot kernels live in a compiled extension when available, with a pure
Python fallback selected at import (see ``backend_name``).
"""

from ._backend import backend_name
from .dirac import (
    Channel,
    ShellParams,
    SpinorSample,
    TransferMatrix,
    apply_transfer,
    inner_ratio,
    inner_solution,
    kappa,
    matching_residual,
    mobius_residual,
    outer_ratio,
    outer_solution,
    reflect_negative_j,
    shell_angles,
    transfer_matrix,
    wrap_half_pi,
)
from .errors import (
    AccuracyWindowError,
    ConvergenceError,
    ExtrapolationError,
    GapEdgeError,
)
from .shooting import (
    IntegrationConfig,
    RegularizedPotential,
    SolutionTrace,
    WidthExtrapolation,
    extrapolate_to_zero_width,
    fit_width_power_law,
    integrate_inward,
    integrate_outward,
    phase_mismatch,
    shoot_bound_state,
)
from .specfun import (
    ScaledValue,
    bessel_i,
    bessel_i_scaled,
    bessel_k,
    bessel_k_scaled,
    complex_bessel_j_series,
)
from .spectrum import (
    BoundState,
    ScanRow,
    SearchConfig,
    find_bound_states,
    normalize_state,
    refine_root,
    sample_wavefunction,
    shell_pair,
    spectrum_scan,
)

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "__version__",
    # dirac
    "Channel",
    "ShellParams",
    "SpinorSample",
    "TransferMatrix",
    "apply_transfer",
    "inner_ratio",
    "inner_solution",
    "kappa",
    "matching_residual",
    "mobius_residual",
    "outer_ratio",
    "outer_solution",
    "reflect_negative_j",
    "shell_angles",
    "transfer_matrix",
    "wrap_half_pi",
    # specfun
    "ScaledValue",
    "bessel_i",
    "bessel_i_scaled",
    "bessel_k",
    "bessel_k_scaled",
    "complex_bessel_j_series",
    # spectrum
    "BoundState",
    "ScanRow",
    "SearchConfig",
    "find_bound_states",
    "normalize_state",
    "refine_root",
    "sample_wavefunction",
    "shell_pair",
    "spectrum_scan",
    # shooting
    "IntegrationConfig",
    "RegularizedPotential",
    "SolutionTrace",
    "WidthExtrapolation",
    "extrapolate_to_zero_width",
    "fit_width_power_law",
    "integrate_inward",
    "integrate_outward",
    "phase_mismatch",
    "shoot_bound_state",
    # errors
    "AccuracyWindowError",
    "ConvergenceError",
    "ExtrapolationError",
    "GapEdgeError",
]
