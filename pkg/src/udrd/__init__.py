"""Rate-distortion analysis for Gaussian sources whose reconstruction
error is constrained to be uncorrelated with the source.

Vector sources are handled through their covariance eigensystem, stationary
processes through their spectrum; independent oracles (exhaustive search,
quadrature mutual information, seeded Monte Carlo) cross-check the
optimizer outputs. Hot kernels run on a compiled extension when built,
with a numpy fallback selected at import.
"""

from ._kernels import backend_name, compiled_available
from .analysis import (
    RateLoss,
    WaterfillSolution,
    WienerBound,
    derivative_check,
    rate_loss,
    shannon_rd,
    wiener_ratio,
)
from .errors import (
    AdmissibilityError,
    DegenerateToeplitz,
    DomainError,
    InvalidMatrix,
    PrecisionError,
    SolverError,
    UdrdError,
)
from .linalg import EigenDecomposition, eigh, matrix_function
from .process import (
    ArSpectrum,
    AutocorrelationSpectrum,
    ConvergenceRow,
    QuadratureGrid,
    SpectralDistortionLaw,
    TabulatedSpectrum,
    autocorrelation,
    convergence_experiment,
    default_grid,
    eval_spectrum,
    optimal_spectrum,
    solve_alpha_spectral,
    spectral_distortion_of_alpha,
    spectral_distortion_of_rate,
    spectral_rate_perp,
    spectral_rd_point,
    spectral_waterfill,
    toeplitz_truncation,
)
from .validation import (
    McReport,
    brute_force_optimum,
    cross_cov_tolerance,
    gaussian_mi,
    monte_carlo_feasibility,
    offdiagonal_suboptimality,
    scalar_mi_quadrature,
)
from .vector import (
    AlphaSolution,
    DistortionLaw,
    KltCoder,
    RdPoint,
    SourceCovariance,
    band_noise_variances,
    distortion_of_alpha,
    distortion_of_rate,
    klt_coder_realization,
    optimal_distortion_law,
    rate_perp,
    rd_point,
    solve_alpha,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "AlphaSolution",
    "ArSpectrum",
    "AutocorrelationSpectrum",
    "ConvergenceRow",
    "DegenerateToeplitz",
    "DistortionLaw",
    "DomainError",
    "EigenDecomposition",
    "InvalidMatrix",
    "KltCoder",
    "McReport",
    "PrecisionError",
    "QuadratureGrid",
    "RateLoss",
    "RdPoint",
    "SolverError",
    "SourceCovariance",
    "SpectralDistortionLaw",
    "TabulatedSpectrum",
    "UdrdError",
    "WaterfillSolution",
    "WienerBound",
    "autocorrelation",
    "backend_name",
    "band_noise_variances",
    "brute_force_optimum",
    "compiled_available",
    "convergence_experiment",
    "cross_cov_tolerance",
    "default_grid",
    "derivative_check",
    "distortion_of_alpha",
    "distortion_of_rate",
    "eigh",
    "eval_spectrum",
    "gaussian_mi",
    "klt_coder_realization",
    "matrix_function",
    "monte_carlo_feasibility",
    "offdiagonal_suboptimality",
    "optimal_distortion_law",
    "optimal_spectrum",
    "rate_loss",
    "rate_perp",
    "rd_point",
    "scalar_mi_quadrature",
    "shannon_rd",
    "solve_alpha",
    "solve_alpha_spectral",
    "spectral_distortion_of_alpha",
    "spectral_distortion_of_rate",
    "spectral_rate_perp",
    "spectral_rd_point",
    "spectral_waterfill",
    "toeplitz_truncation",
    "wiener_ratio",
]
