"""Independent oracles for the optimizer outputs: closed-form Gaussian
mutual information, exhaustive small-instance search, a two-density
quadrature MI estimate, and seeded Monte Carlo feasibility checks."""

import math
from dataclasses import dataclass

import numpy as np

from . import linalg, vector
from .errors import DomainError, PrecisionError

MI_GRID_NODES = 2048
MI_SPAN_SIGMAS = 8.0

# Refinement instability threshold for the quadrature MI estimate.
MI_STABILITY_TOL = 1e-3


@dataclass(frozen=True)
class McReport:
    sample_count: int
    empirical_cross_cov_max: float
    empirical_distortion: float
    target_distortion: float


def gaussian_mi(src: vector.SourceCovariance, kz) -> float:
    """Mutual information per dimension for a Gaussian source observed
    through independent additive Gaussian noise with covariance kz.

    Evaluates (1/2N) log det(Kz^-1 Kx + I) through the symmetric
    whitened form, so only positive-definite kz is accepted.
    """
    kz_m = linalg.as_symmetric(kz)
    if kz_m.shape != src.matrix.shape:
        raise DomainError("noise covariance shape does not match the source")
    kz_eig = linalg.eigh(kz_m)
    wz, qz = kz_eig.eigenvalues, kz_eig.eigenvectors
    if wz[0] <= 1e-14 * max(wz[-1], 1.0):
        raise DomainError("noise covariance must be positive definite")
    whiten = (qz / np.sqrt(wz)) @ qz.T
    b = whiten @ src.matrix @ whiten
    mu = linalg.eigh(0.5 * (b + b.T)).eigenvalues
    mu = np.maximum(mu, 0.0)
    return 0.5 * float(np.log1p(mu).sum()) / src.n


def brute_force_optimum(
    src: vector.SourceCovariance, target_d: float, grid_steps: int = 400
) -> tuple[np.ndarray, float]:
    """Grid search over diagonal noise allocations for a 2-band source.

    Splits the full trace budget 2*target_d between the two eigenbands of
    the source and returns the allocation minimizing the Gaussian mutual
    information together with its value. The objective depends on the
    noise covariance only through the band SNRs, so the search space is
    diagonal in the source eigenbasis.
    """
    if src.n != 2:
        raise DomainError("grid search is defined for two-band sources only")
    if grid_steps < 100:
        raise DomainError(f"grid_steps must be at least 100, got {grid_steps}")
    d = float(target_d)
    if not np.isfinite(d) or d <= 0.0:
        raise DomainError(f"target distortion must be positive, got {target_d}")

    budget = 2.0 * d
    lam = src.eigenvalues
    d1 = budget * np.arange(1, grid_steps + 1) / (grid_steps + 1)
    d2 = budget - d1
    mi = 0.25 * (np.log1p(lam[0] / d1) + np.log1p(lam[1] / d2))
    k = int(np.argmin(mi))
    return np.array([d1[k], d2[k]]), float(mi[k])


def offdiagonal_suboptimality(
    src: vector.SourceCovariance,
    alpha: float,
    perturbations: int = 100,
    seed: int = 0,
) -> float:
    """Smallest objective increase over random trace-preserving
    off-diagonal perturbations of the optimal allocation.

    Perturbs the optimal noise covariance in the source eigenbasis by
    symmetric off-diagonal noise of magnitude 1e-2 times the distortion
    and returns min(perturbed MI) - optimal rate, which stays positive
    when the analytic law is the true minimizer.
    """
    n = src.n
    if n < 2:
        raise DomainError("off-diagonal perturbations need at least two bands")
    bands = vector.band_noise_variances(src.eigenvalues, alpha)
    base_rate = vector.rate_perp(src, alpha)
    d = vector.distortion_of_alpha(src, alpha)
    rng = np.random.default_rng(seed)

    worst = math.inf
    diag_src = vector.SourceCovariance.from_eigenvalues(src.eigenvalues)
    for _ in range(perturbations):
        noise = rng.standard_normal((n, n))
        noise = 0.5 * (noise + noise.T)
        np.fill_diagonal(noise, 0.0)
        scale = np.max(np.abs(noise))
        if scale == 0.0:
            continue
        noise *= 1e-2 * d / scale
        kz = np.diag(bands) + noise
        if np.linalg.eigvalsh(kz)[0] <= 0.0:
            continue
        worst = min(worst, gaussian_mi(diag_src, kz) - base_rate)
    return worst


def scalar_mi_quadrature(
    source_var: float,
    noise: str,
    noise_var: float,
    nodes: int = MI_GRID_NODES,
    span: float = MI_SPAN_SIGMAS,
) -> float:
    """Mutual information I(X; X+Z) for a scalar Gaussian source and
    independent noise, by density quadrature.

    ``noise`` selects the noise law: "gaussian" or "uniform" (the uniform
    law is matched to ``noise_var``). The output density is built by
    Simpson convolution on a grid of ``nodes`` points truncated at
    ``span`` combined standard deviations, and the differential entropy
    difference h(X+Z) - h(Z) is returned in nats. Raises PrecisionError
    when halving the resolution moves the estimate by more than 1e-3.
    """
    if source_var <= 0.0 or noise_var <= 0.0:
        raise DomainError("variances must be positive")
    if noise not in ("gaussian", "uniform"):
        raise DomainError(f"noise must be 'gaussian' or 'uniform', got {noise!r}")

    full = _mi_estimate(source_var, noise, noise_var, nodes, span)
    half = _mi_estimate(source_var, noise, noise_var, max(nodes // 2, 8), span)
    if abs(full - half) > MI_STABILITY_TOL:
        raise PrecisionError(
            f"MI estimate moved by {abs(full - half):.2e} under refinement; grid too coarse"
        )
    return full


def _simpson_points(lo: float, hi: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    n = nodes if nodes % 2 == 1 else nodes + 1
    x = np.linspace(lo, hi, n)
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return x, w * ((hi - lo) / (n - 1)) / 3.0


def _gauss_pdf(x: np.ndarray, var: float) -> np.ndarray:
    return np.exp(-0.5 * x * x / var) / math.sqrt(2.0 * math.pi * var)


def _mi_estimate(source_var, noise, noise_var, nodes, span) -> float:
    sy = math.sqrt(source_var + noise_var)
    y, wy = _simpson_points(-span * sy, span * sy, nodes)

    if noise == "uniform":
        # integrate over the flat noise support; the Gaussian factor keeps
        # the integrand smooth there
        width = math.sqrt(12.0 * noise_var)
        t, wt = _simpson_points(-0.5 * width, 0.5 * width, nodes)
        density = np.full_like(t, 1.0 / width)
        kernel_var = source_var
        h_noise = math.log(width)
    else:
        # integrate over whichever density is narrower so the shifted
        # factor stays smooth on the grid
        kernel_var = max(source_var, noise_var)
        inner_var = min(source_var, noise_var)
        si = math.sqrt(inner_var)
        t, wt = _simpson_points(-span * si, span * si, nodes)
        density = _gauss_pdf(t, inner_var)
        h_noise = 0.5 * math.log(2.0 * math.pi * math.e * noise_var)

    fy = _gauss_pdf(y[:, None] - t[None, :], kernel_var) @ (wt * density)
    positive = fy > 0.0
    h_y = -float(wy[positive] @ (fy[positive] * np.log(fy[positive])))
    return h_y - h_noise


def monte_carlo_feasibility(
    src: vector.SourceCovariance,
    law: vector.DistortionLaw,
    sample_count: int,
    seed: int,
) -> McReport:
    """Empirical check of the feasibility constraints by seeded sampling.

    Draws independent source and error samples colored by the matrix
    square roots of their covariances and reports the largest empirical
    cross-covariance entry plus the mean per-dimension error power.
    Identical seeds and sample counts reproduce the report bit for bit.
    """
    n_samples = int(sample_count)
    if n_samples < 10_000:
        raise DomainError(f"sample_count must be at least 1e4, got {sample_count}")
    n = src.n
    sqrt_x = linalg.matrix_function(src.matrix, np.sqrt)
    sqrt_z = linalg.matrix_function(law.covariance, np.sqrt)

    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n_samples, n)) @ sqrt_x.T
    z = rng.standard_normal((n_samples, n)) @ sqrt_z.T

    cross = x.T @ z / n_samples
    distortion = float(np.mean(np.sum(z * z, axis=1))) / n
    target = float(np.trace(law.covariance)) / n
    return McReport(
        sample_count=n_samples,
        empirical_cross_cov_max=float(np.max(np.abs(cross))),
        empirical_distortion=distortion,
        target_distortion=target,
    )


def cross_cov_tolerance(src: vector.SourceCovariance, law: vector.DistortionLaw, sample_count: int) -> float:
    """Five-sigma statistical band for the cross-covariance estimate."""
    max_lam = float(src.eigenvalues[-1])
    max_band = float(np.max(law.band_variances))
    return 5.0 * math.sqrt(max_lam * max_band / sample_count)
