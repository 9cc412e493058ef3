import math

import numpy as np
import pytest

from udrd import validation, vector
from udrd.errors import DomainError, PrecisionError
from conftest import random_source_eigenvalues, random_spd

HALF_LN2 = 0.5 * math.log(2.0)
HALF_LN3 = 0.5 * math.log(3.0)


def src_of(*lams) -> vector.SourceCovariance:
    return vector.SourceCovariance.from_eigenvalues(list(lams))


class TestGaussianMi:
    def test_scalar_determinant(self):
        assert validation.gaussian_mi(src_of(1.0), [[0.5]]) == pytest.approx(
            HALF_LN3, rel=1e-13
        )

    def test_unit_snr(self, rng):
        m = random_spd(3, rng)
        src = vector.SourceCovariance.from_matrix(m)
        assert validation.gaussian_mi(src, m) == pytest.approx(HALF_LN2, rel=1e-12)

    def test_matches_rate_at_optimal_law(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 9))
            lams = random_source_eigenvalues(n, rng)
            q, _ = np.linalg.qr(rng.standard_normal((n, n)))
            src = vector.SourceCovariance.from_matrix(q @ np.diag(lams) @ q.T)
            alpha = float(np.exp(rng.uniform(np.log(1e-3), np.log(1e3))))
            law = vector.optimal_distortion_law(src, alpha)
            mi = validation.gaussian_mi(src, law.covariance)
            assert abs(mi - vector.rate_perp(src, alpha)) <= 1e-10

    def test_rejects_singular_noise(self):
        with pytest.raises(DomainError):
            validation.gaussian_mi(src_of(1.0, 1.0), np.zeros((2, 2)))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(DomainError):
            validation.gaussian_mi(src_of(1.0, 1.0), [[1.0]])


class TestBruteForceOptimum:
    def test_symmetric_source_equal_split(self):
        alloc, _ = validation.brute_force_optimum(src_of(1.0, 1.0), 0.5, 399)
        assert alloc[0] == pytest.approx(alloc[1], abs=2 * 1.0 / 400)
        assert alloc.sum() == pytest.approx(1.0, rel=1e-12)

    def test_matches_analytic_law(self):
        src = src_of(1.0, 4.0)
        d = vector.distortion_of_alpha(src, 3.0)
        alloc, mi = validation.brute_force_optimum(src, d, 400)
        bands = vector.band_noise_variances(src.eigenvalues, 3.0)
        cell = 2.0 * d / 401.0
        assert np.max(np.abs(alloc - bands)) <= cell
        rate = vector.rate_perp(src, 3.0)
        assert -1e-12 <= mi - rate <= 1e-4

    def test_trace_always_full_budget(self, rng):
        lams = random_source_eigenvalues(2, rng)
        src = vector.SourceCovariance.from_eigenvalues(lams)
        d = 0.73
        alloc, _ = validation.brute_force_optimum(src, d, 250)
        assert alloc.sum() == pytest.approx(2.0 * d, rel=1e-12)

    def test_requires_two_bands(self):
        with pytest.raises(DomainError):
            validation.brute_force_optimum(src_of(1.0), 0.5)

    def test_requires_enough_steps(self):
        with pytest.raises(DomainError):
            validation.brute_force_optimum(src_of(1.0, 2.0), 0.5, grid_steps=10)


class TestOffdiagonalPerturbations:
    def test_optimum_never_beaten(self, rng):
        for _ in range(5):
            n = int(rng.integers(2, 5))
            lams = random_source_eigenvalues(n, rng, lo=0.5, hi=5.0)
            src = vector.SourceCovariance.from_eigenvalues(lams)
            excess = validation.offdiagonal_suboptimality(src, 1.7, seed=int(rng.integers(1e6)))
            assert excess > -1e-12

    def test_perturbed_allocation_is_suboptimal(self):
        # move budget between bands at constant trace: the objective must rise
        src = src_of(1.0, 4.0)
        alpha = 3.0
        bands = vector.band_noise_variances(src.eigenvalues, alpha)
        rate = vector.rate_perp(src, alpha)
        shifted = bands + np.array([0.1, -0.1]) * bands[0]
        mi = validation.gaussian_mi(src, np.diag(shifted))
        assert mi > rate + 1e-6


class TestScalarMiQuadrature:
    def test_gaussian_matches_closed_form(self):
        mi = validation.scalar_mi_quadrature(1.0, "gaussian", 1.0)
        assert abs(mi - HALF_LN2) <= 1e-4

    def test_gaussian_uneven_variances(self):
        mi = validation.scalar_mi_quadrature(2.0, "gaussian", 0.5)
        assert abs(mi - 0.5 * math.log(1.0 + 4.0)) <= 1e-4

    def test_uniform_exceeds_gaussian(self):
        mi_u = validation.scalar_mi_quadrature(1.0, "uniform", 1.0)
        assert mi_u > HALF_LN2 + 1e-3
        # quadrature's own value, frozen for regression
        assert mi_u == pytest.approx(0.5204058530656281, abs=1e-9)

    def test_vanishing_snr(self):
        mi = validation.scalar_mi_quadrature(1.0, "gaussian", 1e4)
        assert mi == pytest.approx(0.5 * math.log1p(1e-4), abs=1e-6)
        assert mi < 1e-3

    def test_coarse_grid_raises(self):
        with pytest.raises(PrecisionError):
            validation.scalar_mi_quadrature(1.0, "uniform", 1.0, nodes=16)

    def test_rejects_bad_noise_kind(self):
        with pytest.raises(DomainError):
            validation.scalar_mi_quadrature(1.0, "laplace", 1.0)


class TestMonteCarlo:
    def test_identity_source_reference(self):
        src = src_of(1.0, 1.0)
        law = vector.optimal_distortion_law(src, 3.0)
        report = validation.monte_carlo_feasibility(src, law, 100_000, seed=42)
        assert abs(report.empirical_distortion - 0.5) <= 0.02 * 0.5
        bound = validation.cross_cov_tolerance(src, law, 100_000)
        assert report.empirical_cross_cov_max <= bound

    def test_seeded_reproducibility(self, rng):
        lams = random_source_eigenvalues(3, rng)
        src = vector.SourceCovariance.from_eigenvalues(lams)
        law = vector.optimal_distortion_law(src, 1.3)
        a = validation.monte_carlo_feasibility(src, law, 20_000, seed=7)
        b = validation.monte_carlo_feasibility(src, law, 20_000, seed=7)
        assert a == b  # bit-identical fields

    def test_cross_covariance_shrinks_with_samples(self):
        # average the statistic over seeds at two sample sizes; the log-log
        # slope of the 1/sqrt(n) decay should sit near -0.5
        src = src_of(1.0, 4.0)
        law = vector.optimal_distortion_law(src, 3.0)
        sizes = (10_000, 1_000_000)
        means = []
        for n in sizes:
            stats = [
                validation.monte_carlo_feasibility(src, law, n, seed=s).empirical_cross_cov_max
                for s in range(5)
            ]
            means.append(np.mean(stats))
        slope = (math.log(means[1]) - math.log(means[0])) / (
            math.log(sizes[1]) - math.log(sizes[0])
        )
        assert -0.6 <= slope <= -0.4

    def test_rejects_small_sample_count(self):
        src = src_of(1.0)
        law = vector.optimal_distortion_law(src, 3.0)
        with pytest.raises(DomainError):
            validation.monte_carlo_feasibility(src, law, 100, seed=0)
