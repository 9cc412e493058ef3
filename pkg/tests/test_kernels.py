"""Backend parity: the compiled Jacobi/sum kernels must agree with the
numpy fallback, and both backends must be forceable via UDRD_BACKEND."""

import numpy as np
import pytest

from udrd import _kernels
from conftest import random_spd

needs_compiled = pytest.mark.skipif(
    not _kernels.compiled_available(), reason="compiled extension not built"
)


def test_backend_env_override(monkeypatch):
    monkeypatch.setenv("UDRD_BACKEND", "python")
    assert _kernels.backend_name() == "python"
    monkeypatch.setenv("UDRD_BACKEND", "nonsense")
    with pytest.raises(ValueError):
        _kernels.backend_name()


@needs_compiled
def test_backend_forced_compiled(monkeypatch):
    monkeypatch.setenv("UDRD_BACKEND", "compiled")
    assert _kernels.backend_name() == "compiled"


@needs_compiled
@pytest.mark.parametrize("n", [1, 2, 3, 8, 40])
def test_jacobi_matches_lapack_eigenvalues(n, rng, monkeypatch):
    a = random_spd(n, rng)
    monkeypatch.setenv("UDRD_BACKEND", "compiled")
    w_c, v_c = _kernels.eigh_kernel(a)
    monkeypatch.setenv("UDRD_BACKEND", "python")
    w_p, _ = _kernels.eigh_kernel(a)
    scale = max(abs(w_p[0]), abs(w_p[-1]))
    assert np.max(np.abs(w_c - w_p)) <= 1e-12 * max(scale, 1.0)
    assert np.max(np.abs(v_c.T @ v_c - np.eye(n))) <= 1e-12
    assert np.all(np.diff(w_c) >= 0)


@needs_compiled
def test_jacobi_handles_indefinite(rng, monkeypatch):
    a = rng.standard_normal((12, 12))
    a = 0.5 * (a + a.T)  # indefinite symmetric
    monkeypatch.setenv("UDRD_BACKEND", "compiled")
    w, v = _kernels.eigh_kernel(a)
    assert np.linalg.norm((v * w) @ v.T - a) <= 1e-10 * max(np.linalg.norm(a), 1.0)


@needs_compiled
@pytest.mark.parametrize("weighted", [False, True])
def test_sum_kernels_match_numpy(weighted, rng, monkeypatch):
    vals = np.exp(rng.uniform(np.log(0.1), np.log(100.0), size=257))
    weights = rng.uniform(0.1, 2.0, size=257) if weighted else None
    for alpha in (1e-4, 1.0, 1e4):
        monkeypatch.setenv("UDRD_BACKEND", "compiled")
        d_c = _kernels.distortion_sum(vals, alpha, weights)
        r_c = _kernels.rate_sum(vals, alpha, weights)
        monkeypatch.setenv("UDRD_BACKEND", "python")
        d_p = _kernels.distortion_sum(vals, alpha, weights)
        r_p = _kernels.rate_sum(vals, alpha, weights)
        assert d_c == pytest.approx(d_p, rel=1e-13)
        assert r_c == pytest.approx(r_p, rel=1e-13)


def test_distortion_sum_stable_for_tiny_alpha():
    # rationalized form keeps full precision where the naive difference cancels
    vals = np.array([100.0])
    alpha = 1e-12
    exact = vals[0] * alpha / (np.sqrt(vals[0] * (vals[0] + alpha)) + vals[0])
    assert _kernels.distortion_sum(vals, alpha) == pytest.approx(float(exact), rel=1e-12)
    assert _kernels.distortion_sum(vals, alpha) > 0.0
