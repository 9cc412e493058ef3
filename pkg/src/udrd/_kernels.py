"""Kernel backend selection.

The hot kernels (dense symmetric eigensolve, per-band solver sums) exist
twice: a Cython extension (udrd._core) and the numpy fallback below. The
compiled backend is chosen automatically when the extension was built;
UDRD_BACKEND=python|compiled forces one side explicitly.
"""

import math
import os

import numpy as np

from .errors import SolverError

try:
    from . import _core
except ImportError:  # extension not built; numpy path serves everything
    _core = None

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def _use_compiled() -> bool:
    mode = os.environ.get("UDRD_BACKEND", "auto").strip().lower()
    if mode in ("", "auto"):
        return _core is not None
    if mode in ("compiled", "cython", "ext"):
        if _core is None:
            raise RuntimeError("UDRD_BACKEND=compiled but udrd._core is not built")
        return True
    if mode in ("python", "numpy", "pure"):
        return False
    raise ValueError(f"unrecognized UDRD_BACKEND value: {mode!r}")


def backend_name() -> str:
    return "compiled" if _use_compiled() else "python"


def compiled_available() -> bool:
    return _core is not None


def eigh_kernel(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending.

    Compiled backend: cyclic Jacobi rotations, converged when all
    off-diagonal magnitudes drop below 1e-12 times the Frobenius norm.
    Python backend: LAPACK symmetric solver via numpy.
    """
    a = np.ascontiguousarray(matrix, dtype=np.float64)
    if _use_compiled():
        try:
            w, v, _ = _core.jacobi_eigh(a, JACOBI_TOL, JACOBI_MAX_SWEEPS, True)
        except RuntimeError as exc:
            raise SolverError(str(exc)) from exc
        order = np.argsort(w, kind="stable")
        return w[order], np.ascontiguousarray(v[:, order])
    w, v = np.linalg.eigh(a)
    return w, v


def distortion_sum(values: np.ndarray, alpha: float, weights: np.ndarray | None = None) -> float:
    """Sum over bands of sqrt(v^2 + v*alpha) - v, in rationalized form."""
    if _use_compiled():
        return _core.distortion_sum(
            np.ascontiguousarray(values, dtype=np.float64),
            float(alpha),
            None if weights is None else np.ascontiguousarray(weights, dtype=np.float64),
        )
    v = np.asarray(values, dtype=np.float64)
    terms = v * alpha / (np.sqrt(v * (v + alpha)) + v)
    if weights is None:
        return float(terms.sum())
    return float(terms @ np.asarray(weights, dtype=np.float64))


def rate_sum(values: np.ndarray, alpha: float, weights: np.ndarray | None = None) -> float:
    """Sum over bands of log((sqrt(v+alpha) + sqrt(v))/sqrt(alpha))."""
    if _use_compiled():
        return _core.rate_sum(
            np.ascontiguousarray(values, dtype=np.float64),
            float(alpha),
            None if weights is None else np.ascontiguousarray(weights, dtype=np.float64),
        )
    v = np.asarray(values, dtype=np.float64)
    terms = np.log((np.sqrt(v + alpha) + np.sqrt(v)) / math.sqrt(alpha))
    if weights is None:
        return float(terms.sum())
    return float(terms @ np.asarray(weights, dtype=np.float64))
