"""Dense symmetric linear algebra: eigendecomposition and spectral
application of scalar functions to symmetric matrices."""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._kernels import eigh_kernel
from .errors import DomainError, InvalidMatrix

MAX_ORDER = 4096

# Eigenvalues in (-CLIP_SCALE*||m||_F, 0) are roundoff from PSD inputs and
# get clamped to zero before a scalar function is applied.
CLIP_SCALE = 1e-12


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.T


def as_symmetric(matrix, *, rtol: float = 1e-10) -> np.ndarray:
    """Validate and return a square symmetric float64 matrix.

    Accepts entries whose asymmetry is below ``rtol`` times the largest
    magnitude and symmetrizes them exactly; anything worse raises
    InvalidMatrix, as do non-finite entries and orders above 4096.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidMatrix(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise InvalidMatrix("matrix order must be at least 1")
    if m.shape[0] > MAX_ORDER:
        raise InvalidMatrix(f"matrix order {m.shape[0]} exceeds the {MAX_ORDER} cap")
    if not np.all(np.isfinite(m)):
        raise InvalidMatrix("matrix has non-finite entries")
    scale = np.max(np.abs(m))
    if scale > 0 and np.max(np.abs(m - m.T)) > rtol * scale:
        raise InvalidMatrix("matrix is not symmetric")
    return 0.5 * (m + m.T)


def eigh(matrix) -> EigenDecomposition:
    """Eigendecomposition of a real symmetric matrix, eigenvalues ascending."""
    m = as_symmetric(matrix)
    w, v = eigh_kernel(m)
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def matrix_function(matrix, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a symmetric matrix through its spectrum.

    Returns Q diag(f(w)) Q^T for the eigendecomposition Q diag(w) Q^T.
    Eigenvalues pulled slightly negative by roundoff are clamped to zero
    first; f producing a non-finite value at any eigenvalue raises
    DomainError.
    """
    m = as_symmetric(matrix)
    w, q = eigh_kernel(m)
    w = clip_roundoff(w, np.linalg.norm(m))
    with np.errstate(invalid="ignore", divide="ignore"):
        fw = np.asarray(f(w), dtype=np.float64)
    if fw.shape != w.shape:
        raise DomainError("scalar function must map eigenvalues elementwise")
    if not np.all(np.isfinite(fw)):
        raise DomainError("scalar function is not finite at some eigenvalue")
    out = (q * fw) @ q.T
    return 0.5 * (out + out.T)


def clip_roundoff(eigenvalues: np.ndarray, frob_norm: float) -> np.ndarray:
    """Clamp eigenvalues in (-CLIP_SCALE*frob_norm, 0) to zero."""
    w = np.array(eigenvalues, dtype=np.float64)
    tiny = w > -CLIP_SCALE * frob_norm
    w[tiny & (w < 0.0)] = 0.0
    return w
