"""Dense complex linear algebra helpers for small (dim <= 16) matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10


class ValidationError(ValueError):
    """An input violates one of its structural invariants."""


def as_complex_matrix(entries) -> np.ndarray:
    """Coerce to a square complex128 matrix, rejecting NaN/Inf entries."""
    mat = np.asarray(entries, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {mat.shape}")
    if mat.shape[0] == 0:
        raise ValidationError("matrix dimension must be positive")
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise ValidationError("matrix entries must be finite")
    return mat


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; block (i, j) of the result is a[i, j] * b."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_complex_matrix(a).conj().T


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product tr(a^dag b)."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return complex(np.trace(a.conj().T @ b))


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; ``eigenvectors[:, i]`` is the
    unit-norm vector for ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(a, tol: float = HERMITICITY_TOL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as (a + a^dag)/2 before decomposing; asymmetry
    beyond ``tol`` (max-abs) is rejected.
    """
    a = as_complex_matrix(a)
    asym = np.max(np.abs(a - a.conj().T))
    if asym > tol:
        raise ValidationError(f"matrix is not Hermitian (asymmetry {asym:.3e} > {tol:.0e})")
    sym = (a + a.conj().T) / 2.0
    vals, vecs = np.linalg.eigh(sym)
    return EigenDecomposition(eigenvalues=vals, eigenvectors=vecs)


def eigvalsh(a, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (same gate as eig_hermitian)."""
    a = as_complex_matrix(a)
    asym = np.max(np.abs(a - a.conj().T))
    if asym > tol:
        raise ValidationError(f"matrix is not Hermitian (asymmetry {asym:.3e} > {tol:.0e})")
    return np.linalg.eigvalsh((a + a.conj().T) / 2.0)
