"""Bipartite quantum states: density matrices, kets, entropies, separability."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import ValidationError, as_complex_matrix, eigvalsh

TRACE_TOL = 1e-10
HERM_TOL = 1e-10
PSD_TOL = 1e-10
KET_NORM_TOL = 1e-12
EIGENVALUE_FLOOR = 1e-12
SCHMIDT_PRODUCT_TOL = 1e-9

_LN2 = np.log(2.0)

sigma_x = np.array([[0, 1], [1, 0]], dtype=complex)
sigma_y = np.array([[0, -1j], [1j, 0]], dtype=complex)
sigma_z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"X": sigma_x, "Y": sigma_y, "Z": sigma_z}


@dataclass(frozen=True, eq=False)
class Ket:
    """Pure-state amplitude vector, unit norm within 1e-12."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amp.size == 0:
            raise ValidationError("ket dimension must be positive")
        if not np.all(np.isfinite(amp.real)) or not np.all(np.isfinite(amp.imag)):
            raise ValidationError("ket amplitudes must be finite")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > KET_NORM_TOL:
            raise ValidationError(f"ket norm {norm!r} deviates from 1 beyond {KET_NORM_TOL:.0e}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Bipartite density matrix with an explicit (dim_a, dim_b) split.

    Validates hermiticity, unit trace and positivity at construction.
    Single-system states use dim_b = 1.
    """

    mat: np.ndarray
    dim_a: int
    dim_b: int = 1

    def __post_init__(self):
        mat = as_complex_matrix(self.mat)
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValidationError("subsystem dimensions must be positive")
        if self.dim_a * self.dim_b != mat.shape[0]:
            raise ValidationError(
                f"dims ({self.dim_a}, {self.dim_b}) do not match matrix dim {mat.shape[0]}"
            )
        herm = np.max(np.abs(mat - mat.conj().T))
        if herm > HERM_TOL:
            raise ValidationError(f"density matrix not Hermitian (deviation {herm:.3e})")
        mat = (mat + mat.conj().T) / 2.0
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"density matrix trace {tr!r} deviates from 1")
        lam_min = float(np.linalg.eigvalsh(mat)[0])
        if lam_min < -PSD_TOL:
            raise ValidationError(f"density matrix has negative eigenvalue {lam_min:.3e}")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def purity(self) -> float:
        return float(np.trace(self.mat @ self.mat).real)


def density_from_ket(psi: Ket, dim_a: int, dim_b: int = 1) -> DensityMatrix:
    """Rank-1 projector |psi><psi| with the given bipartite split."""
    if dim_a * dim_b != psi.dim:
        raise ValidationError(f"dims ({dim_a}, {dim_b}) do not match ket dim {psi.dim}")
    return DensityMatrix(psi.projector(), dim_a, dim_b)


def partial_trace(rho: DensityMatrix, keep: str) -> DensityMatrix:
    """Trace out one side; ``keep`` selects the surviving subsystem, "A" or "B"."""
    if keep not in ("A", "B"):
        raise ValidationError(f"keep must be 'A' or 'B', got {keep!r}")
    r = rho.mat.reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
    if keep == "A":
        red = np.einsum("ijkj->ik", r)
        return DensityMatrix(red, rho.dim_a, 1)
    red = np.einsum("ijik->jk", r)
    return DensityMatrix(red, rho.dim_b, 1)


def partial_transpose(rho: DensityMatrix) -> np.ndarray:
    """Transpose of the B indices only (not a valid state in general)."""
    r = rho.mat.reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
    return r.transpose(0, 3, 2, 1).reshape(rho.dim, rho.dim)


def entropy_of_spectrum(eigenvalues: np.ndarray) -> float:
    """Base-2 entropy of a spectrum; entries at or below 1e-12 contribute 0."""
    lam = np.asarray(eigenvalues, dtype=float)
    lam = lam[lam > EIGENVALUE_FLOOR]
    if lam.size == 0:
        return 0.0
    return float(-np.sum(lam * np.log(lam)) / _LN2)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) = -tr(rho log2 rho), in bits."""
    return entropy_of_spectrum(eigvalsh(rho.mat))


def shannon_entropy(p) -> float:
    """Shannon entropy of a probability vector, in bits.

    Small negative entries (>= -1e-12) are clamped to 0 and the vector is
    renormalized; a total off from 1 by more than 1e-9 is rejected.
    """
    p = np.asarray(p, dtype=float).reshape(-1)
    if np.any(p < -1e-12):
        raise ValidationError(f"probability vector has negative entry {p.min():.3e}")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"probability vector sums to {total!r}, not 1")
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    return entropy_of_spectrum(p)


def quantum_mutual_information(rho: DensityMatrix) -> float:
    """S(rho_A) + S(rho_B) - S(rho_AB), in bits."""
    sa = von_neumann_entropy(partial_trace(rho, "A"))
    sb = von_neumann_entropy(partial_trace(rho, "B"))
    return sa + sb - von_neumann_entropy(rho)


def pauli_eigenstate(axis: str, sign: int) -> Ket:
    """Unit eigenvector of a Pauli matrix, sigma_axis |k> = sign |k>.

    Global phase is fixed so the first nonzero amplitude is real positive.
    """
    if axis not in PAULI:
        raise ValidationError(f"axis must be one of X, Y, Z, got {axis!r}")
    if sign not in (+1, -1):
        raise ValidationError(f"sign must be +1 or -1, got {sign!r}")
    s = 1.0 / np.sqrt(2.0)
    table = {
        ("Z", +1): [1.0, 0.0],
        ("Z", -1): [0.0, 1.0],
        ("X", +1): [s, s],
        ("X", -1): [s, -s],
        ("Y", +1): [s, 1j * s],
        ("Y", -1): [s, -1j * s],
    }
    return Ket(np.array(table[(axis, sign)], dtype=complex))


def overlap(phi: Ket, psi: Ket) -> complex:
    """Inner product <phi|psi> (conjugate-linear in the first argument)."""
    if phi.dim != psi.dim:
        raise ValidationError(f"dimension mismatch: {phi.dim} vs {psi.dim}")
    return complex(np.vdot(phi.amplitudes, psi.amplitudes))


def is_ppt_separable(rho: DensityMatrix) -> bool:
    """Separability via positivity of the partial transpose.

    Conclusive only for 2x2 and 2x3 splits, so total dimension above 6 is
    rejected.
    """
    if rho.dim > 6:
        raise ValidationError(
            f"PPT criterion is not conclusive for total dimension {rho.dim} > 6"
        )
    lam_min = float(np.linalg.eigvalsh(partial_transpose(rho))[0])
    return lam_min >= -PSD_TOL


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(1/2) ||rho - sigma||_1 via the spectrum of the Hermitian difference."""
    if rho.dim != sigma.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    lam = np.linalg.eigvalsh(rho.mat - sigma.mat)
    return float(0.5 * np.sum(np.abs(lam)))


def schmidt_coefficients(psi: Ket, dim_a: int, dim_b: int) -> np.ndarray:
    """Descending Schmidt coefficients of a bipartite ket."""
    if dim_a * dim_b != psi.dim:
        raise ValidationError(f"dims ({dim_a}, {dim_b}) do not match ket dim {psi.dim}")
    m = psi.amplitudes.reshape(dim_a, dim_b)
    return np.linalg.svd(m, compute_uv=False)


def is_product_ket(psi: Ket, dim_a: int, dim_b: int, tol: float = SCHMIDT_PRODUCT_TOL) -> bool:
    """True iff the second Schmidt coefficient is below ``tol``."""
    s = schmidt_coefficients(psi, dim_a, dim_b)
    return s.size < 2 or float(s[1]) < tol


def product_factors(psi: Ket, dim_a: int, dim_b: int) -> tuple[Ket, Ket]:
    """Local factors (a, b) of a product ket, with a x b == psi exactly.

    Raises if the ket is not product within the Schmidt tolerance.
    """
    m = psi.amplitudes.reshape(dim_a, dim_b)
    u, s, vh = np.linalg.svd(m)
    if s.size > 1 and float(s[1]) >= SCHMIDT_PRODUCT_TOL:
        raise ValidationError(f"ket is not a product state (second Schmidt coeff {s[1]:.3e})")
    return Ket(u[:, 0]), Ket(vh[0, :] * s[0])


def kron_ket(a: Ket, b: Ket) -> Ket:
    """Product ket a x b on the joint space."""
    return Ket(np.kron(a.amplitudes, b.amplitudes))
