"""Seeded random generators for states, unitaries, measurements and channels.

Pure states are Haar distributed (normalized complex Gaussian vectors),
mixed states come from the Ginibre construction G G^dag / tr, unitaries from
QR of a Ginibre matrix with the phase fix that makes the distribution Haar.
"""

from __future__ import annotations

import numpy as np

from .discord import ProjectiveMeasurement
from .gates import KrausMap, QuantumChannel
from .linalg import ValidationError
from .states import DensityMatrix, Ket


def random_ket(rng: np.random.Generator, dim: int) -> Ket:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return Ket(v / np.linalg.norm(v))


def random_product_ket(rng: np.random.Generator, dim_a: int, dim_b: int) -> Ket:
    a = random_ket(rng, dim_a)
    b = random_ket(rng, dim_b)
    return Ket(np.kron(a.amplitudes, b.amplitudes))


def random_density(rng: np.random.Generator, dim_a: int, dim_b: int = 1) -> DensityMatrix:
    d = dim_a * dim_b
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, dim_a, dim_b)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_local_unitary(rng: np.random.Generator, dim_a: int, dim_b: int) -> np.ndarray:
    return np.kron(random_unitary(rng, dim_a), random_unitary(rng, dim_b))


def random_measurement(rng: np.random.Generator, side: str, dim: int = 2) -> ProjectiveMeasurement:
    u = random_unitary(rng, dim)
    return ProjectiveMeasurement(side=side, kets=tuple(Ket(u[:, i]) for i in range(dim)))


def zero_discord_state(
    rng: np.random.Generator, side: str = "A", dim_other: int = 2
) -> DensityMatrix:
    """Random state with exactly zero discord on ``side``: a mixture of
    orthogonal rank-1 projectors there, each paired with an arbitrary state
    on the other side."""
    if side not in ("A", "B"):
        raise ValidationError(f"side must be 'A' or 'B', got {side!r}")
    u = random_unitary(rng, 2)
    p = rng.dirichlet(np.ones(2))
    mat = np.zeros((2 * dim_other, 2 * dim_other), dtype=complex)
    for a in range(2):
        proj = np.outer(u[:, a], u[:, a].conj())
        other = random_density(rng, dim_other).mat
        if side == "A":
            mat += p[a] * np.kron(proj, other)
        else:
            mat += p[a] * np.kron(other, proj)
    if side == "A":
        return DensityMatrix(mat, 2, dim_other)
    return DensityMatrix(mat, dim_other, 2)


def random_channel(rng: np.random.Generator, dim: int, n_kraus: int = 4) -> QuantumChannel:
    """Trace-preserving channel from a Haar unitary on system x environment."""
    u = random_unitary(rng, dim * n_kraus)
    blocks = u.reshape(dim, n_kraus, dim, n_kraus)
    kraus = tuple(blocks[:, i, :, 0] for i in range(n_kraus))
    return QuantumChannel(kraus=kraus)


def random_unital_channel(rng: np.random.Generator, dim: int, n_terms: int = 4) -> QuantumChannel:
    """Mixed-unitary channel: convex combination of Haar unitaries."""
    w = rng.dirichlet(np.ones(n_terms))
    kraus = tuple(np.sqrt(w[i]) * random_unitary(rng, dim) for i in range(n_terms))
    return QuantumChannel(kraus=kraus)
