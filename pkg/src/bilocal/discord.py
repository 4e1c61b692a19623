"""Quantum discord for bipartite states with a qubit on the measured side.

The one-sided discord is the gap between quantum mutual information and the
measurement-based correlations, minimized over rank-1 projective measurements
on the chosen side. The minimizer runs a coarse Bloch-sphere grid followed by
a derivative-free simplex refinement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .linalg import ValidationError
from .states import (
    DensityMatrix,
    Ket,
    partial_trace,
    von_neumann_entropy,
)

ORTHONORMALITY_TOL = 1e-10
PROBABILITY_FLOOR = 1e-12
ZERO_DISCORD_TOL = 1e-7
BLOCK_STRUCTURE_TOL = 1e-10
DEGENERACY_GAP = 1e-8
DEFAULT_GRID_DEG = 2.0
REFINE_FTOL = 1e-9

_LN2 = np.log(2.0)


def bloch_basis(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal qubit basis at Bloch angles (theta, phi).

    Returns ((cos(t/2), e^{i phi} sin(t/2)), (-e^{-i phi} sin(t/2), cos(t/2))).
    """
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    e = np.exp(1j * phi)
    return (
        np.array([c, e * s], dtype=complex),
        np.array([-np.conj(e) * s, c], dtype=complex),
    )


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Complete set of rank-1 orthogonal projectors on one side.

    ``theta``/``phi`` are kept when the basis came from Bloch angles, for
    reporting only.
    """

    side: str
    kets: tuple[Ket, ...]
    theta: float | None = None
    phi: float | None = None

    def __post_init__(self):
        if self.side not in ("A", "B"):
            raise ValidationError(f"side must be 'A' or 'B', got {self.side!r}")
        kets = tuple(self.kets)
        if not kets:
            raise ValidationError("measurement needs at least one basis ket")
        d = kets[0].dim
        vecs = np.array([k.amplitudes for k in kets])
        if vecs.shape != (d, d):
            raise ValidationError("basis must contain exactly dim orthonormal kets")
        gram = vecs.conj() @ vecs.T
        if np.max(np.abs(gram - np.eye(d))) > ORTHONORMALITY_TOL:
            raise ValidationError("basis kets are not orthonormal")
        completeness = sum(k.projector() for k in kets)
        if np.max(np.abs(completeness - np.eye(d))) > ORTHONORMALITY_TOL:
            raise ValidationError("basis projectors do not sum to the identity")
        object.__setattr__(self, "kets", kets)

    @classmethod
    def from_bloch(cls, side: str, theta: float, phi: float) -> "ProjectiveMeasurement":
        v0, v1 = bloch_basis(theta, phi)
        return cls(side=side, kets=(Ket(v0), Ket(v1)), theta=float(theta), phi=float(phi))

    @property
    def dim(self) -> int:
        return self.kets[0].dim


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    """Everything a projective measurement produces on a bipartite state.

    ``conditional_states`` live on the unmeasured side; an entry is None when
    its probability is below the floor. ``averaged_state`` is the full
    post-measurement state, ``averaged_marginal`` the measured side's.
    """

    probabilities: np.ndarray
    conditional_states: tuple[DensityMatrix | None, ...]
    averaged_state: DensityMatrix
    averaged_marginal: DensityMatrix


def _conditional_blocks(rho: DensityMatrix, m: ProjectiveMeasurement) -> list[np.ndarray]:
    """Unnormalized conditional operators on the unmeasured side, one per outcome."""
    r = rho.mat.reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
    blocks = []
    for k in m.kets:
        v = k.amplitudes
        if m.side == "A":
            blocks.append(np.einsum("i,ijlk,l->jk", v.conj(), r, v))
        else:
            blocks.append(np.einsum("j,ijlk,k->il", v.conj(), r, v))
    return blocks


def project_measure(rho: DensityMatrix, m: ProjectiveMeasurement) -> MeasurementOutcome:
    """Apply a projective measurement on one side of a bipartite state."""
    d_meas = rho.dim_a if m.side == "A" else rho.dim_b
    d_other = rho.dim_b if m.side == "A" else rho.dim_a
    if m.dim != d_meas:
        raise ValidationError(
            f"measurement dim {m.dim} does not match side {m.side} dim {d_meas}"
        )
    blocks = _conditional_blocks(rho, m)
    probs = np.array([max(float(np.trace(b).real), 0.0) for b in blocks])
    conditionals = []
    avg = np.zeros_like(rho.mat)
    marginal = np.zeros((d_meas, d_meas), dtype=complex)
    for k, b, p in zip(m.kets, blocks, probs):
        proj = k.projector()
        if m.side == "A":
            avg += np.kron(proj, b)
        else:
            avg += np.kron(b, proj)
        marginal += p * proj
        if p > PROBABILITY_FLOOR:
            conditionals.append(DensityMatrix(b / p, d_other, 1))
        else:
            conditionals.append(None)
    return MeasurementOutcome(
        probabilities=probs,
        conditional_states=tuple(conditionals),
        averaged_state=DensityMatrix(avg, rho.dim_a, rho.dim_b),
        averaged_marginal=DensityMatrix(marginal, d_meas, 1),
    )


def conditional_entropy(rho: DensityMatrix, m: ProjectiveMeasurement) -> float:
    """Probability-weighted entropy of the unmeasured side, given the outcomes."""
    out = project_measure(rho, m)
    total = 0.0
    for p, cond in zip(out.probabilities, out.conditional_states):
        if cond is not None:
            total += p * von_neumann_entropy(cond)
    return total


def j2(rho: DensityMatrix, m: ProjectiveMeasurement) -> float:
    """Measurement-based correlation: the mutual-information analogue that
    replaces the joint entropy with the conditional entropy after measuring,
    penalized by the measurement's disturbance of the measured marginal."""
    out = project_measure(rho, m)
    s_other = von_neumann_entropy(partial_trace(rho, "B" if m.side == "A" else "A"))
    s_meas = von_neumann_entropy(partial_trace(rho, m.side))
    s_cond = 0.0
    for p, cond in zip(out.probabilities, out.conditional_states):
        if cond is not None:
            s_cond += p * von_neumann_entropy(cond)
    return s_other - s_cond + s_meas - von_neumann_entropy(out.averaged_marginal)


def d2_measured(rho: DensityMatrix, m: ProjectiveMeasurement) -> float:
    """Entropy produced by a specific measurement: S(post-measurement) - S(rho).

    Upper-bounds the one-sided discord for every choice of basis.
    """
    out = project_measure(rho, m)
    return von_neumann_entropy(out.averaged_state) - von_neumann_entropy(rho)


def _entropy_terms(lam: np.ndarray) -> np.ndarray:
    """Elementwise -x log2 x with the sub-floor entries contributing zero."""
    lam = np.clip(lam, 0.0, None)
    out = np.zeros_like(lam)
    mask = lam > PROBABILITY_FLOOR
    out[mask] = -lam[mask] * np.log(lam[mask]) / _LN2
    return out


def _objective_grid(rho: DensityMatrix, side: str, thetas: np.ndarray, phis: np.ndarray):
    """Discord objective H(p) + sum_a p_a S(cond_a) on a (theta, phi) grid.

    Vectorized over all grid points; conditional spectra come from the 2x2
    trace/determinant closed form when the unmeasured side is a qubit.
    """
    d_meas = rho.dim_a if side == "A" else rho.dim_b
    d_other = rho.dim_b if side == "A" else rho.dim_a
    if d_meas != 2:
        raise ValidationError(f"measured side must be a qubit, got dim {d_meas}")
    r = rho.mat.reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    th = tt.ravel()
    ph = pp.ravel()
    c = np.cos(th / 2.0)
    s = np.sin(th / 2.0)
    e = np.exp(1j * ph)
    vs = np.empty((th.size, 2, 2), dtype=complex)
    vs[:, 0, 0] = c
    vs[:, 0, 1] = e * s
    vs[:, 1, 0] = -np.conj(e) * s
    vs[:, 1, 1] = c
    # outer[n, a, i, l] = conj(v_a[i]) v_a[l] at grid point n
    outer = vs.conj()[:, :, :, None] * vs[:, :, None, :]
    if side == "A":
        blocks = np.tensordot(outer, r, axes=([2, 3], [0, 2]))
    else:
        blocks = np.tensordot(outer, r, axes=([2, 3], [1, 3]))
    probs = np.real(np.trace(blocks, axis1=2, axis2=3))
    if d_other == 2:
        det = np.real(
            blocks[..., 0, 0] * blocks[..., 1, 1] - blocks[..., 0, 1] * blocks[..., 1, 0]
        )
        root = np.sqrt(np.clip(probs * probs - 4.0 * det, 0.0, None))
        lam = np.stack([(probs - root) / 2.0, (probs + root) / 2.0], axis=-1)
    else:
        lam = np.linalg.eigvalsh(blocks)
    cond_terms = _entropy_terms(lam).sum(axis=-1) - _entropy_terms(probs)
    objective = (_entropy_terms(probs) + cond_terms).sum(axis=1)
    return th, ph, objective


def _objective_point(rho: DensityMatrix, side: str, theta: float, phi: float) -> float:
    _, _, obj = _objective_grid(rho, side, np.array([theta]), np.array([phi]))
    return float(obj[0])


def _canonical_angles(theta: float, phi: float) -> tuple[float, float]:
    """Fold (theta, phi) into theta in [0, pi], phi in [0, 2 pi)."""
    theta = theta % (2.0 * np.pi)
    if theta > np.pi:
        theta = 2.0 * np.pi - theta
        phi = phi + np.pi
    return theta, phi % (2.0 * np.pi)


@dataclass(frozen=True, eq=False)
class DiscordResult:
    """Minimized one-sided discord with its argmin measurement.

    ``value`` is clamped to [0, inf); ``raw_value`` keeps the pre-clamp
    number for diagnostics.
    """

    value: float
    raw_value: float
    theta: float
    phi: float
    measurement: ProjectiveMeasurement


def d2_side(
    rho: DensityMatrix,
    side: str,
    grid_deg: float = DEFAULT_GRID_DEG,
    refine_ftol: float = REFINE_FTOL,
) -> DiscordResult:
    """One-sided discord: minimize H(p) + sum_a p_a S(cond_a) over rank-1
    projective measurements on ``side``, then subtract S(rho).

    Two-stage search: exhaustive Bloch grid at ``grid_deg`` resolution, then
    Nelder-Mead from the best grid point. The measured side must be a qubit.
    """
    if side not in ("A", "B"):
        raise ValidationError(f"side must be 'A' or 'B', got {side!r}")
    d_meas = rho.dim_a if side == "A" else rho.dim_b
    if d_meas != 2:
        raise ValidationError(f"measured side must be a qubit, got dim {d_meas}")
    step = np.deg2rad(grid_deg)
    thetas = np.arange(0.0, np.pi + step / 2.0, step)
    phis = np.arange(0.0, 2.0 * np.pi - step / 2.0, step)
    th, ph, obj = _objective_grid(rho, side, thetas, phis)
    i_best = int(np.argmin(obj))
    best_obj = float(obj[i_best])
    t0, p0 = float(th[i_best]), float(ph[i_best])

    delta = step / 2.0
    res = minimize(
        lambda x: _objective_point(rho, side, x[0], x[1]),
        np.array([t0, p0]),
        method="Nelder-Mead",
        options={
            "initial_simplex": np.array(
                [[t0, p0], [t0 + delta, p0], [t0, p0 + delta]]
            ),
            "xatol": 1e-6,
            "fatol": refine_ftol,
            "maxiter": 2000,
        },
    )
    if np.isfinite(res.fun) and float(res.fun) < best_obj:
        best_obj = float(res.fun)
        t0, p0 = float(res.x[0]), float(res.x[1])

    raw = best_obj - von_neumann_entropy(rho)
    theta, phi = _canonical_angles(t0, p0)
    return DiscordResult(
        value=max(raw, 0.0),
        raw_value=raw,
        theta=theta,
        phi=phi,
        measurement=ProjectiveMeasurement.from_bloch(side, theta, phi),
    )


def d2_sym(rho: DensityMatrix, grid_deg: float = DEFAULT_GRID_DEG) -> float:
    """Symmetrized discord: min of the two one-sided values (both sides qubits)."""
    if rho.dim_a != 2 or rho.dim_b != 2:
        raise ValidationError(
            f"symmetrized discord needs two qubits, got dims ({rho.dim_a}, {rho.dim_b})"
        )
    return min(d2_side(rho, "A", grid_deg).value, d2_side(rho, "B", grid_deg).value)


def is_zero_discord(
    rho: DensityMatrix,
    side: str,
    tol: float = ZERO_DISCORD_TOL,
    grid_deg: float = DEFAULT_GRID_DEG,
) -> bool:
    """True iff the one-sided discord vanishes (below ``tol`` bits).

    Fast structural path: when the measured marginal is non-degenerate, the
    state has zero discord exactly when its off-diagonal blocks vanish in the
    marginal's eigenbasis; that check skips the optimizer. Degenerate
    marginals fall back to numeric minimization.
    """
    if side not in ("A", "B"):
        raise ValidationError(f"side must be 'A' or 'B', got {side!r}")
    d_meas = rho.dim_a if side == "A" else rho.dim_b
    if d_meas != 2:
        raise ValidationError(f"measured side must be a qubit, got dim {d_meas}")
    marginal = partial_trace(rho, side)
    vals, vecs = np.linalg.eigh(marginal.mat)
    if float(vals[1] - vals[0]) > DEGENERACY_GAP:
        r = rho.mat.reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
        v0, v1 = vecs[:, 0], vecs[:, 1]
        if side == "A":
            off = np.einsum("i,ijlk,l->jk", v0.conj(), r, v1)
        else:
            off = np.einsum("j,ijlk,k->il", v0.conj(), r, v1)
        if np.max(np.abs(off)) < BLOCK_STRUCTURE_TOL:
            return True
    return d2_side(rho, side, grid_deg).value < tol
