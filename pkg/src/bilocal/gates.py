"""Bipartite unitaries and Kraus channels, plus LOCC-implementability verdicts.

Two verdict routines decide whether a gate restricted to a finite unentangled
input set can be realized by local operations and classical communication
alone:

* ``lemma1_verdict`` -- applies when the input set contains a pure product
  state and the maximally mixed state; any further input with nonzero
  symmetrized discord then rules out an implementation built from local CP
  maps and POVMs.
* ``lemma2_verdict`` -- applies to two non-orthogonal pure product inputs;
  a change of symmetrized discord across the gate on any mixture of the two
  rules out an LOCC implementation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .discord import DEFAULT_GRID_DEG, ZERO_DISCORD_TOL, d2_sym
from .linalg import ValidationError, as_complex_matrix
from .states import (
    DensityMatrix,
    Ket,
    density_from_ket,
    is_ppt_separable,
    kron_ket,
    overlap,
    partial_trace,
    product_factors,
    schmidt_coefficients,
)

UNITARITY_TOL = 1e-10
TRACE_PRESERVATION_TOL = 1e-9
UNITALITY_TOL = 1e-9
PROPERTY1_TOL = 1e-8
PURITY_TOL = 1e-9
OVERLAP_TOL = 1e-9
DISCORD_DIFF_TOL = 1e-5
DEFAULT_WEIGHTS = tuple(round(0.1 * k, 1) for k in range(1, 10))


def require_unitary(u, tol: float = UNITARITY_TOL) -> np.ndarray:
    u = as_complex_matrix(u)
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > tol:
        raise ValidationError(f"matrix is not unitary (deviation {dev:.3e})")
    return u


def apply_unitary(rho: DensityMatrix, u) -> DensityMatrix:
    """Conjugate a state by a unitary, U rho U^dag."""
    u = require_unitary(u)
    if u.shape[0] != rho.dim:
        raise ValidationError(f"unitary dim {u.shape[0]} does not match state dim {rho.dim}")
    return DensityMatrix(u @ rho.mat @ u.conj().T, rho.dim_a, rho.dim_b)


@dataclass(frozen=True, eq=False)
class KrausMap:
    """A finite Kraus-operator list, not necessarily trace preserving."""

    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(as_complex_matrix(k) for k in self.kraus)
        if not ops:
            raise ValidationError("Kraus list must be non-empty")
        d = ops[0].shape[0]
        if any(k.shape[0] != d for k in ops):
            raise ValidationError("Kraus operators must share one dimension")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def apply(self, mat: np.ndarray) -> np.ndarray:
        """Raw Kraus sum sum_k K_k mat K_k^dag."""
        mat = as_complex_matrix(mat)
        if mat.shape[0] != self.dim:
            raise ValidationError(f"input dim {mat.shape[0]} does not match map dim {self.dim}")
        out = np.zeros_like(mat)
        for k in self.kraus:
            out += k @ mat @ k.conj().T
        return out

    def apply_to_state(self, rho: DensityMatrix) -> DensityMatrix:
        """Apply and renormalize by the output trace (checked positive)."""
        out = self.apply(rho.mat)
        tr = float(np.trace(out).real)
        if tr <= 1e-12:
            raise ValidationError(f"map annihilates the state (output trace {tr:.3e})")
        return DensityMatrix(out / tr, rho.dim_a, rho.dim_b)


@dataclass(frozen=True, eq=False)
class QuantumChannel(KrausMap):
    """Trace-preserving Kraus map: sum_k K_k^dag K_k = 1 within 1e-9."""

    def __post_init__(self):
        super().__post_init__()
        total = sum(k.conj().T @ k for k in self.kraus)
        dev = np.max(np.abs(total - np.eye(self.dim)))
        if dev > TRACE_PRESERVATION_TOL:
            raise ValidationError(f"channel is not trace preserving (deviation {dev:.3e})")

    @classmethod
    def from_unitary(cls, u) -> "QuantumChannel":
        return cls(kraus=(require_unitary(u),))


def channel_apply(rho: DensityMatrix, g: QuantumChannel) -> DensityMatrix:
    """Kraus sum of a trace-preserving channel, revalidated as a state."""
    return DensityMatrix(g.apply(rho.mat), rho.dim_a, rho.dim_b)


def dual_map(g: KrausMap) -> KrausMap:
    """Adjoint map rho -> sum_k K_k^dag rho K_k.

    Unital whenever ``g`` is trace preserving, but generally not trace
    preserving itself, so the result is a plain KrausMap whose state
    application renormalizes instead of enforcing a Kraus completeness sum.
    """
    return KrausMap(kraus=tuple(k.conj().T for k in g.kraus))


def is_unital(g: KrausMap) -> bool:
    """True iff the map fixes the identity: sum_k K_k K_k^dag = 1."""
    total = sum(k @ k.conj().T for k in g.kraus)
    return float(np.max(np.abs(total - np.eye(g.dim)))) <= UNITALITY_TOL


def check_property1(g: QuantumChannel, pure_inputs) -> bool:
    """True iff the dual map inverts the channel on every given pure input.

    Each input must be pure (tr rho^2 = 1 within 1e-9). The comparison is
    entrywise within 1e-8.
    """
    dual = dual_map(g)
    for rho in pure_inputs:
        if abs(rho.purity() - 1.0) > PURITY_TOL:
            raise ValidationError(f"input is not pure (purity {rho.purity()!r})")
        round_trip = dual.apply(g.apply(rho.mat))
        if float(np.max(np.abs(round_trip - rho.mat))) > PROPERTY1_TOL:
            return False
    return True


@dataclass(frozen=True, eq=False)
class OverlapFactorization:
    """Per-side overlap bookkeeping for two product states through a unitary.

    ``classification`` is "constant" when both per-side overlap moduli are
    preserved, "traded" when they shift against each other, and
    "non-product-output" when a transformed state is entangled (per-side
    output overlaps are then None). ``product_deviation`` is the residual of
    the joint-overlap equality that unitarity guarantees.
    """

    in_overlap_a: complex
    in_overlap_b: complex
    out_overlap_a: complex | None
    out_overlap_b: complex | None
    product_in: complex
    product_out: complex
    classification: str
    product_deviation: float


def overlap_factorization(
    pair1: tuple[Ket, Ket], pair2: tuple[Ket, Ket], u
) -> OverlapFactorization:
    """Track how a unitary redistributes the per-side overlaps of two
    product states."""
    u = require_unitary(u)
    a1, b1 = pair1
    a2, b2 = pair2
    da, db = a1.dim, b1.dim
    if a2.dim != da or b2.dim != db:
        raise ValidationError("the two product pairs must share local dimensions")
    if u.shape[0] != da * db:
        raise ValidationError(f"unitary dim {u.shape[0]} does not match {da}x{db}")

    in_a = overlap(a1, a2)
    in_b = overlap(b1, b2)
    psi1 = kron_ket(a1, b1)
    psi2 = kron_ket(a2, b2)
    out1 = Ket(u @ psi1.amplitudes)
    out2 = Ket(u @ psi2.amplitudes)
    product_in = in_a * in_b
    product_out = overlap(out1, out2)
    deviation = abs(product_in - product_out)

    s1 = schmidt_coefficients(out1, da, db)
    s2 = schmidt_coefficients(out2, da, db)
    if (s1.size > 1 and float(s1[1]) >= OVERLAP_TOL) or (
        s2.size > 1 and float(s2[1]) >= OVERLAP_TOL
    ):
        return OverlapFactorization(
            in_overlap_a=in_a,
            in_overlap_b=in_b,
            out_overlap_a=None,
            out_overlap_b=None,
            product_in=product_in,
            product_out=product_out,
            classification="non-product-output",
            product_deviation=deviation,
        )

    a1p, b1p = product_factors(out1, da, db)
    a2p, b2p = product_factors(out2, da, db)
    out_a = overlap(a1p, a2p)
    out_b = overlap(b1p, b2p)
    constant = (
        abs(abs(in_a) - abs(out_a)) <= OVERLAP_TOL
        and abs(abs(in_b) - abs(out_b)) <= OVERLAP_TOL
    )
    return OverlapFactorization(
        in_overlap_a=in_a,
        in_overlap_b=in_b,
        out_overlap_a=out_a,
        out_overlap_b=out_b,
        product_in=product_in,
        product_out=product_out,
        classification="constant" if constant else "traded",
        product_deviation=deviation,
    )


@dataclass(frozen=True, eq=False)
class GateCase:
    """A bipartite unitary together with its allowed (separable) inputs."""

    unitary: np.ndarray
    inputs: tuple[DensityMatrix, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        u = require_unitary(self.unitary)
        u.setflags(write=False)
        inputs = tuple(self.inputs)
        if not inputs:
            raise ValidationError("a gate case needs at least one input state")
        for i, rho in enumerate(inputs):
            if rho.dim != u.shape[0]:
                raise ValidationError(f"input {i} dim {rho.dim} does not match the unitary")
            if not is_ppt_separable(rho):
                raise ValidationError(f"input {i} is entangled; the allowed set must be unentangled")
        labels = tuple(self.labels) or tuple(f"state{i}" for i in range(len(inputs)))
        if len(labels) != len(inputs):
            raise ValidationError("labels and inputs must have equal length")
        object.__setattr__(self, "unitary", u)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "labels", labels)


@dataclass(frozen=True)
class LemmaVerdict:
    """Outcome of an implementability criterion.

    ``applicable`` records whether the criterion's hypotheses held;
    ``locc_ruled_out`` may only be True when they did. ``witness`` carries
    the offending input or the per-weight discord pairs.
    """

    lemma: int
    applicable: bool
    locc_ruled_out: bool
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.locc_ruled_out and not self.applicable:
            raise ValidationError("locc_ruled_out requires the criterion to be applicable")


def _is_pure_product(rho: DensityMatrix) -> bool:
    if abs(rho.purity() - 1.0) > PURITY_TOL:
        return False
    vals, vecs = np.linalg.eigh(rho.mat)
    psi = Ket(vecs[:, -1])
    s = schmidt_coefficients(psi, rho.dim_a, rho.dim_b)
    return s.size < 2 or float(s[1]) < OVERLAP_TOL


def lemma1_verdict(
    case: GateCase,
    discord_tol: float = ZERO_DISCORD_TOL,
    grid_deg: float = DEFAULT_GRID_DEG,
) -> LemmaVerdict:
    """Unital-set criterion for two-qubit gate cases.

    Applicable when the allowed set contains a pure product state and the
    maximally mixed state. Then an implementation out of local CP maps,
    POVMs and classical communication forces every other allowed input to
    have zero symmetrized discord, so any input with discord above
    ``discord_tol`` rules such an implementation out.
    """
    some = case.inputs[0]
    if some.dim_a != 2 or some.dim_b != 2 or case.unitary.shape[0] != 4:
        raise ValidationError("this criterion is implemented for two-qubit cases only")
    eye4 = np.eye(4) / 4.0
    pure_product = [i for i, r in enumerate(case.inputs) if _is_pure_product(r)]
    max_mixed = [
        i for i, r in enumerate(case.inputs) if float(np.max(np.abs(r.mat - eye4))) <= 1e-9
    ]
    applicable = bool(pure_product) and bool(max_mixed)
    if not applicable:
        return LemmaVerdict(
            lemma=1,
            applicable=False,
            locc_ruled_out=False,
            witness={
                "has_pure_product": bool(pure_product),
                "has_maximally_mixed": bool(max_mixed),
            },
        )
    skip = set(pure_product) | set(max_mixed)
    for i, rho in enumerate(case.inputs):
        if i in skip:
            continue
        value = d2_sym(rho, grid_deg)
        if value > discord_tol:
            return LemmaVerdict(
                lemma=1,
                applicable=True,
                locc_ruled_out=True,
                witness={
                    "input_index": i,
                    "label": case.labels[i],
                    "d2_sym": value,
                    "discord_tol": discord_tol,
                },
            )
    return LemmaVerdict(
        lemma=1,
        applicable=True,
        locc_ruled_out=False,
        witness={"discord_tol": discord_tol},
    )


def lemma2_verdict(
    psi1: Ket,
    psi2: Ket,
    u,
    dim_a: int = 2,
    dim_b: int = 2,
    weights=DEFAULT_WEIGHTS,
    diff_tol: float = DISCORD_DIFF_TOL,
    grid_deg: float = DEFAULT_GRID_DEG,
) -> LemmaVerdict:
    """Discord-change criterion for two non-orthogonal pure product inputs.

    For each weight w the symmetrized discord of w|psi1><psi1| +
    (1-w)|psi2><psi2| is compared before and after the gate; a difference
    above ``diff_tol`` for any w rules out an LOCC implementation on a set
    containing the two states. Orthogonal or non-product inputs violate the
    hypotheses and raise.
    """
    u = require_unitary(u)
    if psi1.dim != dim_a * dim_b or psi2.dim != dim_a * dim_b:
        raise ValidationError(f"kets do not match dims ({dim_a}, {dim_b})")
    if u.shape[0] != dim_a * dim_b:
        raise ValidationError(f"unitary dim {u.shape[0]} does not match {dim_a}x{dim_b}")
    ov = overlap(psi1, psi2)
    if abs(ov) <= OVERLAP_TOL:
        raise ValidationError(
            f"non-orthogonality hypothesis violated: |<psi1|psi2>| = {abs(ov):.3e}"
        )
    for name, psi in (("psi1", psi1), ("psi2", psi2)):
        s = schmidt_coefficients(psi, dim_a, dim_b)
        if s.size > 1 and float(s[1]) >= OVERLAP_TOL:
            raise ValidationError(
                f"product hypothesis violated: {name} has second Schmidt coeff {s[1]:.3e}"
            )
    weights = tuple(float(w) for w in weights)
    if not weights or any(not (0.0 < w < 1.0) for w in weights):
        raise ValidationError("weights must lie strictly between 0 and 1")

    p1 = psi1.projector()
    p2 = psi2.projector()
    table = []
    first_w = None
    for w in weights:
        rho_in = DensityMatrix(w * p1 + (1.0 - w) * p2, dim_a, dim_b)
        rho_out = apply_unitary(rho_in, u)
        d_in = d2_sym(rho_in, grid_deg)
        d_out = d2_sym(rho_out, grid_deg)
        diff = abs(d_in - d_out)
        table.append({"w": w, "d_in": d_in, "d_out": d_out, "diff": diff})
        if first_w is None and diff > diff_tol:
            first_w = w
    return LemmaVerdict(
        lemma=2,
        applicable=True,
        locc_ruled_out=first_w is not None,
        witness={"weights": table, "first_w": first_w, "diff_tol": diff_tol},
    )
