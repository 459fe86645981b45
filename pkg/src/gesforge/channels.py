"""Channels defined by isometries onto bipartite subspaces.

An isometry ``V: C^{d_A} -> C^{d_B} (x) C^{d_C}`` gives the channel
``rho -> Tr_C(V rho V^dag)`` (keep B) and its complement (keep C).
The maximal output norm for ``p = inf`` is obtained from the range
subspace: it is the largest product overlap of the range projector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .linalg import Bipartition, DensityOperator, PureState, partial_trace_matrix
from .measures import MeasureReport, OptimizerPolicy, subspace_measure_across_cut
from .policy import DEFAULT, NumericPolicy
from .subspaces import Subspace, full_space, tensor

KEEP_B = 0
KEEP_C = 1


@dataclass(frozen=True, eq=False)
class IsometryChannel:
    isometry: np.ndarray
    out_dims: tuple[int, int]
    keep: int = KEEP_B
    policy: NumericPolicy = DEFAULT

    def __post_init__(self):
        v = np.asarray(self.isometry, dtype=complex)
        out_dims = tuple(int(d) for d in self.out_dims)
        if len(out_dims) != 2 or v.ndim != 2 or v.shape[0] != out_dims[0] * out_dims[1]:
            raise ArgumentError(f"isometry of shape {v.shape} does not map into {out_dims}")
        if self.keep not in (KEEP_B, KEEP_C):
            raise ArgumentError("keep must be 0 (B) or 1 (C)")
        err = np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1])))
        if err > self.policy.rank_cut:
            raise ArgumentError(f"V^dag V deviates from identity by {err:.3g}")
        object.__setattr__(self, "isometry", v)
        object.__setattr__(self, "out_dims", out_dims)

    @property
    def input_dim(self) -> int:
        return self.isometry.shape[1]

    @property
    def output_dim(self) -> int:
        return self.out_dims[self.keep]

    def range_subspace(self) -> Subspace:
        return Subspace(self.isometry, self.out_dims, self.policy)

    def complementary(self) -> "IsometryChannel":
        return IsometryChannel(self.isometry, self.out_dims, 1 - self.keep, self.policy)


def channel_from_subspace(w: Subspace, keep: int = KEEP_B) -> IsometryChannel:
    if w.n_parties != 2:
        raise ArgumentError(f"channel needs a bipartite subspace, got profile {w.dims}")
    return IsometryChannel(w.basis, w.dims, keep, w.policy)


def apply(ch: IsometryChannel, rho) -> DensityOperator:
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    if m.shape != (ch.input_dim, ch.input_dim):
        raise ArgumentError(f"input of shape {m.shape} for a channel on C^{ch.input_dim}")
    big = ch.isometry @ m @ ch.isometry.conj().T
    out = partial_trace_matrix(big, ch.out_dims, [1 - ch.keep])
    return DensityOperator.from_matrix(out, (ch.output_dim,), ch.policy)


@dataclass(frozen=True, eq=False)
class OutputNormResult:
    value: float
    input_vector: np.ndarray
    certified: bool
    report: MeasureReport


def _from_report(ch_iso: np.ndarray, rep: MeasureReport) -> OutputNormResult:
    value = 1.0 - rep.value
    x = ch_iso.conj().T @ rep.witness_vector.amplitudes
    x = x / np.linalg.norm(x)
    return OutputNormResult(float(value), x, rep.stable, rep)


def nu_infinity(ch: IsometryChannel, opt: OptimizerPolicy = OptimizerPolicy()) -> OutputNormResult:
    """Maximal largest output eigenvalue over pure inputs.

    ``certified`` is False when too few restarts agreed; the value is then
    a lower bound attained by ``input_vector``.
    """
    rep = subspace_measure_across_cut(ch.range_subspace(), Bipartition.of({ch.keep}, 2), opt)
    return _from_report(ch.isometry, rep)


def nu_infinity_extended(ch: IsometryChannel, ancilla_dim: int,
                         opt: OptimizerPolicy = OptimizerPolicy()) -> OutputNormResult:
    """Maximal output norm of ``id_ancilla (x) channel``.

    The range of ``1 (x) V`` is ``C^ancilla (x) W`` on parties
    (ancilla, B, C); the output keeps the ancilla and the kept factor.
    """
    ancilla_dim = int(ancilla_dim)
    if ancilla_dim < 1:
        raise ArgumentError("ancilla_dim must be at least 1")
    if ancilla_dim == 1:
        return nu_infinity(ch, opt)
    big = tensor(full_space((ancilla_dim,)), ch.range_subspace())
    cut = Bipartition.of({0, 1 + ch.keep}, 3)
    rep = subspace_measure_across_cut(big, cut, opt)
    iso = np.kron(np.eye(ancilla_dim), ch.isometry)
    return _from_report(iso, rep)
