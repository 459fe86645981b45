"""Centralized numeric tolerances.

Every operation reads its thresholds from a :class:`NumericPolicy`; the
module-level :data:`DEFAULT` instance is used when none is passed.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class NumericPolicy:
    hermiticity: float = 1e-12
    eig_hermiticity: float = 1e-10
    normalization: float = 1e-12
    psd: float = 1e-10
    rank_cut: float = 1e-10
    eig_residual: float = 1e-9
    orthogonality: float = 1e-8
    projector: float = 1e-8
    subspace_equality: float = 1e-9
    ces_threshold: float = 1e-6
    npt_margin: float = 1e-9
    witness_margin: float = 1e-10
    schmidt_rank_cut: float = 1e-9
    max_ambient_dim: int = 4096


DEFAULT = NumericPolicy()
