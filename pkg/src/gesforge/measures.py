"""Geometric entanglement measures, subspace seesaw and certification criteria."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ArgumentError, PreconditionError
from .linalg import (
    Bipartition,
    DensityOperator,
    PureState,
    all_cuts,
    permute_vector,
    schmidt,
    total_dim,
)
from .policy import DEFAULT, NumericPolicy
from .subspaces import Subspace, projector

log = logging.getLogger(__name__)

AGREEMENT_TOL = 1e-7


@dataclass(frozen=True)
class OptimizerPolicy:
    """Restart/iteration budget of the seesaw and rank-2 searches."""

    restarts: int = 64
    max_iters: int = 500
    conv_tol: float = 1e-10
    seed: int = 0xA5A5
    agreement_count: int = 5

    def __post_init__(self):
        for name in ("restarts", "max_iters", "agreement_count"):
            if getattr(self, name) < 1:
                raise ArgumentError(f"{name} must be positive")
        if self.conv_tol <= 0:
            raise ArgumentError("conv_tol must be positive")
        if self.seed < 0:
            raise ArgumentError("seed must be nonnegative")

    def rng(self, restart: int) -> np.random.Generator:
        """Independent generator for one restart, derived from the root seed."""
        return np.random.default_rng([self.seed & 0xFFFFFFFFFFFFFFFF, restart])


@dataclass(frozen=True, eq=False)
class MeasureReport:
    value: float
    witness_vector: PureState
    stable: bool
    restarts_agreeing: int
    product_vector: PureState | None = None
    history: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if not -1e-12 <= self.value <= 1 + 1e-12:
            raise ArgumentError(f"measure value {self.value} outside [0, 1]")


def geometric_measure_state(psi: PureState, cut: Bipartition | None = None) -> float:
    """``1 - lambda_max`` with ``lambda_max`` the largest squared Schmidt coefficient."""
    if cut is None:
        cut = Bipartition.of({0}, psi.n_parties)
    c = schmidt(psi, cut).coeffs
    return float(max(0.0, 1.0 - c[0] ** 2))


def gme_measure_state(psi: PureState) -> tuple[float, Bipartition]:
    """Minimum of the geometric measure over all cuts, with the minimizing cut.

    Ties go to the lexicographically smallest member set (cuts are
    represented by the side holding party 0).
    """
    if psi.n_parties < 2:
        raise ArgumentError("need at least two parties")
    best = None
    for cut in all_cuts(psi.n_parties):
        g = geometric_measure_state(psi, cut)
        if best is None or g < best[0] - 1e-15:
            best = (g, cut)
    return best


def _grouped_basis(basis: np.ndarray, dims: Sequence[int], cut: Bipartition):
    a, b = cut.grouping()
    da, db = cut.side_dims(dims)
    t = permute_vector(basis, dims, a + b).reshape(da, db, basis.shape[1])
    return t, a + b


def _top_left(c: np.ndarray) -> tuple[np.ndarray, float]:
    u, s, _ = np.linalg.svd(c, full_matrices=False)
    return u[:, 0], float(s[0] ** 2)


def _seesaw(t: np.ndarray, a0: np.ndarray, opt: OptimizerPolicy):
    """Alternating maximization of ``<a,b|P|a,b>`` for one restart.

    Returns (objective, a, b, history); the history is nondecreasing.
    """
    a = a0 / np.linalg.norm(a0)
    b, val = _top_left(np.einsum("i,ijk->jk", a.conj(), t))
    hist = [val]
    for _ in range(opt.max_iters):
        a, _ = _top_left(np.einsum("j,ijk->ik", b.conj(), t))
        b, new = _top_left(np.einsum("i,ijk->jk", a.conj(), t))
        hist.append(new)
        if new - val < opt.conv_tol:
            val = max(val, new)
            break
        val = new
    return val, a, b, hist


def _random_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _overlap_search(basis: np.ndarray, dims: Sequence[int], cut: Bipartition,
                    opt: OptimizerPolicy) -> MeasureReport:
    t, order = _grouped_basis(basis, dims, cut)
    da, db, k = t.shape
    # restart 0 starts from the least entangled basis column, so the result
    # never falls below the best column's own top Schmidt weight
    tops = [np.linalg.svd(t[:, :, j], full_matrices=False) for j in range(k)]
    j0 = int(np.argmax([s[1][0] for s in tops]))
    results = []
    for r in range(opt.restarts):
        a0 = tops[j0][0][:, 0] if r == 0 else _random_vector(da, opt.rng(r))
        results.append(_seesaw(t, a0, opt))
    vals = np.array([res[0] for res in results])
    ibest = int(np.argmax(vals))
    best, a, b, hist = results[ibest]
    agreeing = int(np.sum(vals >= best - AGREEMENT_TOL))
    stable = agreeing >= opt.agreement_count
    grouped_dims = [dims[p] for p in order]
    inverse = list(np.argsort(order))
    prod = permute_vector(np.kron(a, b), grouped_dims, inverse)
    proj = basis @ (basis.conj().T @ prod)
    best = float(min(1.0, max(0.0, best)))
    return MeasureReport(
        value=best,
        witness_vector=PureState.from_vector(proj, dims),
        stable=bool(stable),
        restarts_agreeing=agreeing,
        product_vector=PureState.from_vector(prod, dims),
        history=tuple(hist),
    )


def max_product_overlap(p: np.ndarray, dims: Sequence[int], opt: OptimizerPolicy = OptimizerPolicy(),
                        policy: NumericPolicy = DEFAULT) -> MeasureReport:
    """Seesaw estimate of ``max <a,b|P|a,b>`` over unit product vectors.

    The reported value is attained by ``report.product_vector``, so it is
    a certified lower bound on the true maximum.
    """
    p = np.asarray(p, dtype=complex)
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise ArgumentError("max_product_overlap expects (d_left, d_right)")
    n = total_dim(dims)
    if p.shape != (n, n):
        raise ArgumentError(f"projector shape {p.shape} does not match {dims}")
    if (np.max(np.abs(p @ p - p)) > policy.projector
            or np.max(np.abs(p - p.conj().T)) > policy.projector):
        raise ArgumentError("input is not an orthogonal projector")
    w, v = np.linalg.eigh((p + p.conj().T) / 2)
    basis = v[:, w > 0.5]
    if basis.shape[1] == 0:
        raise ArgumentError("projector is zero")
    return _overlap_search(basis, dims, Bipartition.of({0}, 2), opt)


def _complement_report(rep: MeasureReport) -> MeasureReport:
    return MeasureReport(
        value=float(min(1.0, max(0.0, 1.0 - rep.value))),
        witness_vector=rep.witness_vector,
        stable=rep.stable,
        restarts_agreeing=rep.restarts_agreeing,
        product_vector=rep.product_vector,
        history=rep.history,
    )


def subspace_measure_across_cut(s: Subspace, cut: Bipartition,
                                opt: OptimizerPolicy = OptimizerPolicy()) -> MeasureReport:
    """Geometric measure of the least entangled vector of ``s`` across ``cut``.

    ``witness_vector`` is that least entangled vector (within ``s``).
    """
    if cut.n_parties != s.n_parties:
        raise ArgumentError(f"cut over {cut.n_parties} parties used with profile {s.dims}")
    return _complement_report(_overlap_search(s.basis, s.dims, cut, opt))


def subspace_geometric_measure(s: Subspace, opt: OptimizerPolicy = OptimizerPolicy()) -> MeasureReport:
    if s.n_parties != 2:
        raise ArgumentError(f"expected a bipartite subspace, got profile {s.dims}")
    return subspace_measure_across_cut(s, Bipartition.of({0}, 2), opt)


def is_certified_ces(report: MeasureReport, policy: NumericPolicy = DEFAULT) -> bool:
    return report.value > policy.ces_threshold


def subspace_gme_measure(s: Subspace, opt: OptimizerPolicy = OptimizerPolicy()
                         ) -> tuple[MeasureReport, Bipartition, dict]:
    """Minimum over all cuts of the per-cut subspace measure.

    Returns the minimizing report, its cut and the full per-cut mapping.
    """
    per_cut = {cut: subspace_measure_across_cut(s, cut, opt) for cut in all_cuts(s.n_parties)}
    cut = min(per_cut, key=lambda c: per_cut[c].value)
    return per_cut[cut], cut, per_cut


def ges_measure_chain(components: Sequence) -> float:
    """GME measure of a chain built from components with the given measures."""
    vals = [c.value if isinstance(c, MeasureReport) else float(c) for c in components]
    if not vals:
        raise ArgumentError("no components")
    return min(vals)


def overlap(rho: DensityOperator, w: Subspace) -> float:
    """``Tr(rho P_W)`` by full matrix trace."""
    if rho.dims != w.dims:
        raise ArgumentError(f"profiles differ: {rho.dims} vs {w.dims}")
    return float(np.real(np.trace(rho.matrix @ projector(w))))


def witness_value(rho: DensityOperator, w: Subspace, g_gme_of_w: float) -> float:
    """``Tr(rho P_W) + G_GME(W) - 1``; a positive value certifies genuine entanglement."""
    if not 0.0 <= g_gme_of_w <= 1.0:
        raise ArgumentError(f"G_GME must lie in [0, 1], got {g_gme_of_w}")
    return overlap(rho, w) + g_gme_of_w - 1.0


@dataclass(frozen=True)
class ConditionResult:
    lhs: float
    rhs: float
    certified: bool


def product_state_ge_condition(alpha: DensityOperator, beta: DensityOperator,
                               w1: Subspace, w2: Subspace, g1: float, g2: float) -> ConditionResult:
    """Sufficient condition for genuine entanglement of ``alpha (x) beta`` with B1B2 joined.

    Uses ``Tr(a(x)b P_{W1(x)W2}) = Tr(a P_W1) Tr(b P_W2)``.
    """
    for w in (w1, w2):
        if w.n_parties != 2:
            raise ArgumentError(f"expected bipartite subspaces, got profile {w.dims}")
    lhs = overlap(alpha, w1) * overlap(beta, w2)
    rhs = 1.0 - min(g1, g2)
    return ConditionResult(lhs, rhs, lhs > rhs)


def cren_lower_bound(overlap1: float, overlap2: float, g12: float) -> float:
    """Lower bound on the convex-roof extended negativity of a product state.

    Only meaningful when ``overlap1 * overlap2 + g12 - 1 >= 0``.
    """
    if not 0.0 <= g12 < 1.0:
        raise ArgumentError(f"g12 must lie in [0, 1), got {g12}")
    for o in (overlap1, overlap2):
        if not -1e-12 <= o <= 1 + 1e-12:
            raise ArgumentError(f"overlap {o} outside [0, 1]")
    return (overlap1 * overlap2 + g12 - 1.0) / (2.0 * (1.0 - g12))


def _check_orthogonal(states: Sequence[PureState], policy: NumericPolicy) -> None:
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            ov = abs(np.vdot(states[i].amplitudes, states[j].amplitudes))
            if ov > policy.orthogonality:
                raise PreconditionError(f"states {i} and {j} are not orthogonal (overlap {ov:.3g})")


def theorem8_condition(states: Sequence[PureState], policy: NumericPolicy = DEFAULT
                       ) -> tuple[float, bool]:
    """``sum_i G(psi_i) - (k - 1)`` for pairwise orthogonal bipartite states.

    A positive value certifies that their span is completely entangled;
    values within ``policy.witness_margin`` of zero are not certified.
    """
    states = list(states)
    if not states:
        raise ArgumentError("no states")
    for s in states:
        if s.n_parties != 2:
            raise ArgumentError(f"expected bipartite states, got profile {s.dims}")
    _check_orthogonal(states, policy)
    val = sum(geometric_measure_state(s) for s in states) - (len(states) - 1)
    return float(val), bool(val > policy.witness_margin)


def lemma9_certify(pairs: Sequence[tuple[PureState, PureState]],
                   policy: NumericPolicy = DEFAULT) -> bool:
    """Decide whether the mixture of joined products ``phi_i (x) chi_i`` is certified GE.

    Returns False when the orthogonal-sum condition on the ``chi`` states
    is inconclusive.
    """
    pairs = list(pairs)
    if not pairs:
        raise ArgumentError("no pairs")
    bad = [i for i, (phi, _) in enumerate(pairs) if geometric_measure_state(phi) <= policy.ces_threshold]
    if bad:
        raise PreconditionError(f"phi states at indices {bad} are not entangled")
    _, certified = theorem8_condition([chi for _, chi in pairs], policy)
    return certified


def joined_mixture(pairs: Sequence[tuple[PureState, PureState]]) -> DensityOperator:
    """Uniform mixture of the joined products ``phi_i (x) chi_i`` on ``A (B1 B2) C``."""
    pairs = list(pairs)
    phi0, chi0 = pairs[0]
    dims = (phi0.dims[0], phi0.dims[1] * chi0.dims[0], chi0.dims[1])
    n = total_dim(dims)
    m = np.zeros((n, n), dtype=complex)
    for phi, chi in pairs:
        v = np.kron(phi.amplitudes, chi.amplitudes)
        m += np.outer(v, v.conj())
    return DensityOperator.from_matrix(m, dims)
