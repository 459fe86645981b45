"""Partial-transpose checks and one-copy distillability witnesses."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArgumentError
from .linalg import (
    Bipartition,
    DensityOperator,
    PureState,
    all_cuts,
    bipartite_matrix,
    partial_trace_matrix,
    partial_transpose,
    permute_matrix,
    permute_vector,
)
from .constructions import chain_ges
from .measures import OptimizerPolicy
from .policy import DEFAULT, NumericPolicy
from .subspaces import Subspace, encode_vector, projector


class PreconditionWarning(UserWarning):
    """A procedure's hypothesis does not hold; it returned no result."""


@dataclass(frozen=True, eq=False)
class PTReport:
    cut: Bipartition
    min_eigenvalue: float
    witness_eigvec: np.ndarray

    def to_dict(self) -> dict:
        return {
            "cut": self.cut.label(),
            "min_eigenvalue": self.min_eigenvalue,
            "witness_vector": encode_vector(self.witness_eigvec),
        }


@dataclass(frozen=True, eq=False)
class DistillWitness:
    """Schmidt-rank-2 vector ``psi`` with ``<psi| rho^T |psi> = value``.

    The transpose acts on ``cut.members``.
    """

    cut: Bipartition
    psi: PureState
    value: float

    def to_dict(self) -> dict:
        return {
            "cut": self.cut.label(),
            "witness_value": self.value,
            "witness_vector": encode_vector(self.psi.amplitudes),
        }


def min_pt_eigenvalue(rho: DensityOperator, cut: Bipartition) -> PTReport:
    w, v = np.linalg.eigh(partial_transpose(rho, cut))
    return PTReport(cut, float(w[0]), v[:, 0])


def sample_state_on_subspace(w: Subspace, rank: int, seed=0) -> DensityOperator:
    """Random density operator ``B C C^dag B^dag / tr`` supported inside ``w``."""
    if not 1 <= rank <= w.dim:
        raise ArgumentError(f"rank {rank} outside 1..{w.dim}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    c = rng.standard_normal((w.dim, rank)) + 1j * rng.standard_normal((w.dim, rank))
    x = w.basis @ c
    return DensityOperator.from_matrix(x @ x.conj().T, w.dims, w.policy)


@dataclass(frozen=True, eq=False)
class CutCheck:
    """NPT sampling result for one cut; ``worst`` is the least negative sample."""

    cut: Bipartition
    worst: PTReport
    n_samples: int
    passed: bool

    @property
    def worst_min_eigenvalue(self) -> float:
        return self.worst.min_eigenvalue

    def to_dict(self) -> dict:
        return {
            "cut": self.cut.label(),
            "min_eigenvalue": self.worst.min_eigenvalue,
            "witness_vector": encode_vector(self.worst.witness_eigvec),
            "samples": self.n_samples,
            "passed": self.passed,
        }


def _samples(w: Subspace, n_samples: int, seed: int):
    """The normalized projector of ``w`` first, then random states of random rank."""
    if n_samples >= 1:
        yield DensityOperator.from_matrix(projector(w), w.dims, w.policy)
    for i in range(1, n_samples):
        rng = np.random.default_rng([seed, i])
        yield sample_state_on_subspace(w, int(rng.integers(1, w.dim + 1)), rng)


def npt_subspace_check(w: Subspace, cuts: Sequence[Bipartition] | None = None, n_samples: int = 100,
                       seed: int = 0, policy: NumericPolicy = DEFAULT) -> list[CutCheck]:
    """Sample states on ``w`` and keep the least negative PT minimum per cut.

    A cut passes when every sample is NPT by more than ``policy.npt_margin``.
    """
    cuts = all_cuts(w.n_parties) if cuts is None else list(cuts)
    worst: dict = {}
    for rho in _samples(w, n_samples, seed):
        for c in cuts:
            rep = min_pt_eigenvalue(rho, c)
            if c not in worst or rep.min_eigenvalue > worst[c].min_eigenvalue:
                worst[c] = rep
    return [CutCheck(c, worst[c], n_samples, bool(worst[c].min_eigenvalue < -policy.npt_margin))
            for c in cuts]


@dataclass(frozen=True, eq=False)
class DistillCheck:
    """Rank-2 witness search over sampled states for one cut."""

    cut: Bipartition
    n_samples: int
    n_found: int
    worst: DistillWitness | None
    passed: bool

    def to_dict(self) -> dict:
        d = {"cut": self.cut.label(), "samples": self.n_samples, "witnesses_found": self.n_found,
             "passed": self.passed}
        if self.worst is not None:
            d["witness_value"] = self.worst.value
            d["witness_vector"] = encode_vector(self.worst.psi.amplitudes)
        return d


def distill_subspace_check(w: Subspace, cuts: Sequence[Bipartition] | None = None, n_samples: int = 20,
                           seed: int = 0, opt: OptimizerPolicy = OptimizerPolicy(restarts=8),
                           policy: NumericPolicy = DEFAULT) -> list[DistillCheck]:
    """A cut passes when every sampled state gets a rank-2 witness; ``worst`` is the weakest one."""
    cuts = all_cuts(w.n_parties) if cuts is None else list(cuts)
    found = {c: 0 for c in cuts}
    worst: dict = {c: None for c in cuts}
    for rho in _samples(w, n_samples, seed):
        for c in cuts:
            wit = rank2_witness_search(rho, c, opt, policy)
            if wit is None:
                continue
            found[c] += 1
            if worst[c] is None or wit.value > worst[c].value:
                worst[c] = wit
    return [DistillCheck(c, n_samples, found[c], worst[c], found[c] == n_samples) for c in cuts]


def _random_isometry(d: int, k: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    q, _ = np.linalg.qr(z)
    return q


def _min_eig(m: np.ndarray) -> tuple[float, np.ndarray]:
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return float(w[0]), v[:, 0]


def _alternate(x: np.ndarray, u: np.ndarray, opt: OptimizerPolicy):
    """Minimize ``<psi|X|psi>`` over Schmidt rank <= 2 starting from A-side span ``u``.

    ``x`` has shape ``(dA, dB, dA, dB)``. Each half-step fixes a 2-dim
    subspace on one side and takes the minimum eigenvector of the
    compressed operator, so the value never increases.
    """
    da, db = x.shape[0], x.shape[1]
    val = np.inf
    c = None
    for _ in range(opt.max_iters):
        y = np.einsum("ai,abcd,cj->ibjd", u.conj(), x, u).reshape(2 * db, 2 * db)
        v1, vec = _min_eig(y)
        c = u @ vec.reshape(2, db)
        _, _, vh = np.linalg.svd(c)
        q = vh[:2].T
        z = np.einsum("bi,abcd,dj->aicj", q.conj(), x, q).reshape(2 * da, 2 * da)
        v2, vec = _min_eig(z)
        c = vec.reshape(da, 2) @ q.T
        u = np.linalg.svd(c)[0][:, :2]
        new = min(v1, v2)
        if val - new < opt.conv_tol:
            val = min(val, new)
            break
        val = new
    return val, c


def rank2_witness_search(rho: DensityOperator, cut: Bipartition, opt: OptimizerPolicy = OptimizerPolicy(),
                         policy: NumericPolicy = DEFAULT) -> DistillWitness | None:
    """Search for a Schmidt-rank-2 ``psi`` with ``<psi|rho^{T_cut}|psi> < 0``.

    Returns None when the best value found is not below ``-witness_margin``.
    """
    xt = partial_transpose(rho, cut)
    a, b = cut.grouping()
    order = a + b
    da, db = cut.side_dims(rho.dims)
    x = permute_matrix(xt, rho.dims, order).reshape(da, db, da, db)
    if min(da, db) <= 2:
        _, vec = _min_eig(x.reshape(da * db, da * db))
        best_c = vec.reshape(da, db)
    else:
        _, vec = _min_eig(x.reshape(da * db, da * db))
        u0 = np.linalg.svd(vec.reshape(da, db))[0][:, :2]
        best_val, best_c = np.inf, None
        for r in range(opt.restarts):
            u = u0 if r == 0 else _random_isometry(da, 2, opt.rng(r))
            val, c = _alternate(x, u, opt)
            if val < best_val:
                best_val, best_c = val, c
    grouped_dims = [rho.dims[k] for k in order]
    psi_vec = permute_vector(best_c.reshape(-1), grouped_dims, list(np.argsort(order)))
    psi = PureState.from_vector(psi_vec, rho.dims)
    value = float(np.real(np.vdot(psi.amplitudes, xt @ psi.amplitudes)))
    if value < -policy.witness_margin:
        return DistillWitness(cut, psi, value)
    return None


def schmidt_rank(psi: PureState, cut: Bipartition, tol: float | None = None) -> int:
    tol = DEFAULT.schmidt_rank_cut if tol is None else tol
    s = np.linalg.svd(bipartite_matrix(psi.amplitudes, psi.dims, cut), compute_uv=False)
    return int(np.sum(s > tol))


def _top_vector(m: np.ndarray) -> np.ndarray:
    return np.linalg.eigh((m + m.conj().T) / 2)[1][:, -1]


def _unit(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def appendix_witness(rho: DensityOperator, parts: Sequence[Subspace], cut: Bipartition,
                     tau_samples: int = 16, opt: OptimizerPolicy = OptimizerPolicy(),
                     support_tol: float = 1e-8, policy: NumericPolicy = DEFAULT) -> DistillWitness | None:
    """Structured witness ``Gamma = Phi (x) tau`` for a state on a two-part chain.

    ``rho`` lives on ``A1 (A2 A3) A4`` and must be supported on
    ``parts[0] (x) parts[1]`` (B1B2 joined). The fixed vector ``tau`` on the
    part not touched by the transpose is contracted away, leaving an
    unnormalized operator ``sigma`` supported on one part; a rank-2 witness
    ``Phi`` for ``sigma`` then extends to ``Gamma``. When the transpose must
    act on both outer parties, ``tau = mu (x) nu`` is a product and the
    contraction uses ``mu (x) conj(nu)``.

    The first ``tau`` comes from the top eigenvectors of the relevant
    reductions; if it fails, up to ``tau_samples - 1`` random ones are
    tried. The first candidate whose value, recomputed on the full state,
    is negative is returned.
    """
    parts = list(parts)
    if len(parts) != 2 or any(p.n_parties != 2 for p in parts):
        raise ArgumentError("appendix_witness needs two bipartite parts")
    d1, d2 = parts[0].dims
    d3, d4 = parts[1].dims
    if rho.dims != (d1, d2 * d3, d4):
        raise ArgumentError(f"state profile {rho.dims} does not match chain ({d1}, {d2 * d3}, {d4})")
    if cut.n_parties != 3:
        raise ArgumentError("cut must be over the three chain parties")
    w = chain_ges(parts)
    support = float(np.real(np.trace(rho.matrix @ projector(w))))
    if support < 1 - support_tol:
        warnings.warn(f"state is not supported on the chain subspace (weight {support:.6g})",
                      PreconditionWarning, stacklevel=2)
        return None

    members = cut.members
    flip = members not in (frozenset({0}), frozenset({2}), frozenset({0, 2}))
    tset = cut.complement if flip else members
    dims4 = (d1, d2, d3, d4)
    r = rho.matrix.reshape(dims4 * 2)

    if tset == frozenset({0}) or tset == frozenset({0, 2}):
        def contract(t):
            s = np.einsum("cd,abcdefgh,gh->abef", t.conj(), r, t)
            return s.reshape(d1 * d2, d1 * d2)
        sub_dims, sub_cut = (d1, d2), Bipartition.of({0}, 2)
        reduced = partial_trace_matrix(rho.matrix, dims4, [0, 1])
    else:
        def contract(t):
            s = np.einsum("ab,abcdefgh,ef->cdgh", t.conj(), r, t)
            return s.reshape(d3 * d4, d3 * d4)
        sub_dims, sub_cut = (d3, d4), Bipartition.of({1}, 2)
        reduced = partial_trace_matrix(rho.matrix, dims4, [2, 3])

    product_tau = tset == frozenset({0, 2})
    rng = np.random.default_rng([opt.seed, 0xA99])
    for i in range(max(1, tau_samples)):
        if product_tau:
            if i == 0:
                mu = _top_vector(partial_trace_matrix(reduced, (d3, d4), [1]))
                nu = _top_vector(partial_trace_matrix(reduced, (d3, d4), [0])).conj()
            else:
                mu, nu = _unit(rng, d3), _unit(rng, d4)
            tau = np.kron(mu, nu)
            t_contract = np.kron(mu, nu.conj()).reshape(d3, d4)
        else:
            tau = _top_vector(reduced) if i == 0 else _unit(rng, reduced.shape[0])
            shape = (d3, d4) if tset == frozenset({0}) else (d1, d2)
            t_contract = tau.reshape(shape)
        sigma = contract(t_contract)
        weight = float(np.real(np.trace(sigma)))
        if weight < 1e-12:
            continue
        sig = DensityOperator.from_matrix(sigma, sub_dims, policy)
        phi = rank2_witness_search(sig, sub_cut, opt, policy)
        if phi is None:
            continue
        if tset == frozenset({2}):
            gamma = np.kron(tau, phi.psi.amplitudes)
        else:
            gamma = np.kron(phi.psi.amplitudes, tau)
        gamma = gamma / np.linalg.norm(gamma)
        if flip:
            gamma = gamma.conj()
        psi = PureState(gamma, rho.dims)
        value = float(np.real(np.vdot(gamma, partial_transpose(rho, cut) @ gamma)))
        if value < -policy.witness_margin:
            return DistillWitness(cut, psi, value)
    return None
