"""Builders for entangled subspaces and Werner states."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArgumentError, PreconditionError
from .linalg import DensityOperator, PureState, total_dim
from .measures import (
    MeasureReport,
    OptimizerPolicy,
    geometric_measure_state,
    is_certified_ces,
    subspace_geometric_measure,
)
from .policy import DEFAULT, NumericPolicy
from .subspaces import Subspace, direct_sum, from_span, full_space, join, tensor


def swap_operator(d: int) -> np.ndarray:
    """``sum_ij |i,j><j,i|`` on ``C^d (x) C^d``."""
    if d < 2:
        raise ArgumentError("d must be at least 2")
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[i * d + j, j * d + i] = 1.0
    return s


def antisymmetric_projector(d: int) -> np.ndarray:
    return (np.eye(d * d) - swap_operator(d)) / 2


def symmetric_projector(d: int) -> np.ndarray:
    return (np.eye(d * d) + swap_operator(d)) / 2


def antisymmetric_subspace(d: int) -> Subspace:
    """Span of ``(|ij> - |ji>) / sqrt(2)`` for ``i < j``; dimension ``d(d-1)/2``."""
    if d < 2:
        raise ArgumentError("d must be at least 2")
    cols = []
    for i, j in itertools.combinations(range(d), 2):
        v = np.zeros(d * d, dtype=complex)
        v[i * d + j] = 1.0
        v[j * d + i] = -1.0
        cols.append(v / math.sqrt(2))
    return Subspace(np.column_stack(cols), (d, d))


def symmetric_subspace(d: int) -> Subspace:
    if d < 2:
        raise ArgumentError("d must be at least 2")
    cols = []
    for i, j in itertools.combinations_with_replacement(range(d), 2):
        v = np.zeros(d * d, dtype=complex)
        v[i * d + j] += 1.0
        v[j * d + i] += 1.0
        cols.append(v / np.linalg.norm(v))
    return Subspace(np.column_stack(cols), (d, d))


def johnston_vectors(d1: int, d2: int) -> np.ndarray:
    """Spanning vectors ``(|j>|k+1> - |j+1>|k>) / sqrt(2)`` as columns, ``(j, k)`` row-major.

    They are linearly independent but not mutually orthogonal: columns
    ``(j, k+1)`` and ``(j+1, k)`` share the term ``|j+1>|k+1>``.
    """
    if d1 < 2 or d2 < 2:
        raise ArgumentError("local dimensions must be at least 2")
    cols = []
    for j in range(d1 - 1):
        for k in range(d2 - 1):
            v = np.zeros(d1 * d2, dtype=complex)
            v[j * d2 + k + 1] += 1.0
            v[(j + 1) * d2 + k] -= 1.0
            cols.append(v / math.sqrt(2))
    return np.column_stack(cols)


def johnston_subspace(d1: int, d2: int) -> Subspace:
    """NPT subspace of dimension ``(d1-1)(d2-1)`` spanned by :func:`johnston_vectors`."""
    v = johnston_vectors(d1, d2)
    return from_span(list(v.T), (d1, d2))


def chain_ges(parts: Sequence[Subspace]) -> Subspace:
    """Tensor bipartite parts left to right, joining each interior boundary.

    The result lives on ``A_1, A_2 A_3, ..., A_{2n-2} A_{2n-1}, A_{2n}``.
    """
    parts = list(parts)
    if len(parts) < 2:
        raise ArgumentError("a chain needs at least two parts")
    for i, p in enumerate(parts):
        if p.n_parties != 2:
            raise ArgumentError(f"part {i} is not bipartite (profile {p.dims})")
    acc = parts[0]
    for p in parts[1:]:
        acc = join(tensor(acc, p), acc.n_parties - 1)
    return acc


def example_w_vectors() -> np.ndarray:
    """The 16 four-term vectors spanning ``W`` on ``3 (x) 9 (x) 3``, written out directly.

    Column ``(j, k, l, m)`` (row-major, each index in {0, 1}) carries
    coefficients +-1/2.
    """
    dims = (3, 9, 3)
    cols = []
    for j, k, l, m in itertools.product(range(2), repeat=4):
        v = np.zeros(total_dim(dims), dtype=complex)
        for (a, b, c), sign in (
            ((j, 3 * (k + 1) + l, m + 1), 1),
            ((j, 3 * (k + 1) + l + 1, m), -1),
            ((j + 1, 3 * k + l, m + 1), -1),
            ((j + 1, 3 * k + l + 1, m), 1),
        ):
            v[(a * 9 + b) * 3 + c] += 0.5 * sign
        cols.append(v)
    return np.column_stack(cols)


def example_w_basis() -> Subspace:
    return from_span(list(example_w_vectors().T), (3, 9, 3))


def _require_ces(s: Subspace, report: MeasureReport | None, what: str,
                 opt: OptimizerPolicy, policy: NumericPolicy) -> MeasureReport:
    if report is None:
        report = subspace_geometric_measure(s, opt)
    if not is_certified_ces(report, policy):
        raise PreconditionError(f"{what} is not completely entangled (G = {report.value:.3g})")
    if not report.stable:
        raise PreconditionError(f"{what}: seesaw did not stabilize; CES property not certified")
    return report


def sum_of_products_ces(s_parts: Sequence[Subspace], p_parts: Sequence[Subspace],
                        s_reports: Sequence[MeasureReport] | None = None,
                        opt: OptimizerPolicy = OptimizerPolicy(),
                        policy: NumericPolicy = DEFAULT) -> Subspace:
    """``(S1 (x) P1) + ... + (Sn (x) Pn)`` with ``B1 B2`` joined; a CES on ``A (x) B``.

    ``p_parts`` are mutually orthogonal single-party subspaces of ``B2``;
    every ``s_part`` must be a certified CES (checked by seesaw unless
    reports are passed).
    """
    s_parts, p_parts = list(s_parts), list(p_parts)
    if len(s_parts) != len(p_parts) or not s_parts:
        raise ArgumentError("need equal, nonzero numbers of S and P parts")
    for i, p in enumerate(p_parts):
        if p.n_parties != 1:
            raise ArgumentError(f"P part {i} must live on a single party, got {p.dims}")
    for i, s in enumerate(s_parts):
        if s.n_parties != 2:
            raise ArgumentError(f"S part {i} is not bipartite (profile {s.dims})")
        if s.dims != s_parts[0].dims:
            raise ArgumentError("S parts have different profiles")
    reports = list(s_reports) if s_reports is not None else [None] * len(s_parts)
    for i, (s, rep) in enumerate(zip(s_parts, reports)):
        _require_ces(s, rep, f"S part {i}", opt, policy)
    terms = [join(tensor(s, p), 1) for s, p in zip(s_parts, p_parts)]
    return direct_sum(terms)


def sum_of_products_ges(s_parts: Sequence[Subspace], g_parts: Sequence[Subspace],
                        s_reports: Sequence[MeasureReport] | None = None,
                        sigma_report: MeasureReport | None = None,
                        opt: OptimizerPolicy = OptimizerPolicy(),
                        policy: NumericPolicy = DEFAULT) -> Subspace:
    """``(S1 (x) G1) + ... + (Sn (x) Gn)`` on ``A (x) B1B2 (x) C``.

    Hypotheses: each ``S_i`` is a CES; the ``G_i`` are mutually orthogonal
    and their direct sum is a CES.
    """
    s_parts, g_parts = list(s_parts), list(g_parts)
    if len(s_parts) != len(g_parts) or not s_parts:
        raise ArgumentError("need equal, nonzero numbers of S and G parts")
    for name, group in (("S", s_parts), ("G", g_parts)):
        for i, p in enumerate(group):
            if p.n_parties != 2:
                raise ArgumentError(f"{name} part {i} is not bipartite (profile {p.dims})")
            if p.dims != group[0].dims:
                raise ArgumentError(f"{name} parts have different profiles")
    try:
        sigma = direct_sum(g_parts)
    except PreconditionError as exc:
        raise PreconditionError(f"G parts: {exc}") from exc
    _require_ces(sigma, sigma_report, "direct sum of G parts", opt, policy)
    reports = list(s_reports) if s_reports is not None else [None] * len(s_parts)
    for i, (s, rep) in enumerate(zip(s_parts, reports)):
        _require_ces(s, rep, f"S part {i}", opt, policy)
    return direct_sum([chain_ges([s, g]) for s, g in zip(s_parts, g_parts)])


def corollary6_span(psis: Sequence[PureState], chis: Sequence[PureState],
                    chi_report: MeasureReport | None = None,
                    opt: OptimizerPolicy = OptimizerPolicy(),
                    policy: NumericPolicy = DEFAULT) -> Subspace:
    """Span of the joined products ``psi_i (x) chi_i`` on ``A (x) B1B2 (x) C``."""
    psis, chis = list(psis), list(chis)
    if len(psis) != len(chis) or not psis:
        raise ArgumentError("need equal, nonzero numbers of psi and chi states")
    bad = [i for i, p in enumerate(psis)
           if p.n_parties != 2 or geometric_measure_state(p) <= policy.ces_threshold]
    if bad:
        raise PreconditionError(f"psi states at indices {bad} are not entangled bipartite states")
    for i in range(len(chis)):
        for j in range(i + 1, len(chis)):
            ov = abs(np.vdot(chis[i].amplitudes, chis[j].amplitudes))
            if ov > policy.orthogonality:
                raise PreconditionError(f"chi states {i} and {j} are not orthogonal (overlap {ov:.3g})")
    _require_ces(from_span(chis), chi_report, "span of chi states", opt, policy)
    dims = (psis[0].dims[0], psis[0].dims[1] * chis[0].dims[0], chis[0].dims[1])
    vecs = [np.kron(p.amplitudes, c.amplitudes) for p, c in zip(psis, chis)]
    return from_span(vecs, dims)


def with_ancilla(s: Subspace, ancilla_dim: int) -> Subspace:
    """``S_{AB1} (x) H_{B2}`` with ``B1 B2`` joined."""
    return join(tensor(s, full_space((ancilla_dim,))), 1)


# Werner states

def p_to_s(p: float, d: int) -> float:
    """Antisymmetric weight ``s`` of the Werner state with SWAP coefficient ``p``."""
    if d < 2:
        raise ArgumentError("d must be at least 2")
    if abs(p + d) < 1e-15:
        raise ArgumentError("p = -d makes the Werner normalization vanish")
    return (d - 1) * (1 - p) / (2 * (p + d))


def s_to_p(s: float, d: int) -> float:
    if d < 2:
        raise ArgumentError("d must be at least 2")
    den = 2 * s + d - 1
    if abs(den) < 1e-15:
        raise ArgumentError("s = (1 - d)/2 is outside the Werner family")
    return (d - 1 - 2 * s * d) / den


@dataclass(frozen=True)
class WernerParams:
    """Werner parameters; give exactly one of ``s`` (in [0,1]) or ``p`` (in [-1,1])."""

    d: int
    s: float | None = None
    p: float | None = None

    def __post_init__(self):
        if self.d < 2:
            raise ArgumentError("d must be at least 2")
        if (self.s is None) == (self.p is None):
            raise ArgumentError("give exactly one of s or p")
        if self.s is None:
            if not -1 - 1e-12 <= self.p <= 1 + 1e-12:
                raise ArgumentError(f"p = {self.p} outside [-1, 1]")
            object.__setattr__(self, "s", p_to_s(self.p, self.d))
        else:
            if not -1e-12 <= self.s <= 1 + 1e-12:
                raise ArgumentError(f"s = {self.s} outside [0, 1]")
            object.__setattr__(self, "p", s_to_p(self.s, self.d))


def werner_state(params: WernerParams) -> DensityOperator:
    """``2(1-s)/(d(d+1)) P_S + 2s/(d(d-1)) P_A``."""
    d, s = params.d, params.s
    m = (2 * (1 - s) / (d * (d + 1))) * symmetric_projector(d) \
        + (2 * s / (d * (d - 1))) * antisymmetric_projector(d)
    return DensityOperator(m.astype(complex), (d, d))


def werner_state_p(p: float, d: int) -> DensityOperator:
    """Werner state in the ``(I + p SWAP) / (d^2 + p d)`` form."""
    m = (np.eye(d * d) + p * swap_operator(d)) / (d * d + p * d)
    return DensityOperator(m.astype(complex), (d, d))


def werner_ge_threshold(d: int) -> float:
    """Upper end, in ``p``, of the square domain where two Werner copies are certified GE."""
    if d < 2:
        raise ArgumentError("d must be at least 2")
    r2 = math.sqrt(2)
    return (d * (1 - r2) - 1) / (r2 + d - 1)


def joined_product_state(a: DensityOperator, b: DensityOperator) -> DensityOperator:
    """``a (x) b`` on ``A (B1 B2) C`` for bipartite ``a`` and ``b``."""
    dims = (a.dims[0], a.dims[1] * b.dims[0], b.dims[1])
    return DensityOperator.from_matrix(np.kron(a.matrix, b.matrix), dims)


# Construction spec files: {"construct": <name>, ...parameters}

def _state_from_spec(d: dict) -> PureState:
    from .subspaces import decode_vector

    if not isinstance(d, dict) or "dims" not in d or "vector" not in d:
        raise ArgumentError("a state needs 'dims' and 'vector'")
    return PureState.from_vector(decode_vector(d["vector"]), tuple(d["dims"]))


def _part_from_spec(d) -> Subspace:
    from .subspaces import decode_vector, from_dict

    if not isinstance(d, dict):
        raise ArgumentError(f"cannot read a subspace from {d!r}")
    if "construct" in d:
        return build(d)
    if "basis" in d:
        return from_dict(d)
    if "vectors" in d and "dims" in d:
        return from_span([decode_vector(v) for v in d["vectors"]], tuple(d["dims"]))
    raise ArgumentError("a part needs 'construct', 'basis' or 'vectors'")


def _param(spec: dict, key: str):
    if key not in spec:
        raise ArgumentError(f"construct {spec.get('construct')!r} needs parameter {key!r}")
    return spec[key]


def build(spec: dict, opt: OptimizerPolicy = OptimizerPolicy()) -> Subspace:
    """Build a subspace from a construction spec.

    Parts may be nested specs, Subspace JSON objects or
    ``{"dims": [...], "vectors": [...]}`` spanning sets.
    """
    if not isinstance(spec, dict) or "construct" not in spec:
        raise ArgumentError("construction spec must be an object with a 'construct' key")
    kind = spec["construct"]
    try:
        if kind == "antisym":
            return antisymmetric_subspace(int(_param(spec, "d")))
        if kind == "symmetric":
            return symmetric_subspace(int(_param(spec, "d")))
        if kind == "johnston":
            return johnston_subspace(int(_param(spec, "d1")), int(_param(spec, "d2")))
        if kind == "example_w":
            return example_w_basis()
        if kind == "full":
            return full_space(tuple(_param(spec, "dims")))
        if kind == "span":
            return _part_from_spec({"dims": _param(spec, "dims"), "vectors": _param(spec, "vectors")})
        if kind == "chain":
            return chain_ges([_part_from_spec(p) for p in _param(spec, "parts")])
        if kind == "sum_products_ces":
            return sum_of_products_ces([_part_from_spec(p) for p in _param(spec, "s_parts")],
                                       [_part_from_spec(p) for p in _param(spec, "p_parts")], opt=opt)
        if kind == "sum_products_ges":
            return sum_of_products_ges([_part_from_spec(p) for p in _param(spec, "s_parts")],
                                       [_part_from_spec(p) for p in _param(spec, "g_parts")], opt=opt)
        if kind == "corollary6":
            return corollary6_span([_state_from_spec(p) for p in _param(spec, "psis")],
                                   [_state_from_spec(p) for p in _param(spec, "chis")], opt=opt)
    except (TypeError, KeyError) as exc:
        raise ArgumentError(f"malformed construction spec: {exc}") from exc
    raise ArgumentError(f"unknown construction {kind!r}")
