"""Reproduction suite: every reference value and property the package must meet.

Each check returns :class:`Row` objects; :func:`run_suite` collects them
and :func:`render` prints a deterministic table (no timings, so two runs
with the same seed are byte-identical).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import constructions as C
from . import measures as M
from . import npt
from .channels import channel_from_subspace, nu_infinity, nu_infinity_extended
from .linalg import (
    Bipartition,
    DensityOperator,
    PureState,
    all_cuts,
    partial_transpose,
    partial_transpose_matrix,
    random_state,
    random_unitary,
    schmidt,
)
from .subspaces import from_span, projector, projector_distance


@dataclass(frozen=True)
class Row:
    criterion: int
    name: str
    expected: str
    computed: str
    tolerance: str
    passed: bool


@dataclass(frozen=True)
class SuiteConfig:
    restarts: int
    samples: int
    seed: int

    @classmethod
    def fast(cls, seed: int) -> "SuiteConfig":
        return cls(restarts=16, samples=20, seed=seed)

    @classmethod
    def full(cls, seed: int) -> "SuiteConfig":
        return cls(restarts=64, samples=100, seed=seed)

    def opt(self, **kw) -> M.OptimizerPolicy:
        return M.OptimizerPolicy(restarts=self.restarts, seed=self.seed, **kw)


def _f(x: float) -> str:
    return f"{x:.12g}"


def _close(cid, name, expected, computed, tol) -> Row:
    return Row(cid, name, _f(expected), _f(computed), _f(tol), bool(abs(computed - expected) <= tol))


def check_antisymmetric_measure(cfg: SuiteConfig) -> list[Row]:
    rows = []
    for d in (2, 3, 4):
        rep = M.subspace_geometric_measure(C.antisymmetric_subspace(d), cfg.opt())
        rows.append(_close(1, f"G(antisym d={d})", 0.5, rep.value, 1e-6))
    return rows


def check_werner_threshold(cfg: SuiteConfig) -> list[Row]:
    r2 = math.sqrt(2)
    t2 = C.werner_ge_threshold(2)
    rows = [
        _close(2, "threshold(d=2) vs 3*sqrt2-5", 3 * r2 - 5, t2, 1e-12),
        _close(2, "threshold(d=2) vs s_to_p(1/sqrt2, 2)", C.s_to_p(1 / r2, 2), t2, 1e-12),
    ]
    dev = max(abs(C.werner_ge_threshold(d) - C.s_to_p(1 / r2, d)) for d in range(2, 11))
    rows.append(Row(2, "threshold formula vs s_to_p, d=2..10 (max dev)", "0", _f(dev), "1e-12", dev <= 1e-12))
    vals = [C.werner_ge_threshold(d) for d in range(2, 65)]
    limit = 1 - r2
    monotone = all(b > a for a, b in zip(vals, vals[1:])) and all(v < limit for v in vals)
    rows.append(Row(2, "threshold increases toward 1-sqrt2, d=2..64", "True", str(monotone), "exact",
                    monotone))
    return rows


def _werner_pair_witness(s1: float, s2: float, d: int):
    rho = C.joined_product_state(C.werner_state(C.WernerParams(d, s=s1)),
                                 C.werner_state(C.WernerParams(d, s=s2)))
    a = C.antisymmetric_subspace(d)
    w = C.chain_ges([a, a])
    return rho, w, a


def check_witness_arithmetic(cfg: SuiteConfig) -> list[Row]:
    rho, w, a = _werner_pair_witness(0.8, 0.8, 2)
    full = M.overlap(rho, w)
    single = M.overlap(C.werner_state(C.WernerParams(2, s=0.8)), a)
    wv = M.witness_value(rho, w, 0.5)
    return [
        _close(3, "Tr(rho P_W) full trace vs product of overlaps", single * single, full, 1e-10),
        _close(3, "witness value, Werner(0.8) x Werner(0.8), d=2", 0.14, wv, 1e-10),
    ]


def check_cren_grid(cfg: SuiteConfig) -> list[Row]:
    grid = np.linspace(0.0, 1.0, 5)
    dev = 0.0
    for s1 in grid:
        for s2 in grid:
            o1 = M.overlap(C.werner_state(C.WernerParams(3, s=s1)), C.antisymmetric_subspace(3))
            o2 = M.overlap(C.werner_state(C.WernerParams(3, s=s2)), C.antisymmetric_subspace(3))
            dev = max(dev, abs(M.cren_lower_bound(o1, o2, 0.5) - (s1 * s2 - 0.5)))
    return [Row(4, "CREN bound vs s1*s2-1/2 on 5x5 grid (max dev)", "0", _f(dev), "1e-12", dev <= 1e-12)]


def check_chain_measures(cfg: SuiteConfig) -> list[Row]:
    a = C.antisymmetric_subspace(3)
    w = C.chain_ges([a, a])
    opt = cfg.opt()
    vals = {cut.label(): M.subspace_measure_across_cut(w, cut, opt).value for cut in all_cuts(3)}
    b_ac = vals["02|1"]
    return [
        _close(5, "chain antisym3 x antisym3, cut A|BC", 0.5, vals["0|12"], 2e-4),
        _close(5, "chain antisym3 x antisym3, cut C|AB", 0.5, vals["01|2"], 2e-4),
        Row(5, "chain antisym3 x antisym3, cut B|AC (lower bound)", ">= 0.5", _f(b_ac), "2e-4",
            b_ac >= 0.5 - 2e-4),
        _close(5, "chain antisym3 x antisym3, min over cuts", 0.5, min(vals.values()), 2e-4),
    ]


def check_ideal_channel_identity(cfg: SuiteConfig) -> list[Row]:
    singlet = C.antisymmetric_subspace(2)
    rows = []
    for name, w in (("singlet span", singlet), ("antisym3", C.antisymmetric_subspace(3))):
        ch = channel_from_subspace(w)
        base = nu_infinity(ch, cfg.opt()).value
        ext = nu_infinity_extended(ch, 2, cfg.opt()).value
        rows.append(_close(6, f"nu_inf(I2 x Phi) vs nu_inf(Phi), {name}", base, ext, 1e-4))
    return rows


def check_example_w(cfg: SuiteConfig) -> list[Row]:
    j = C.johnston_subspace(3, 3)
    dist = projector_distance(C.example_w_basis(), C.chain_ges([j, j]))
    return [Row(7, "example W vs chain(johnston(3,3) x 2), projector distance", "0", _f(dist), "1e-10",
                dist <= 1e-10)]


def check_npt_distill(cfg: SuiteConfig) -> list[Row]:
    j = C.johnston_subspace(3, 3)
    w = C.chain_ges([j, j])
    opt = M.OptimizerPolicy(restarts=8, seed=cfg.seed)
    npt_ok = rank2_ok = app_ok = 0
    worst_pt = worst_r2 = worst_app = -np.inf
    for i in range(cfg.samples):
        rng = np.random.default_rng([cfg.seed, i])
        rho = npt.sample_state_on_subspace(w, int(rng.integers(1, w.dim + 1)), rng)
        pts, r2s, aps = [], [], []
        for cut in all_cuts(3):
            pts.append(npt.min_pt_eigenvalue(rho, cut).min_eigenvalue)
            r = npt.rank2_witness_search(rho, cut, opt)
            a = npt.appendix_witness(rho, [j, j], cut, opt=opt)
            r2s.append(np.inf if r is None else r.value)
            aps.append(np.inf if a is None else a.value)
        npt_ok += all(v < -1e-9 for v in pts)
        rank2_ok += all(v < -1e-10 for v in r2s)
        app_ok += all(v < -1e-10 for v in aps)
        worst_pt, worst_r2, worst_app = max(worst_pt, *pts), max(worst_r2, *r2s), max(worst_app, *aps)
    n = cfg.samples
    return [
        Row(8, f"example W: samples NPT on all 3 cuts (worst min eig {_f(worst_pt)})", str(n), str(npt_ok),
            "< -1e-9", npt_ok == n),
        Row(8, f"example W: rank-2 search witnesses (worst {_f(worst_r2)})", str(n), str(rank2_ok),
            "< -1e-10", rank2_ok == n),
        Row(8, f"example W: structured witnesses (worst {_f(worst_app)})", str(n), str(app_ok),
            "< -1e-10", app_ok == n),
    ]


def _random_entangled(dims, rng) -> PureState:
    while True:
        psi = random_state(dims, rng)
        if M.geometric_measure_state(psi) > 1e-3:
            return psi


def check_joined_products(cfg: SuiteConfig) -> list[Row]:
    good = 0
    smallest = np.inf
    rng = np.random.default_rng([cfg.seed, 1])
    for _ in range(200):
        da, db1, db2, dc = (int(x) for x in rng.integers(2, 4, size=4))
        phi = _random_entangled((da, db1), rng)
        chi = _random_entangled((db2, dc), rng)
        psi = PureState(np.kron(phi.amplitudes, chi.amplitudes), (da, db1 * db2, dc))
        second = min(schmidt(psi, cut).coeffs[1] for cut in all_cuts(3))
        smallest = min(smallest, second)
        good += second > 1e-8
    return [Row(9, f"joined products of entangled pairs are GE (min 2nd Schmidt coeff {_f(smallest)})",
                "200", str(good), "> 1e-8", good == 200)]


def _random_density(dims, rng) -> DensityOperator:
    n = int(np.prod(dims))
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return DensityOperator.from_matrix(g @ g.conj().T, dims)


def check_invariants(cfg: SuiteConfig) -> list[Row]:
    rng = np.random.default_rng([cfg.seed, 10])
    pt_dev = schmidt_dev = proj_dev = werner_dev = 0.0
    for _ in range(100):
        dims = tuple(int(x) for x in rng.integers(2, 4, size=int(rng.integers(2, 4))))
        rho = _random_density(dims, rng)
        members = [k for k in range(len(dims)) if rng.random() < 0.5] or [0]
        if len(members) == len(dims):
            members = members[:-1]
        cut = Bipartition.of(members, len(dims))
        x = partial_transpose(rho, cut)
        twice = partial_transpose_matrix(x, dims, cut.members)
        pt_dev = max(pt_dev, np.max(np.abs(twice - rho.matrix)), abs(np.trace(x) - 1),
                     np.max(np.abs(x - x.conj().T)))
        psi = random_state(dims, rng)
        sd = schmidt(psi, cut)
        schmidt_dev = max(schmidt_dev, abs(np.sum(sd.coeffs ** 2) - 1))
        k = int(rng.integers(1, psi.amplitudes.size))
        s = from_span([random_state(dims, rng) for _ in range(k)])
        p = projector(s)
        proj_dev = max(proj_dev, np.max(np.abs(p @ p - p)), np.max(np.abs(p - p.conj().T)))
        d = int(rng.integers(2, 5))
        u = random_unitary(d, rng)
        uu = np.kron(u, u)
        rw = C.werner_state(C.WernerParams(d, s=float(rng.random()))).matrix
        werner_dev = max(werner_dev, np.max(np.abs(uu @ rw @ uu.conj().T - rw)))
        pa, ps = C.antisymmetric_projector(d), C.symmetric_projector(d)
        proj_dev = max(proj_dev, np.max(np.abs(pa + ps - np.eye(d * d))), np.max(np.abs(pa @ ps)))
    return [
        Row(10, "PT involution / trace / Hermiticity (max dev)", "0", _f(pt_dev), "1e-12", pt_dev <= 1e-12),
        Row(10, "Schmidt normalization (max dev)", "0", _f(schmidt_dev), "1e-10", schmidt_dev <= 1e-10),
        Row(10, "projector idempotence, P_A + P_S = I (max dev)", "0", _f(proj_dev), "1e-10",
            proj_dev <= 1e-10),
        Row(10, "Werner U x U invariance (max dev)", "0", _f(werner_dev), "1e-10", werner_dev <= 1e-10),
    ]


CHECKS: list[Callable[[SuiteConfig], list[Row]]] = [
    check_antisymmetric_measure,
    check_werner_threshold,
    check_witness_arithmetic,
    check_cren_grid,
    check_chain_measures,
    check_ideal_channel_identity,
    check_example_w,
    check_npt_distill,
    check_joined_products,
    check_invariants,
]


def run_checks(cfg: SuiteConfig) -> list[Row]:
    rows = []
    for check in CHECKS:
        rows.extend(check(cfg))
    return rows


def check_determinism(cfg: SuiteConfig, first: list[Row]) -> list[Row]:
    fast = SuiteConfig.fast(cfg.seed)
    reference = first if cfg == fast else run_checks(fast)
    same = render(reference) == render(run_checks(fast))
    return [Row(11, "fast suite rerun with same seed is byte-identical", "True", str(same), "exact", same)]


def run_suite(cfg: SuiteConfig) -> list[Row]:
    rows = run_checks(cfg)
    return rows + check_determinism(cfg, rows)


def render(rows: list[Row]) -> str:
    header = ("id", "check", "expected", "computed", "tolerance", "result")
    table = [header] + [(str(r.criterion), r.name, r.expected, r.computed, r.tolerance,
                         "PASS" if r.passed else "FAIL") for r in rows]
    widths = [max(len(t[i]) for t in table) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(t, widths)).rstrip() for t in table]
    return "\n".join(lines) + "\n"
