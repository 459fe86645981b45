import math

import numpy as np
import pytest

from conftest import bell
from gesforge.constructions import (
    WernerParams,
    antisymmetric_projector,
    antisymmetric_subspace,
    build,
    chain_ges,
    corollary6_span,
    example_w_basis,
    example_w_vectors,
    johnston_subspace,
    johnston_vectors,
    with_ancilla,
    p_to_s,
    s_to_p,
    sum_of_products_ces,
    sum_of_products_ges,
    swap_operator,
    symmetric_projector,
    symmetric_subspace,
    werner_ge_threshold,
    werner_state,
    werner_state_p,
)
from gesforge.errors import ArgumentError, PreconditionError
from gesforge.linalg import PureState, all_cuts, random_unitary
from gesforge.measures import (
    OptimizerPolicy,
    ges_measure_chain,
    subspace_geometric_measure,
    subspace_gme_measure,
    subspace_measure_across_cut,
)
from gesforge.subspaces import from_span, full_space, projector, projector_distance

OPT = OptimizerPolicy(restarts=16)
SQ2 = math.sqrt(2)


def basis_state(i, d):
    v = np.zeros(d)
    v[i] = 1
    return v


def test_antisymmetric_subspace_examples():
    a2 = antisymmetric_subspace(2)
    assert a2.dim == 1
    assert abs(np.vdot(a2.basis[:, 0], np.array([0, 1, -1, 0]) / SQ2)) == pytest.approx(1)
    assert antisymmetric_subspace(3).dim == 3
    np.testing.assert_allclose(projector(antisymmetric_subspace(4)), (np.eye(16) - swap_operator(4)) / 2, atol=1e-12)
    np.testing.assert_allclose(projector(symmetric_subspace(3)), (np.eye(9) + swap_operator(3)) / 2, atol=1e-12)


def test_swap_examples():
    s2 = swap_operator(2)
    np.testing.assert_array_equal(s2 @ basis_state(1, 4), basis_state(2, 4))
    for d in (2, 3, 5):
        assert np.trace(swap_operator(d)) == d
    s3 = swap_operator(3)
    np.testing.assert_array_equal(s3 @ s3, np.eye(9))
    w = np.linalg.eigvalsh(swap_operator(4))
    assert np.sum(np.isclose(w, 1)) == 10 and np.sum(np.isclose(w, -1)) == 6


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_symmetric_antisymmetric_complete(d):
    pa, ps = antisymmetric_projector(d), symmetric_projector(d)
    np.testing.assert_allclose(pa + ps, np.eye(d * d), atol=1e-14)
    np.testing.assert_allclose(pa @ ps, 0, atol=1e-14)


def test_johnston_examples():
    j22 = johnston_subspace(2, 2)
    assert j22.dim == 1
    assert abs(np.vdot(j22.basis[:, 0], antisymmetric_subspace(2).basis[:, 0])) == pytest.approx(1)
    assert johnston_subspace(3, 3).dim == 4
    assert johnston_subspace(2, 4).dim == 3
    assert johnston_subspace(2, 4).dims == (2, 4)


def test_johnston_spanning_vectors_form():
    v = johnston_vectors(3, 3)
    assert v.shape == (9, 4)
    # (j, k) row-major: column 1 is (j, k) = (0, 1): |0>|2> - |1>|1>
    expect = np.zeros(9)
    expect[0 * 3 + 2], expect[1 * 3 + 1] = 1, -1
    np.testing.assert_allclose(v[:, 1], expect / SQ2)
    for col in v.T:
        nz = col[np.abs(col) > 0]
        np.testing.assert_allclose(sorted(nz.real), [-1 / SQ2, 1 / SQ2])
    s = johnston_subspace(3, 3)
    for col in v.T:
        assert np.linalg.norm(col - projector(s) @ col) <= 1e-12


def test_chain_examples():
    a2 = antisymmetric_subspace(2)
    c = chain_ges([a2, a2])
    assert c.dims == (2, 4, 2) and c.dim == 1
    j = johnston_subspace(3, 3)
    w = chain_ges([j, j])
    assert w.dims == (3, 9, 3) and w.dim == 16
    a3 = antisymmetric_subspace(3)
    c3 = chain_ges([a3, a3, a3])
    assert c3.dims == (3, 9, 9, 3) and c3.dim == 27
    with pytest.raises(ArgumentError):
        chain_ges([a3])


def test_example_w_first_vector():
    v = example_w_vectors()[:, 0]
    expect = np.zeros(81)
    for sign, (a, b, c) in [(1, (0, 3, 1)), (-1, (0, 4, 0)), (-1, (1, 0, 1)), (1, (1, 1, 0))]:
        expect[(a * 9 + b) * 3 + c] = sign / 2
    np.testing.assert_allclose(v, expect)


def test_example_w_matches_chain():
    w = example_w_basis()
    assert w.dim == 16 and w.dims == (3, 9, 3)
    j = johnston_subspace(3, 3)
    assert projector_distance(w, chain_ges([j, j])) <= 1e-10


def test_chain_min_cut_equals_component_min():
    a = antisymmetric_subspace(2)
    j = johnston_subspace(3, 3)
    ga = subspace_geometric_measure(a, OPT)
    gj = subspace_geometric_measure(j, OptimizerPolicy())
    for parts, reps in [([a, a], [ga, ga]), ([j, a], [gj, ga])]:
        rep, _, _ = subspace_gme_measure(chain_ges(parts), OptimizerPolicy())
        assert rep.value == pytest.approx(ges_measure_chain(reps), abs=2e-4)


def test_sum_of_products_ces_examples():
    singlet = antisymmetric_subspace(2)
    p0 = from_span([basis_state(0, 2)], (2,))
    p1 = from_span([basis_state(1, 2)], (2,))
    s = sum_of_products_ces([singlet, singlet], [p0, p1], opt=OPT)
    assert s.dims == (2, 4) and s.dim == 2
    assert subspace_geometric_measure(s, OPT).value > 1e-6
    # n = 1 with the full B2 space is the ancilla case
    one = sum_of_products_ces([singlet], [full_space((3,))], opt=OPT)
    assert one.equals(with_ancilla(singlet, 3))
    with pytest.raises(PreconditionError, match="not orthogonal"):
        sum_of_products_ces([singlet, singlet], [p0, from_span([np.ones(2)], (2,))], opt=OPT)


def test_sum_of_products_ces_rejects_non_ces_part():
    with pytest.raises(PreconditionError, match="S part 0"):
        sum_of_products_ces([full_space((2, 2))], [full_space((2,))], opt=OPT)


def test_sum_of_products_ges_examples():
    a2 = antisymmetric_subspace(2)
    a3 = antisymmetric_subspace(3)
    one = sum_of_products_ges([a2], [a3], opt=OPT)
    assert one.equals(chain_ges([a2, a3]))
    s1 = from_span([bell(1)])
    s2 = from_span([bell(-1)])
    g1 = from_span([a3.basis[:, 0]], (3, 3))
    g2 = from_span([a3.basis[:, 1]], (3, 3))
    w = sum_of_products_ges([s1, s2], [g1, g2], opt=OPT)
    assert w.dims == (2, 6, 3) and w.dim == 2
    for cut in all_cuts(3):
        assert subspace_measure_across_cut(w, cut, OPT).value > 1e-6


def test_sum_of_products_ges_sigma_not_ces():
    a2 = antisymmetric_subspace(2)
    g1 = from_span([np.array([1.0, 0, 0, 0])], (2, 2))
    g2 = from_span([np.array([0, 1.0, 0, 0])], (2, 2))
    with pytest.raises(PreconditionError, match="direct sum of G parts"):
        sum_of_products_ges([a2, a2], [g1, g2], opt=OPT)


def test_span_of_joined_products():
    one = corollary6_span([bell()], [bell()], opt=OPT)
    assert one.dims == (2, 4, 2) and one.dim == 1
    a3 = antisymmetric_subspace(3)
    chis = [PureState(a3.basis[:, i], (3, 3)) for i in range(2)]
    w = corollary6_span([bell(1), bell(-1)], chis, opt=OPT)
    assert w.dim == 2 and w.dims == (2, 6, 3)
    for cut in all_cuts(3):
        assert subspace_measure_across_cut(w, cut, OPT).value > 1e-6
    prod = PureState(np.array([1.0, 0, 0, 0]), (2, 2))
    with pytest.raises(PreconditionError, match=r"\[0\]"):
        corollary6_span([prod], [bell()], opt=OPT)


def test_werner_examples():
    rho = werner_state(WernerParams(2, s=1))
    np.testing.assert_allclose(rho.matrix, antisymmetric_projector(2), atol=1e-15)
    assert WernerParams(2, s=1).p == pytest.approx(-1, abs=1e-15)
    for d in (2, 3, 4):
        s = p_to_s(0, d)
        assert s == pytest.approx((d - 1) / (2 * d), abs=1e-15)
        np.testing.assert_allclose(werner_state(WernerParams(d, p=0)).matrix, np.eye(d * d) / d**2, atol=1e-15)


def test_werner_overlap_and_p_form(rng):
    for _ in range(20):
        d = int(rng.integers(2, 6))
        s = float(rng.uniform())
        rho = werner_state(WernerParams(d, s=s))
        assert np.trace(rho.matrix).real == pytest.approx(1, abs=1e-12)
        assert np.trace(rho.matrix @ antisymmetric_projector(d)).real == pytest.approx(s, abs=1e-12)
        np.testing.assert_allclose(rho.matrix, werner_state_p(s_to_p(s, d), d).matrix, atol=1e-12)


def test_werner_unitary_invariance(rng):
    for d in (2, 3):
        rho = werner_state(WernerParams(d, s=0.3)).matrix
        for _ in range(5):
            u = random_unitary(d, rng)
            uu = np.kron(u, u)
            assert np.max(np.abs(uu @ rho @ uu.conj().T - rho)) <= 1e-10


def test_werner_params_validation():
    with pytest.raises(ArgumentError):
        WernerParams(2)
    with pytest.raises(ArgumentError):
        WernerParams(2, s=0.5, p=0.1)
    with pytest.raises(ArgumentError):
        WernerParams(2, s=1.5)
    with pytest.raises(ArgumentError):
        WernerParams(2, p=-1.5)
    with pytest.raises(ArgumentError):
        p_to_s(-3, 3)


def test_s_p_conversion_examples():
    for d in (2, 3, 7):
        assert p_to_s(-1, d) == pytest.approx(1, abs=1e-15)
    assert s_to_p(1 / SQ2, 2) == pytest.approx(3 * SQ2 - 5, abs=1e-12)
    for d in (2, 3, 5):
        for s in np.linspace(0, 1, 21):
            assert p_to_s(s_to_p(s, d), d) == pytest.approx(s, abs=1e-12)


def test_threshold_examples():
    assert werner_ge_threshold(2) == pytest.approx(3 * SQ2 - 5, abs=1e-12)
    assert werner_ge_threshold(2) == pytest.approx(-0.757359, abs=1e-6)
    vals = [werner_ge_threshold(d) for d in range(2, 65)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert all(v < 1 - SQ2 for v in vals)
    assert abs(vals[-1] - (1 - SQ2)) < abs(vals[0] - (1 - SQ2))
    assert werner_ge_threshold(5) == pytest.approx(s_to_p(1 / SQ2, 5), abs=1e-12)


def test_build_specs():
    assert build({"construct": "antisym", "d": 3}).dim == 3
    assert build({"construct": "example_w"}).dim == 16
    j = {"construct": "johnston", "d1": 3, "d2": 3}
    chain = build({"construct": "chain", "parts": [j, j]})
    assert chain.equals(example_w_basis())
    span = build({"construct": "span", "dims": [2, 2], "vectors": [[0, 1, -1, 0]]})
    assert span.equals(antisymmetric_subspace(2))
    ces = build({"construct": "sum_products_ces",
                 "s_parts": [{"construct": "antisym", "d": 2}] * 2,
                 "p_parts": [{"dims": [2], "vectors": [[1, 0]]}, {"dims": [2], "vectors": [[0, 1]]}]},
                OPT)
    assert ces.dim == 2
    cor = build({"construct": "corollary6",
                 "psis": [{"dims": [2, 2], "vector": [1, 0, 0, 1]}],
                 "chis": [{"dims": [2, 2], "vector": [0, 1, -1, 0]}]}, OPT)
    assert cor.dims == (2, 4, 2)


@pytest.mark.parametrize("spec", [
    {},
    {"construct": "nope"},
    {"construct": "antisym"},
    {"construct": "chain", "parts": [3]},
    [1, 2],
])
def test_build_rejects_bad_specs(spec):
    with pytest.raises(ArgumentError):
        build(spec)
