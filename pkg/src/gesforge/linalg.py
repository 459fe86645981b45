"""Dense complex linear algebra with multipartite index bookkeeping.

Vectors and operators are stored as flat numpy arrays whose indices are
lexicographic in the party indices (party 0 most significant), so a state
on ``dims = (2, 3)`` has amplitude ``v[3 * i + j]`` for ``|i>|j>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, ResourceError
from .policy import DEFAULT, NumericPolicy


def check_dims(dims: Iterable[int], *, allow_unit: bool = False) -> tuple[int, ...]:
    """Validate a dimension profile and return it as a tuple of ints."""
    out = tuple(int(d) for d in dims)
    if not out:
        raise ArgumentError("dimension profile must be nonempty")
    floor = 1 if allow_unit else 2
    for d in out:
        if d < floor:
            raise ArgumentError(f"local dimension {d} is below {floor} in profile {out}")
    return out


def total_dim(dims: Sequence[int]) -> int:
    return int(np.prod(dims, dtype=np.int64))


def _check_cap(n: int, policy: NumericPolicy) -> None:
    if n > policy.max_ambient_dim:
        raise ResourceError(f"ambient dimension {n} exceeds cap {policy.max_ambient_dim}")


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over a dimension profile."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        dims = check_dims(self.dims, allow_unit=True)
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if v.size != total_dim(dims):
            raise ArgumentError(f"vector of length {v.size} does not match profile {dims}")
        if abs(np.linalg.norm(v) - 1.0) > self.policy.normalization:
            raise ArgumentError(f"state is not normalized (norm {np.linalg.norm(v)!r})")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def from_vector(cls, v, dims, policy: NumericPolicy = DEFAULT) -> "PureState":
        """Normalize ``v`` and wrap it."""
        v = np.asarray(v, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ArgumentError("cannot normalize the zero vector")
        return cls(v / nrm, tuple(dims), policy)

    def density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims, self.policy)

    @property
    def n_parties(self) -> int:
        return len(self.dims)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive semidefinite operator over a profile."""

    matrix: np.ndarray
    dims: tuple[int, ...]
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        dims = check_dims(self.dims, allow_unit=True)
        m = np.asarray(self.matrix, dtype=complex)
        n = total_dim(dims)
        if m.shape != (n, n):
            raise ArgumentError(f"matrix of shape {m.shape} does not match profile {dims}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > self.policy.hermiticity:
            raise ArgumentError("density operator is not Hermitian")
        if abs(np.trace(m) - 1.0) > self.policy.normalization:
            raise ArgumentError(f"density operator has trace {np.trace(m).real!r}")
        m = (m + m.conj().T) / 2
        if np.linalg.eigvalsh(m)[0] < -self.policy.psd:
            raise ArgumentError("density operator is not positive semidefinite")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, m, dims, policy: NumericPolicy = DEFAULT) -> "DensityOperator":
        """Hermitize and trace-normalize ``m`` before wrapping it."""
        m = np.asarray(m, dtype=complex)
        m = (m + m.conj().T) / 2
        return cls(m / np.trace(m).real, tuple(dims), policy)

    @property
    def n_parties(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class Bipartition:
    """A cut ``A | complement`` of ``n_parties`` parties, ``A = members``."""

    members: frozenset
    n_parties: int

    def __post_init__(self):
        members = frozenset(int(k) for k in self.members)
        n = int(self.n_parties)
        if not members:
            raise ArgumentError("bipartition side must be nonempty")
        if not members < frozenset(range(n)):
            raise ArgumentError(f"{sorted(members)} is not a strict subset of parties 0..{n - 1}")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "n_parties", n)

    @classmethod
    def of(cls, members: Iterable[int], n_parties: int) -> "Bipartition":
        return cls(frozenset(members), n_parties)

    @property
    def complement(self) -> frozenset:
        return frozenset(range(self.n_parties)) - self.members

    def flipped(self) -> "Bipartition":
        return Bipartition(self.complement, self.n_parties)

    def canonical(self) -> "Bipartition":
        """The representative whose side contains party 0."""
        return self if 0 in self.members else self.flipped()

    def grouping(self) -> tuple[list[int], list[int]]:
        return sorted(self.members), sorted(self.complement)

    def side_dims(self, dims: Sequence[int]) -> tuple[int, int]:
        a, b = self.grouping()
        return total_dim([dims[k] for k in a]), total_dim([dims[k] for k in b])

    def label(self) -> str:
        a, b = self.grouping()
        return "".join(map(str, a)) + "|" + "".join(map(str, b))


def all_cuts(n_parties: int) -> list[Bipartition]:
    """The ``2**(n-1) - 1`` distinct cuts, each represented by the side holding party 0.

    Ordered lexicographically by the sorted member tuple.
    """
    if n_parties < 2:
        raise ArgumentError("need at least two parties for a cut")
    sides = []
    rest = range(1, n_parties)
    for mask in range(2 ** (n_parties - 1)):
        side = (0,) + tuple(k for i, k in enumerate(rest) if mask >> i & 1)
        if len(side) < n_parties:
            sides.append(side)
    return [Bipartition.of(s, n_parties) for s in sorted(sides)]


def _check_cut(cut: Bipartition, dims: Sequence[int]) -> None:
    if cut.n_parties != len(dims):
        raise ArgumentError(f"cut over {cut.n_parties} parties used with profile {tuple(dims)}")


def kron(x, y, policy: NumericPolicy = DEFAULT) -> np.ndarray:
    """Kronecker product of two vectors or two matrices."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.ndim != y.ndim or x.ndim not in (1, 2):
        raise ArgumentError("kron needs two vectors or two matrices")
    _check_cap(x.shape[0] * y.shape[0], policy)
    return np.kron(x, y)


def _check_perm(perm: Sequence[int], n: int) -> list[int]:
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise ArgumentError(f"{perm} is not a permutation of 0..{n - 1}")
    return perm


def permute_vector(v: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder parties of a flat vector (or of the rows of a matrix of columns)."""
    perm = _check_perm(perm, len(dims))
    v = np.asarray(v)
    tail = v.shape[1:]
    t = v.reshape(tuple(dims) + tail)
    axes = perm + list(range(len(dims), len(dims) + len(tail)))
    return t.transpose(axes).reshape(v.shape)


def permute_matrix(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    perm = _check_perm(perm, len(dims))
    n = len(dims)
    t = np.asarray(m).reshape(tuple(dims) * 2)
    return t.transpose(perm + [n + p for p in perm]).reshape(m.shape)


def permute_parties(s, perm: Sequence[int]):
    """Relabel parties so that output party ``k`` is input party ``perm[k]``."""
    new_dims = tuple(s.dims[p] for p in _check_perm(perm, len(s.dims)))
    if isinstance(s, PureState):
        return PureState(permute_vector(s.amplitudes, s.dims, perm), new_dims, s.policy)
    if isinstance(s, DensityOperator):
        return DensityOperator(permute_matrix(s.matrix, s.dims, perm), new_dims, s.policy)
    raise ArgumentError(f"cannot permute parties of {type(s).__name__}")


def partial_trace_matrix(m: np.ndarray, dims: Sequence[int], traced: Iterable[int]) -> np.ndarray:
    """Trace out the parties in ``traced`` from a square matrix over ``dims``."""
    dims = tuple(dims)
    n = len(dims)
    traced = sorted(set(int(k) for k in traced))
    keep = [k for k in range(n) if k not in traced]
    t = np.asarray(m).reshape(dims * 2)
    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * n > len(letters):
        raise ArgumentError("too many parties for partial trace")
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for k in traced:
        col[k] = row[k]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    r = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    dk = total_dim([dims[k] for k in keep])
    return r.reshape(dk, dk)


def partial_trace(rho: DensityOperator, traced: Iterable[int]) -> DensityOperator:
    traced = set(int(k) for k in traced)
    n = rho.n_parties
    if not traced:
        raise ArgumentError("nothing to trace")
    if not traced <= set(range(n)):
        raise ArgumentError(f"party indices {sorted(traced)} out of range for {n} parties")
    if len(traced) == n:
        raise ArgumentError("tracing every party leaves a scalar; use the full trace")
    r = partial_trace_matrix(rho.matrix, rho.dims, traced)
    dims = tuple(d for k, d in enumerate(rho.dims) if k not in traced)
    return DensityOperator.from_matrix(r, dims, rho.policy)


def partial_transpose_matrix(m: np.ndarray, dims: Sequence[int], parties: Iterable[int]) -> np.ndarray:
    dims = tuple(dims)
    n = len(dims)
    axes = list(range(2 * n))
    for k in set(int(p) for p in parties):
        axes[k], axes[n + k] = n + k, k
    return np.asarray(m).reshape(dims * 2).transpose(axes).reshape(m.shape)


def partial_transpose(rho: DensityOperator, cut: Bipartition) -> np.ndarray:
    """Transpose the parties in ``cut.members`` jointly. The result may be indefinite."""
    _check_cut(cut, rho.dims)
    return partial_transpose_matrix(rho.matrix, rho.dims, cut.members)


def bipartite_matrix(v: np.ndarray, dims: Sequence[int], cut: Bipartition) -> np.ndarray:
    """Reshape a flat vector into the ``d_A x d_B`` coefficient matrix of ``cut``."""
    a, b = cut.grouping()
    da, db = cut.side_dims(dims)
    return permute_vector(v, dims, a + b).reshape(da, db)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    coeffs: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Coefficient matrix ``sum_i c_i |l_i><r_i*|`` in the grouped ordering."""
        return (self.left * self.coeffs) @ self.right.T


def schmidt(s: PureState, cut: Bipartition) -> SchmidtDecomposition:
    """Schmidt decomposition of ``s`` across ``cut``.

    Coefficients are sorted descending; ``left[:, i]`` lives on the
    members' side (parties in increasing order), ``right[:, i]`` on the
    complement.
    """
    _check_cut(cut, s.dims)
    c = bipartite_matrix(s.amplitudes, s.dims, cut)
    u, sv, vh = np.linalg.svd(c, full_matrices=False)
    return SchmidtDecomposition(sv, u, vh.T)


def hermitian_eig(m, policy: NumericPolicy = DEFAULT) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ArgumentError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if np.max(np.abs(m - m.conj().T), initial=0.0) > policy.eig_hermiticity * scale:
        raise ArgumentError("matrix is not Hermitian within tolerance")
    return np.linalg.eigh((m + m.conj().T) / 2)


def orthonormalize(vectors, tol: float | None = None, policy: NumericPolicy = DEFAULT) -> np.ndarray:
    """Orthonormal basis (as columns) of the span of ``vectors``.

    Two-pass Gram-Schmidt; a vector whose residual, relative to its own
    norm, falls below ``tol`` is dropped as linearly dependent.
    """
    tol = policy.rank_cut if tol is None else tol
    vs = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    if not vs:
        raise ArgumentError("no vectors given")
    n = vs[0].size
    if any(v.size != n for v in vs):
        raise ArgumentError("vectors have different lengths")
    q = np.zeros((n, 0), dtype=complex)
    for v in vs:
        nrm = np.linalg.norm(v)
        if nrm <= tol:
            continue
        r = v / nrm
        for _ in range(2):
            r = r - q @ (q.conj().T @ r)
        rn = np.linalg.norm(r)
        if rn < tol:
            continue
        q = np.column_stack([q, r / rn])
    if q.shape[1] == 0:
        raise ArgumentError("all vectors are numerically zero")
    return q


def random_state(dims: Sequence[int], rng: np.random.Generator) -> PureState:
    """Unitarily invariant random pure state."""
    n = total_dim(dims)
    return PureState.from_vector(rng.standard_normal(n) + 1j * rng.standard_normal(n), dims)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
