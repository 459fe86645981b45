"""Subspaces of multipartite spaces: tensor product, party join, direct sum."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ArgumentError, PreconditionError, ResourceError
from .linalg import PureState, check_dims, orthonormalize, permute_vector, total_dim
from .policy import DEFAULT, NumericPolicy


@dataclass(frozen=True, eq=False)
class Subspace:
    """Orthonormal basis, stored as the columns of ``basis``, tagged with a profile."""

    basis: np.ndarray
    dims: tuple[int, ...]
    policy: NumericPolicy = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        dims = check_dims(self.dims, allow_unit=True)
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim == 1:
            b = b[:, None]
        n = total_dim(dims)
        if b.ndim != 2 or b.shape[0] != n:
            raise ArgumentError(f"basis of shape {b.shape} does not match profile {dims}")
        k = b.shape[1]
        if not 1 <= k <= n:
            raise ArgumentError(f"subspace dimension {k} out of range 1..{n}")
        err = np.max(np.abs(b.conj().T @ b - np.eye(k)))
        if err > self.policy.rank_cut:
            raise ArgumentError(f"basis columns are not orthonormal (deviation {err:.3g})")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def vectors(self) -> list[PureState]:
        return [PureState(self.basis[:, i], self.dims, self.policy) for i in range(self.dim)]

    def equals(self, other: "Subspace", tol: float | None = None) -> bool:
        """Basis-independent equality via the projector distance."""
        tol = self.policy.subspace_equality if tol is None else tol
        if self.dims != other.dims:
            return False
        return projector_distance(self, other) <= tol


def from_span(vectors: Sequence, dims=None, tol: float | None = None,
              policy: NumericPolicy = DEFAULT) -> Subspace:
    """Orthonormal envelope of a spanning set.

    ``vectors`` may hold :class:`PureState` objects (profile taken from
    them) or raw arrays, in which case ``dims`` is required.
    """
    vectors = list(vectors)
    if not vectors:
        raise ArgumentError("empty spanning set")
    if dims is None:
        if not isinstance(vectors[0], PureState):
            raise ArgumentError("dims required for raw vectors")
        dims = vectors[0].dims
    dims = tuple(dims)
    raw = []
    for v in vectors:
        if isinstance(v, PureState):
            if v.dims != dims:
                raise ArgumentError(f"vector profile {v.dims} differs from {dims}")
            v = v.amplitudes
        raw.append(v)
    return Subspace(orthonormalize(raw, tol, policy), dims, policy)


def full_space(dims, policy: NumericPolicy = DEFAULT) -> Subspace:
    dims = tuple(dims)
    return Subspace(np.eye(total_dim(dims), dtype=complex), dims, policy)


def tensor(s: Subspace, g: Subspace) -> Subspace:
    """Tensor product; columns are ordered ``(i, j) -> i * dim(g) + j``."""
    n = s.ambient_dim * g.ambient_dim
    if n > s.policy.max_ambient_dim:
        raise ResourceError(f"ambient dimension {n} exceeds cap {s.policy.max_ambient_dim}")
    b = np.einsum("ai,bj->abij", s.basis, g.basis).reshape(n, s.dim * g.dim)
    return Subspace(b, s.dims + g.dims, s.policy)


def join(s: Subspace, left_party: int) -> Subspace:
    """Merge parties ``left_party`` and ``left_party + 1`` into one.

    With lexicographic flattening, ``|i>|j> -> |i * d_right + j>`` leaves
    every amplitude in place, so only the profile changes.
    """
    i = int(left_party)
    if not 0 <= i <= s.n_parties - 2:
        raise ArgumentError(f"cannot join party {i} with its right neighbour in {s.n_parties} parties")
    dims = s.dims[:i] + (s.dims[i] * s.dims[i + 1],) + s.dims[i + 2:]
    return Subspace(s.basis, dims, s.policy)


def join_dims(dims: Sequence[int], left_party: int) -> tuple[int, ...]:
    dims = tuple(dims)
    return dims[:left_party] + (dims[left_party] * dims[left_party + 1],) + dims[left_party + 2:]


def permute(s: Subspace, perm: Sequence[int]) -> Subspace:
    dims = tuple(s.dims[p] for p in perm)
    return Subspace(permute_vector(s.basis, s.dims, perm), dims, s.policy)


def direct_sum(parts: Sequence[Subspace]) -> Subspace:
    """Concatenate bases of mutually orthogonal subspaces.

    Raises
    ------
    PreconditionError
        If any pair has a cross-Gram norm above the orthogonality tolerance.
    """
    parts = list(parts)
    if not parts:
        raise ArgumentError("direct sum of nothing")
    dims = parts[0].dims
    for p in parts:
        if p.dims != dims:
            raise ArgumentError(f"profiles differ: {p.dims} vs {dims}")
    tol = parts[0].policy.orthogonality
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            ov = np.linalg.norm(parts[i].basis.conj().T @ parts[j].basis, 2)
            if ov > tol:
                raise PreconditionError(
                    f"direct-sum parts {i} and {j} are not orthogonal (overlap norm {ov:.3g})")
    b = np.column_stack([p.basis for p in parts])
    return Subspace(b, dims, parts[0].policy)


def projector(s: Subspace) -> np.ndarray:
    return s.basis @ s.basis.conj().T


def projector_distance(s: Subspace, g: Subspace) -> float:
    """Operator-norm distance between the two projectors."""
    return float(np.linalg.norm(projector(s) - projector(g), 2))


def contains(s: Subspace, v, tol: float = 1e-9) -> bool:
    if isinstance(v, PureState):
        if v.dims != s.dims:
            raise ArgumentError(f"vector profile {v.dims} differs from {s.dims}")
        v = v.amplitudes
    v = np.asarray(v, dtype=complex).reshape(-1)
    resid = v - s.basis @ (s.basis.conj().T @ v)
    return bool(np.linalg.norm(resid) <= tol)


# JSON: {"dims": [...], "basis": [[[re, im], ...] one list per column]}

def _encode_complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _decode_complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ArgumentError(f"complex entry must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, (int, float)):
        return complex(x)
    raise ArgumentError(f"cannot read {x!r} as a complex number")


def decode_vector(entries) -> np.ndarray:
    return np.array([_decode_complex(x) for x in entries], dtype=complex)


def encode_vector(v) -> list[list[float]]:
    return [_encode_complex(z) for z in np.asarray(v).reshape(-1)]


def to_dict(s: Subspace) -> dict:
    b = orthonormalize(list(s.basis.T), policy=s.policy)
    return {"dims": list(s.dims), "basis": [encode_vector(b[:, i]) for i in range(b.shape[1])]}


def from_dict(d: dict, policy: NumericPolicy = DEFAULT) -> Subspace:
    """Read a Subspace; rejects bases that are not orthonormal."""
    if not isinstance(d, dict) or "dims" not in d or "basis" not in d:
        raise ArgumentError("subspace JSON needs 'dims' and 'basis'")
    cols = [decode_vector(c) for c in d["basis"]]
    if not cols:
        raise ArgumentError("subspace JSON has an empty basis")
    if len({c.size for c in cols}) != 1:
        raise ArgumentError("basis columns have different lengths")
    return Subspace(np.column_stack(cols), tuple(d["dims"]), policy)


def dumps(s: Subspace) -> str:
    return json.dumps(to_dict(s))


def loads(text: str, policy: NumericPolicy = DEFAULT) -> Subspace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"invalid JSON: {exc}") from exc
    return from_dict(data, policy)
