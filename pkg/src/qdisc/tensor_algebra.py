"""Labeled tensor-product linear algebra for float and exact matrices.

The array kernels (``ptrace_array``, ``trace_replace_array``,
``permute_array``) work on any numpy dtype, including object arrays of exact
scalars, and accept leading batch axes.  :class:`LabeledMatrix` pairs a matrix
(complex ndarray or :class:`~qdisc.exact_matrix.ExactMatrix`) with the
ordered list of subsystem labels and dimensions it lives on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from qdisc.exact_matrix import ExactMatrix, _obj_zeros
from qdisc.exact_scalar import QuadExt

Matrix = Union[np.ndarray, ExactMatrix]


class LabelError(ValueError):
    """Unknown, duplicated or incompatible subsystem labels."""


@dataclass(frozen=True)
class SpaceStructure:
    """Ordered subsystems ``((label, dim), ...)``."""

    systems: tuple[tuple[str, int], ...]

    def __post_init__(self):
        labels = [l for l, _ in self.systems]
        if len(set(labels)) != len(labels):
            raise LabelError(f"duplicate labels in {labels}")
        for l, d in self.systems:
            if int(d) < 1:
                raise ValueError(f"dimension of {l} must be positive")

    @classmethod
    def of(cls, *pairs) -> "SpaceStructure":
        return cls(tuple((str(l), int(d)) for l, d in pairs))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(l for l, _ in self.systems)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.systems)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def dim(self, label: str) -> int:
        return self.dims[self.index(label)]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelError(f"unknown label {label!r}; have {self.labels}") from None

    def indices(self, labels: Iterable[str]) -> list[int]:
        return sorted(self.index(l) for l in labels)

    def __add__(self, other: "SpaceStructure") -> "SpaceStructure":
        return SpaceStructure(self.systems + other.systems)

    def without(self, labels: Iterable[str]) -> "SpaceStructure":
        drop = set(labels)
        return SpaceStructure(tuple(s for s in self.systems if s[0] not in drop))

    def relabel(self, mapping: dict) -> "SpaceStructure":
        return SpaceStructure(tuple((mapping.get(l, l), d) for l, d in self.systems))


# array kernels --------------------------------------------------------------

def _is_exact_array(arr: np.ndarray) -> bool:
    return arr.dtype == object


def _identity_like(n: int, exact: bool, scale=1):
    if exact:
        out = _obj_zeros((n, n))
        s = Fraction(scale)
        for i in range(n):
            out[i, i] = s
        return out
    return np.eye(n) * scale


def permute_array(arr: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder subsystems: output subsystem ``j`` is input subsystem ``perm[j]``."""
    k = len(dims)
    batch = arr.shape[:-2]
    nb = len(batch)
    t = arr.reshape(batch + tuple(dims) + tuple(dims))
    axes = list(range(nb)) + [nb + p for p in perm] + [nb + k + p for p in perm]
    D = math.prod(dims)
    return t.transpose(axes).reshape(batch + (D, D))


def ptrace_array(arr: np.ndarray, dims: Sequence[int], idxs: Iterable[int]) -> np.ndarray:
    """Partial trace over subsystem positions ``idxs``; remaining order preserved."""
    idxs = sorted(set(idxs))
    k = len(dims)
    keep = [i for i in range(k) if i not in idxs]
    batch = arr.shape[:-2]
    nb = len(batch)
    r = math.prod(dims[i] for i in keep)
    s = math.prod(dims[i] for i in idxs)
    t = arr.reshape(batch + tuple(dims) + tuple(dims))
    axes = (list(range(nb)) + [nb + i for i in keep] + [nb + i for i in idxs]
            + [nb + k + i for i in keep] + [nb + k + i for i in idxs])
    t = t.transpose(axes).reshape(batch + (r, s, r, s))
    if _is_exact_array(arr):
        out = _obj_zeros(batch + (r, r))
        for x in range(s):
            out = out + t[..., :, x, :, x]
        return out
    return np.trace(t, axis1=nb + 1, axis2=nb + 3)


def trace_replace_array(arr: np.ndarray, dims: Sequence[int], idxs: Iterable[int]) -> np.ndarray:
    """``Tr_X(A) (x) 1_X / d_X`` re-embedded at the original positions."""
    idxs = sorted(set(idxs))
    if not idxs:
        return arr.copy()
    k = len(dims)
    keep = [i for i in range(k) if i not in idxs]
    batch = arr.shape[:-2]
    nb = len(batch)
    s = math.prod(dims[i] for i in idxs)
    r = math.prod(dims[i] for i in keep)
    red = ptrace_array(arr, dims, idxs)
    exact = _is_exact_array(arr)
    if exact:
        red = red * Fraction(1, s)
        out = _obj_zeros(batch + (r, s, r, s))
    else:
        red = red / s
        out = np.zeros(batch + (r, s, r, s), dtype=arr.dtype)
    for x in range(s):
        out[..., :, x, :, x] = red
    # out is ordered (keep, idxs); undo that ordering
    order = keep + idxs
    inv = [order.index(i) for i in range(k)]
    sub_dims = [dims[i] for i in order]
    out = out.reshape(batch + (r * s, r * s))
    return permute_array(out, sub_dims, inv)


def partial_transpose_array(arr: np.ndarray, dims: Sequence[int], idxs: Iterable[int]) -> np.ndarray:
    idxs = set(idxs)
    k = len(dims)
    batch = arr.shape[:-2]
    nb = len(batch)
    t = arr.reshape(batch + tuple(dims) + tuple(dims))
    axes = list(range(nb + 2 * k))
    for i in idxs:
        axes[nb + i], axes[nb + k + i] = nb + k + i, nb + i
    D = math.prod(dims)
    return t.transpose(axes).reshape(batch + (D, D))


def _apply(M: Matrix, fn) -> Matrix:
    if isinstance(M, ExactMatrix):
        return M.map_parts(fn)
    return fn(np.asarray(M))


# labeled matrices ------------------------------------------------------------

class LabeledMatrix:
    """Operator on a labeled tensor-product space (float or exact flavor)."""

    __slots__ = ("space", "data")

    def __init__(self, space: SpaceStructure, data: Matrix):
        if not isinstance(data, ExactMatrix):
            data = np.asarray(data, dtype=complex)
        if data.shape != (space.total_dim, space.total_dim):
            raise ValueError(f"matrix of shape {data.shape} does not match space of dim {space.total_dim}")
        self.space = space
        self.data = data

    @property
    def exact(self) -> bool:
        return isinstance(self.data, ExactMatrix)

    @property
    def labels(self):
        return self.space.labels

    def trace(self):
        if self.exact:
            return self.data.trace()
        return np.trace(self.data)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        if self.exact:
            return self.data.is_hermitian()
        return bool(np.allclose(self.data, self.data.conj().T, atol=tol))

    def relabel(self, mapping: dict) -> "LabeledMatrix":
        return LabeledMatrix(self.space.relabel(mapping), self.data)

    def to_float(self) -> "LabeledMatrix":
        if not self.exact:
            return self
        return LabeledMatrix(self.space, self.data.to_float())

    def __repr__(self):
        flavor = "exact" if self.exact else "float"
        return f"LabeledMatrix({self.space.systems}, {flavor})"


def _as_exact(M: Matrix) -> ExactMatrix:
    return M if isinstance(M, ExactMatrix) else ExactMatrix.from_float(M)


def _harmonize(A: LabeledMatrix, B: LabeledMatrix):
    """Promote both to exact when either is exact."""
    if A.exact or B.exact:
        return _as_exact(A.data), _as_exact(B.data)
    return A.data, B.data


def kron(A: LabeledMatrix, B: LabeledMatrix) -> LabeledMatrix:
    """Tensor product on the concatenated space; label sets must be disjoint."""
    clash = set(A.labels) & set(B.labels)
    if clash:
        raise LabelError(f"kron needs disjoint labels; shared: {sorted(clash)}")
    a, b = _harmonize(A, B)
    data = a.kron(b) if isinstance(a, ExactMatrix) else np.kron(a, b)
    return LabeledMatrix(A.space + B.space, data)


def partial_trace(A: LabeledMatrix, labels: Iterable[str]) -> LabeledMatrix:
    labels = list(labels)
    idxs = A.space.indices(labels)
    dims = A.space.dims
    data = _apply(A.data, lambda x: ptrace_array(x, dims, idxs))
    return LabeledMatrix(A.space.without(labels), data)


def trace_and_replace(A: LabeledMatrix, labels: Iterable[str]) -> LabeledMatrix:
    idxs = A.space.indices(labels)
    dims = A.space.dims
    return LabeledMatrix(A.space, _apply(A.data, lambda x: trace_replace_array(x, dims, idxs)))


def partial_transpose(A: LabeledMatrix, labels: Iterable[str]) -> LabeledMatrix:
    idxs = A.space.indices(labels)
    dims = A.space.dims
    return LabeledMatrix(A.space, _apply(A.data, lambda x: partial_transpose_array(x, dims, idxs)))


def permute_systems(A: LabeledMatrix, new_order: Sequence[str]) -> LabeledMatrix:
    new_order = list(new_order)
    if sorted(new_order) != sorted(A.labels) or len(new_order) != len(A.labels):
        raise LabelError(f"{new_order} is not a permutation of {list(A.labels)}")
    perm = [A.space.index(l) for l in new_order]
    dims = A.space.dims
    space = SpaceStructure(tuple(A.space.systems[p] for p in perm))
    return LabeledMatrix(space, _apply(A.data, lambda x: permute_array(x, dims, perm)))


def identity(space: SpaceStructure, exact: bool = False) -> LabeledMatrix:
    n = space.total_dim
    return LabeledMatrix(space, ExactMatrix.identity(n) if exact else np.eye(n, dtype=complex))


def link_product(A: LabeledMatrix, B: LabeledMatrix) -> LabeledMatrix:
    """``A * B = Tr_S[(A^{T_S} (x) 1)(1 (x) B)]`` over the shared labels ``S``.

    The output lives on A's unshared labels followed by B's unshared labels.
    """
    shared = [l for l in A.labels if l in B.labels]
    for l in shared:
        if A.space.dim(l) != B.space.dim(l):
            raise LabelError(f"label {l!r} has dimension {A.space.dim(l)} vs {B.space.dim(l)}")
    if not shared:
        return kron(A, B)
    a_only = [l for l in A.labels if l not in shared]
    b_only = [l for l in B.labels if l not in shared]
    exact = A.exact or B.exact
    A1 = permute_systems(A, a_only + shared)
    B1 = permute_systems(B, shared + b_only)
    A1 = partial_transpose(A1, shared)
    sa = A.space.without(shared)
    sb = B.space.without(shared)
    ss = SpaceStructure(tuple((l, A.space.dim(l)) for l in shared))
    left = kron(A1, identity(sb, exact)) if b_only else A1
    right = kron(identity(sa, exact), B1) if a_only else B1
    la, rb = _harmonize(left, right)
    prod = LabeledMatrix(sa + ss + sb, la @ rb)
    return partial_trace(prod, shared)


def choi_from_kraus(kraus: Sequence, dI: int, dO: int, labels=("I", "O"), tol: float = 1e-10) -> LabeledMatrix:
    """Choi operator ``sum_ij |i><j| (x) K(|i><j|)`` of a Kraus family.

    Kraus operators that are :class:`ExactMatrix` (or nested lists of exact
    scalars) give an exact Choi matrix; trace preservation is then checked
    exactly, otherwise to ``tol``.
    """
    space = SpaceStructure.of((labels[0], dI), (labels[1], dO))
    exact = any(isinstance(K, ExactMatrix) for K in kraus) or any(
        not isinstance(K, np.ndarray) and _nested_exact(K) for K in kraus)
    if exact:
        Ks = [K if isinstance(K, ExactMatrix) else ExactMatrix(K) for K in kraus]
        for K in Ks:
            if K.shape != (dO, dI):
                raise ValueError(f"Kraus operator of shape {K.shape}, expected {(dO, dI)}")
        total = ExactMatrix.zeros(dI)
        for K in Ks:
            total = total + K.dagger() @ K
        if total != ExactMatrix.identity(dI):
            raise ValueError("Kraus operators are not trace preserving")
        C = ExactMatrix.zeros(dI * dO)
        for K in Ks:
            # |v> = sum_i |i> (x) K|i>, v[i*dO + o] = K[o, i]
            vre = K.re.T.reshape(-1)
            vim = K.im.T.reshape(-1)
            C = C + ExactMatrix(np.outer(vre, vre) + np.outer(vim, vim),
                                np.outer(vim, vre) - np.outer(vre, vim), _trusted=True)
        return LabeledMatrix(space, C)
    Ks = [np.asarray(K, dtype=complex) for K in kraus]
    for K in Ks:
        if K.shape != (dO, dI):
            raise ValueError(f"Kraus operator of shape {K.shape}, expected {(dO, dI)}")
    total = sum(K.conj().T @ K for K in Ks)
    if not np.allclose(total, np.eye(dI), atol=tol):
        raise ValueError("Kraus operators are not trace preserving")
    C = np.zeros((dI * dO, dI * dO), dtype=complex)
    for K in Ks:
        v = K.T.reshape(-1)
        C += np.outer(v, v.conj())
    return LabeledMatrix(space, C)


def _nested_exact(K) -> bool:
    try:
        flat = np.asarray(K, dtype=object).ravel()
    except Exception:  # noqa: BLE001
        return False
    return any(isinstance(v, (Fraction, QuadExt)) for v in flat)
