"""Real coordinates for complex Hermitian matrices.

``svec`` maps an ``n x n`` Hermitian matrix to ``n**2`` real numbers in an
orthonormal basis for the Hilbert-Schmidt inner product ``Re Tr(A B)``:
the diagonal, then ``sqrt(2) Re X_ij`` and ``sqrt(2) Im X_ij`` for ``i < j``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

_SQRT2 = np.sqrt(2.0)


@lru_cache(maxsize=None)
def _upper(n: int):
    return np.triu_indices(n, 1)


def svec(X: np.ndarray) -> np.ndarray:
    """Coordinates of (a batch of) Hermitian matrices; shape ``(..., n*n)``."""
    X = np.asarray(X)
    n = X.shape[-1]
    iu, ju = _upper(n)
    diag = np.diagonal(X, axis1=-2, axis2=-1).real
    off = X[..., iu, ju]
    return np.concatenate([diag, _SQRT2 * off.real, _SQRT2 * off.imag], axis=-1)


def smat(v: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`svec`."""
    v = np.asarray(v, dtype=float)
    iu, ju = _upper(n)
    m = len(iu)
    batch = v.shape[:-1]
    X = np.zeros(batch + (n, n), dtype=complex)
    idx = np.arange(n)
    X[..., idx, idx] = v[..., :n]
    off = (v[..., n:n + m] + 1j * v[..., n + m:]) / _SQRT2
    X[..., iu, ju] = off
    X[..., ju, iu] = off.conj()
    return X


@lru_cache(maxsize=None)
def hermitian_basis(n: int) -> np.ndarray:
    """Orthonormal Hermitian basis, shape ``(n*n, n, n)``, matching :func:`svec`."""
    B = smat(np.eye(n * n), n)
    B.setflags(write=False)
    return B


def superoperator(fn, n: int) -> np.ndarray:
    """Real ``n^2 x n^2`` matrix of a Hermiticity-preserving linear map in svec coordinates.

    ``fn`` must accept a batch of matrices with shape ``(n*n, n, n)``.
    """
    images = fn(hermitian_basis(n).copy())
    return svec(images).T


def range_and_complement(S: np.ndarray, tol: float = 1e-9):
    """Orthonormal bases (as rows) of the range and kernel of a symmetric projector matrix."""
    S = (S + S.T) / 2
    w, V = np.linalg.eigh(S)
    if np.any((np.abs(w) > tol) & (np.abs(w - 1) > tol)):
        raise ValueError("matrix is not an orthogonal projector")
    rng = V[:, w > 0.5].T
    ker = V[:, w <= 0.5].T
    return rng, ker


def hermitize(X: np.ndarray) -> np.ndarray:
    return (X + np.conj(np.swapaxes(X, -1, -2))) / 2
