"""Dense primal-dual interior-point solver for Hermitian block SDPs.

Standard form, with blocks ``b`` of size ``n_b``::

    (P)  maximize  sum_b <C_b, X_b>   s.t.  sum_b A_b svec(X_b) = rhs,  X_b >= 0
    (D)  minimize  rhs . y            s.t.  Z_b = smat(A_b^T y) - C_b >= 0

``A_b`` is a real ``m x n_b**2`` matrix acting on Hermitian svec
coordinates.  Search direction: Nesterov-Todd with Mehrotra predictor-corrector.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg as sla

from qdisc.hermitian import hermitize, smat, svec

log = logging.getLogger(__name__)

OPTIMAL = "Optimal"
MAX_ITER = "MaxIter"
NUMERICAL_FAILURE = "NumericalFailure"


class NumericalFailure(RuntimeError):
    pass


@dataclass
class SdpProblem:
    """Standard-form data plus free-form metadata used to read witnesses back.

    Scalar variables are 1 x 1 blocks; affine equalities are rows of ``A``.
    """

    block_dims: list
    A: list
    C: list
    rhs: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rhs = np.asarray(self.rhs, dtype=float)
        m = self.rhs.shape[0]
        if not (len(self.block_dims) == len(self.A) == len(self.C)):
            raise ValueError("blocks, constraint matrices and costs must align")
        for n, A, C in zip(self.block_dims, self.A, self.C):
            if A.shape != (m, n * n):
                raise ValueError(f"constraint block has shape {A.shape}, expected {(m, n * n)}")
            if C.shape != (n, n) or not np.allclose(C, C.conj().T, atol=1e-12):
                raise ValueError("cost blocks must be Hermitian")

    @property
    def m(self) -> int:
        return self.rhs.shape[0]


@dataclass
class SdpSolution:
    X: list
    y: np.ndarray
    Z: list
    primal_objective: float
    dual_objective: float
    gap: float
    relative_gap: float
    primal_infeasibility: float
    dual_infeasibility: float
    status: str
    iterations: int


def _inner(A, B) -> float:
    return float(np.real(np.vdot(A, B)))


def _nt_scaling(X: np.ndarray, Z: np.ndarray):
    """``(G, lam)`` with ``G^-1 X G^-dag = G^dag Z G = diag(lam)``; ``W = G G^dag``."""
    Lx = np.linalg.cholesky(X)
    Lz = np.linalg.cholesky(Z)
    U, d, Vh = np.linalg.svd(Lz.conj().T @ Lx)
    G = (Lx @ Vh.conj().T) / np.sqrt(d)
    return G, d


def _scaled_step(lam: np.ndarray, D: np.ndarray, frac: float) -> float:
    """Largest ``a <= 1`` with ``diag(lam) + a D >= 0``, damped by ``frac``."""
    r = 1.0 / np.sqrt(lam)
    e = np.linalg.eigvalsh(hermitize(D * np.outer(r, r))).min()
    return 1.0 if e >= 0 else min(1.0, frac * (-1.0 / e))


def _schur_solver(B: np.ndarray):
    """Solver for ``M = B^T B`` through ``B = QR``, avoiding the squared condition number.

    Falls back to a truncated pseudo-inverse when ``R`` is numerically singular.
    """
    R = sla.qr(B, mode="r", overwrite_a=True, check_finite=False)[0][:B.shape[1]]
    d = np.abs(np.diag(R))
    if d.min() > 1e-14 * d.max():
        def sol(r):
            return sla.solve_triangular(R, sla.solve_triangular(R, r, trans="T"))
        return sol
    _, S, Vt = np.linalg.svd(R)
    keep = S > 1e-14 * S[0]
    V, S2 = Vt[keep].T, S[keep] ** 2

    def sol(r):
        return V @ ((V.T @ r) / S2)
    return sol


def solve(p: SdpProblem, tol: float = 1e-9, max_iter: int = 100, verbose: bool = False,
          stall_iters: int = 6) -> SdpSolution:
    """Solve ``p`` to absolute gap, complementarity and relative infeasibility ``tol``.

    Infeasibilities are relative to ``1 + |rhs|`` and the cost norm.

    Nesterov-Todd direction with Mehrotra predictor-corrector.  Returns the
    best iterate with a non-Optimal status when the iteration limit is hit or
    the factorizations break down.
    """
    dims = p.block_dims
    n_tot = sum(dims)
    A, C, b = p.A, p.C, p.rhs
    Amats = [smat(Ab, n) for Ab, n in zip(A, dims)]  # (m, n, n) per block
    normA = max(1.0, max(np.abs(Ab).max() for Ab in A))
    normC = max(1.0, max(np.linalg.norm(Cb) for Cb in C))
    xi = max(10.0, np.sqrt(max(dims)), max(dims) * np.abs(b).max() / normA)
    zeta = max(10.0, np.sqrt(max(dims)), normC)
    X = [xi * np.eye(n, dtype=complex) for n in dims]
    Z = [zeta * np.eye(n, dtype=complex) for n in dims]
    y = np.zeros(p.m)
    status = MAX_ITER
    nb_b = 1.0 + np.linalg.norm(b)
    best = None
    last_gain = 0

    def measure():
        rp = b - sum(Ab @ svec(Xb) for Ab, Xb in zip(A, X))
        Rd = [Cb - smat(Ab.T @ y, n) + Zb for Ab, Cb, Zb, n in zip(A, C, Z, dims)]
        pobj = sum(_inner(Cb, Xb) for Cb, Xb in zip(C, X))
        dobj = float(b @ y)
        pinf = float(np.linalg.norm(rp) / nb_b)
        dinf = float(max(np.linalg.norm(R) for R in Rd) / normC)
        return rp, Rd, pobj, dobj, pinf, dinf

    it = 0
    for it in range(1, max_iter + 1):
        rp, Rd, pobj, dobj, pinf, dinf = measure()
        comp = sum(_inner(Xb, Zb) for Xb, Zb in zip(X, Z))
        err = max(abs(pobj - dobj), comp, pinf, dinf)
        if best is None or err < best[0]:
            if best is None or err < 0.5 * best[0]:
                last_gain = it
            best = (err, [x.copy() for x in X], y.copy(), [z.copy() for z in Z])
        elif it - last_gain >= stall_iters:
            status = NUMERICAL_FAILURE  # no halving of the error for a while
            break
        if verbose:
            log.info("it %3d  p %.12f  d %.12f  comp %.2e  pinf %.2e  dinf %.2e",
                     it, pobj, dobj, comp, pinf, dinf)
        if err <= tol:
            status = OPTIMAL
            break
        mu = comp / n_tot
        try:
            scal = [_nt_scaling(Xb, Zb) for Xb, Zb in zip(X, Z)]
            # Schur matrix M = B^T B with rows of B the scaled constraint images
            B = np.vstack([part for Ak, (G, _) in zip(Amats, scal)
                           for P in [(G.conj().T @ Ak @ G).reshape(p.m, -1)]
                           for part in (P.real.T, P.imag.T)])
            schur = _schur_solver(B)
        except (np.linalg.LinAlgError, sla.LinAlgError, ValueError):
            status = NUMERICAL_FAILURE
            break
        WRdW = [G @ (G.conj().T @ Rb @ G) @ G.conj().T for (G, _), Rb in zip(scal, Rd)]

        def direction(Rs):
            """``Rs``: scaled right-hand sides for ``dX~ + dZ~``."""
            R = [G @ Rsb @ G.conj().T for (G, _), Rsb in zip(scal, Rs)]
            rhs = sum(Ab @ svec(hermitize(Rb + Wb)) for Ab, Rb, Wb in zip(A, R, WRdW)) - rp
            dy = schur(rhs)
            for _ in range(2):
                # refine against the operator, not the rounded Schur matrix
                dZ = [smat(Ab.T @ dy, n) - Rb for Ab, Rb, n in zip(A, Rd, dims)]
                dZs = [hermitize(G.conj().T @ d @ G) for (G, _), d in zip(scal, dZ)]
                dXs = [Rsb - d for Rsb, d in zip(Rs, dZs)]
                dX = [hermitize(G @ d @ G.conj().T) for (G, _), d in zip(scal, dXs)]
                e = rp - sum(Ab @ svec(d) for Ab, d in zip(A, dX))
                dy = dy - schur(e)
            dZ = [smat(Ab.T @ dy, n) - Rb for Ab, Rb, n in zip(A, Rd, dims)]
            dZs = [hermitize(G.conj().T @ d @ G) for (G, _), d in zip(scal, dZ)]
            dXs = [Rsb - d for Rsb, d in zip(Rs, dZs)]
            return dXs, dy, dZs, dZ

        def steps(dXs, dZs, frac):
            ap = min(_scaled_step(lam, d, frac) for (_, lam), d in zip(scal, dXs))
            ad = min(_scaled_step(lam, d, frac) for (_, lam), d in zip(scal, dZs))
            return ap, ad

        lams = [lam for _, lam in scal]
        # predictor: dX~ + dZ~ = -Lambda
        dXa, dya, dZa, _ = direction([-np.diag(lam).astype(complex) for lam in lams])
        ap, ad = steps(dXa, dZa, 1.0)
        mu_aff = sum(_inner(np.diag(lam) + ap * d1, np.diag(lam) + ad * d2)
                     for lam, d1, d2 in zip(lams, dXa, dZa)) / n_tot
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0
        # corrector: Lambda S + S Lambda = 2 sigma mu I - 2 Lambda^2 - (dXa dZa + dZa dXa)
        Rs = []
        for lam, d1, d2 in zip(lams, dXa, dZa):
            rhs = -(d1 @ d2 + d2 @ d1)
            rhs[np.diag_indices(len(lam))] += 2 * sigma * mu - 2 * lam ** 2
            Rs.append(rhs / np.add.outer(lam, lam))
        dXs, dy, dZs, dZ = direction(Rs)
        ap, ad = steps(dXs, dZs, 0.98)
        dX = [hermitize(G @ d @ G.conj().T) for (G, _), d in zip(scal, dXs)]
        X = [Xb + ap * d for Xb, d in zip(X, dX)]
        y = y + ad * dy
        Z = [Zb + ad * d for Zb, d in zip(Z, dZ)]
    else:
        it = max_iter

    if status != OPTIMAL and best is not None:
        _, X, y, Z = best
    rp, Rd, pobj, dobj, pinf, dinf = measure()
    return SdpSolution(X=X, y=y, Z=Z, primal_objective=pobj, dual_objective=dobj,
                       gap=abs(dobj - pobj),
                       relative_gap=abs(dobj - pobj) / (1.0 + abs(pobj) + abs(dobj)),
                       primal_infeasibility=pinf,
                       dual_infeasibility=dinf, status=status, iterations=it)


Backend = Callable[[SdpProblem, float], SdpSolution]


def default_backend(p: SdpProblem, tol: float) -> SdpSolution:
    return solve(p, tol)
