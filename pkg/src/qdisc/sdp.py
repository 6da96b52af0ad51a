"""Primal and dual discrimination SDPs for each strategy class.

Tester elements ``T_i`` live on ``I1 O1 I2 O2`` (or ``I1 O1`` for one copy).
Subspace conditions are rows ``Tr(B_j sum_i T_i) = 0`` over an orthonormal
basis ``B_j`` of the projector's orthogonal complement.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from qdisc.channels import Ensemble
from qdisc.hermitian import hermitize, smat, svec
from qdisc.solver import OPTIMAL, SdpProblem, SdpSolution, solve
from qdisc.strategies import (
    GEN,
    PAR,
    SEQ12,
    SEQ21,
    Strategy,
    Unsupported,
    dual_trace,
    process_projector,
    process_trace,
    subspace_bases,
)

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9


class SolverError(RuntimeError):
    """The interior-point method did not reach the requested accuracy."""


def _check(e: Ensemble, s: Strategy):
    if e.k not in (1, 2):
        raise Unsupported("only one or two copies are supported")
    if e.k == 1 and s != PAR:
        raise Unsupported("with one copy all strategies coincide; request PAR")


def _dims(e: Ensemble):
    return e.k, e.dI, e.dO


def _costs(e: Ensemble) -> list:
    ps = e.float_priors()
    return [p * C for p, C in zip(ps, e.float_powers())]


@lru_cache(maxsize=None)
def dual_basis_with_identity(s: Strategy, k: int = 2, dI: int = 2, dO: int = 2):
    """``(u, Q)``: normalized svec of the identity and an orthonormal traceless basis of the dual span."""
    rng, _ = subspace_bases(s, k, dI, dO, dual=True)
    n = (dI * dO) ** k
    u = svec(np.eye(n)) / np.sqrt(n)
    R = rng - np.outer(rng @ u, u)
    U, S, Vt = np.linalg.svd(R, full_matrices=False)
    Q = Vt[S > 1e-9]
    Q.setflags(write=False)
    return u, Q


def build_primal(e: Ensemble, s: Strategy) -> SdpProblem:
    """Maximize ``sum_i p_i Tr(C_i^{(x)k} T_i)`` over valid testers of class ``s``."""
    _check(e, s)
    k, dI, dO = _dims(e)
    n = (dI * dO) ** k
    gamma = float(process_trace(s, k, dI, dO))
    costs = _costs(e)
    N = e.n
    eye = svec(np.eye(n))
    if s.tag != "SEP":
        _, ker = subspace_bases(s, k, dI, dO)
        rows = np.vstack([ker, eye])
        rhs = np.zeros(rows.shape[0])
        rhs[-1] = gamma
        meta = {"kind": "primal", "strategy": s.name, "k": k, "n": n, "N": N,
                "n_ker": ker.shape[0], "gamma": gamma}
        return SdpProblem([n] * N, [rows] * N, costs, rhs, meta)
    _, ker12 = subspace_bases(SEQ12, k, dI, dO)
    _, ker21 = subspace_bases(SEQ21, k, dI, dO)
    n2 = n * n
    c12, c21 = ker12.shape[0], ker21.shape[0]
    m = n2 + c12 + c21 + 1
    A_T = np.zeros((m, n2))
    A_T[:n2] = np.eye(n2)
    A_12 = np.zeros((m, n2))
    A_12[:n2] = -np.eye(n2)
    A_12[n2:n2 + c12] = ker12
    A_12[-1] = eye
    A_21 = np.zeros((m, n2))
    A_21[:n2] = -np.eye(n2)
    A_21[n2 + c12:n2 + c12 + c21] = ker21
    A_21[-1] = eye
    rhs = np.zeros(m)
    rhs[-1] = gamma
    zero = np.zeros((n, n), dtype=complex)
    meta = {"kind": "primal", "strategy": "sep", "k": k, "n": n, "N": N,
            "c12": c12, "c21": c21, "gamma": gamma}
    return SdpProblem([n] * (N + 2), [A_T] * N + [A_12, A_21], costs + [zero, zero], rhs, meta)


def build_dual(e: Ensemble, s: Strategy) -> SdpProblem:
    """Minimize ``lambda`` with ``p_i C_i^{(x)k} <= lambda * Wbar`` over the dual affine set.

    Written in the LMI form of the solver: ``y`` holds coordinates of the
    scaled dual element ``Wbar' = lambda * Wbar`` (for SEP: of ``H`` and the
    two ordered dual elements, which share their identity component).
    """
    _check(e, s)
    k, dI, dO = _dims(e)
    n = (dI * dO) ** k
    n2 = n * n
    dt = float(dual_trace(s, k, dI, dO))
    costs = _costs(e)
    N = e.n
    if s.tag != "SEP":
        rng, _ = subspace_bases(s, k, dI, dO, dual=True)
        F = np.array(rng)  # rows: orthonormal basis of the dual span
        tr = F @ svec(np.eye(n))
        meta = {"kind": "dual", "strategy": s.name, "k": k, "n": n, "N": N}
        return SdpProblem([n] * N, [F] * N, costs, tr / dt, meta)
    u, Q12 = dual_basis_with_identity(SEQ12, k, dI, dO)
    _, Q21 = dual_basis_with_identity(SEQ21, k, dI, dO)
    q12, q21 = Q12.shape[0], Q21.shape[0]
    m = n2 + 1 + q12 + q21
    F_T = np.zeros((m, n2))
    F_T[:n2] = np.eye(n2)
    F_12 = np.zeros((m, n2))
    F_12[:n2] = -np.eye(n2)
    F_12[n2] = u
    F_12[n2 + 1:n2 + 1 + q12] = Q12
    F_21 = np.zeros((m, n2))
    F_21[:n2] = -np.eye(n2)
    F_21[n2] = u
    F_21[n2 + 1 + q12:] = Q21
    rhs = np.zeros(m)
    rhs[n2] = np.sqrt(n) / dt
    zero = np.zeros((n, n), dtype=complex)
    meta = {"kind": "dual", "strategy": "sep", "k": k, "n": n, "N": N, "q12": q12, "q21": q21}
    return SdpProblem([n] * (N + 2), [F_T] * N + [F_12, F_21], costs + [zero, zero], rhs, meta)


# reading witnesses -------------------------------------------------------------

@dataclass
class DualWitness:
    """Normalized dual objects; ``H`` and the ordered pair are set for SEP only."""

    lam: float
    Wbar: Optional[np.ndarray] = None
    H: Optional[np.ndarray] = None
    Wbar12: Optional[np.ndarray] = None
    Wbar21: Optional[np.ndarray] = None


@dataclass
class Discrimination:
    strategy: Strategy
    value: float
    primal_value: float
    dual_value: float
    gap: float
    status: str
    testers: list
    dual: DualWitness
    ordered_parts: Optional[tuple] = None
    solution: Optional[SdpSolution] = field(default=None, repr=False)
    cross_check: Optional[float] = None


def _read(p: SdpProblem, sol: SdpSolution, s: Strategy, N: int) -> tuple:
    """Testers, normalized dual witness and SEP ordered parts.

    Both problem forms share the layout: tester blocks first, then (SEP)
    the two ordered blocks, and the dual slack of block ``b`` is
    ``smat(A_b^T y) - C_b``.
    """
    n = p.meta["n"]
    X = [(x + x.conj().T) / 2 for x in sol.X]
    y = sol.y
    lam = sol.dual_objective
    testers = X[:N]
    if s.tag != "SEP":
        Wp = smat(p.A[0].T @ y, n)
        return testers, DualWitness(lam, Wbar=Wp / lam), None
    H = smat(p.A[0].T @ y, n)
    W12 = smat(p.A[N].T @ y, n) + H
    W21 = smat(p.A[N + 1].T @ y, n) + H
    return testers, DualWitness(lam, H=H, Wbar12=W12 / lam, Wbar21=W21 / lam), (X[N], X[N + 1])


def discriminate(e: Ensemble, s: Strategy, tol: float = DEFAULT_TOL, cross_check: bool = False,
                 strict: bool = False) -> Discrimination:
    """Optimal success probability with tester and dual witnesses.

    One primal-dual solve of :func:`build_primal` yields both witness sets.
    With ``cross_check`` the :func:`build_dual` form is solved too and its
    optimum recorded.
    """
    p = build_primal(e, s)
    sol = solve(p, tol)
    if sol.status != OPTIMAL:
        msg = f"{s.name}: solver status {sol.status} (relative gap {sol.relative_gap:.2e})"
        if strict:
            raise SolverError(msg)
        # stalls just short of tol are routine on degenerate optima
        (log.debug if sol.relative_gap <= 100 * tol else log.warning)(msg)
    testers, dual, parts = _read(p, sol, s, e.n)
    value = (sol.primal_objective + sol.dual_objective) / 2
    out = Discrimination(s, value, sol.primal_objective, sol.dual_objective, sol.gap, sol.status,
                         testers, dual, parts, sol)
    if cross_check:
        out.cross_check = solve(build_dual(e, s), tol).dual_objective
    return out


def sep_distance(W: np.ndarray, dI: int = 2, dO: int = 2, tol: float = 1e-10):
    """``(t, parts)``: least white-noise weight making ``W`` separable, and the split.

    Solves ``min t`` s.t. ``W12 + W21 = (1 - t) W + t * 1 * d_O^2 / n`` with
    ``W12`` and ``W21`` PSD in the two sequential spans.  ``t`` is zero
    exactly for separable ``W``; the solver reaches it up to about ``1e-8``.
    ``W`` is first projected onto the general span, which is the sum of the
    two sequential spans, so rounding noise cannot make the problem infeasible.
    """
    n = (dI * dO) ** 2
    W = process_projector(GEN, 2).apply(hermitize(np.asarray(W, dtype=complex)), (dI, dO, dI, dO))
    n2 = n * n
    _, ker12 = subspace_bases(SEQ12, 2, dI, dO)
    _, ker21 = subspace_bases(SEQ21, 2, dI, dO)
    c12, c21 = ker12.shape[0], ker21.shape[0]
    white = np.eye(n) * dO ** 2 / n
    D = svec(white - W)
    m = n2 + c12 + c21
    A12 = np.zeros((m, n2))
    A12[:n2] = np.eye(n2)
    A12[n2:n2 + c12] = ker12
    A21 = np.zeros((m, n2))
    A21[:n2] = np.eye(n2)
    A21[n2 + c12:] = ker21
    At = np.zeros((m, 1))
    At[:n2, 0] = -D
    rhs = np.zeros(m)
    rhs[:n2] = svec(W)
    zero = np.zeros((n, n), dtype=complex)
    p = SdpProblem([n, n, 1], [A12, A21, At], [zero, zero, -np.eye(1, dtype=complex)], rhs)
    sol = solve(p, tol)
    if sol.primal_infeasibility > 1e-6:
        return np.inf, None
    return float(sol.X[2][0, 0].real), (sol.X[0], sol.X[1])


def sep_decomposition(W: np.ndarray, dI: int = 2, dO: int = 2, tol: float = 1e-6):
    """Split a two-slot process into PSD parts in the two sequential spans, or None.

    ``W`` counts as separable when :func:`sep_distance` is at most ``tol``.
    """
    t, parts = sep_distance(W, dI, dO)
    return parts if t <= tol else None
