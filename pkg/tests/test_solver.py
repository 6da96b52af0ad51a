import numpy as np
import pytest

from conftest import random_hermitian
from qdisc.hermitian import hermitian_basis, smat, svec
from qdisc.solver import OPTIMAL, SdpProblem, solve


def test_svec_round_trip(rng):
    A = random_hermitian(rng, 5)
    assert np.allclose(smat(svec(A), 5), A)
    B = random_hermitian(rng, 5)
    assert np.isclose(svec(A) @ svec(B), np.trace(A @ B).real)
    H = hermitian_basis(3)
    G = np.einsum("aij,bji->ab", H, H).real
    assert np.allclose(G, np.eye(9))


def test_linear_program_as_scalar_blocks():
    # max x1 + 2 x2  s.t.  x1 + x2 = 1,  x >= 0
    A = [np.array([[1.0]]), np.array([[1.0]])]
    C = [np.eye(1, dtype=complex), 2 * np.eye(1, dtype=complex)]
    sol = solve(SdpProblem([1, 1], A, C, [1.0]))
    assert sol.status == OPTIMAL
    assert sol.primal_objective == pytest.approx(2, abs=1e-8)


@pytest.mark.parametrize("n", [2, 4, 7])
def test_largest_eigenvalue(rng, n):
    # max Tr(C X) s.t. Tr X = 1  ->  lambda_max(C)
    C = random_hermitian(rng, n)
    sol = solve(SdpProblem([n], [svec(np.eye(n))[None, :]], [C], [1.0]))
    lam = np.linalg.eigvalsh(C).max()
    assert sol.status == OPTIMAL
    assert abs(sol.primal_objective - lam) < 1e-8 and abs(sol.dual_objective - lam) < 1e-8
    assert sol.gap <= 1e-9


def test_dual_slack_is_psd(rng):
    C = random_hermitian(rng, 4)
    sol = solve(SdpProblem([4], [svec(np.eye(4))[None, :]], [C], [1.0]))
    Z = sol.Z[0]
    assert np.linalg.eigvalsh(Z).min() > -1e-9
    assert np.allclose(Z, sol.y[0] * np.eye(4) - C, atol=1e-8)


def test_shape_validation():
    with pytest.raises(ValueError):
        SdpProblem([2], [np.zeros((1, 3))], [np.eye(2)], [1.0])
    with pytest.raises(ValueError):
        SdpProblem([2], [np.zeros((1, 4))], [np.array([[0, 1], [0, 0]])], [1.0])
