import numpy as np
import pytest

from conftest import random_hermitian
from qdisc.exact_matrix import ExactMatrix
from qdisc.tensor_algebra import (
    LabeledMatrix,
    SpaceStructure,
    choi_from_kraus,
    kron,
    link_product,
    partial_trace,
    permute_systems,
    trace_and_replace,
    trace_replace_array,
)


def lm(labels_dims, data):
    return LabeledMatrix(SpaceStructure.of(*labels_dims), data)


def test_partial_trace_of_product(rng):
    A, B = random_hermitian(rng, 2), random_hermitian(rng, 3)
    AB = kron(lm([("A", 2)], A), lm([("B", 3)], B))
    assert np.allclose(partial_trace(AB, ["B"]).data, A * np.trace(B))
    assert np.allclose(partial_trace(AB, ["A"]).data, B * np.trace(A))


def test_trace_replace_is_idempotent_and_trace_preserving(rng):
    X = random_hermitian(rng, 12)
    for idxs in ([0], [1], [0, 2], [1, 2]):
        Y = trace_replace_array(X, (2, 3, 2), idxs)
        assert np.allclose(trace_replace_array(Y, (2, 3, 2), idxs), Y)
        assert np.isclose(np.trace(Y), np.trace(X))


def test_trace_replace_exact_matches_float(rng):
    X = random_hermitian(rng, 4, complex_=False)
    E = ExactMatrix.from_float(X)
    Y = trace_replace_array(E.re, (2, 2), [1])
    assert np.allclose(np.vectorize(float)(Y).astype(float), trace_replace_array(X, (2, 2), [1]))


def test_permute_round_trip(rng):
    X = lm([("A", 2), ("B", 3), ("C", 2)], random_hermitian(rng, 12))
    Y = permute_systems(permute_systems(X, ["C", "A", "B"]), ["A", "B", "C"])
    assert np.allclose(Y.data, X.data)


def test_identity_channel_choi():
    C = choi_from_kraus([np.eye(2)], 2, 2)
    omega = np.zeros(4)
    omega[[0, 3]] = 1
    assert np.allclose(C.data, np.outer(omega, omega))


def test_link_product_composes_channels():
    # X then X is the identity channel
    X = np.array([[0, 1], [1, 0]])
    CX1 = choi_from_kraus([X], 2, 2, labels=("A", "B"))
    CX2 = choi_from_kraus([X], 2, 2, labels=("B", "C"))
    comp = link_product(CX1, CX2)
    ident = choi_from_kraus([np.eye(2)], 2, 2, labels=("A", "C"))
    assert np.allclose(permute_systems(comp, ["A", "C"]).data, ident.data)


def test_trace_and_replace_labeled(rng):
    X = lm([("I", 2), ("O", 2)], random_hermitian(rng, 4))
    Y = trace_and_replace(X, ["O"])
    assert np.allclose(partial_trace(Y, ["O"]).data, partial_trace(X, ["O"]).data)


def test_kron_rejects_shared_labels(rng):
    A = lm([("A", 2)], random_hermitian(rng, 2))
    with pytest.raises(ValueError):
        kron(A, A)
