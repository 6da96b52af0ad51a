import copy
import json
from fractions import Fraction

import numpy as np
import pytest

from qdisc.certify import (
    LOWER,
    UPPER,
    Certificate,
    CertificationFailed,
    certify,
    certify_lower,
    certify_upper,
    common_eta,
    commutes,
    exact_channel,
    less_than,
    mix,
    rationalize_to_subspace,
    strict_hierarchy,
    verify,
)
from qdisc.channels import ensemble, ensemble_from_specs, is_channel_choi, preparation_channel, random_channel
from qdisc.exact_matrix import ExactMatrix, is_psd_exact
from qdisc.exact_scalar import QuadExt
from qdisc.sdp import discriminate
from qdisc.strategies import GEN, HIERARCHY, PAR, SEP, SEQ12, dual_projector, process_projector

DIMS = (2, 2, 2, 2)


@pytest.fixture(scope="module")
def thm1():
    e = ensemble_from_specs(["ad:0.67", "bf:0.87"], ["1/2", "1/2"], exact=True)
    ef = e.to_float()
    out = {}
    for s in HIERARCHY:
        out[s] = certify(discriminate(ef, s), e)
    return e, out


def test_rationalize_fixed_points():
    W = ExactMatrix.identity(16) * Fraction(1, 4)
    for s in (PAR, SEQ12, GEN):
        assert rationalize_to_subspace(W, process_projector(s), 4, DIMS) == W


def test_rationalize_random(rng):
    A = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    P = dual_projector(SEQ12)
    X = rationalize_to_subspace(A, P, 4, DIMS)
    assert X.is_hermitian()
    assert P.apply(X, DIMS) == X
    assert X.trace_real() == 4
    assert rationalize_to_subspace(A, P, 4, DIMS, real=True).is_real()


def test_mix_and_common_eta():
    M = ExactMatrix([[-1, 0], [0, 1]])
    eta = common_eta([M])
    assert is_psd_exact(mix(M, eta))
    assert 0 < eta < 1
    assert Fraction(1, 2) - eta < Fraction(1, 10 ** 6)
    assert common_eta([ExactMatrix.identity(3)]) == 1


def test_commutation_identity():
    X = ExactMatrix.identity(16) * Fraction(1, 3)
    X.re[0, 5] = X.re[5, 0] = Fraction(2, 7)
    for s in (PAR, SEQ12, GEN):
        for P in (process_projector(s), dual_projector(s)):
            assert commutes(X, P, Fraction(3, 5), DIMS)


def test_theorem_one_bounds(thm1):
    _, out = thm1
    brackets = {PAR: (8346, 8347), SEQ12: (8446, 8447), SEP: (8486, 8487), GEN: (8514, 8515)}
    for s, (a, b) in brackets.items():
        lo, up = out[s]
        assert lo.direction == LOWER and up.direction == UPPER
        assert less_than(Fraction(a, 10 ** 4), lo.bound)
        assert less_than(lo.bound, up.bound)
        assert less_than(up.bound, Fraction(b, 10 ** 4))
        assert isinstance(lo.bound, QuadExt) and lo.bound.d == 33
    assert all(ok for _, _, ok in strict_hierarchy(out, HIERARCHY))


def test_transcripts_complete(thm1):
    _, out = thm1
    for lo, up in out.values():
        for c in (lo, up):
            assert c.transcript and all(t["result"] is True for t in c.transcript)
            kinds = {t["check"] for t in c.transcript}
            assert {"channels", "subspace", "trace", "commutation"} <= kinds


def test_json_round_trip(thm1):
    _, out = thm1
    for lo, up in out.values():
        for c in (lo, up):
            text = c.to_json()
            assert verify(text)
            back = Certificate.from_json(text)
            assert back.bound == c.bound and back.to_json() == text


def test_mutated_witness_fails(thm1):
    _, out = thm1
    lo, up = out[PAR]
    d = json.loads(up.to_json())
    e0 = d["witnesses"][0]["entries"][1]
    e0["re"] = str(Fraction(e0["re"]) + Fraction(1, 10 ** 30)).replace(" ", "")
    if "/" not in e0["re"]:
        e0["re"] += "/1"
    assert not verify(d)
    # a diagonal perturbation keeps Hermiticity but breaks the trace condition
    d = json.loads(up.to_json())
    e = d["witnesses"][0]["entries"][0]
    e["re"] = str(Fraction(e["re"]) + Fraction(1, 10 ** 30))
    assert not verify(d)


def test_tampered_transcript_or_bound_fails(thm1):
    _, out = thm1
    lo, up = out[GEN]
    d = json.loads(lo.to_json())
    d["transcript"] = d["transcript"][:-1]
    assert not verify(d)
    d = json.loads(up.to_json())
    d["bound"] = "1/2"
    assert not verify(d)
    d = json.loads(lo.to_json())
    d["bound"] = "9/10"
    assert not verify(d)


def test_bounds_bracket_float_values(thm1):
    e, out = thm1
    ef = e.to_float()
    for s, (lo, up) in out.items():
        d = discriminate(ef, s)
        assert float(lo.bound) <= d.primal_value + 1e-6
        assert float(up.bound) >= d.dual_value - 1e-6


def test_identical_channels():
    e = ensemble_from_specs(["ad:0.3", "ad:0.3"], ["1/2", "1/2"], exact=True)
    white = [ExactMatrix.identity(16) * Fraction(1, 8)] * 2
    lo = certify_lower(white, e, PAR)
    assert lo.bound == Fraction(1, 2) and lo.eta == 1
    d = discriminate(e.to_float(), GEN)
    up = certify_upper(d.dual.Wbar, d.dual.lam, e, GEN)
    assert Fraction(1, 2) <= up.bound < Fraction(1, 2) + Fraction(1, 10 ** 5)
    assert verify(up)
    certs = {s: certify(discriminate(e.to_float(), s), e) for s in (PAR, GEN)}
    assert not strict_hierarchy(certs, (PAR, GEN))[0][2]


def test_helstrom_certified():
    rho1 = ExactMatrix([[Fraction(3, 4), Fraction(1, 4)], [Fraction(1, 4), Fraction(1, 4)]])
    rho2 = ExactMatrix([[Fraction(1, 5), 0], [0, Fraction(4, 5)]])
    e = ensemble([(Fraction(1, 3), preparation_channel(rho1)), (Fraction(2, 3), preparation_channel(rho2))], k=1)
    d = discriminate(e.to_float(), PAR)
    lo, up = certify(d, e)
    r1, r2 = rho1.to_float(), rho2.to_float()
    ref = (1 + np.abs(np.linalg.eigvalsh(r1 / 3 - 2 * r2 / 3)).sum()) / 2
    assert float(lo.bound) <= ref <= float(up.bound)
    assert float(up.bound) - float(lo.bound) < 2e-6
    assert verify(lo.to_json()) and verify(up.to_json())


def test_exact_channel_from_random():
    C = random_channel(2, 2, 5)
    X = exact_channel(C)
    assert X.exact and is_channel_choi(X)
    assert np.abs(X.data.to_float() - C.data).max() < 1e-12


def test_float_ensemble_rejected():
    e = ensemble_from_specs(["ad:0.3", "ad:0.4"], [0.5, 0.5])
    d = discriminate(e, PAR)
    with pytest.raises(ValueError):
        certify(d, e)


def test_garbage_witness_fails():
    e = ensemble_from_specs(["ad:0.3", "ad:0.9"], ["1/2", "1/2"], exact=True)
    Wbar = np.eye(16) / 4  # white dual element needs p = 1/2 * lambda_max(...) * 4, far above lambda
    with pytest.raises(CertificationFailed):
        certify_upper(Wbar, 0.5, e, PAR)
