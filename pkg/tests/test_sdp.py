import numpy as np
import pytest

from qdisc.channels import bit_flip, ensemble, ensemble_from_specs, preparation_channel
from qdisc.sdp import build_dual, discriminate, sep_decomposition
from qdisc.solver import solve
from qdisc.strategies import ALL_STRATEGIES, GEN, HIERARCHY, PAR, SEP, SEQ12, SEQ21, Unsupported, is_valid_process, is_valid_tester


@pytest.fixture(scope="module")
def thm1():
    e = ensemble_from_specs(["ad:0.67", "bf:0.87"], ["1/2", "1/2"])
    return e, {s: discriminate(e, s, cross_check=(s == GEN)) for s in ALL_STRATEGIES}


def rand_state(rng):
    G = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    r = G @ G.conj().T
    return r / np.trace(r).real


def test_helstrom(rng):
    for _ in range(5):
        r1, r2 = rand_state(rng), rand_state(rng)
        p = rng.uniform(0.2, 0.8)
        e = ensemble([(p, preparation_channel(r1)), (1 - p, preparation_channel(r2))], k=1)
        ref = (1 + np.abs(np.linalg.eigvalsh(p * r1 - (1 - p) * r2)).sum()) / 2
        assert discriminate(e, PAR).value == pytest.approx(ref, abs=1e-8)
    with pytest.raises(Unsupported):
        discriminate(e, GEN)


def test_identical_channels_are_a_coin_toss():
    e = ensemble_from_specs(["ad:0.4", "ad:0.4"], ["1/2", "1/2"])
    for s in HIERARCHY:
        assert discriminate(e, s).value == pytest.approx(0.5, abs=1e-8)


def test_perfectly_distinguishable():
    # identity against the X unitary
    e = ensemble([(0.5, bit_flip(1.0)), (0.5, bit_flip(0.0))])
    assert discriminate(e, PAR).value == pytest.approx(1, abs=1e-8)


def test_values_and_ordering(thm1):
    _, r = thm1
    vals = [r[s].value for s in HIERARCHY]
    assert vals == sorted(vals)
    assert r[SEQ12].value == pytest.approx(r[SEQ21].value, abs=1e-8)
    for s, (lo, hi) in {PAR: (0.8346, 0.8347), SEQ12: (0.8446, 0.8447),
                        SEP: (0.8486, 0.8487), GEN: (0.8514, 0.8515)}.items():
        assert lo < r[s].value < hi
        assert r[s].gap <= 1e-9


def test_testers_are_valid(thm1):
    _, r = thm1
    for s in (PAR, SEQ12, SEQ21, GEN):
        assert is_valid_tester(r[s].testers, s, tol=1e-7)
    W12, W21 = r[SEP].ordered_parts
    assert np.allclose(sum(r[SEP].testers), W12 + W21, atol=1e-8)
    assert np.trace(W12 + W21).real == pytest.approx(4)


def test_dual_witness(thm1):
    e, r = thm1
    d = r[GEN]
    assert np.trace(d.dual.Wbar).real == pytest.approx(4)
    for p, C in zip(e.float_priors(), e.float_powers()):
        assert np.linalg.eigvalsh(d.dual.lam * d.dual.Wbar - p * C).min() > -1e-7
    assert d.cross_check == pytest.approx(d.value, abs=1e-8)
    h = r[SEP].dual
    for W in (h.Wbar12, h.Wbar21):
        assert np.linalg.eigvalsh(h.lam * W - h.H).min() > -1e-7


def test_dual_form_matches_primal(thm1):
    e, r = thm1
    sol = solve(build_dual(e, SEP))
    assert sol.dual_objective == pytest.approx(r[SEP].value, abs=1e-8)


def test_sep_decomposition(thm1):
    _, r = thm1
    W_gen = sum(r[GEN].testers)
    # the general optimum beats every separable tester, so its process is not separable
    assert is_valid_process(W_gen, GEN, tol=1e-7)
    assert sep_decomposition(W_gen) is None
    W_sep = sum(r[SEP].testers)
    parts = sep_decomposition(W_sep, tol=1e-6)
    assert parts is not None
    assert np.allclose(parts[0] + parts[1], W_sep, atol=1e-6)
