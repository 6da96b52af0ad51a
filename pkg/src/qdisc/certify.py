"""Exact certification of lower and upper bounds from float SDP witnesses.

Float witnesses are turned into exact matrices bit for bit, forced into their
linear subspace by an exact projector, made positive by mixing with the
identity and renormalized.  Every certificate carries a transcript of exact
checks; :func:`verify` rebuilds the expected check list from the certificate
metadata and replays each check on the stored witnesses.

The mixing map is ``D_eta(X) = eta * X + (1 - eta) * c * 1`` with ``c = 1``
unless stated otherwise.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from qdisc.channels import Ensemble, is_channel_choi
from qdisc.exact_matrix import ExactMatrix, binary_search_eta, hermitize, is_psd_exact
from qdisc.exact_scalar import (
    QuadExt,
    parse_rational,
    rational_floor_bound,
    rational_to_str,
    scalar_from_json,
    scalar_to_json,
    sign_of_sum,
)
from qdisc.sdp import Discrimination
from qdisc.strategies import (
    SEQ12,
    SEQ21,
    ProjectorMap,
    Strategy,
    dual_projector,
    dual_trace,
    process_projector,
    process_trace,
)
from qdisc.tensor_algebra import LabeledMatrix, SpaceStructure

log = logging.getLogger(__name__)

LOWER = "lower"
UPPER = "upper"

# depolarization of dual witnesses tried in order (0 means none)
UPPER_EPS_SCHEDULE = (Fraction(0), Fraction(1, 2 ** 30), Fraction(1, 2 ** 24), Fraction(1, 2 ** 18),
                      Fraction(1, 2 ** 12))
SLACK_START = Fraction(1, 10 ** 6)
SLACK_CAP = Fraction(1, 100)


class CertificationFailed(RuntimeError):
    """No exact certificate could be built from the given witness."""


# building blocks ---------------------------------------------------------------

def _dims(k: int, dI: int, dO: int) -> tuple:
    return (dI, dO) * k


def _to_exact(M, real: bool) -> ExactMatrix:
    if isinstance(M, ExactMatrix):
        return M
    M = np.asarray(M)
    return ExactMatrix.from_float(M.real if real else M)


def _add_identity(M: ExactMatrix, c) -> ExactMatrix:
    out = M.copy()
    for i in range(M.shape[0]):
        out.re[i, i] = out.re[i, i] + c
    return out


def mix(M: ExactMatrix, eta: Fraction, c=Fraction(1)) -> ExactMatrix:
    """``eta * M + (1 - eta) * c * 1``."""
    return _add_identity(M * Fraction(eta), (1 - Fraction(eta)) * c)


def rationalize_to_subspace(M, P: ProjectorMap, gamma, dims: Sequence[int],
                            real: bool = False) -> ExactMatrix:
    """Exact Hermitian matrix in the range of ``P`` with trace ``gamma``.

    Bit-exact conversion, hermitization, exact projection and trace
    renormalization; positivity is not enforced.  ``real`` drops imaginary
    parts.  A traceless projection is shifted by a multiple of the identity
    instead of rescaled.
    """
    gamma = Fraction(gamma)
    X = P.apply(hermitize(_to_exact(M, real)), dims)
    tr = X.trace_real()
    if tr == gamma:
        return X
    if tr > 0:
        return X * (gamma / tr)
    return _add_identity(X, (gamma - tr) / X.shape[0])


def _min_eig(M: ExactMatrix) -> float:
    A = M.to_float()
    return float(np.linalg.eigvalsh((A + A.conj().T) / 2).min())


def _dyadic_up(x: float, bits: int = 40) -> Fraction:
    return Fraction(math.ceil(x * 2 ** bits), 2 ** bits)


def common_eta(mats: Sequence[ExactMatrix], levels: Optional[Sequence] = None) -> Fraction:
    """Largest-ish ``eta`` with ``mix(M_j, eta, c_j)`` PSD for every ``j``, checked exactly.

    A float eigenvalue estimate proposes ``eta``; each proposal is confirmed
    exactly and the margin is quadrupled on failure.  Falls back to exact
    bisection.
    """
    levels = [Fraction(1)] * len(mats) if levels is None else [Fraction(c) for c in levels]

    def ok(eta):
        return all(is_psd_exact(mix(M, eta, c)) for M, c in zip(mats, levels))

    if ok(Fraction(1)):
        return Fraction(1)
    need = 0.0
    for M, c in zip(mats, levels):
        lam = _min_eig(M)
        if lam < 0 and c > 0:
            need = max(need, -lam / (float(c) - lam))
    eps = need * (1 + 2.0 ** -20) + 2.0 ** -45
    for _ in range(12):
        eta = 1 - _dyadic_up(min(eps, 1.0))
        if eta >= 0 and ok(eta):
            return eta
        eps *= 4
    targets = [ExactMatrix.identity(M.shape[0]) * c for M, c in zip(mats, levels)]
    return binary_search_eta(list(mats), targets)


def commutes(X: ExactMatrix, P: ProjectorMap, eta, dims) -> bool:
    """``D_eta(P(X)) == P(D_eta(P(X)))`` exactly."""
    D = mix(P.apply(X, dims), eta)
    return P.apply(D, dims) == D


def _powers(e: Ensemble) -> list:
    return [e.power(i) for i in range(e.n)]


def _lower_value(e: Ensemble, testers: Sequence[ExactMatrix]):
    """``(terms, bound)``: exact per-channel terms and the certified value.

    With more than one radical in play the bound is the sum of exact rational
    floors of the terms (each term has at most one radical).
    """
    terms = [p * C.inner(T) for p, C, T in zip(e.priors, _powers(e), testers)]
    radicals = {t.d for t in terms if isinstance(t, QuadExt) and t.b != 0}
    if len(radicals) <= 1:
        total = Fraction(0)
        for t in terms:
            total = t + total
        return terms, total
    return terms, sum((rational_floor_bound(t) for t in terms), Fraction(0))


def exact_channel(C: LabeledMatrix) -> LabeledMatrix:
    """Exact channel near a float Choi matrix on ``I (x) O``.

    Projects onto the trace-preserving affine span and mixes with the
    completely depolarizing channel until PSD.
    """
    dI, dO = C.space.dims
    P = ProjectorMap.build(("I", "O"), [(1, set()), (-1, {"O"}), (1, {"I", "O"})])
    X = rationalize_to_subspace(C.data, P, dI, (dI, dO))
    eta = common_eta([X], [Fraction(1, dO)])
    return LabeledMatrix(SpaceStructure.of(("I", dI), ("O", dO)), mix(X, eta, Fraction(1, dO)))


# certificates ------------------------------------------------------------------

def _radicand_meta(e: Ensemble):
    ds = sorted(set().union(*[C.radicands() for C in _powers(e)]))
    if not ds:
        return None
    return ds[0] if len(ds) == 1 else ds


@dataclass
class Certificate:
    """Exact bound with witnesses and the transcript of exact checks.

    Witness order: lower bounds list tester elements (then, for SEP, the two
    ordered parts); upper bounds list ``Wbar`` (or, for SEP, ``H``,
    ``Wbar12`` and ``Wbar21``).
    """

    strategy: Strategy
    direction: str
    bound: object
    witnesses: list
    eta: Fraction
    priors: list
    chois: list
    k: int
    dI: int
    dO: int
    ensemble_spec: Optional[list] = None
    transcript: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def ensemble(self) -> Ensemble:
        space = SpaceStructure.of(("I", self.dI), ("O", self.dO))
        return Ensemble(list(self.priors), [LabeledMatrix(space, C) for C in self.chois], self.k,
                        self.ensemble_spec)

    @property
    def float_bound(self) -> float:
        return float(self.bound)

    def to_dict(self) -> dict:
        e = self.ensemble()
        meta = {"strategy": self.strategy.name, "direction": self.direction,
                "ensemble_spec": self.ensemble_spec, "radicand_d": _radicand_meta(e),
                "k": self.k, "dI": self.dI, "dO": self.dO, "eta": rational_to_str(self.eta)}
        meta.update(self.extra)
        return {"meta": meta,
                "ensemble": {"priors": [rational_to_str(p) for p in self.priors],
                             "chois": [C.to_json() for C in self.chois]},
                "bound": scalar_to_json(self.bound),
                "witnesses": [W.to_json() for W in self.witnesses],
                "transcript": self.transcript}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        m = d["meta"]
        known = {"strategy", "direction", "ensemble_spec", "radicand_d", "k", "dI", "dO", "eta"}
        return cls(strategy=Strategy.from_name(m["strategy"]), direction=m["direction"],
                   bound=scalar_from_json(d["bound"]),
                   witnesses=[ExactMatrix.from_json(w) for w in d["witnesses"]],
                   eta=parse_rational(m["eta"]),
                   priors=[parse_rational(p) for p in d["ensemble"]["priors"]],
                   chois=[ExactMatrix.from_json(c) for c in d["ensemble"]["chois"]],
                   k=int(m["k"]), dI=int(m["dI"]), dO=int(m["dO"]),
                   ensemble_spec=m.get("ensemble_spec"), transcript=list(d["transcript"]),
                   extra={k: v for k, v in m.items() if k not in known})

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.from_dict(json.loads(text))


# check plans ---------------------------------------------------------------------
# A plan is the list of exact checks a certificate of a given shape must pass.

def _plan(s: Strategy, direction: str, N: int) -> list:
    chk = [{"check": "channels"}]
    if direction == LOWER:
        names = [f"T{i + 1}" for i in range(N)]
        if s.tag == "SEP":
            names += ["W12", "W21"]
        chk += [{"check": "hermitian", "of": w} for w in names]
        chk += [{"check": "psd", "of": w} for w in names]
        if s.tag == "SEP":
            chk += [{"check": "subspace", "of": "W12", "projector": "process:seq12"},
                    {"check": "subspace", "of": "W21", "projector": "process:seq21"},
                    {"check": "sum_equal", "lhs": names[:N], "rhs": ["W12", "W21"]},
                    {"check": "trace", "of": "W12+W21", "value": "gamma"},
                    {"check": "commutation", "of": "W12", "projector": "process:seq12"},
                    {"check": "commutation", "of": "W21", "projector": "process:seq21"}]
        else:
            p = f"process:{s.name}"
            chk += [{"check": "subspace", "of": "sum T", "projector": p},
                    {"check": "trace", "of": "sum T", "value": "gamma"},
                    {"check": "commutation", "of": "sum T", "projector": p}]
        chk.append({"check": "bound_le_value"})
        return chk
    if s.tag == "SEP":
        chk += [{"check": "hermitian", "of": w} for w in ("H", "Wbar12", "Wbar21")]
        chk += [{"check": "subspace", "of": "Wbar12", "projector": "dual:seq12"},
                {"check": "subspace", "of": "Wbar21", "projector": "dual:seq21"},
                {"check": "trace", "of": "Wbar12", "value": "dual_gamma"},
                {"check": "trace", "of": "Wbar21", "value": "dual_gamma"},
                {"check": "commutation", "of": "Wbar12", "projector": "dual:seq12"},
                {"check": "commutation", "of": "Wbar21", "projector": "dual:seq21"}]
        chk += [{"check": "psd", "of": f"H - p{i + 1} C{i + 1}^k"} for i in range(N)]
        chk += [{"check": "psd", "of": "bound Wbar12 - H"}, {"check": "psd", "of": "bound Wbar21 - H"}]
        return chk
    p = f"dual:{s.name}"
    chk += [{"check": "hermitian", "of": "Wbar"},
            {"check": "subspace", "of": "Wbar", "projector": p},
            {"check": "trace", "of": "Wbar", "value": "dual_gamma"},
            {"check": "commutation", "of": "Wbar", "projector": p}]
    chk += [{"check": "psd", "of": f"bound Wbar - p{i + 1} C{i + 1}^k"} for i in range(N)]
    return chk


def _projector(name: str, k: int) -> ProjectorMap:
    kind, sname = name.split(":")
    s = Strategy.from_name(sname)
    return process_projector(s, k) if kind == "process" else dual_projector(s, k)


def _sum(ms):
    out = ms[0]
    for m in ms[1:]:
        out = out + m
    return out


class _Replay:
    """Evaluates plan entries against a certificate's exact objects."""

    def __init__(self, c: Certificate):
        self.c = c
        self.e = c.ensemble()
        self.dims = _dims(c.k, c.dI, c.dO)
        self.N = len(c.priors)
        if c.direction == LOWER:
            names = [f"T{i + 1}" for i in range(self.N)]
            if c.strategy.tag == "SEP":
                names += ["W12", "W21"]
        else:
            names = ["H", "Wbar12", "Wbar21"] if c.strategy.tag == "SEP" else ["Wbar"]
        if len(names) != len(c.witnesses):
            raise ValueError(f"expected {len(names)} witnesses, found {len(c.witnesses)}")
        self.w = dict(zip(names, c.witnesses))
        self.w["sum T"] = _sum(c.witnesses[:self.N]) if c.direction == LOWER else None
        if c.direction == LOWER and c.strategy.tag == "SEP":
            self.w["W12+W21"] = self.w["W12"] + self.w["W21"]

    def _obj(self, name: str) -> ExactMatrix:
        if name in self.w:
            return self.w[name]
        c, N = self.c, self.N
        powers = _powers(self.e)
        for i in range(N):
            pc = powers[i] * c.priors[i]
            if name == f"H - p{i + 1} C{i + 1}^k":
                return self.w["H"] - pc
            if name == f"bound Wbar - p{i + 1} C{i + 1}^k":
                return self.w["Wbar"] * c.bound - pc
        if name in ("bound Wbar12 - H", "bound Wbar21 - H"):
            return self.w[name.split()[1]] * c.bound - self.w["H"]
        raise KeyError(name)

    def run(self, entry: dict) -> bool:
        c = self.c
        kind = entry["check"]
        if kind == "channels":
            space = SpaceStructure.of(("I", c.dI), ("O", c.dO))
            return (sum(c.priors) == 1 and all(p >= 0 for p in c.priors)
                    and all(is_channel_choi(LabeledMatrix(space, C)) for C in c.chois))
        if kind == "hermitian":
            return self._obj(entry["of"]).is_hermitian()
        if kind == "psd":
            M = self._obj(entry["of"])
            return M.is_hermitian() and is_psd_exact(M)
        if kind == "subspace":
            P = _projector(entry["projector"], c.k)
            M = self._obj(entry["of"])
            return P.apply(M, self.dims) == M
        if kind == "trace":
            s = c.strategy
            if entry["value"] == "gamma":
                target = process_trace(s if s.tag != "SEP" else SEQ12, c.k, c.dI, c.dO)
            else:
                target = dual_trace(s if s.tag != "SEP" else SEQ12, c.k, c.dI, c.dO)
            M = self._obj(entry["of"])
            return M.trace_real() == target and all(v == 0 for v in np.diagonal(M.im))
        if kind == "commutation":
            return commutes(self._obj(entry["of"]), _projector(entry["projector"], c.k), c.eta, self.dims)
        if kind == "sum_equal":
            return _sum([self._obj(x) for x in entry["lhs"]]) == _sum([self._obj(x) for x in entry["rhs"]])
        if kind == "bound_le_value":
            terms, _ = _lower_value(self.e, c.witnesses[:self.N])
            return sign_of_sum(list(terms) + [-c.bound]) >= 0
        raise ValueError(f"unknown check {kind!r}")


def _finish(c: Certificate) -> Certificate:
    """Run the plan; store the transcript or raise."""
    r = _Replay(c)
    out = []
    for entry in _plan(c.strategy, c.direction, len(c.priors)):
        ok = r.run(entry)
        out.append(dict(entry, result=bool(ok)))
        if not ok:
            raise CertificationFailed(f"{c.strategy.name} {c.direction}: check failed: {entry}")
    c.transcript = out
    return c


def verify(c) -> bool:
    """Replay every exact check of a certificate (object, dict or JSON text)."""
    if isinstance(c, str):
        c = Certificate.from_json(c)
    elif isinstance(c, dict):
        c = Certificate.from_dict(c)
    try:
        plan = _plan(c.strategy, c.direction, len(c.priors))
        stripped = [{k: v for k, v in t.items() if k != "result"} for t in c.transcript]
        if stripped != plan:
            log.info("transcript does not match the check plan")
            return False
        r = _Replay(c)
        return all(t.get("result") is True and r.run(p) for t, p in zip(c.transcript, plan))
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        log.info("verification error: %s", exc)
        return False


# certification procedures ----------------------------------------------------------

def _context(e: Ensemble):
    if not e.exact:
        raise ValueError("certification needs an exact ensemble")
    real = all(C.is_real() for C in _powers(e))
    return _dims(e.k, e.dI, e.dO), real


def _new(e: Ensemble, s: Strategy, direction: str, bound, witnesses, eta) -> Certificate:
    return Certificate(s, direction, bound, witnesses, Fraction(eta), list(e.priors),
                       [C.data for C in e.chois], e.k, e.dI, e.dO, e.specs)


def certify_lower(testers: Sequence, e: Ensemble, s: Strategy) -> Certificate:
    """Exact valid tester near ``testers`` and the success probability it achieves.

    Adds the extra outcome ``T0 = P(W) - W`` for ``W = sum_i T_i``, mixes all
    elements with the identity using one common ``eta``, spreads ``T0`` evenly
    and renormalizes to the process trace.
    """
    if s.tag == "SEP":
        raise ValueError("use certify_sep_lower for SEP")
    dims, real = _context(e)
    N = e.n
    P = process_projector(s, e.k)
    gamma = process_trace(s, e.k, e.dI, e.dO)
    T = [hermitize(_to_exact(t, real)) for t in testers]
    W = _sum(T)
    PW = P.apply(W, dims)
    T0 = PW - W
    eta = common_eta(T + [T0])
    D = [mix(t, eta) for t in T]
    D0 = mix(T0, eta)
    W_eta = _sum(D) + D0
    if P.apply(W_eta, dims) != W_eta:
        raise CertificationFailed("mixed operator left the process subspace")
    scale = gamma / W_eta.trace_real()
    T_ok = [(d + D0 / N) * scale for d in D]
    _, bound = _lower_value(e, T_ok)
    return _finish(_new(e, s, LOWER, bound, T_ok, eta))


def certify_sep_lower(testers: Sequence, parts: Sequence, e: Ensemble) -> Certificate:
    """Exact separable tester near the float witness, with its two ordered parts.

    Each ordered part is projected into its sequential span keeping its
    trace; the sum defect goes into the last tester element; then every
    object is mixed toward white noise with one common ``eta``.
    """
    s = Strategy("SEP")
    dims, real = _context(e)
    N = e.n
    gamma = process_trace(SEQ12, e.k, e.dI, e.dO)
    n = (e.dI * e.dO) ** e.k
    m12 = float(np.trace(np.asarray(parts[0])).real)
    q = min(max(Fraction(round(m12 * 2 ** 30), 2 ** 30), Fraction(0)), gamma)
    W = []
    for part, proj, mass in ((parts[0], SEQ12, q), (parts[1], SEQ21, gamma - q)):
        if mass == 0:
            W.append(ExactMatrix.zeros(n))
        else:
            W.append(rationalize_to_subspace(part, process_projector(proj, e.k), mass, dims, real))
    T = [hermitize(_to_exact(t, real)) for t in testers]
    T[-1] = T[-1] + (W[0] + W[1] - _sum(T))
    white = gamma / n
    levels = [white / N] * N + [q / gamma * white, (gamma - q) / gamma * white]
    objs = T + W
    eta = common_eta(objs, levels)
    mixed = [mix(M, eta, c) for M, c in zip(objs, levels)]
    _, bound = _lower_value(e, mixed[:N])
    c = _new(e, s, LOWER, bound, mixed, eta)
    c.extra["order_mass"] = rational_to_str(q)
    return _finish(c)


def _slacks(start: Fraction):
    yield start
    slack = SLACK_START
    while slack <= SLACK_CAP:
        yield start + slack
        slack *= 2


def _renormalized_mix(Wbar: ExactMatrix, eps: Fraction, gamma) -> ExactMatrix:
    if eps == 0:
        return Wbar
    D = mix(Wbar, 1 - eps)
    return D * (gamma / D.trace_real())


def certify_upper(Wbar, lam: float, e: Ensemble, s: Strategy) -> Certificate:
    """Exact dual element and a rational ``p`` with ``p_i C_i^k <= p * Wbar`` for all ``i``."""
    if s.tag == "SEP":
        raise ValueError("use certify_sep_upper for SEP")
    dims, real = _context(e)
    Pd = dual_projector(s, e.k)
    gd = dual_trace(s, e.k, e.dI, e.dO)
    base = rationalize_to_subspace(Wbar, Pd, gd, dims, real)
    pc = [p * C for p, C in zip(e.priors, _powers(e))]
    start = Fraction(math.ceil(lam * 10 ** 6), 10 ** 6)
    for eps in UPPER_EPS_SCHEDULE:
        Wb = _renormalized_mix(base, eps, gd)
        for p in _slacks(start):
            if all(is_psd_exact(Wb * p - M) for M in pc):
                return _finish(_new(e, s, UPPER, p, [Wb], 1 - eps))
    raise CertificationFailed(f"{s.name}: no upper bound within slack {SLACK_CAP}")


def certify_sep_upper(H, Wbar12, Wbar21, lam: float, e: Ensemble) -> Certificate:
    """Exact ``(H, Wbar12, Wbar21)`` and rational ``lam`` satisfying the separable dual.

    ``p_i C_i^k <= H`` for all ``i`` and ``H <= lam * Wbar`` for both orders.
    ``H`` is inflated by a small multiple of the identity when needed.
    """
    s = Strategy("SEP")
    dims, real = _context(e)
    gd = dual_trace(SEQ12, e.k, e.dI, e.dO)
    bases = [rationalize_to_subspace(Wb, dual_projector(o, e.k), gd, dims, real)
             for Wb, o in ((Wbar12, SEQ12), (Wbar21, SEQ21))]
    H0 = hermitize(_to_exact(H, real))
    pc = [p * C for p, C in zip(e.priors, _powers(e))]
    need = max(0.0, -min(_min_eig(H0 - M) for M in pc))
    delta = Fraction(0) if need == 0 else _dyadic_up(2 * need + 2.0 ** -45)
    for _ in range(12):
        Hd = _add_identity(H0, delta)
        if all(is_psd_exact(Hd - M) for M in pc):
            break
        delta = max(4 * delta, Fraction(1, 2 ** 45))
    else:
        raise CertificationFailed("sep: could not make H dominate the channels")
    start = Fraction(math.ceil(lam * 10 ** 6), 10 ** 6)
    for eps in UPPER_EPS_SCHEDULE:
        W12, W21 = (_renormalized_mix(b, eps, gd) for b in bases)
        for p in _slacks(start):
            if is_psd_exact(W12 * p - Hd) and is_psd_exact(W21 * p - Hd):
                c = _new(e, s, UPPER, p, [Hd, W12, W21], 1 - eps)
                c.extra["h_shift"] = rational_to_str(delta)
                return _finish(c)
    raise CertificationFailed(f"sep: no upper bound within slack {SLACK_CAP}")


# whole pipeline -----------------------------------------------------------------------

def certify(d: Discrimination, e: Ensemble) -> tuple[Certificate, Certificate]:
    """Lower and upper certificates from one :func:`qdisc.sdp.discriminate` result."""
    s = d.strategy
    if s.tag == "SEP":
        lo = certify_sep_lower(d.testers, d.ordered_parts, e)
        up = certify_sep_upper(d.dual.H, d.dual.Wbar12, d.dual.Wbar21, d.dual.lam, e)
    else:
        lo = certify_lower(d.testers, e, s)
        up = certify_upper(d.dual.Wbar, d.dual.lam, e, s)
    return lo, up


def less_than(a, b) -> bool:
    """Exact ``a < b`` for rationals and quadratic elements (two radicals allowed)."""
    return sign_of_sum([b, -a]) > 0


def strict_hierarchy(bounds: dict, order: Sequence[Strategy]) -> list:
    """``[(weaker, stronger, holds), ...]``; holds iff upper(weaker) < lower(stronger).

    ``bounds`` maps a strategy to its ``(lower, upper)`` certificates.
    """
    out = []
    for a, b in zip(order, order[1:]):
        out.append((a, b, less_than(bounds[a][1].bound, bounds[b][0].bound)))
    return out


__all__ = ["CertificationFailed", "Certificate", "LOWER", "UPPER", "certify", "certify_lower",
           "certify_sep_lower", "certify_sep_upper", "certify_upper", "common_eta", "commutes",
           "exact_channel", "less_than", "mix", "rationalize_to_subspace", "strict_hierarchy",
           "verify"]
