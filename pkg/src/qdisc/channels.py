"""Qubit channel families, random channels and discrimination ensembles."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from qdisc.exact_matrix import ExactMatrix, is_psd_exact
from qdisc.exact_scalar import QuadExt, parse_rational
from qdisc.tensor_algebra import (
    LabeledMatrix,
    SpaceStructure,
    choi_from_kraus,
    kron,
    partial_trace,
    trace_replace_array,
)

log = logging.getLogger(__name__)

Param = Union[float, Fraction, str]

BIT_FLIP_CONVENTIONS = ("flip", "keep")
# Selected by reproducing the certified hierarchy for (gamma, eta) = (67/100, 87/100).
DEFAULT_BIT_FLIP_CONVENTION = "keep"


class InvalidChannel(ValueError):
    """Channel parameters or Choi matrix fail validation."""


def _param(x: Param, exact: bool):
    if exact:
        if isinstance(x, float):
            raise InvalidChannel("exact channels need rational parameters (Fraction or decimal string)")
        return parse_rational(x)
    return float(Fraction(x)) if isinstance(x, str) else float(x)


def _check_unit_interval(name: str, x) -> None:
    if not 0 <= x <= 1:
        raise InvalidChannel(f"{name} must lie in [0, 1], got {x}")


def _sqrt(x, exact: bool):
    return QuadExt.sqrt(x) if exact else np.sqrt(x)


def amplitude_damping(gamma: Param, exact: bool = False) -> LabeledMatrix:
    """Choi of the qubit amplitude-damping channel with decay ``gamma``.

    Kraus operators ``|0><0| + sqrt(1-gamma)|1><1|`` and ``sqrt(gamma)|0><1|``.
    """
    g = _param(gamma, exact)
    _check_unit_interval("gamma", g)
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    k0 = [[one, zero], [zero, _sqrt(1 - g, exact)]]
    k1 = [[zero, _sqrt(g, exact)], [zero, zero]]
    if not exact:
        k0, k1 = np.array(k0), np.array(k1)
    return choi_from_kraus([k0, k1], 2, 2)


def bit_flip(eta: Param, exact: bool = False, convention: Optional[str] = None) -> LabeledMatrix:
    """Choi of the qubit bit-flip channel.

    ``convention="flip"``: ``rho -> (1-eta) rho + eta X rho X``;
    ``convention="keep"``: ``rho -> eta rho + (1-eta) X rho X``.
    """
    convention = convention or DEFAULT_BIT_FLIP_CONVENTION
    if convention not in BIT_FLIP_CONVENTIONS:
        raise InvalidChannel(f"unknown bit-flip convention {convention!r}")
    e = _param(eta, exact)
    _check_unit_interval("eta", e)
    p_flip = e if convention == "flip" else 1 - e
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    a, b = _sqrt(1 - p_flip, exact), _sqrt(p_flip, exact)
    k0 = [[a, zero], [zero, a]]
    k1 = [[zero, b], [b, zero]]
    if not exact:
        k0, k1 = np.array(k0), np.array(k1)
    del one
    return choi_from_kraus([k0, k1], 2, 2)


def random_channel(dI: int, dO: int, rng_seed=None, max_tries: int = 100_000) -> LabeledMatrix:
    """Sample a channel Choi by projecting a Hilbert-Schmidt random state.

    ``A = G G^dag / Tr(G G^dag)`` with complex Ginibre ``G``; then
    ``C = A - Tr_O(A) (x) 1/d_O + 1/d_O``, resampled until ``C`` is PSD.
    """
    if dI < 1 or dO < 2:
        raise InvalidChannel("random_channel needs dI >= 1 and dO >= 2")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    n = dI * dO
    dims = (dI, dO)
    for attempt in range(1, max_tries + 1):
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        A = G @ G.conj().T
        A /= np.trace(A).real
        C = A - trace_replace_array(A, dims, [1]) + np.eye(n) / dO
        C = (C + C.conj().T) / 2
        if np.linalg.eigvalsh(C).min() >= 0:
            log.debug("random_channel accepted after %d draw(s)", attempt)
            return LabeledMatrix(SpaceStructure.of(("I", dI), ("O", dO)), C)
    raise RuntimeError(f"no PSD projection after {max_tries} draws")


def acceptance_rate(dI: int, dO: int, draws: int, seed=None) -> float:
    """Empirical fraction of projected Hilbert-Schmidt samples that are PSD."""
    rng = np.random.default_rng(seed)
    n = dI * dO
    hits = 0
    for _ in range(draws):
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        A = G @ G.conj().T
        A /= np.trace(A).real
        C = A - trace_replace_array(A, (dI, dO), [1]) + np.eye(n) / dO
        hits += np.linalg.eigvalsh((C + C.conj().T) / 2).min() >= 0
    return hits / draws


def is_channel_choi(C: LabeledMatrix, tol: float = 1e-9) -> bool:
    """PSD and ``Tr_O C = 1_I`` (exactly for exact matrices)."""
    red = partial_trace(C, [C.labels[1]])
    dI = C.space.dims[0]
    if C.exact:
        return red.data == ExactMatrix.identity(dI) and is_psd_exact(C.data)
    ok_tp = np.allclose(red.data, np.eye(dI), atol=tol)
    herm = np.allclose(C.data, C.data.conj().T, atol=tol)
    return bool(ok_tp and herm and np.linalg.eigvalsh((C.data + C.data.conj().T) / 2).min() >= -tol)


# spec strings -------------------------------------------------------------------

def parse_channel_spec(spec: str, exact: bool = False) -> LabeledMatrix:
    """Build a channel from ``"ad:0.67"``, ``"bf:0.87"``, ``"bf:0.87:keep"`` or ``"random:seed=N"``."""
    parts = spec.strip().split(":")
    kind = parts[0].lower()
    if kind == "ad" and len(parts) == 2:
        return amplitude_damping(parts[1] if exact else float(Fraction(parts[1])), exact=exact)
    if kind == "bf" and len(parts) in (2, 3):
        conv = parts[2] if len(parts) == 3 else None
        return bit_flip(parts[1] if exact else float(Fraction(parts[1])), exact=exact, convention=conv)
    if kind == "random" and len(parts) == 2:
        opts = dict(kv.split("=", 1) for kv in parts[1].split(","))
        seed = int(opts.pop("seed"))
        dI, dO = int(opts.pop("dI", 2)), int(opts.pop("dO", 2))
        if opts:
            raise InvalidChannel(f"unknown random-channel options {sorted(opts)}")
        if exact:
            raise InvalidChannel("random channels have no exact flavor; rationalize with certify.exact_channel")
        return random_channel(dI, dO, seed)
    raise InvalidChannel(f"cannot parse channel spec {spec!r}")


def spec_is_exact_capable(spec: str) -> bool:
    return spec.split(":")[0].lower() in ("ad", "bf")


# ensembles --------------------------------------------------------------------------

@dataclass
class Ensemble:
    """Priors and channel Choi matrices on ``I (x) O``, used with ``k`` copies."""

    priors: list
    chois: list
    k: int = 2
    specs: Optional[list] = None
    _powers: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.priors)

    @property
    def dI(self) -> int:
        return self.chois[0].space.dims[0]

    @property
    def dO(self) -> int:
        return self.chois[0].space.dims[1]

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.chois) and all(isinstance(p, Fraction) for p in self.priors)

    def space(self) -> SpaceStructure:
        """``I1 O1 [I2 O2]`` for ``k`` copies."""
        pairs = []
        for j in range(1, self.k + 1):
            pairs += [(f"I{j}", self.dI), (f"O{j}", self.dO)]
        return SpaceStructure.of(*pairs)

    def power(self, i: int):
        """``C_i`` tensored ``k`` times on ``I1 O1 I2 O2`` (raw matrix)."""
        if i not in self._powers:
            C = self.chois[i]
            out = C.relabel({C.labels[0]: "I1", C.labels[1]: "O1"})
            for j in range(2, self.k + 1):
                out = kron(out, C.relabel({C.labels[0]: f"I{j}", C.labels[1]: f"O{j}"}))
            self._powers[i] = out.data
        return self._powers[i]

    def float_powers(self) -> list:
        out = []
        for i in range(self.n):
            P = self.power(i)
            out.append(P.to_float() if isinstance(P, ExactMatrix) else P)
        return out

    def float_priors(self) -> np.ndarray:
        return np.array([float(p) for p in self.priors])

    def to_float(self) -> "Ensemble":
        return Ensemble([float(p) for p in self.priors], [c.to_float() for c in self.chois],
                        self.k, self.specs)


def ensemble(pairs: Sequence, k: int = 2, specs: Optional[Sequence[str]] = None,
             tol: float = 1e-9) -> Ensemble:
    """Validate ``[(prior, choi), ...]`` and build an :class:`Ensemble`."""
    if k not in (1, 2):
        raise InvalidChannel("only k = 1 or k = 2 copies are supported")
    if not pairs:
        raise InvalidChannel("empty ensemble")
    priors = [p for p, _ in pairs]
    chois = [c for _, c in pairs]
    exact = all(isinstance(p, Fraction) for p in priors) and all(c.exact for c in chois)
    if exact:
        if sum(priors) != 1 or any(p < 0 for p in priors):
            raise InvalidChannel("priors must be non-negative and sum to 1")
    else:
        fp = np.array([float(p) for p in priors])
        if abs(fp.sum() - 1) > tol or (fp < -tol).any():
            raise InvalidChannel("priors must be non-negative and sum to 1")
    dims = chois[0].space.dims
    for c in chois:
        if len(c.space.dims) != 2 or c.space.dims != dims:
            raise InvalidChannel("all channels must act on the same I (x) O space")
        if not is_channel_choi(c, tol):
            raise InvalidChannel("Choi matrix is not a valid channel")
    return Ensemble(list(priors), list(chois), k, list(specs) if specs else None)


def ensemble_from_specs(specs: Sequence[str], priors: Sequence[Param], k: int = 2,
                        exact: bool = False) -> Ensemble:
    if len(specs) != len(priors):
        raise InvalidChannel("need one prior per channel")
    ps = [parse_rational(p) if exact else float(Fraction(str(p))) for p in priors]
    chois = [parse_channel_spec(s, exact=exact) for s in specs]
    return ensemble(list(zip(ps, chois)), k=k, specs=list(specs))


def preparation_channel(rho) -> LabeledMatrix:
    """Trivial-input channel that prepares ``rho`` (Choi = ``rho``, ``d_I = 1``)."""
    if isinstance(rho, ExactMatrix):
        d = rho.shape[0]
        return LabeledMatrix(SpaceStructure.of(("I", 1), ("O", d)), rho)
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    return LabeledMatrix(SpaceStructure.of(("I", 1), ("O", d)), rho)
