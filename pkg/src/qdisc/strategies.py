"""Strategy classes as projectors onto process and dual affine subspaces.

Two-copy spaces are ordered ``I1 O1 I2 O2``; one-copy spaces ``I1 O1``.
A projector is a rational combination of trace-and-replace maps
``_X A = Tr_X(A) (x) 1_X / d_X``.  The dual projector is ``I - P + _{all}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from qdisc.exact_matrix import ExactMatrix, is_psd_exact
from qdisc.hermitian import range_and_complement, superoperator
from qdisc.tensor_algebra import LabeledMatrix, permute_systems, trace_replace_array


class NotAffine(ValueError):
    """The separable strategy set is convex but not affine; it has no projector."""


class Unsupported(NotImplementedError):
    """Requested operation is outside the supported scope."""


_TAGS = ("PAR", "SEQ", "SEP", "GEN")
_NAMES = {"par": ("PAR", None), "seq12": ("SEQ", "12"), "seq21": ("SEQ", "21"),
          "sep": ("SEP", None), "gen": ("GEN", None)}


@dataclass(frozen=True)
class Strategy:
    """Strategy class; ``order`` is ``"12"`` (slot 1 first) or ``"21"`` for SEQ."""

    tag: str
    order: Optional[str] = None

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown strategy tag {self.tag!r}")
        if (self.tag == "SEQ") != (self.order in ("12", "21")):
            raise ValueError("SEQ needs order '12' or '21'; other strategies take none")

    @classmethod
    def from_name(cls, name: str) -> "Strategy":
        try:
            return cls(*_NAMES[name.strip().lower()])
        except KeyError:
            raise ValueError(f"unknown strategy {name!r}; expected one of {sorted(_NAMES)}") from None

    @property
    def name(self) -> str:
        return self.tag.lower() + (self.order or "")

    def __str__(self):
        return self.name


PAR = Strategy("PAR")
SEQ12 = Strategy("SEQ", "12")
SEQ21 = Strategy("SEQ", "21")
SEP = Strategy("SEP")
GEN = Strategy("GEN")
ALL_STRATEGIES = (PAR, SEQ12, SEQ21, SEP, GEN)
HIERARCHY = (PAR, SEQ12, SEP, GEN)


def labels_for(k: int) -> tuple[str, ...]:
    if k == 1:
        return ("I1", "O1")
    if k == 2:
        return ("I1", "O1", "I2", "O2")
    raise Unsupported("only one or two slots are supported")


Term = tuple[Fraction, frozenset]


@dataclass(frozen=True)
class ProjectorMap:
    """``sum_t c_t * _{X_t}`` over the ordered label tuple ``labels``.

    An empty label set stands for the identity map.
    """

    labels: tuple[str, ...]
    terms: tuple[Term, ...]

    @classmethod
    def build(cls, labels, terms) -> "ProjectorMap":
        merged: dict = {}
        for c, xs in terms:
            key = frozenset(xs)
            unknown = key - set(labels)
            if unknown:
                raise ValueError(f"unknown labels {sorted(unknown)}")
            merged[key] = merged.get(key, Fraction(0)) + Fraction(c)
        items = sorted(((c, k) for k, c in merged.items() if c != 0),
                       key=lambda t: (len(t[1]), sorted(t[1])))
        return cls(tuple(labels), tuple(items))

    def __add__(self, other: "ProjectorMap") -> "ProjectorMap":
        return ProjectorMap.build(self.labels, self.terms + other.terms)

    def __neg__(self) -> "ProjectorMap":
        return ProjectorMap.build(self.labels, [(-c, x) for c, x in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def relabel(self, mapping: dict) -> "ProjectorMap":
        return ProjectorMap.build(self.labels, [(c, {mapping.get(l, l) for l in x}) for c, x in self.terms])

    def apply_array(self, arr: np.ndarray, dims: Sequence[int]) -> np.ndarray:
        """Apply to a raw array (float, or object array of exact scalars); batch axes allowed."""
        exact = arr.dtype == object
        out = None
        for c, xs in self.terms:
            t = trace_replace_array(arr, dims, [self.labels.index(l) for l in xs])
            t = t * (c if exact else float(c))
            out = t if out is None else out + t
        if out is None:
            return arr * 0
        return out

    def apply(self, M, dims: Optional[Sequence[int]] = None):
        """Apply to a LabeledMatrix, an ExactMatrix or a complex array.

        Raw matrices are taken to be ordered as ``self.labels`` with ``dims``
        (default: qubits).
        """
        if isinstance(M, LabeledMatrix):
            if set(M.labels) != set(self.labels):
                raise ValueError(f"projector acts on {self.labels}, matrix on {M.labels}")
            ordered = permute_systems(M, self.labels) if M.labels != self.labels else M
            data = self.apply(ordered.data, ordered.space.dims)
            out = LabeledMatrix(ordered.space, data)
            return permute_systems(out, M.labels) if M.labels != self.labels else out
        dims = tuple(dims) if dims is not None else (2,) * len(self.labels)
        if isinstance(M, ExactMatrix):
            re = self.apply_array(M.re, dims)
            im = self.apply_array(M.im, dims)
            return ExactMatrix(re, im, _trusted=True)
        return self.apply_array(np.asarray(M, dtype=complex), dims)

    __call__ = apply

    def matrix(self, dims: Optional[Sequence[int]] = None) -> np.ndarray:
        """Dense real superoperator in Hermitian svec coordinates."""
        dims = tuple(dims) if dims is not None else (2,) * len(self.labels)
        n = int(np.prod(dims))
        return superoperator(lambda B: self.apply_array(B, dims), n)

    def __str__(self):
        parts = []
        for c, xs in self.terms:
            name = "id" if not xs else "_{" + "".join(l for l in self.labels if l in xs) + "}"
            parts.append(f"{'+' if c > 0 else '-'} {abs(c)} {name}")
        return " ".join(parts)


def _terms(k: int, spec) -> ProjectorMap:
    return ProjectorMap.build(labels_for(k), spec)


def _swap_slots(P: ProjectorMap) -> ProjectorMap:
    return P.relabel({"I1": "I2", "O1": "O2", "I2": "I1", "O2": "O1"})


def _check(s: Strategy, k: int):
    if s.tag == "SEP":
        raise NotAffine("separable processes do not form an affine set")
    labels_for(k)
    if k == 1 and s.tag != "PAR":
        raise Unsupported("with one copy every strategy coincides with PAR; use PAR")


def process_projector(s: Strategy, k: int = 2) -> ProjectorMap:
    """Projector onto the linear span of valid processes of class ``s``."""
    _check(s, k)
    if k == 1:
        return _terms(1, [(1, {"O1"})])
    if s.tag == "PAR":
        return _terms(2, [(1, {"O1", "O2"})])
    if s.tag == "SEQ":
        P = _terms(2, [(1, {"O2"}), (-1, {"I2", "O2"}), (1, {"O1", "I2", "O2"})])
        return P if s.order == "12" else _swap_slots(P)
    return _terms(2, [(1, {"I1", "O1", "O2"}), (-1, {"I1", "O1"}), (1, {"O1", "I2", "O2"}),
                      (-1, {"I2", "O2"}), (1, {"O1"}), (1, {"O2"}), (-1, {"O1", "O2"})])


def dual_projector(s: Strategy, k: int = 2) -> ProjectorMap:
    """Projector onto the span of the dual affine set, ``I - P + _{all}``."""
    P = process_projector(s, k)
    labels = labels_for(k)
    ident = ProjectorMap.build(labels, [(1, set())])
    full = ProjectorMap.build(labels, [(1, set(labels))])
    return ident - P + full


def _slot_dims(k: int, dI: int, dO: int) -> tuple[int, ...]:
    return (dI, dO) * k


def process_trace(s: Strategy, k: int = 2, dI: int = 2, dO: int = 2) -> Fraction:
    """Required trace of a process: ``d_O ** k``."""
    if s.tag != "SEP":
        _check(s, k)
    return Fraction(dO ** k)


def dual_trace(s: Strategy, k: int = 2, dI: int = 2, dO: int = 2) -> Fraction:
    """Required trace of a dual-affine element: ``d_I ** k``."""
    if s.tag != "SEP":
        _check(s, k)
    return Fraction(dI ** k)


@lru_cache(maxsize=None)
def subspace_bases(s: Strategy, k: int = 2, dI: int = 2, dO: int = 2, dual: bool = False):
    """Orthonormal svec bases ``(range, complement)`` for a process or dual projector."""
    P = dual_projector(s, k) if dual else process_projector(s, k)
    rng, ker = range_and_complement(P.matrix(_slot_dims(k, dI, dO)))
    rng.setflags(write=False)
    ker.setflags(write=False)
    return rng, ker


# membership ----------------------------------------------------------------------

Matrix = Union[np.ndarray, ExactMatrix]


def _raw(W):
    return W.data if isinstance(W, LabeledMatrix) else W


def is_valid_process(W, s: Strategy, exact: bool = False, k: int = 2, dI: int = 2, dO: int = 2,
                     tol: float = 1e-8) -> bool:
    """PSD, fixed by the projector and correctly normalized.

    SEP membership is decided by a float SDP feasibility problem; exact SEP
    membership raises :class:`Unsupported`.
    """
    W = _raw(W)
    dims = _slot_dims(k, dI, dO)
    gamma = process_trace(s, k, dI, dO)
    if exact:
        if s.tag == "SEP":
            raise Unsupported("exact SEP membership needs exact SDP feasibility")
        if not isinstance(W, ExactMatrix):
            raise TypeError("exact mode needs an ExactMatrix")
        if not W.is_hermitian() or W.trace_real() != gamma:
            return False
        if W.trace().im != 0:
            return False
        return process_projector(s, k).apply(W, dims) == W and is_psd_exact(W)
    W = W.to_float() if isinstance(W, ExactMatrix) else np.asarray(W, dtype=complex)
    if not np.allclose(W, W.conj().T, atol=tol):
        return False
    if abs(np.trace(W).real - float(gamma)) > tol or np.linalg.eigvalsh(W).min() < -tol:
        return False
    if s.tag == "SEP":
        if np.abs(process_projector(GEN, k).apply(W, dims) - W).max() > tol:
            return False
        from qdisc.sdp import sep_decomposition
        return sep_decomposition(W, dI=dI, dO=dO, tol=max(tol, 1e-6)) is not None
    return bool(np.abs(process_projector(s, k).apply(W, dims) - W).max() <= tol)


def is_valid_tester(T: Sequence, s: Strategy, exact: bool = False, k: int = 2, dI: int = 2,
                    dO: int = 2, tol: float = 1e-8) -> bool:
    """Every element PSD and the sum a valid process."""
    T = [_raw(t) for t in T]
    if not T:
        return False
    if exact:
        if not all(isinstance(t, ExactMatrix) and t.is_hermitian() and is_psd_exact(t) for t in T):
            return False
        W = T[0]
        for t in T[1:]:
            W = W + t
    else:
        T = [t.to_float() if isinstance(t, ExactMatrix) else np.asarray(t, dtype=complex) for t in T]
        for t in T:
            if not np.allclose(t, t.conj().T, atol=tol) or np.linalg.eigvalsh(t).min() < -tol:
                return False
        W = sum(T)
    return is_valid_process(W, s, exact=exact, k=k, dI=dI, dO=dO, tol=tol)
