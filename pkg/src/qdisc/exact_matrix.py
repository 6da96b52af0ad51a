"""Dense exact complex matrices and the exact PSD test.

An :class:`ExactMatrix` stores its real and imaginary parts as numpy object
arrays whose entries are :class:`~fractions.Fraction` or
:class:`~qdisc.exact_scalar.QuadExt`.  Every linear map used in this package
has real coefficients, so it acts on the two parts independently.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

import numpy as np

from qdisc import _psd
from qdisc.exact_scalar import (
    ExactComplex,
    MixedRadicalError,
    QuadExt,
    float_to_rational,
    scalar_from_json,
    scalar_to_json,
)

_ZERO = Fraction(0)


def _obj_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(_ZERO)
    return out


def _to_obj(arr) -> np.ndarray:
    a = np.asarray(arr, dtype=object)
    if a.ndim != 2:
        raise ValueError("exact matrices are two-dimensional")
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        if isinstance(v, (Fraction, QuadExt)):
            out[idx] = v
        elif isinstance(v, (int, np.integer)):
            out[idx] = Fraction(int(v))
        else:
            raise TypeError(f"non-exact entry {v!r}; use ExactMatrix.from_float for floats")
    return out


class ExactMatrix:
    """Complex matrix with exact entries, stored as real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None, *, _trusted: bool = False):
        if _trusted:
            self.re, self.im = re, im
            return
        self.re = _to_obj(re)
        self.im = _obj_zeros(self.re.shape) if im is None else _to_obj(im)
        if self.im.shape != self.re.shape:
            raise ValueError("real and imaginary parts differ in shape")

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, n: int, m: Optional[int] = None) -> "ExactMatrix":
        shape = (n, n if m is None else m)
        return cls(_obj_zeros(shape), _obj_zeros(shape), _trusted=True)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        re = _obj_zeros((n, n))
        for i in range(n):
            re[i, i] = Fraction(1)
        return cls(re, _obj_zeros((n, n)), _trusted=True)

    @classmethod
    def from_float(cls, arr) -> "ExactMatrix":
        """Bit-exact rational image of a float (real or complex) matrix."""
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ValueError("expected a matrix")
        re = np.empty(a.shape, dtype=object)
        im = np.empty(a.shape, dtype=object)
        ar = np.real(a).astype(float)
        ai = np.imag(a).astype(float) if np.iscomplexobj(a) else np.zeros(a.shape)
        for idx in np.ndindex(a.shape):
            re[idx] = float_to_rational(ar[idx])
            im[idx] = float_to_rational(ai[idx])
        return cls(re, im, _trusted=True)

    @classmethod
    def from_parts(cls, re, im=None) -> "ExactMatrix":
        return cls(re, im)

    # basic structure ----------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.re.shape

    def copy(self) -> "ExactMatrix":
        return ExactMatrix(self.re.copy(), self.im.copy(), _trusted=True)

    def is_real(self) -> bool:
        return all(v == 0 for v in self.im.flat)

    def radicands(self) -> set[int]:
        out = set()
        for part in (self.re, self.im):
            for v in part.flat:
                if isinstance(v, QuadExt) and v.b != 0:
                    out.add(v.d)
        return out

    def __getitem__(self, idx) -> ExactComplex:
        return ExactComplex(self.re[idx], self.im[idx])

    def map_parts(self, fn) -> "ExactMatrix":
        """Apply a real-linear map to both parts."""
        return ExactMatrix(fn(self.re), fn(self.im), _trusted=True)

    # algebra ------------------------------------------------------------
    def dagger(self) -> "ExactMatrix":
        return ExactMatrix(self.re.T.copy(), (-self.im).T.copy(), _trusted=True)

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return ExactMatrix(self.re + other.re, self.im + other.im, _trusted=True)

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return ExactMatrix(self.re - other.re, self.im - other.im, _trusted=True)

    def __neg__(self):
        return ExactMatrix(-self.re, -self.im, _trusted=True)

    def __mul__(self, c):
        if isinstance(c, ExactComplex):
            return ExactMatrix(self.re * c.re - self.im * c.im,
                               self.re * c.im + self.im * c.re, _trusted=True)
        if isinstance(c, (int, Fraction, QuadExt)):
            return ExactMatrix(self.re * c, self.im * c, _trusted=True)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, int):
            c = Fraction(c)
        if isinstance(c, (Fraction, QuadExt)):
            return ExactMatrix(self.re / c, self.im / c, _trusted=True)
        return NotImplemented

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        re = self.re @ other.re - self.im @ other.im
        im = self.re @ other.im + self.im @ other.re
        return ExactMatrix(re, im, _trusted=True)

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        re = np.kron(self.re, other.re) - np.kron(self.im, other.im)
        im = np.kron(self.re, other.im) + np.kron(self.im, other.re)
        return ExactMatrix(re, im, _trusted=True)

    def trace(self) -> ExactComplex:
        return ExactComplex(_sum(np.diagonal(self.re)), _sum(np.diagonal(self.im)))

    def trace_real(self):
        """Real part of the trace (the whole trace for Hermitian input)."""
        return _sum(np.diagonal(self.re))

    def inner(self, other: "ExactMatrix"):
        """``Re Tr(self @ other)``; exact and real for Hermitian arguments."""
        # Tr(AB) = sum_ij A_ij B_ji
        return _sum((self.re * other.re.T).flat) - _sum((self.im * other.im.T).flat)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return (all(a == b for a, b in zip(self.re.flat, other.re.flat))
                and all(a == b for a, b in zip(self.im.flat, other.im.flat)))

    __hash__ = None

    def is_hermitian(self) -> bool:
        n, m = self.shape
        if n != m:
            return False
        return (all(a == b for a, b in zip(self.re.flat, self.re.T.flat))
                and all(a == -b for a, b in zip(self.im.flat, self.im.T.flat)))

    def to_float(self) -> np.ndarray:
        f = np.vectorize(float, otypes=[float])
        return f(self.re) + 1j * f(self.im)

    def __repr__(self):
        return f"ExactMatrix(shape={self.shape}, real={self.is_real()})"

    # serialisation ------------------------------------------------------
    def to_json(self) -> dict:
        rows, cols = self.shape
        entries = [{"re": scalar_to_json(self.re[i, j]), "im": scalar_to_json(self.im[i, j])}
                   for i in range(rows) for j in range(cols)]
        return {"rows": rows, "cols": cols, "entries": entries}

    @classmethod
    def from_json(cls, obj: dict) -> "ExactMatrix":
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match dimensions")
        re = np.empty((rows, cols), dtype=object)
        im = np.empty((rows, cols), dtype=object)
        for k, e in enumerate(entries):
            re[divmod(k, cols)] = scalar_from_json(e["re"])
            im[divmod(k, cols)] = scalar_from_json(e["im"])
        return cls(re, im, _trusted=True)


def _sum(values):
    total = _ZERO
    for v in values:
        total = total + v
    return total


def hermitize(M: ExactMatrix) -> ExactMatrix:
    """Return ``(M + M^dagger) / 2`` exactly."""
    n, m = M.shape
    if n != m:
        raise ValueError(f"hermitize needs a square matrix, got {M.shape}")
    half = Fraction(1, 2)
    re = (M.re + M.re.T) * half
    im = (M.im - M.im.T) * half
    return ExactMatrix(re, im, _trusted=True)


def depolarize(M: ExactMatrix, eta: Fraction, target: Optional[ExactMatrix] = None) -> ExactMatrix:
    """``eta * M + (1 - eta) * target`` with ``target`` defaulting to the identity."""
    eta = Fraction(eta)
    if target is None:
        out = M * eta
        one_minus = 1 - eta
        for i in range(M.shape[0]):
            out.re[i, i] = out.re[i, i] + one_minus
        return out
    return M * eta + target * (1 - eta)


# exact PSD ----------------------------------------------------------------

def _real_symmetric_form(M: ExactMatrix) -> np.ndarray:
    """Real symmetric matrix that is PSD iff the Hermitian ``M`` is."""
    if M.is_real():
        return M.re
    # [[Re, -Im], [Im, Re]]
    return np.block([[M.re, -M.im], [M.im, M.re]])


def _integer_rows(S: np.ndarray):
    """Clear denominators; returns ``(rows_a, rows_b, d)`` with ``d = None`` when rational."""
    d = None
    for v in S.flat:
        if isinstance(v, QuadExt) and v.b != 0:
            if d is None:
                d = v.d
            elif v.d != d:
                raise MixedRadicalError(f"matrix mixes sqrt({d}) and sqrt({v.d})")
    if d is None:
        vals = [v.a if isinstance(v, QuadExt) else v for v in S.flat]
        L = math.lcm(*[v.denominator for v in vals]) if vals else 1
        n = S.shape[0]
        ints = [v.numerator * (L // v.denominator) for v in vals]
        return [ints[i * n:(i + 1) * n] for i in range(n)], None, None
    avals, bvals = [], []
    for v in S.flat:
        if isinstance(v, QuadExt):
            avals.append(v.a)
            bvals.append(v.b)
        else:
            avals.append(v)
            bvals.append(_ZERO)
    L = math.lcm(*[v.denominator for v in avals + bvals])
    n = S.shape[0]
    ia = [v.numerator * (L // v.denominator) for v in avals]
    ib = [v.numerator * (L // v.denominator) for v in bvals]
    return ([ia[i * n:(i + 1) * n] for i in range(n)],
            [ib[i * n:(i + 1) * n] for i in range(n)], d)


def is_psd_exact(M: ExactMatrix) -> bool:
    """Exact positive-semidefiniteness test for a Hermitian exact matrix.

    Raises
    ------
    ValueError
        If ``M`` is not Hermitian (hermitize first).
    """
    if not M.is_hermitian():
        raise ValueError("is_psd_exact needs a Hermitian matrix; hermitize first")
    S = _real_symmetric_form(M)
    rows_a, rows_b, d = _integer_rows(S)
    if d is None:
        return _psd.psd_int(rows_a)
    return _psd.psd_quad(rows_a, rows_b, d)


def binary_search_eta(candidate, mix_target=None, steps: int = 60) -> Fraction:
    """Largest dyadic ``eta`` found with ``eta*candidate + (1-eta)*mix_target`` PSD.

    ``candidate`` and ``mix_target`` may be single matrices or equal-length
    sequences, in which case one common ``eta`` must work for every pair.
    ``mix_target=None`` means the identity.  Returns 1 when the candidates
    are already PSD.
    """
    if isinstance(candidate, ExactMatrix):
        pairs = [(candidate, mix_target)]
    else:
        targets = [None] * len(candidate) if mix_target is None else mix_target
        pairs = list(zip(candidate, targets, strict=True))

    def feasible(eta: Fraction) -> bool:
        return all(is_psd_exact(depolarize(c, eta, t)) for c, t in pairs)

    one = Fraction(1)
    if feasible(one):
        return one
    lo, hi = Fraction(0), one
    if not feasible(lo):
        raise ValueError("no feasible eta even at eta = 0: mixing target is not PSD")
    for _ in range(steps):
        mid = (lo + hi) / 2
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo
