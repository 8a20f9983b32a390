"""Vectors, circle symbols and Toeplitz sections on the Hardy space H^2.

A vector ``f = sum c_n e_n`` with ``e_n(z) = z^n`` is stored as its
coefficient sequence. A symbol ``phi`` on the circle acts through its
Fourier coefficients

    phi_hat(k) = (1/2pi) * integral_{-pi}^{pi} phi(theta) exp(-i k theta) dtheta

and its Toeplitz section has ``entries[n, m] = phi_hat(n - m)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from phaselab.linalg import TruncatedOperator

TWO_PI = 2.0 * math.pi


def _parity_sign(k):
    """(-1)**k for integer arrays, exactly."""
    return 1.0 - 2.0 * (np.asarray(k) & 1)


@dataclass(frozen=True, eq=False)
class CoeffVec:
    """Finitely supported coefficient sequence, trailing zeros trimmed."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.array(self.coeffs, dtype=np.complex128, copy=True))
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, n, scale=1.0):
        c = np.zeros(n + 1, dtype=np.complex128)
        c[n] = scale
        return cls(c)

    @classmethod
    def from_pairs(cls, pairs):
        """Build from a sequence of ``[re, im]`` pairs."""
        arr = np.asarray(pairs, dtype=float)
        if arr.size == 0:
            return cls(np.zeros(0))
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("expected a list of [re, im] pairs")
        return cls(arr[:, 0] + 1j * arr[:, 1])

    @classmethod
    def from_json(cls, text):
        return cls.from_pairs(json.loads(text))

    def to_pairs(self):
        return [[float(z.real), float(z.imag)] for z in self.coeffs]

    def to_json(self):
        return json.dumps(self.to_pairs())

    @property
    def support_len(self):
        return self.coeffs.size

    def padded(self, length):
        """First ``length`` coefficients, zero-padded."""
        out = np.zeros(length, dtype=np.complex128)
        k = min(length, self.support_len)
        out[:k] = self.coeffs[:k]
        return out

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other):
        """<self, other>, linear in the first slot."""
        n = min(self.support_len, other.support_len)
        return complex(np.sum(self.coeffs[:n] * np.conj(other.coeffs[:n])))

    def __add__(self, other):
        n = max(self.support_len, other.support_len)
        return CoeffVec(self.padded(n) + other.padded(n))

    def __sub__(self, other):
        n = max(self.support_len, other.support_len)
        return CoeffVec(self.padded(n) - other.padded(n))

    def __mul__(self, scalar):
        return CoeffVec(complex(scalar) * self.coeffs)

    __rmul__ = __mul__

    def __repr__(self):
        return f"CoeffVec(support_len={self.support_len})"


@dataclass(frozen=True)
class Arc:
    """Half-open arc {exp(i theta) : a < theta <= b}, angles mod 2pi."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("arc endpoints must be finite")
        if not 0.0 < self.b - self.a <= TWO_PI + 1e-12:
            raise ValueError(f"arc needs 0 < b - a <= 2pi, got ({self.a}, {self.b}]")

    @property
    def length(self):
        return self.b - self.a

    def rotated(self, t):
        return Arc(self.a + t, self.b + t)

    def pieces(self):
        """Split into sub-intervals of the fundamental window (-pi, pi]."""
        if self.length >= TWO_PI:
            return [(-math.pi, math.pi)]
        shift = TWO_PI * math.floor((self.a + math.pi) / TWO_PI)
        a, b = self.a - shift, self.b - shift
        if b <= math.pi:
            return [(a, b)]
        return [(a, math.pi), (-math.pi, b - TWO_PI)]

    def contains(self, theta):
        theta = np.asarray(theta, dtype=float)
        w = np.mod(theta + math.pi, TWO_PI) - math.pi
        w = np.where(w == -math.pi, math.pi, w)
        out = np.zeros(theta.shape, dtype=bool)
        for lo, hi in self.pieces():
            out |= (w > lo) & (w <= hi)
        return out


FULL_CIRCLE = Arc(-math.pi, math.pi)


@dataclass(frozen=True)
class Arg:
    """The principal argument, valued in (-pi, pi]."""

    real = True

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        w = np.mod(theta + math.pi, TWO_PI) - math.pi
        return np.where(w == -math.pi, math.pi, w)


@dataclass(frozen=True)
class Indicator:
    arc: Arc
    real = True

    def __call__(self, theta):
        return self.arc.contains(theta).astype(float)


@dataclass(frozen=True)
class TrigMonomial:
    """lambda -> lambda**k on the circle."""

    k: int
    real = False

    def __call__(self, theta):
        return np.exp(1j * self.k * np.asarray(theta, dtype=float))


@dataclass(frozen=True)
class Step:
    """Finite sum of value * indicator over pairwise disjoint arcs."""

    pieces: Tuple[Tuple[Arc, float], ...]
    real = True

    def __post_init__(self):
        pieces = tuple((arc, float(v)) for arc, v in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        spans = sorted(span for arc, _ in pieces for span in arc.pieces())
        for (_, hi), (lo, _) in zip(spans, spans[1:]):
            if lo < hi - 1e-12:
                raise ValueError("step arcs overlap")

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape)
        for arc, v in self.pieces:
            out += v * arc.contains(theta)
        return out


Symbol = Union[Arg, Indicator, TrigMonomial, Step]


def _indicator_coefficients(arc, k):
    k = np.asarray(k)
    out = np.zeros(k.shape, dtype=np.complex128)
    nz = k != 0
    kf = k[nz].astype(float)
    for lo, hi in arc.pieces():
        out[nz] += (np.exp(-1j * kf * lo) - np.exp(-1j * kf * hi)) / (2j * math.pi * kf)
        out[~nz] += (hi - lo) / TWO_PI
    return out


def _nonnegative_coefficients(sym, k):
    if isinstance(sym, Arg):
        out = np.zeros(k.shape, dtype=np.complex128)
        nz = k != 0
        out[nz] = 1j * _parity_sign(k[nz]) / k[nz]
        return out
    if isinstance(sym, Indicator):
        return _indicator_coefficients(sym.arc, k)
    if isinstance(sym, Step):
        out = np.zeros(k.shape, dtype=np.complex128)
        for arc, v in sym.pieces:
            out += v * _indicator_coefficients(arc, k)
        return out
    raise TypeError(f"unsupported symbol {sym!r}")


def fourier_coefficients(sym, k):
    """Vectorised closed-form Fourier coefficients at integer indices ``k``.

    For real symbols the negative indices are taken as conjugates of the
    positive ones, so conjugate symmetry holds bit for bit.
    """
    k = np.asarray(k, dtype=np.int64)
    if isinstance(sym, TrigMonomial):
        return (k == sym.k).astype(np.complex128)
    out = _nonnegative_coefficients(sym, np.abs(k))
    neg = k < 0
    out[neg] = np.conj(out[neg])
    return out


def fourier_coefficient(sym, k):
    return complex(fourier_coefficients(sym, np.array([int(k)]))[0])


def toeplitz(sym, dim):
    if dim < 1:
        raise ValueError("dim must be >= 1")
    n = np.arange(dim)
    vals = fourier_coefficients(sym, np.arange(-(dim - 1), dim))
    entries = vals[(n[:, None] - n[None, :]) + dim - 1]
    return TruncatedOperator(entries, hermitian=sym.real)


def number_operator(dim):
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return TruncatedOperator(np.diag(np.arange(dim, dtype=float)), hermitian=True)


def phi_apply_exact(f, out_len):
    """First ``out_len`` coefficients of Phi f, with no truncation error."""
    if out_len < 1:
        raise ValueError("out_len must be >= 1")
    if f.support_len == 0:
        return CoeffVec(np.zeros(0))
    n = np.arange(out_len)[:, None]
    m = np.arange(f.support_len)[None, :]
    kernel = fourier_coefficients(Arg(), n - m)
    return CoeffVec(kernel @ f.coeffs)


def eval_at_minus_one(f):
    """Boundary value f(-1) = sum (-1)^j c_j."""
    if f.support_len == 0:
        return 0j
    return complex(np.sum(_parity_sign(np.arange(f.support_len)) * f.coeffs))
