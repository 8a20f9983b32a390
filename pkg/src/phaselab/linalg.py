"""Dense complex linear algebra on finite sections.

Matrix convention: ``entries[n, m] = <T e_m, e_n>``, so column ``m`` holds
the image of the basis vector ``e_m``.

The Hermitian eigensolver is cyclic Jacobi. The compiled kernel
(``phaselab._jacobi``) is used when it was built; otherwise the numpy
fallback in ``phaselab._jacobi_py`` is selected at import.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from phaselab import _jacobi_py

try:
    from phaselab import _jacobi as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

HERMITIAN_ATOL = 1e-13
MAX_DIM = 4096
DEFAULT_EIG_TOL = 1e-12
MAX_SWEEPS = 64
# Norm-only calls stop earlier: each eigenvalue is within the off-diagonal
# Frobenius mass of a diagonal entry (Weyl's inequality), so this bounds the
# relative error of ||M||^2 by 1e-8 * sqrt(D): ample for defect tables.
NORM_EIG_TOL = 1e-8

_KERNELS = {"python": _jacobi_py.jacobi_inplace}
if _compiled is not None:
    _KERNELS["cython"] = _compiled.jacobi_inplace

_backend = "cython" if _compiled is not None else "python"


def available_backends():
    return sorted(_KERNELS)


def get_backend():
    return _backend


def set_backend(name):
    """Select the Jacobi kernel ("cython" or "python"); returns the previous one."""
    global _backend
    if name not in _KERNELS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    previous, _backend = _backend, name
    return previous


class DimensionError(ValueError):
    pass


class EigenConvergenceError(RuntimeError):
    def __init__(self, sweeps, residual):
        super().__init__(
            f"Jacobi did not converge after {sweeps} sweeps "
            f"(relative off-diagonal mass {residual:.3e})"
        )
        self.sweeps = sweeps
        self.residual = residual


def is_hermitian(a, atol=HERMITIAN_ATOL):
    return bool(np.all(np.abs(a - a.conj().T) <= atol))


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """A D x D finite section with a Hermitian flag.

    ``hermitian=None`` decides the flag by explicit test. Passing
    ``hermitian=True`` for a matrix that fails the test raises.
    """

    entries: np.ndarray
    hermitian: Optional[bool] = None

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.complex128, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DimensionError(f"expected a non-empty square matrix, got shape {a.shape}")
        if a.shape[0] > MAX_DIM:
            raise DimensionError(f"dimension {a.shape[0]} exceeds cap {MAX_DIM}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        herm = is_hermitian(a)
        if self.hermitian and not herm:
            raise ValueError("matrix flagged Hermitian but fails the conjugate-symmetry test")
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "hermitian", herm if self.hermitian is None else bool(self.hermitian))

    @property
    def dim(self):
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim), hermitian=True)

    @classmethod
    def zeros(cls, dim):
        return cls(np.zeros((dim, dim)), hermitian=True)

    def _check(self, other):
        if self.dim != other.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check(other)
        return TruncatedOperator(self.entries + other.entries)

    def __sub__(self, other):
        self._check(other)
        return TruncatedOperator(self.entries - other.entries)

    def __matmul__(self, other):
        self._check(other)
        return TruncatedOperator(self.entries @ other.entries)

    def __mul__(self, scalar):
        return TruncatedOperator(complex(scalar) * self.entries)

    __rmul__ = __mul__

    def adjoint(self):
        return TruncatedOperator(self.entries.conj().T)

    def __repr__(self):
        return f"TruncatedOperator(dim={self.dim}, hermitian={self.hermitian})"


def matrix_algebra(kind, a, b=None, scalar=None):
    """Dispatch ``add``, ``sub``, ``mul``, ``adjoint`` or ``scale``."""
    if kind == "adjoint":
        return a.adjoint()
    if kind == "scale":
        if scalar is None:
            raise ValueError("scale needs a scalar")
        return a * scalar
    if b is None:
        raise ValueError(f"{kind} needs two operands")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a @ b
    raise ValueError(f"unknown kind {kind!r}")


@dataclass(frozen=True, eq=False)
class HermitianEigen:
    eigenvalues: np.ndarray
    vectors: Optional[np.ndarray]
    sweeps: int
    off_ratio: float

    def reconstruct(self):
        if self.vectors is None:
            raise ValueError("eigenvectors were not computed")
        u = self.vectors
        return (u * self.eigenvalues) @ u.conj().T


def hermitian_eigen(m, tol=DEFAULT_EIG_TOL, vectors=True, max_sweeps=MAX_SWEEPS):
    """Eigendecomposition of a Hermitian section, eigenvalues ascending."""
    if not m.hermitian:
        raise ValueError("hermitian_eigen requires a Hermitian operator")
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.ascontiguousarray(0.5 * (m.entries + m.entries.conj().T))
    vt = np.eye(m.dim, dtype=np.complex128) if vectors else None
    sweeps, off = _KERNELS[_backend](a, vt, float(tol), int(max_sweeps))
    if off > tol:
        raise EigenConvergenceError(sweeps, off)
    w = np.diagonal(a).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = None
    if vt is not None:
        v = np.ascontiguousarray(vt.T[:, order])
        v.flags.writeable = False
    w.flags.writeable = False
    return HermitianEigen(w, v, sweeps, off)


def unitary_exp(m, s, eig=None):
    """``exp(i s M)`` for Hermitian ``M``; pass ``eig`` to reuse a decomposition."""
    if not m.hermitian:
        raise ValueError("unitary_exp requires a Hermitian operator")
    if eig is None:
        eig = hermitian_eigen(m)
    u = eig.vectors
    return TruncatedOperator((u * np.exp(1j * s * eig.eigenvalues)) @ u.conj().T)


def operator_norm(m, tol=NORM_EIG_TOL):
    """Spectral norm: max |eigenvalue| if Hermitian, else sqrt(lambda_max(M*M))."""
    if m.hermitian:
        w = hermitian_eigen(m, tol=tol, vectors=False).eigenvalues
        return float(max(abs(w[0]), abs(w[-1])))
    a = m.entries
    gram = a.conj().T @ a
    gram = TruncatedOperator(0.5 * (gram + gram.conj().T), hermitian=True)
    w = hermitian_eigen(gram, tol=tol, vectors=False).eigenvalues
    return float(np.sqrt(max(w[-1], 0.0)))
