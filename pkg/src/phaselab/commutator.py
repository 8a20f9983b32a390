"""Heisenberg relation [Phi, N] f = i f and its exact defect.

For finitely supported f, g every inner product below is a finite sum, so
nothing here depends on truncating Phi: Phi is applied through
``phi_apply_exact`` and only ever read on coordinates that are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from phaselab.hardy import CoeffVec, eval_at_minus_one, phi_apply_exact

MEMBERSHIP_TOL = 1e-13
CANCELLATION_FLOOR = 1e-10


def _apply_number(f):
    return CoeffVec(np.arange(f.support_len) * f.coeffs)


def in_commutator_domain(f, tol=MEMBERSHIP_TOL):
    """Whether f lies in Y, i.e. |f(-1)| <= tol * ||f||."""
    return abs(eval_at_minus_one(f)) <= tol * max(f.norm(), 1.0)


def sesquilinear_defect(f, g):
    """<Nf, Phi g> - <Phi f, Ng> - i <f, g>; equals -i f(-1) conj(g(-1))."""
    length = max(f.support_len, g.support_len, 1)
    nf = _apply_number(f).padded(length)
    ng = _apply_number(g).padded(length)
    phi_f = phi_apply_exact(f, length).padded(length)
    phi_g = phi_apply_exact(g, length).padded(length)
    fg = np.vdot(g.padded(length), f.padded(length))
    return complex(np.vdot(phi_g, nf) - np.vdot(ng, phi_f) - 1j * fg)


@dataclass
class HeisenbergReport:
    vector_id: str
    S: complex
    residuals: List[Tuple[int, float]] = field(default_factory=list)

    @property
    def slope(self):
        d, r = self.residuals[-1]
        return r * r / d

    def rows(self):
        return [
            {"D": d, "residual": r, "residual_sq_over_D": r * r / d}
            for d, r in self.residuals
        ]


def heisenberg_residual_vector(f, dim):
    """P_D ([Phi, N] f - i f), computed without truncation error.

    Phi acts on the whole of f and Nf and only the output is cut to D
    coordinates, so D may be smaller than the support of f.
    """
    if dim < 1:
        raise ValueError("D must be >= 1")
    phi_nf = phi_apply_exact(_apply_number(f), dim).padded(dim)
    n_phi_f = np.arange(dim) * phi_apply_exact(f, dim).padded(dim)
    return phi_nf - n_phi_f - 1j * f.padded(dim)


def heisenberg_residuals(f, dims, vector_id="f"):
    dims = sorted(int(d) for d in dims)
    if not dims:
        raise ValueError("need at least one dimension")
    report = HeisenbergReport(vector_id, eval_at_minus_one(f))
    for d in dims:
        r = float(np.linalg.norm(heisenberg_residual_vector(f, d)))
        report.residuals.append((d, r))
    return report


def density_witness(k):
    """f_k = e_0 + (1/k) sum_{j<k} e_{2j+1} and ||e_0 - f_k||^2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    c = np.zeros(2 * k, dtype=np.complex128)
    c[0] = 1.0
    c[1::2] = 1.0 / k
    f = CoeffVec(c)
    diff = f - CoeffVec.basis(0)
    return f, math.fsum(abs(z) ** 2 for z in diff.coeffs)


def graph_norm_witness(M):
    """sum_{n=1}^{M} n^2 |(Phi 1)_n|^2, which equals M: Phi 1 is not in D(N)."""
    if M < 1:
        raise ValueError("M must be >= 1")
    c = phi_apply_exact(CoeffVec.basis(0), M + 1).padded(M + 1)
    n = np.arange(1, M + 1)
    return math.fsum(n * n * (c[1:].real ** 2 + c[1:].imag ** 2))


def log_series_crosscheck(M):
    """max_{1<=n<=M} |(Phi 1)_n - i (-1)^n / n|."""
    if M < 1:
        raise ValueError("M must be >= 1")
    c = phi_apply_exact(CoeffVec.basis(0), M + 1).padded(M + 1)
    n = np.arange(1, M + 1)
    expected = 1j * np.where(n % 2 == 0, 1.0, -1.0) / n
    return float(np.max(np.abs(c[1:] - expected)))


@dataclass
class CancellationReport:
    S: complex
    terms: np.ndarray
    window_start: int

    @property
    def n_max(self):
        return self.terms.size - 1

    @property
    def tail_average(self):
        return float(np.mean(self.terms[self.window_start:]))

    @property
    def partial_sums(self):
        return np.cumsum(self.terms)

    def tolerance(self, floor=CANCELLATION_FLOOR):
        """Allowed |tail_average - |S|^2| for the O(1/n) correction.

        With S = 0 the terms fall off like 1/n^2, so the absolute floor is
        only met once n_max is of order 1e5.
        """
        return 5.0 * abs(self.S) ** 2 / self.window_start + floor

    def rows(self):
        ps = self.partial_sums
        return [
            {"n": n, "term": float(self.terms[n]), "partial_sum": float(ps[n])}
            for n in range(1, self.terms.size)
        ]


def cancellation_report(f, n_max):
    """t_n = n^2 |(Phi f)_n|^2 for n <= n_max, averaged over the last quartile."""
    if f.support_len == 0:
        raise ValueError("f must be nonzero")
    if n_max <= 4 * f.support_len:
        raise ValueError("n_max must exceed 4 x the support length")
    c = phi_apply_exact(f, n_max + 1).padded(n_max + 1)
    n = np.arange(n_max + 1)
    terms = n * n * (c.real ** 2 + c.imag ** 2)
    start = max(1, (3 * n_max) // 4)
    return CancellationReport(eval_at_minus_one(f), terms, start)
