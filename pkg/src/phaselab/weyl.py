"""Failure of the Weyl relations and covariance of the phase POVM.

The Weyl mismatch at (s, t) is

    exp(itN) exp(isPhi) exp(-itN) - exp(-ist) exp(isPhi)

on the D x D section; its operator norm is the defect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np

from phaselab import linalg
from phaselab.hardy import Arg, toeplitz
from phaselab.linalg import TruncatedOperator, hermitian_eigen, operator_norm, unitary_exp
from phaselab.povm import povm_element

DEFAULT_S = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
DEFAULT_T = (0.0, math.pi / 4, math.pi / 3, 1.0, 2.0)
DEFAULT_DIMS = (32, 64, 128, 256)


@lru_cache(maxsize=16)
def _phi_eigen(dim, backend):
    return hermitian_eigen(toeplitz(Arg(), dim))


def phi_group(s, dim):
    """exp(i s Phi_D)."""
    phi = toeplitz(Arg(), dim)
    return unitary_exp(phi, s, eig=_phi_eigen(dim, linalg.get_backend()))


def _conjugate_by_number_group(m, t):
    # exp(itN) M exp(-itN) multiplies entry (n, m) by exp(i (n - m) t)
    phase = np.exp(1j * t * np.arange(m.shape[0]))
    return phase[:, None] * m * phase.conj()[None, :]


def weyl_defect(s, t, dim):
    if dim < 2:
        raise ValueError("dim must be >= 2")
    e = phi_group(s, dim).entries
    mismatch = _conjugate_by_number_group(e, t) - np.exp(-1j * s * t) * e
    return operator_norm(TruncatedOperator(mismatch))


@dataclass
class WeylDefectReport:
    grid: List[Tuple[float, float, int, float]] = field(default_factory=list)

    def by_point(self) -> Dict[Tuple[float, float], List[Tuple[int, float]]]:
        out = {}
        for s, t, d, defect in self.grid:
            out.setdefault((s, t), []).append((d, defect))
        return out

    def stabilization(self):
        """Relative defect change between consecutive dimensions per (s, t)."""
        rows = []
        for (s, t), series in self.by_point().items():
            for (d0, x0), (d1, x1) in zip(series, series[1:]):
                rel = abs(x1 - x0) / x1 if x1 > 0 else 0.0
                rows.append({"s": s, "t": t, "D_from": d0, "D_to": d1, "relative_change": rel})
        return rows

    def rows(self):
        return [{"s": s, "t": t, "D": d, "defect": x} for s, t, d, x in self.grid]


def weyl_scan(s_grid=DEFAULT_S, t_grid=DEFAULT_T, dims=DEFAULT_DIMS):
    s_grid, t_grid, dims = list(s_grid), list(t_grid), sorted(int(d) for d in dims)
    if not (s_grid and t_grid and dims):
        raise ValueError("grids must be nonempty")
    report = WeylDefectReport()
    for s in s_grid:
        for t in t_grid:
            for d in dims:
                report.grid.append((float(s), float(t), d, weyl_defect(s, t, d)))
    return report


def covariance_defect(arc, t, dim, rotation=None):
    """||exp(itN) Q(B) exp(-itN) - Q(B rotated by ``rotation``)||.

    The identity holds exactly with ``rotation = -t``: conjugation multiplies
    entry (n, m) by exp(i(n-m)t), while rotating B by r multiplies its
    Fourier coefficient at n - m by exp(-i(n-m)r). ``rotation`` defaults to
    -t; pass ``t`` to measure the mismatch with the opposite convention.
    """
    if rotation is None:
        rotation = -t
    lhs = _conjugate_by_number_group(povm_element(arc, dim).entries, t)
    rhs = povm_element(arc.rotated(rotation), dim).entries
    return operator_norm(TruncatedOperator(lhs - rhs))
