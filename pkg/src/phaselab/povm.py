"""The phase POVM Q(B) = T_{1_B} and the reconstruction Phi = int arg dQ."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from phaselab.hardy import (
    Arc,
    Arg,
    CoeffVec,
    Indicator,
    Step,
    TrigMonomial,
    toeplitz,
)
from phaselab.linalg import TruncatedOperator, operator_norm


def povm_element(arc, dim):
    return toeplitz(Indicator(arc), dim)


def equipartition(k):
    """Cells I_j = (-pi + 2pi(j-1)/k, -pi + 2pi j/k], j = 1..k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    edges = [-math.pi + 2.0 * math.pi * j / k for j in range(k + 1)]
    edges[-1] = math.pi
    return [Arc(edges[j], edges[j + 1]) for j in range(k)]


def step_values(k):
    """Right endpoints of the equipartition cells, the values of arg_k."""
    return [cell.b for cell in equipartition(k)]


def arg_step_symbol(k):
    return Step(tuple(zip(equipartition(k), step_values(k))))


def riemann_phase(k, dim):
    """sum_j theta_j Q(I_j), with theta_j the right endpoint of I_j."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    acc = np.zeros((dim, dim), dtype=np.complex128)
    for cell, theta in zip(equipartition(k), step_values(k)):
        acc += theta * povm_element(cell, dim).entries
    return TruncatedOperator(acc)


@dataclass
class RiemannReport:
    dim: int
    table: List[Tuple[int, float]] = field(default_factory=list)

    def rows(self):
        return [
            {"k": k, "error": err, "bound": 2 * math.pi / k, "within_bound": err <= 2 * math.pi / k + 1e-10}
            for k, err in self.table
        ]

    @property
    def all_within_bound(self):
        return all(r["within_bound"] for r in self.rows())


def riemann_convergence(ks, dim):
    ks = list(ks)
    if not ks:
        raise ValueError("ks must be nonempty")
    phi = toeplitz(Arg(), dim)
    report = RiemannReport(dim)
    for k in ks:
        report.table.append((int(k), operator_norm(phi - riemann_phase(k, dim))))
    return report


def shift_power(k, dim):
    """Finite section of V^k, where V e_0 = 0 and V e_n = e_{n-1}."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return TruncatedOperator(np.eye(dim, k=k))


def moment_defect(k, dim):
    """||V^k_D - int lambda^k dQ||.

    With Q(B) = T_{1_B} the moment that reproduces the left shift is the
    conjugate monomial lambda^{-k}; k = 1, D = 2 pins this once for all k.
    """
    return operator_norm(shift_power(k, dim) - toeplitz(TrigMonomial(-k), dim))


def step_symbol_consistency(sym, dim):
    if not isinstance(sym, Step):
        raise TypeError("expected a Step symbol")
    acc = np.zeros((dim, dim), dtype=np.complex128)
    for arc, value in sym.pieces:
        acc += value * povm_element(arc, dim).entries
    return operator_norm(toeplitz(sym, dim) - TruncatedOperator(acc))


@dataclass
class PhaseDistribution:
    k: int
    masses: np.ndarray

    def rows(self):
        return [
            {"j": j + 1, "a": cell.a, "b": cell.b, "mass": float(m)}
            for j, (cell, m) in enumerate(zip(equipartition(self.k), self.masses))
        ]


def phase_distribution(f, k, dim):
    """mu_j = <Q(I_j) f, f> / ||f||^2 over the equipartition."""
    if f.support_len == 0:
        raise ValueError("phase distribution of the zero vector is undefined")
    if dim <= f.support_len:
        raise ValueError("dim must exceed the support length of f")
    x = f.padded(dim)
    norm_sq = float(np.vdot(x, x).real)
    masses = np.array(
        [np.vdot(x, povm_element(cell, dim).entries @ x).real / norm_sq for cell in equipartition(k)]
    )
    return PhaseDistribution(k, masses)


def rotate_vector(f, t):
    """exp(itN) f, i.e. c_n -> exp(i n t) c_n."""
    return CoeffVec(np.exp(1j * t * np.arange(f.support_len)) * f.coeffs)
