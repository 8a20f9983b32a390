"""Independent reference computations used to check the closed forms.

Nothing here reuses the closed-form Fourier coefficients: quadrature works
from pointwise symbol values, the log series from a coefficient recurrence,
and the brute-force routines from the explicit matrix elements
-i (-1)^(m-n) / (m-n) written out in plain loops.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import simpson

from phaselab.hardy import Arg, Indicator, TrigMonomial

SIMPSON_PANELS = 2 ** 14
# nodes are pulled this far inside each smooth piece so that jump points
# are evaluated on the correct side
_NUDGE = 1e-13


def _breakpoints(sym):
    if isinstance(sym, (Arg, TrigMonomial)):
        return []
    arcs = [sym.arc] if isinstance(sym, Indicator) else [arc for arc, _ in sym.pieces]
    pts = []
    for arc in arcs:
        for lo, hi in arc.pieces():
            pts += [lo, hi]
    return pts


def simpson_coefficient(sym, k, panels=SIMPSON_PANELS):
    """(1/2pi) int phi(theta) exp(-ik theta) over (-pi, pi] by composite Simpson.

    The window is cut at every discontinuity of the symbol and each smooth
    piece gets a share of the panels proportional to its length.
    """
    cuts = sorted({-math.pi, math.pi, *(p for p in _breakpoints(sym) if -math.pi < p < math.pi)})
    total = 0j
    for lo, hi in zip(cuts, cuts[1:]):
        n = max(2, 2 * int(round(panels * (hi - lo) / (4 * math.pi))))
        theta = np.linspace(lo, hi, n + 1)
        probe = np.clip(theta, lo + _NUDGE, hi - _NUDGE)
        y = np.asarray(sym(probe), dtype=np.complex128) * np.exp(-1j * k * theta)
        total += simpson(y.real, x=theta) + 1j * simpson(y.imag, x=theta)
    return total / (2 * math.pi)


def log_series_coefficients(M):
    """Taylor coefficients 1..M of -i log(1+z).

    Built from d/dz log(1+z) = 1/(1+z): the series of 1/(1+z) comes from
    long division (b_0 = 1, b_j = -b_{j-1}), then a_n = b_{n-1} / n.
    """
    b = np.empty(M)
    b[0] = 1.0
    for j in range(1, M):
        b[j] = -b[j - 1]
    return -1j * b / np.arange(1, M + 1)


def phi_element(n, m):
    """<Phi e_m, e_n> written out directly."""
    if n == m:
        return 0j
    return -1j * (-1) ** ((m - n) % 2) / (m - n)


def brute_phi_matrix(dim):
    return np.array([[phi_element(n, m) for m in range(dim)] for n in range(dim)])


def brute_phi_apply(c, out_len):
    out = np.zeros(out_len, dtype=np.complex128)
    for n in range(out_len):
        acc = 0j
        for m, cm in enumerate(c):
            acc += phi_element(n, m) * cm
        out[n] = acc
    return out


def brute_sesquilinear_defect(c, d):
    """<Nf, Phi g> - <Phi f, Ng> - i <f, g> by explicit double sums."""
    L = max(len(c), len(d))
    c = list(c) + [0j] * (L - len(c))
    d = list(d) + [0j] * (L - len(d))
    nf_phig = 0j
    phif_ng = 0j
    fg = 0j
    for n in range(L):
        phig_n = sum(phi_element(n, m) * d[m] for m in range(L))
        phif_n = sum(phi_element(n, m) * c[m] for m in range(L))
        nf_phig += n * c[n] * np.conj(phig_n)
        phif_ng += phif_n * np.conj(n * d[n])
        fg += c[n] * np.conj(d[n])
    return nf_phig - phif_ng - 1j * fg


def alternating_sum(c):
    return sum(z if j % 2 == 0 else -z for j, z in enumerate(c))
