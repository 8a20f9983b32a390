import math

import numpy as np
import pytest

from phaselab import weyl
from phaselab.hardy import Arc


def test_axes_vanish():
    for t in (0.3, 1.0, 2.0):
        assert weyl.weyl_defect(0.0, t, 32) <= 1e-10
    for s in (-2.0, 0.5, 1.0):
        assert weyl.weyl_defect(s, 0.0, 32) <= 1e-10


def test_defect_positive_off_axes():
    for s in (1.0, 2.0):
        for D in (64, 128):
            assert weyl.weyl_defect(s, math.pi / 3, D) > 0.1


def test_defect_bounded_by_two():
    for s, t in [(1.0, 1.0), (2.0, 2.0), (-0.5, math.pi / 4)]:
        assert 0 <= weyl.weyl_defect(s, t, 48) <= 2 + 1e-12


def test_periodicity_in_t():
    # period 2pi for integer s; 4pi for half-integer s
    assert weyl.weyl_defect(1.0, 1.0, 32) == pytest.approx(weyl.weyl_defect(1.0, 1.0 + 2 * math.pi, 32), abs=1e-10)
    assert weyl.weyl_defect(-0.5, 1.0, 32) == pytest.approx(weyl.weyl_defect(-0.5, 1.0 + 4 * math.pi, 32), abs=1e-10)
    assert abs(weyl.weyl_defect(-0.5, 1.0, 32) - weyl.weyl_defect(-0.5, 1.0 + 2 * math.pi, 32)) > 0.01


def test_defect_matches_dense_reference():
    # exp(isPhi) and the spectral norm from LAPACK, as an outside check
    D, s, t = 40, 1.0, 1.0
    phi = weyl.toeplitz(weyl.Arg(), D).entries
    w, u = np.linalg.eigh(phi)
    e = (u * np.exp(1j * s * w)) @ u.conj().T
    ph = np.exp(1j * t * np.arange(D))
    ref = np.linalg.norm(ph[:, None] * e * ph.conj()[None, :] - np.exp(-1j * s * t) * e, 2)
    assert weyl.weyl_defect(s, t, D) == pytest.approx(ref, rel=1e-9)


def test_dim_check():
    with pytest.raises(ValueError):
        weyl.weyl_defect(1.0, 1.0, 1)
    with pytest.raises(ValueError):
        weyl.weyl_scan([], [1.0], [8])


def test_scan_layout_and_stabilization():
    rep = weyl.weyl_scan([1.0, 0.0], [1.0], [32, 16])
    assert [(s, t, d) for s, t, d, _ in rep.grid] == [(1.0, 1.0, 16), (1.0, 1.0, 32), (0.0, 1.0, 16), (0.0, 1.0, 32)]
    stab = rep.stabilization()
    assert len(stab) == 2 and stab[0]["D_from"] == 16 and stab[0]["D_to"] == 32
    assert rep.rows()[0]["defect"] == rep.grid[0][3]


def test_default_grid_has_integer_s():
    assert {1.0, 2.0} <= set(weyl.DEFAULT_S) and 0.0 in weyl.DEFAULT_S and 0.0 in weyl.DEFAULT_T


@pytest.mark.parametrize("arc", [Arc(0.0, math.pi / 2), Arc(-math.pi, math.pi), Arc(2.5, 4.0), Arc(-1.0, 0.2)])
@pytest.mark.parametrize("t", [0.0, 0.7, 2.1, -3.0])
def test_covariance(arc, t):
    assert weyl.covariance_defect(arc, t, 32) <= 1e-12


def test_covariance_example():
    assert weyl.covariance_defect(Arc(0.0, math.pi / 2), 2.1, 128) <= 1e-12


def test_covariance_opposite_rotation_fails():
    # rotating B by +t instead of -t gives an O(1) mismatch
    assert weyl.covariance_defect(Arc(0.0, math.pi / 2), 1.0, 32, rotation=1.0) > 0.1
