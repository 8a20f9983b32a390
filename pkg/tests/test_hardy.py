import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phaselab import oracles
from phaselab.hardy import (
    FULL_CIRCLE,
    Arc,
    Arg,
    CoeffVec,
    Indicator,
    Step,
    TrigMonomial,
    eval_at_minus_one,
    fourier_coefficient,
    fourier_coefficients,
    number_operator,
    phi_apply_exact,
    toeplitz,
)


def test_coeffvec_trims_trailing_zeros():
    f = CoeffVec([1, 0, 2j, 0, 0])
    assert f.support_len == 3
    assert CoeffVec([0, 0]).support_len == 0


def test_coeffvec_rejects_non_finite():
    with pytest.raises(ValueError):
        CoeffVec([1, np.inf])


def test_coeffvec_json_round_trip():
    f = CoeffVec([1 + 2j, -0.5, 0, 3j])
    g = CoeffVec.from_json(f.to_json())
    assert np.array_equal(f.coeffs, g.coeffs)
    with pytest.raises(ValueError):
        CoeffVec.from_pairs([1, 2, 3])


def test_coeffvec_arithmetic():
    f = CoeffVec.basis(2) + CoeffVec.basis(0, 3.0)
    assert f.coeffs.tolist() == [3, 0, 1]
    assert (f - f).support_len == 0
    assert (2 * f).inner(f) == pytest.approx(20.0)
    assert f.norm() == pytest.approx(math.sqrt(10))


def test_arc_validation():
    with pytest.raises(ValueError):
        Arc(1.0, 1.0)
    with pytest.raises(ValueError):
        Arc(0.0, 7.0)
    Arc(-math.pi, math.pi)


def test_arc_pieces_wrap():
    assert Arc(2.0, 4.0).pieces() == [(2.0, math.pi), (-math.pi, 4.0 - 2 * math.pi)]
    assert Arc(-7.0, -6.0).pieces() == pytest.approx([(-7.0 + 2 * math.pi, -6.0 + 2 * math.pi)])
    assert FULL_CIRCLE.pieces() == [(-math.pi, math.pi)]


def test_arc_contains_is_half_open():
    arc = Arc(0.0, math.pi / 2)
    assert arc.contains(np.array([0.0, 1e-9, math.pi / 2, math.pi / 2 + 1e-9])).tolist() == [
        False, True, True, False,
    ]
    assert Arc(3.0, 4.0).contains(np.array([-3.0]))[0]


def test_step_rejects_overlap():
    with pytest.raises(ValueError):
        Step(((Arc(0, 1), 1.0), (Arc(0.5, 2), 2.0)))
    Step(((Arc(0, 1), 1.0), (Arc(1, 2), 2.0)))


def test_fourier_examples():
    assert fourier_coefficient(Arg(), 1) == pytest.approx(-1j, abs=1e-16)
    assert fourier_coefficient(Arg(), 0) == 0
    assert fourier_coefficient(Indicator(Arc(0, math.pi)), 1) == pytest.approx(-1j / math.pi, abs=1e-16)
    assert fourier_coefficient(TrigMonomial(3), 3) == 1
    assert fourier_coefficient(TrigMonomial(3), -3) == 0


def test_conjugate_symmetry_is_exact():
    k = np.arange(1, 50)
    for sym in (Arg(), Indicator(Arc(0.3, 2.9)), Indicator(Arc(2.0, 5.5)),
                Step(((Arc(-1, 0.2), 2.0), (Arc(1, 3), -1.5)))):
        assert np.array_equal(fourier_coefficients(sym, -k), np.conj(fourier_coefficients(sym, k)))


@pytest.mark.parametrize("sym", [
    Arg(),
    Indicator(Arc(0.0, math.pi)),
    Indicator(Arc(2.0, 4.5)),
    TrigMonomial(-2),
    Step(((Arc(-2.0, -0.5), 1.25), (Arc(0.1, 2.7), -0.5), (Arc(3.0, 3.5), 2.0))),
], ids=["arg", "half", "wrapped", "monomial", "step"])
def test_quadrature_cross_check(sym):
    for k in range(-16, 17):
        assert abs(fourier_coefficient(sym, k) - oracles.simpson_coefficient(sym, k)) <= 1e-8


def test_toeplitz_phi_matches_matrix_elements():
    # entries[n, m] = -i (-1)^(m-n) / (m-n), off the diagonal
    assert np.max(np.abs(toeplitz(Arg(), 32).entries - oracles.brute_phi_matrix(32))) <= 1e-15


def test_toeplitz_phi2():
    # the (1, 0) entry is <Phi e_0, e_1> = phi_hat(1) = -i
    assert np.array_equal(toeplitz(Arg(), 2).entries, np.array([[0, 1j], [-1j, 0]]))


def test_toeplitz_shift_and_identity():
    for k in range(5):
        assert np.array_equal(toeplitz(TrigMonomial(-k), 6).entries, np.eye(6, k=k))
    assert np.allclose(toeplitz(Indicator(FULL_CIRCLE), 7).entries, np.eye(7), atol=1e-16)
    assert toeplitz(Arg(), 4).hermitian
    assert not toeplitz(TrigMonomial(1), 4).hermitian


def test_number_operator():
    assert number_operator(1).entries.tolist() == [[0]]
    n = number_operator(3)
    assert np.array_equal(n.entries, np.diag([0, 1, 2]))
    assert np.array_equal(n.entries @ CoeffVec.basis(2).padded(3), 2 * CoeffVec.basis(2).padded(3))


def test_phi_apply_examples():
    assert np.allclose(phi_apply_exact(CoeffVec.basis(0), 4).padded(4), [0, -1j, 0.5j, -1j / 3], atol=1e-16)
    assert phi_apply_exact(CoeffVec([]), 4).support_len == 0
    assert phi_apply_exact(CoeffVec([0, 1, 1]), 1).padded(1)[0] == pytest.approx(0.5j)


def test_phi_apply_matches_brute_force(rng):
    c = rng.random(9) + 1j * rng.random(9)
    assert np.allclose(phi_apply_exact(CoeffVec(c), 30).padded(30), oracles.brute_phi_apply(c, 30), atol=1e-14)


def test_phi_apply_reproduces_columns():
    D = 20
    phi = toeplitz(Arg(), D).entries
    for m in range(D):
        for M in (D, D + 7):
            assert np.array_equal(phi_apply_exact(CoeffVec.basis(m), M).padded(D), phi[:, m])


def test_eval_at_minus_one():
    assert eval_at_minus_one(CoeffVec.basis(0)) == 1
    assert eval_at_minus_one(CoeffVec.basis(5) + CoeffVec.basis(6)) == 0
    c = np.zeros(8)
    c[0], c[1::2] = 1.0, 0.25
    assert eval_at_minus_one(CoeffVec(c)) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(14, 30))
def test_monomial_multiplicativity_interior(j, k, D):
    lhs = toeplitz(TrigMonomial(j), D).entries @ toeplitz(TrigMonomial(k), D).entries
    rhs = toeplitz(TrigMonomial(j + k), D).entries
    lo, hi = abs(j) + abs(k), D - abs(j) - abs(k)
    assert np.array_equal(lhs[lo:hi, lo:hi], rhs[lo:hi, lo:hi])


@settings(max_examples=30, deadline=None)
@given(st.floats(-10, 10), st.floats(0.01, 2 * math.pi), st.floats(-10, 10))
def test_indicator_rotation_is_a_fourier_phase(a, length, t):
    arc = Arc(a, a + length)
    k = np.arange(-8, 9)
    lhs = fourier_coefficients(Indicator(arc.rotated(t)), k)
    rhs = np.exp(-1j * k * t) * fourier_coefficients(Indicator(arc), k)
    assert np.allclose(lhs, rhs, atol=1e-12)
