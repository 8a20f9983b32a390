import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phaselab import commutator, oracles
from phaselab.hardy import CoeffVec, eval_at_minus_one, phi_apply_exact

coeffs = st.lists(
    st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=25
)


def test_defect_examples():
    f = CoeffVec([1, 1])
    assert abs(commutator.sesquilinear_defect(f, f)) <= 1e-15
    assert commutator.sesquilinear_defect(CoeffVec([1]), CoeffVec([1])) == pytest.approx(-1j)
    assert abs(commutator.sesquilinear_defect(CoeffVec([1]), f)) <= 1e-15


def test_defect_matches_brute_force(rng):
    for _ in range(20):
        c = rng.random(rng.integers(1, 12)) + 1j * rng.random(rng.integers(1, 12)).mean()
        d = rng.random(rng.integers(1, 12)) * (1 - 1j)
        lab = commutator.sesquilinear_defect(CoeffVec(c), CoeffVec(d))
        assert lab == pytest.approx(oracles.brute_sesquilinear_defect(c, d), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(coeffs, coeffs)
def test_defect_law(c, d):
    f, g = CoeffVec(c), CoeffVec(d)
    law = -1j * eval_at_minus_one(f) * np.conj(eval_at_minus_one(g))
    defect = commutator.sesquilinear_defect(f, g)
    assert abs(defect - law) <= 1e-10 * max(1.0, f.norm() * g.norm())
    assert abs(defect + np.conj(commutator.sesquilinear_defect(g, f))) <= 1e-12 * max(1.0, f.norm() * g.norm())


def test_membership():
    assert commutator.in_commutator_domain(CoeffVec([1, 1]))
    assert not commutator.in_commutator_domain(CoeffVec([1]))
    assert commutator.in_commutator_domain(commutator.density_witness(100)[0])


def test_residuals_on_Y():
    f = CoeffVec.basis(3) + CoeffVec.basis(4)
    rep = commutator.heisenberg_residuals(f, [8, 64, 300])
    assert all(r <= 1e-12 for _, r in rep.residuals)
    rep = commutator.heisenberg_residuals(commutator.density_witness(4)[0], [16, 100])
    assert all(r <= 1e-12 for _, r in rep.residuals)


def test_residuals_of_e0_are_sqrt_D():
    rep = commutator.heisenberg_residuals(CoeffVec.basis(0), [1024, 64, 256])
    assert [d for d, _ in rep.residuals] == [64, 256, 1024]
    for d, r in rep.residuals:
        assert abs(r * r - d) <= 1e-10 * d
    assert rep.slope == pytest.approx(1.0)
    assert rep.rows()[0]["residual_sq_over_D"] == pytest.approx(1.0)


def test_residual_vector_brute_force():
    # ([Phi,N] e_0 - i e_0)_n has modulus 1 for every n, checked by loops
    D = 64
    phi = oracles.brute_phi_matrix(D)
    n = np.diag(np.arange(D))
    e0 = np.zeros(D)
    e0[0] = 1
    # Phi N e_0 = 0, so only -N Phi e_0 - i e_0 remains; no truncation enters
    brute = -(n @ phi @ e0) - 1j * e0
    lab = commutator.heisenberg_residual_vector(CoeffVec.basis(0), D)
    assert np.allclose(lab, brute, atol=1e-15)
    assert np.allclose(np.abs(lab), 1.0, atol=1e-15)


def test_residual_coordinates_are_minus_i_S_alternating(rng):
    c = rng.random(6) + 1j * rng.random(6)
    f = CoeffVec(c)
    v = commutator.heisenberg_residual_vector(f, 40)
    S = eval_at_minus_one(f)
    assert np.allclose(v, -1j * S * (-1.0) ** np.arange(40), atol=1e-13)


def test_residual_dimension_check():
    with pytest.raises(ValueError):
        commutator.heisenberg_residual_vector(CoeffVec([1]), 0)
    with pytest.raises(ValueError):
        commutator.heisenberg_residuals(CoeffVec([1]), [])


def test_residuals_below_support_are_exact():
    # D smaller than the support: Phi still acts on all of f
    f = commutator.density_witness(100)[0]
    assert f.support_len == 200
    assert commutator.heisenberg_residuals(f, [64]).residuals[0][1] <= 1e-12


def test_density_witness():
    f, dist = commutator.density_witness(1)
    assert f.coeffs.tolist() == [1, 1] and dist == 1.0
    f, dist = commutator.density_witness(4)
    assert np.flatnonzero(f.coeffs).tolist() == [0, 1, 3, 5, 7]
    assert dist == 0.25
    assert commutator.density_witness(100)[1] == pytest.approx(0.01, abs=1e-15)
    with pytest.raises(ValueError):
        commutator.density_witness(0)


@pytest.mark.parametrize("M", [1, 10, 1000, 10000])
def test_graph_norm_witness_exact(M):
    assert commutator.graph_norm_witness(M) == M


def test_log_series():
    assert commutator.log_series_crosscheck(1) <= 1e-15
    assert commutator.log_series_crosscheck(100) <= 1e-15
    ref = oracles.log_series_coefficients(100)
    assert np.max(np.abs(phi_apply_exact(CoeffVec.basis(0), 101).padded(101)[1:] - ref)) <= 1e-15


def test_cancellation_cases():
    rep = commutator.cancellation_report(CoeffVec([1]), 512)
    assert np.allclose(rep.terms[1:], 1.0, rtol=0, atol=1e-15)
    assert rep.tail_average == pytest.approx(1.0, abs=1e-15)
    rep = commutator.cancellation_report(CoeffVec([2]), 512)
    assert abs(rep.tail_average - 4) <= rep.tolerance()
    small = commutator.cancellation_report(CoeffVec([1, 1]), 128).tail_average
    rep = commutator.cancellation_report(CoeffVec([1, 1]), 512)
    assert rep.tail_average <= 1e-3 and rep.tail_average < small
    assert np.all(rep.terms >= 0)
    assert rep.rows()[-1]["partial_sum"] == pytest.approx(rep.terms.sum())


def test_cancellation_S0_reaches_floor():
    rep = commutator.cancellation_report(CoeffVec([1, 1]), 2 ** 17)
    assert rep.tail_average <= rep.tolerance()


def test_cancellation_random_S(rng):
    c = rng.random(5) + 1j * rng.random(5)
    rep = commutator.cancellation_report(CoeffVec(c), 4096)
    assert abs(rep.tail_average - abs(rep.S) ** 2) <= rep.tolerance()


def test_cancellation_preconditions():
    with pytest.raises(ValueError):
        commutator.cancellation_report(CoeffVec([1, 2, 3]), 12)
    with pytest.raises(ValueError):
        commutator.cancellation_report(CoeffVec([]), 100)
