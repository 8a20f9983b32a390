import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from phaselab import linalg
from phaselab.hardy import Arg, number_operator, toeplitz
from phaselab.linalg import (
    DimensionError,
    EigenConvergenceError,
    TruncatedOperator,
    hermitian_eigen,
    matrix_algebra,
    operator_norm,
    unitary_exp,
)


def random_hermitian(rng, d):
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return TruncatedOperator(x + x.conj().T)


def test_hermitian_flag_is_computed():
    assert TruncatedOperator(np.array([[1, 2j], [-2j, 3]])).hermitian
    assert not TruncatedOperator(np.array([[1, 2j], [2j, 3]])).hermitian


def test_hermitian_flag_cannot_be_forced():
    with pytest.raises(ValueError):
        TruncatedOperator(np.array([[0, 1], [0, 0]]), hermitian=True)


def test_rejects_bad_shapes_and_values():
    with pytest.raises(DimensionError):
        TruncatedOperator(np.zeros((2, 3)))
    with pytest.raises(DimensionError):
        TruncatedOperator(np.zeros((0, 0)))
    with pytest.raises(ValueError):
        TruncatedOperator(np.array([[np.nan]]))


def test_dimension_cap(monkeypatch):
    monkeypatch.setattr(linalg, "MAX_DIM", 4)
    with pytest.raises(DimensionError):
        TruncatedOperator(np.eye(5))


def test_entries_are_read_only():
    m = TruncatedOperator(np.eye(2))
    with pytest.raises(ValueError):
        m.entries[0, 0] = 3


def test_matrix_algebra_kinds():
    n = number_operator(4)
    phi = toeplitz(Arg(), 4)
    assert np.array_equal(matrix_algebra("adjoint", n).entries, n.entries)
    assert np.allclose(matrix_algebra("mul", TruncatedOperator.identity(4), phi).entries, phi.entries)
    diff = matrix_algebra("sub", phi, matrix_algebra("adjoint", phi))
    assert np.max(np.abs(diff.entries)) <= 1e-13
    assert np.allclose(matrix_algebra("add", n, n).entries, 2 * n.entries)
    scaled = matrix_algebra("scale", n, scalar=1j)
    assert not scaled.hermitian
    assert np.allclose(scaled.entries, 1j * n.entries)


def test_matrix_algebra_errors():
    with pytest.raises(DimensionError, match="mismatch"):
        matrix_algebra("add", number_operator(2), number_operator(3))
    with pytest.raises(ValueError):
        matrix_algebra("mul", number_operator(2))
    with pytest.raises(ValueError):
        matrix_algebra("frobnicate", number_operator(2), number_operator(2))


def test_eigen_of_diagonal(backend):
    e = hermitian_eigen(number_operator(4))
    assert np.array_equal(e.eigenvalues, [0, 1, 2, 3])
    assert np.array_equal(e.vectors, np.eye(4))


def test_eigen_phi2(backend):
    e = hermitian_eigen(toeplitz(Arg(), 2))
    assert np.allclose(e.eigenvalues, [-1, 1], atol=1e-15)


def test_eigen_random_64(rng, backend):
    m = random_hermitian(rng, 64)
    e = hermitian_eigen(m)
    assert np.all(np.diff(e.eigenvalues) >= 0)
    assert np.linalg.norm(e.reconstruct() - m.entries) <= 1e-9 * np.linalg.norm(m.entries)
    assert np.linalg.norm(e.vectors.conj().T @ e.vectors - np.eye(64), 2) <= 1e-10
    assert np.allclose(e.eigenvalues, np.linalg.eigvalsh(m.entries), atol=1e-11)


def test_eigen_odd_dimension(rng, backend):
    m = random_hermitian(rng, 7)
    e = hermitian_eigen(m)
    assert np.linalg.norm(e.reconstruct() - m.entries) <= 1e-12 * np.linalg.norm(m.entries)


def test_eigen_zero_and_one_by_one(backend):
    assert hermitian_eigen(TruncatedOperator.zeros(3)).eigenvalues.tolist() == [0, 0, 0]
    assert hermitian_eigen(TruncatedOperator(np.array([[2.5]]))).eigenvalues.tolist() == [2.5]


def test_eigen_tiny_entries(backend):
    # entries far below the rotation threshold must not overflow
    m = TruncatedOperator(np.array([[1.0, 1e-300], [1e-300, 2.0]]))
    assert hermitian_eigen(m).eigenvalues.tolist() == [1.0, 2.0]


def test_eigen_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eigen(TruncatedOperator(np.array([[0, 1], [0, 0]])))


def test_eigen_budget_exhausted(rng):
    m = random_hermitian(rng, 16)
    with pytest.raises(EigenConvergenceError) as info:
        hermitian_eigen(m, max_sweeps=1)
    assert info.value.residual > 1e-12
    assert info.value.sweeps == 1


def test_backends_agree(rng):
    if len(linalg.available_backends()) < 2:
        pytest.skip("compiled kernel not built")
    m = random_hermitian(rng, 33)
    out = {}
    for b in linalg.available_backends():
        previous = linalg.set_backend(b)
        try:
            out[b] = hermitian_eigen(m)
        finally:
            linalg.set_backend(previous)
    a, b = out.values()
    assert a.sweeps == b.sweeps
    assert np.allclose(a.eigenvalues, b.eigenvalues, atol=1e-12)


def test_unknown_backend():
    with pytest.raises(ValueError):
        linalg.set_backend("fortran")


def test_unitary_exp_examples():
    assert np.allclose(unitary_exp(toeplitz(Arg(), 5), 0.0).entries, np.eye(5), atol=1e-14)
    t = 0.3
    u = unitary_exp(number_operator(4), t).entries
    assert np.allclose(u, np.diag(np.exp(1j * t * np.arange(4))), atol=1e-15)
    w = np.linalg.eigvals(unitary_exp(toeplitz(Arg(), 2), math.pi / 2).entries)
    assert np.allclose(sorted(w, key=lambda z: z.imag), [-1j, 1j], atol=1e-14)


def test_unitary_exp_rejects_non_hermitian():
    with pytest.raises(ValueError):
        unitary_exp(TruncatedOperator(np.array([[0, 1], [0, 0]])), 1.0)


def test_operator_norm_examples():
    assert operator_norm(TruncatedOperator.identity(6)) == pytest.approx(1.0, abs=1e-15)
    assert operator_norm(toeplitz(Arg(), 2)) == pytest.approx(1.0, abs=1e-15)
    assert 0 < operator_norm(toeplitz(Arg(), 128)) <= math.pi


def test_operator_norm_non_hermitian(rng):
    x = rng.normal(size=(20, 20)) + 1j * rng.normal(size=(20, 20))
    assert operator_norm(TruncatedOperator(x)) == pytest.approx(np.linalg.norm(x, 2), rel=1e-10)
    assert operator_norm(TruncatedOperator(np.eye(3, k=1))) == pytest.approx(1.0)


hermitian_4 = arrays(np.complex128, (4, 4), elements=st.complex_numbers(max_magnitude=10, allow_nan=False,
                                                                           allow_infinity=False))


@settings(max_examples=40, deadline=None)
@given(hermitian_4, st.floats(-5, 5), st.floats(-5, 5))
def test_unitary_group_laws(x, s, t):
    m = TruncatedOperator(x + x.conj().T)
    e = hermitian_eigen(m)
    us, ut = unitary_exp(m, s, e).entries, unitary_exp(m, t, e).entries
    assert np.linalg.norm(us @ unitary_exp(m, -s, e).entries - np.eye(4), 2) <= 1e-10
    assert np.linalg.norm(us @ ut - unitary_exp(m, s + t, e).entries, 2) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(hermitian_4, hermitian_4)
def test_submultiplicative(x, y):
    a, b = TruncatedOperator(x), TruncatedOperator(y)
    assert operator_norm(a @ b) <= operator_norm(a) * operator_norm(b) + 1e-9
