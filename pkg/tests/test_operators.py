import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from spinsync.operators import (
    TOL,
    LindbladTerm,
    check_density_matrix,
    commutator_superop,
    cross_dissipator_superop,
    dagger,
    devectorize,
    dissipator_apply,
    dissipator_superop,
    lindblad_rhs,
    liouvillian,
    pure_state,
    random_density_matrix,
    random_hermitian,
    spin_operators,
    transition,
    unitary_exp,
    vectorize,
)
from strategies import lindblad_systems, seeds


def test_tolerance_defaults():
    assert TOL.hermitian == 1e-12
    assert TOL.null_singular_rel == 1e-8
    assert TOL.evolve_local == 1e-10
    assert TOL.husimi_norm == 1e-6


@given(seeds)
def test_kronecker_vectorization_identity(seed):
    rng = np.random.default_rng(seed)
    a, b, rho = (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for _ in range(3))
    lhs = vectorize(a @ rho @ b)
    rhs = np.kron(b.T, a) @ vectorize(rho)
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_vectorize_is_column_major():
    m = np.array([[1, 2], [3, 4]])
    assert list(vectorize(m)) == [1, 3, 2, 4]
    assert np.array_equal(devectorize(vectorize(m)), m)


def test_devectorize_rejects_non_square_length():
    with pytest.raises(ValueError):
        devectorize(np.zeros(5))


@given(lindblad_systems())
def test_liouvillian_matches_direct_rhs(system):
    h, terms, rho = system
    lhs = devectorize(liouvillian(h, terms) @ vectorize(rho))
    assert np.allclose(lhs, lindblad_rhs(h, terms, rho), atol=1e-11)


@given(lindblad_systems())
def test_liouvillian_preserves_trace_and_hermiticity(system):
    h, terms, rho = system
    out = devectorize(liouvillian(h, terms) @ vectorize(rho))
    assert abs(np.trace(out)) < 1e-10
    assert np.max(np.abs(out - dagger(out))) < 1e-10
    # trace functional is a left null vector
    left = vectorize(np.eye(h.shape[0])).conj() @ liouvillian(h, terms)
    assert np.max(np.abs(left)) < 1e-10


def test_decay_of_two_level_atom():
    lower = transition(2, 0, 1)
    term = LindbladTerm(lower, rate=2.0)
    excited = pure_state([0, 1])
    d = dissipator_apply(term, excited)
    assert np.allclose(d, np.diag([2.0, -2.0]))
    assert np.allclose(devectorize(dissipator_superop(term) @ vectorize(excited)), d)


def test_rate_absorbed_amplitude():
    op = np.diag([1.0, 2.0])
    assert LindbladTerm(op).rate_absorbed
    assert np.allclose(LindbladTerm(op, rate=4.0).amplitude(), 2 * op)
    with pytest.raises(ValueError):
        LindbladTerm(op, rate=-1.0)
    with pytest.raises(ValueError):
        LindbladTerm(np.zeros((2, 3)))


@given(seeds)
def test_cross_dissipator_is_interference_part(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    total = dissipator_superop(LindbladTerm(a + b))
    parts = dissipator_superop(LindbladTerm(a)) + dissipator_superop(LindbladTerm(b))
    assert np.allclose(total - parts, cross_dissipator_superop(a, b), atol=1e-10)


def test_dimension_mismatch_raises():
    with pytest.raises(ValueError):
        dissipator_apply(LindbladTerm(np.eye(2)), np.eye(3) / 3)
    with pytest.raises(ValueError):
        liouvillian(np.eye(3), [LindbladTerm(np.eye(2))])


def test_liouvillian_rejects_non_hermitian_hamiltonian():
    with pytest.raises(ValueError, match="Hermitian"):
        liouvillian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_commutator_superop_sign():
    h = np.diag([1.0, -1.0])
    rho = np.array([[0, 1], [0, 0]], dtype=complex)
    # -i[h, |0><1|] = -2i |0><1|
    assert np.allclose(devectorize(commutator_superop(h) @ vectorize(rho)), -2j * rho)


@pytest.mark.parametrize("spin", [0.5, 1, 1.5, 2])
def test_spin_algebra(spin):
    sx, sy, sz, sp, sm = spin_operators(spin)
    assert np.allclose(sx @ sy - sy @ sx, 1j * sz)
    casimir = sx @ sx + sy @ sy + sz @ sz
    assert np.allclose(casimir, spin * (spin + 1) * np.eye(sz.shape[0]))
    assert np.allclose(sp, sx + 1j * sy)
    assert sz[0, 0] == spin  # basis ordered +S..-S


@given(seeds, st.floats(min_value=0.01, max_value=3.0))
def test_unitary_exp_matches_power_series(seed, scale):
    rng = np.random.default_rng(seed)
    a = random_hermitian(3, rng, scale=scale)
    x = -1j * a
    series = np.eye(3, dtype=complex)
    term = np.eye(3, dtype=complex)
    for k in range(1, 60):
        term = term @ x / k
        series = series + term
    u = unitary_exp(a)
    assert np.allclose(u, series, atol=1e-12)
    assert np.allclose(u @ dagger(u), np.eye(3), atol=1e-12)


def test_unitary_exp_rejects_non_hermitian():
    with pytest.raises(ValueError):
        unitary_exp(np.array([[0, 1], [0, 0]], dtype=complex))


@given(lindblad_systems(dim=3))
def test_liouvillian_propagator_is_cptp_on_samples(system):
    h, terms, rho = system
    rho_t = devectorize(expm(0.3 * liouvillian(h, terms)) @ vectorize(rho))
    check_density_matrix(rho_t, tol=1e-9)


def test_check_density_matrix_errors(rng):
    rho = random_density_matrix(3, rng)
    assert check_density_matrix(rho) is not None
    with pytest.raises(ValueError, match="trace"):
        check_density_matrix(2 * rho)
    with pytest.raises(ValueError, match="Hermitian"):
        check_density_matrix(rho + np.triu(np.ones((3, 3)), 1) * 0.1)
    with pytest.raises(ValueError, match="negative"):
        check_density_matrix(np.diag([1.5, -0.5, 0.0]))


def test_random_density_matrix_rank(rng):
    rho = random_density_matrix(4, rng, rank=1)
    assert np.linalg.matrix_rank(rho, tol=1e-10) == 1
    assert np.isclose(np.trace(rho), 1)
