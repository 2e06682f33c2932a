import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinsync.effective import (
    IdealSpinModel,
    SingularityError,
    auxiliary_operators,
    beta_scaled_model,
    build_effective_model,
    effective_hamiltonian,
    effective_hamiltonian_closed_form,
    effective_lindblad_terms,
    effective_parameters,
    ideal_effective_hamiltonian,
    ideal_spin_model,
    lindblad_coefficient,
    partition,
    subtract_models,
)
from spinsync.operators import spin_operators, vectorize
from spinsync.rb87 import RB87, DriveConfig, build_full_hamiltonian, reference_drive, mhz, to_mhz

angles = st.floats(min_value=-np.pi, max_value=np.pi)
zeeman = st.floats(min_value=-2.0, max_value=2.0).map(mhz)
small = st.floats(min_value=0.0, max_value=2.0).map(mhz)


@given(angles, angles, angles, angles, zeeman, small)
def test_numeric_reduction_matches_spin1_form(p1, p0, m1, pp, db, o0):
    d = reference_drive(delta_b=db, omega_0=o0, phi_plus1=p1, phi_0=p0, phi_minus1=m1, phi_prime=pp)
    model = build_effective_model(d)
    ref = ideal_effective_hamiltonian(effective_parameters(d))
    assert np.allclose(model.h_eff, ref, atol=1e-10)


@given(
    st.floats(0, 12).map(mhz), st.floats(0, 2).map(mhz), st.floats(0, 12).map(mhz),
    st.floats(0, 5).map(mhz), angles, angles, angles, zeeman,
    st.floats(-3, 3).map(mhz), st.floats(-3, 3).map(mhz), st.floats(-3, 3).map(mhz),
)
def test_general_detuning_closed_form(op1, o0, om1, opr, p1, p0, m1, db, d2, ds, d1):
    d = DriveConfig(
        omega_plus1=op1, omega_0=o0, omega_minus1=om1, omega_prime=opr,
        phi_plus1=p1, phi_0=p0, phi_minus1=m1, delta_b=db,
        delta_pi_dprime=d2, delta_sigma_dprime=ds, delta_pi_prime=d1,
    )
    h = effective_hamiltonian(partition(build_full_hamiltonian(d)))
    assert np.allclose(h, effective_hamiltonian_closed_form(d), atol=1e-10)


@given(angles, angles, zeeman)
def test_matrix_route_equals_coefficient_route(p1, m1, db):
    d = reference_drive(delta_b=db, phi_plus1=p1, phi_minus1=m1)
    parts = partition(build_full_hamiltonian(d))
    matrix = auxiliary_operators(parts)
    coeff = effective_lindblad_terms(parts)
    for a, b in zip(matrix, coeff):
        assert np.allclose(a, b.operator, atol=1e-12)


def test_single_coefficient_literal():
    d = reference_drive(phi_plus1=0.3)
    h = build_full_hamiltonian(d)
    g2 = RB87.gamma_aux_dprime
    # |1> -> |4> -> |2>: sqrt(G''/3) * (-Omega_+1 e^{i phi_+1} / 2) / (0 - (-dB) - i G''/2)
    expected = np.sqrt(g2 / 3) * (-d.omega_plus1 * np.exp(0.3j) / 2) / (d.delta_b - 0.5j * g2)
    assert np.isclose(lindblad_coefficient(h, 1, 0, 3, g2 / 3, g2), expected)
    model = build_effective_model(d)
    assert np.isclose(model.coefficient(2, 1, 4), expected)


def test_zero_denominator_raises():
    h = np.zeros((6, 6))
    h[3, 0] = h[0, 3] = 1.0
    with pytest.raises(ValueError, match="denominator"):
        lindblad_coefficient(h, 1, 0, 3, 1.0, 0.0)


def test_singular_projection_raises():
    parts = partition(build_full_hamiltonian(DriveConfig()))
    with pytest.raises(SingularityError, match="k=1"):
        effective_hamiltonian(parts, terms=[])


def test_effective_parameters_at_zero_field():
    p = effective_parameters(reference_drive(delta_b=0.0))
    assert p.delta_eff == 0 and p.omega_eff == 0
    # the sign convention sgn(0) = 0 leaves phi_eff = phi_-1 - phi_0 + pi
    assert np.isclose(p.phi_eff, np.pi)
    assert np.isclose(p.gamma_control, 9.5**2 * mhz(1) ** 2 / (3 * RB87.gamma_aux_dprime))


def test_effective_parameters_require_ideal_mapping():
    with pytest.raises(ValueError):
        effective_parameters(DriveConfig(omega_plus1=1.0, omega_minus1=1.0))


@pytest.mark.parametrize("db", [0.0, 0.2, 0.4])
def test_probe_rate_independent_of_field(db):
    p = effective_parameters(reference_drive(delta_b=mhz(db)))
    assert np.isclose(to_mhz(p.gamma_probe), 0.054963, atol=1e-5)


def test_effective_liouvillian_preserves_trace(rng):
    lv = build_effective_model(reference_drive()).liouvillian()
    assert np.max(np.abs(vectorize(np.eye(3)).conj() @ lv)) < 1e-10


def test_subtract_models_roundtrip():
    d = reference_drive()
    model = build_effective_model(d)
    ref = build_effective_model(d.without_probe())
    diff = subtract_models(model, ref)
    for t, r, p in zip(model.terms, ref.terms, diff.terms):
        assert np.allclose(r.operator + p.operator, t.operator)
    assert np.allclose(ref.h_eff + diff.h_eff, model.h_eff)


def test_beta_scaling():
    model = build_effective_model(reference_drive())
    assert beta_scaled_model(model, 1.0, 1) is model
    zero1 = beta_scaled_model(model, 0.0, 1)
    assert np.all(zero1.term(1, 4).operator == 0)
    assert np.all(zero1.term(2, 4).operator == 0)
    assert zero1.coefficient(1, 1, 5) == 0 and zero1.coefficient(3, 3, 6) == 0
    assert zero1.coefficient(2, 1, 5) == model.coefficient(2, 1, 5)
    zero2 = beta_scaled_model(model, 0.0, 2)
    assert zero2.coefficient(2, 1, 4) == model.coefficient(2, 1, 4)
    assert zero2.coefficient(2, 3, 4) == model.coefficient(2, 3, 4)
    assert zero2.coefficient(2, 2, 4) == 0
    with pytest.raises(ValueError):
        beta_scaled_model(model, 1.5, 1)
    with pytest.raises(ValueError):
        beta_scaled_model(model, 0.5, 3)


def test_ideal_spin_model_structure():
    _, _, sz, sp, sm = spin_operators(1)
    h, (gain, damp) = ideal_spin_model(IdealSpinModel(delta=1.0, omega=0.4, phi_s=0.2, gamma_g=2.0, gamma_d=3.0))
    assert np.allclose(h, h.conj().T)
    assert np.allclose(np.diag(h).real, [1, 0, -1])
    # gain moves |-1> to |0>, damping moves |+1> to |0>
    assert np.isclose(abs(gain.operator[1, 2]), 1.0) and np.count_nonzero(gain.operator) == 1
    assert np.isclose(abs(damp.operator[1, 0]), 1.0) and np.count_nonzero(damp.operator) == 1
    assert gain.rate == 2.0 and damp.rate == 3.0
    hx, _ = ideal_spin_model(IdealSpinModel(delta=1.0, omega=0.4, phi_s=0.2, expanded=True))
    assert np.allclose(hx[0, 1], -h[0, 1]) and np.allclose(hx[1, 2], h[1, 2])
    with pytest.raises(ValueError):
        IdealSpinModel(gamma_g=-1.0)
