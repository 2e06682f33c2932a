import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinsync.operators import is_hermitian
from spinsync.rb87 import (
    RB87,
    DriveConfig,
    PhysicalConstants,
    build_full_hamiltonian,
    reference_drive,
    full_lindblad_terms,
    mhz,
    rotating_frame_energies,
    to_mhz,
    zeeman_shifts,
)

angles = st.floats(min_value=-np.pi, max_value=np.pi)
freqs = st.floats(min_value=0.0, max_value=60.0)


def test_constants():
    assert np.isclose(to_mhz(RB87.gamma_aux_dprime), 6.065)
    assert np.isclose(to_mhz(RB87.gamma_aux_prime), 5.746)
    assert np.isclose(RB87.excited_ratio, 0.23 / 0.70)
    with pytest.raises(ValueError):
        PhysicalConstants(gamma_aux_dprime=0.0)


def test_zeeman_shifts_per_gauss():
    db, dbp = zeeman_shifts(1.0)
    assert np.isclose(db, mhz(0.70)) and np.isclose(dbp, mhz(0.23))


def test_delta_b_prime_follows_ratio():
    d = DriveConfig(delta_b=mhz(0.4))
    assert np.isclose(to_mhz(d.delta_b_prime), 0.4 * 0.23 / 0.70)
    assert np.isclose(to_mhz(d.replace(delta_b=mhz(0.2)).delta_b_prime), 0.2 * 0.23 / 0.70)
    assert d.replace(delta_b=1.0, delta_b_prime=5.0).delta_b_prime == 5.0


def test_ideal_mapping_validation():
    with pytest.raises(ValueError):
        DriveConfig(omega_plus1=1.0, omega_minus1=2.0, ideal_mapping=True)
    with pytest.raises(ValueError):
        DriveConfig(omega_plus1=1.0, omega_minus1=1.0, delta_pi_prime=0.1, ideal_mapping=True)
    with pytest.raises(ValueError):
        DriveConfig(omega_0=-1.0)


@given(st.floats(-10, 10), angles, angles, angles)
def test_with_alpha(alpha, p1, p0, m1):
    d = reference_drive(phi_plus1=p1, phi_0=p0, phi_minus1=m1).with_alpha(alpha)
    assert np.isclose(d.alpha, alpha, atol=1e-12)
    assert np.isclose(d.phi_0, p0)
    assert np.isclose(d.phi_minus1 - d.phi_plus1, m1 - p1, atol=1e-12)


def test_rotating_frame_energies_symmetric_case():
    d = DriveConfig(delta_b=1.0, delta_b_prime=0.25)
    assert rotating_frame_energies(d) == (-1.0, 0.0, 1.0, 0.0, -0.25, 0.25)


@given(freqs, freqs, freqs, freqs, angles, angles, angles, angles, st.floats(-10, 10))
def test_hamiltonian_literal_transcription(op1, o0, om1, opr, p1, p0, m1, pp, db):
    d = DriveConfig(
        omega_plus1=op1, omega_0=o0, omega_minus1=om1, omega_prime=opr,
        phi_plus1=p1, phi_0=p0, phi_minus1=m1, phi_prime=pp, delta_b=db,
    )
    h = build_full_hamiltonian(d)
    dbp = d.delta_b_prime
    e = np.exp
    ref = np.array(
        [
            [-db, 0, 0, -op1 * e(-1j * p1) / 2, -opr * e(-1j * pp) / 2, 0],
            [0, 0, 0, -o0 * e(-1j * p0) / 2, 0, 0],
            [0, 0, db, -om1 * e(-1j * m1) / 2, 0, -opr * e(-1j * pp) / 2],
            [-op1 * e(1j * p1) / 2, -o0 * e(1j * p0) / 2, -om1 * e(1j * m1) / 2, 0, 0, 0],
            [-opr * e(1j * pp) / 2, 0, 0, 0, -dbp, 0],
            [0, 0, -opr * e(1j * pp) / 2, 0, 0, dbp],
        ]
    )
    assert np.allclose(h, ref, atol=1e-12)
    assert is_hermitian(h)


def test_lindblad_channels():
    terms = full_lindblad_terms()
    assert len(terms) == 7
    out = {}
    for t in terms:
        l = int(np.argmax(np.abs(t.operator).sum(axis=0)))
        out[l] = out.get(l, 0.0) + t.rate
    assert np.isclose(out[3], RB87.gamma_aux_dprime)
    assert np.isclose(out[4], RB87.gamma_aux_prime)
    assert np.isclose(out[5], RB87.gamma_aux_prime)
    # no decay from |5> into |3> or from |6> into |1>
    assert all(t.operator[2, 4] == 0 and t.operator[0, 5] == 0 for t in terms)


def test_reference_drive_defaults():
    d = reference_drive()
    assert np.isclose(to_mhz(d.omega_plus1), 9.5)
    assert np.isclose(to_mhz(d.omega_0), 1.0)
    assert np.isclose(to_mhz(d.omega_prime), 3.0)
    assert d.alpha == 0.0 and d.ideal_mapping
    assert d.without_probe().omega_0 == 0.0
