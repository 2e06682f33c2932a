import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from spinsync.dynamics import (
    CLOSED_FORM_VARIANTS,
    DegenerateSteadyState,
    IntegrationError,
    closed_form_sq,
    evolve,
    perturbative_steady_effective,
    perturbative_steady_full,
    steady_state,
)
from spinsync.effective import build_effective_model, effective_parameters, subtract_models
from spinsync.experiments import full_liouvillian, perturbative_effective
from spinsync.observables import ground_block, sync_measure
from spinsync.operators import liouvillian, vectorize
from spinsync.rb87 import reference_drive, mhz
from strategies import lindblad_systems


@given(lindblad_systems())
def test_steady_state_is_null_psd_unit_trace(system):
    h, terms, _ = system
    res = steady_state(liouvillian(h, terms))
    assert res.unique
    assert np.isclose(np.trace(res.rho), 1, atol=1e-12)
    assert res.residual < 1e-9 * np.linalg.norm(liouvillian(h, terms), 2)
    assert np.linalg.eigvalsh(res.rho).min() >= -1e-10


def test_zero_liouvillian_is_fully_degenerate():
    res = steady_state(np.zeros((9, 9)))
    assert res.null_multiplicity == 9 and not res.unique


def test_pure_dephasing_has_many_steady_states():
    from spinsync.operators import LindbladTerm

    res = steady_state(liouvillian(np.zeros((3, 3)), [LindbladTerm(np.diag([1.0, 0.0, -1.0]), rate=1.0)]))
    assert res.null_multiplicity == 3 and not res.unique


@settings(max_examples=100)
@given(lindblad_systems(), st.floats(min_value=0.05, max_value=1.5))
def test_evolve_matches_matrix_exponential(system, t_end):
    h, terms, rho0 = system
    lv = liouvillian(h, terms)
    t = np.linspace(0, t_end, 4)
    traj = evolve(lv, rho0, t)
    for tt, rho in zip(t, traj):
        ref = (expm(tt * lv) @ vectorize(rho0)).reshape(rho0.shape, order="F")
        assert np.max(np.abs(rho - ref)) < 1e-8


def test_evolve_validates_grid(rng):
    lv = np.zeros((4, 4))
    rho = np.eye(2) / 2
    with pytest.raises(ValueError):
        evolve(lv, rho, [0.5, 1.0])
    with pytest.raises(ValueError):
        evolve(lv, rho, [0.0, 1.0, 0.5])
    assert len(evolve(lv, rho, [0.0, 0.0, 1.0])) == 3


def test_evolve_reports_non_convergence():
    lv = full_liouvillian(reference_drive())
    rho0 = np.zeros((6, 6))
    rho0[0, 0] = 1
    with pytest.raises(IntegrationError) as info:
        evolve(lv, rho0, [0.0, 5.0], max_refinements=2)
    assert info.value.achieved > 1e-10


def test_first_order_matches_closed_form_at_finite_field():
    d = reference_drive()
    sol = perturbative_effective(d, order=1)
    assert abs(np.trace(sol.orders[0]) - 1) < 1e-12
    assert abs(np.trace(sol.orders[1])) < 1e-12
    assert np.isclose(sync_measure(sol.rho), closed_form_sq(effective_parameters(d)), atol=1e-9)
    assert np.isclose(sync_measure(sol.rho), 0.1071615, atol=1e-6)


def test_first_order_matches_dissipative_closed_form():
    d = reference_drive(delta_b=0.0)
    s = sync_measure(perturbative_effective(d, order=1).rho)
    assert np.isclose(s, closed_form_sq(effective_parameters(d), "zero-field"), atol=1e-9)


def test_higher_orders_approach_exact_for_weak_probe():
    d = reference_drive(omega_0=mhz(0.3))
    exact = steady_state(build_effective_model(d).liouvillian()).rho
    errs = [np.max(np.abs(perturbative_effective(d, order=k).rho - exact)) for k in (1, 2, 3)]
    assert errs[2] < errs[0]
    assert errs[2] < 1e-3


def test_full_model_perturbation():
    d = reference_drive()
    l_ref = full_liouvillian(d.without_probe())
    sol = perturbative_steady_full(l_ref, full_liouvillian(d) - l_ref, order=2)
    assert sol.order == 2
    assert all(abs(np.trace(r)) < 1e-12 for r in sol.orders[1:])
    exact = steady_state(full_liouvillian(d)).rho
    assert abs(sync_measure(ground_block(sol.rho)) - sync_measure(ground_block(exact))) < 5e-3
    unperturbed = perturbative_steady_full(l_ref, np.zeros_like(l_ref), order=3)
    assert unperturbed.order == 0


def test_degenerate_reference_is_rejected():
    d = reference_drive(delta_b=0.0, omega_prime=0.0)
    ref = build_effective_model(d.without_probe())
    pert = subtract_models(build_effective_model(d), ref)
    with pytest.raises(DegenerateSteadyState):
        perturbative_steady_effective(ref, pert)


def test_closed_form_identities():
    p = effective_parameters(reference_drive())
    assert np.isclose(closed_form_sq(p, "approach1", beta=1.0), closed_form_sq(p, "first-order"), rtol=1e-12)
    assert np.isclose(closed_form_sq(p, "approach2", beta=1.0), closed_form_sq(p, "first-order"), rtol=1e-12)
    assert np.isclose(closed_form_sq(p, "approach1", beta=0.0), closed_form_sq(p, "approach1-beta0"), rtol=1e-12)
    assert np.isclose(closed_form_sq(p, "approach2", beta=0.0), closed_form_sq(p, "approach2-beta0"), rtol=1e-12)
    with pytest.raises(ValueError):
        closed_form_sq(p, "approach1")
    with pytest.raises(ValueError):
        closed_form_sq(p, "no-such-variant")
    assert set(CLOSED_FORM_VARIANTS) >= {"first-order", "zero-field", "control-limit"}


def test_zero_field_closed_forms():
    p = effective_parameters(reference_drive(delta_b=0.0))
    assert np.isclose(closed_form_sq(p, "first-order"), closed_form_sq(p, "zero-field"), rtol=1e-12)
    # the control-dominated limit differs by the neglected decay rate
    assert abs(closed_form_sq(p, "control-limit") / closed_form_sq(p, "zero-field") - 1) < 0.06


@given(st.floats(min_value=-4 * np.pi, max_value=4 * np.pi))
def test_closed_form_cosine_dependence(alpha):
    base = effective_parameters(reference_drive())
    p = effective_parameters(reference_drive().with_alpha(alpha))
    assert np.isclose(closed_form_sq(p), closed_form_sq(base) * abs(np.cos(alpha / 2)), atol=1e-14)
