"""Model assembly, per-point solvers and parameter sweeps.

Every sweep point is independent; ``jobs > 1`` evaluates points on a thread
pool (the heavy lifting is LAPACK, which releases the GIL) and results are
returned in input order.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    DegenerateSteadyState,
    PerturbativeSolution,
    SteadyStateResult,
    closed_form_sq,
    perturbative_steady_effective,
    perturbative_steady_full,
    steady_state,
)
from .effective import (
    IdealSpinModel,
    beta_scaled_model,
    build_effective_model,
    effective_parameters,
    ideal_spin_model,
    subtract_models,
)
from .observables import ground_block, husimi_max, husimi_q, sync_measure
from .operators import commutator_superop, liouvillian
from .rb87 import (
    RB87,
    DriveConfig,
    PhysicalConstants,
    build_full_hamiltonian,
    full_lindblad_terms,
    to_mhz,
)


def full_liouvillian(drive: DriveConfig, constants: PhysicalConstants = RB87) -> np.ndarray:
    return liouvillian(build_full_hamiltonian(drive), full_lindblad_terms(constants))


def ideal_liouvillian(spec: IdealSpinModel) -> np.ndarray:
    h, terms = ideal_spin_model(spec)
    return liouvillian(h, terms)


def model_liouvillian(model: str, drive: DriveConfig, constants=RB87, ideal=None) -> np.ndarray:
    if model == "full":
        return full_liouvillian(drive, constants)
    if model == "effective":
        return build_effective_model(drive, constants).liouvillian()
    if ideal is None:
        raise ValueError(f"model {model!r} needs ideal spin parameters")
    return ideal_liouvillian(ideal)


# --- probe-off reference / probe perturbation splits -------------------------


def perturbative_full(drive: DriveConfig, constants=RB87, order: int = 1) -> PerturbativeSolution:
    l_ref = full_liouvillian(drive.without_probe(), constants)
    return perturbative_steady_full(l_ref, full_liouvillian(drive, constants) - l_ref, order)


def perturbative_effective(
    drive: DriveConfig, constants=RB87, order: int = 1, beta: float | None = None, approach: int = 1
) -> PerturbativeSolution:
    model = build_effective_model(drive, constants)
    ref = build_effective_model(drive.without_probe(), constants)
    if beta is not None:
        model = beta_scaled_model(model, beta, approach)
        ref = beta_scaled_model(ref, beta, approach)
    return perturbative_steady_effective(ref, subtract_models(model, ref), order)


def perturbative_ideal(spec: IdealSpinModel, order: int = 1) -> PerturbativeSolution:
    """The coherent drive Omega is the perturbation of the ideal spin-1 model."""
    l_ref = ideal_liouvillian(dataclasses.replace(spec, omega=0.0))
    h_drive, _ = ideal_spin_model(
        IdealSpinModel(omega=spec.omega, phi_s=spec.phi_s, expanded=spec.expanded)
    )
    return perturbative_steady_full(l_ref, commutator_superop(h_drive), order)


# --- single-point solvers ----------------------------------------------------


@dataclass
class PointState:
    """Ground-manifold state at one parameter point (None if not unique)."""

    rho: np.ndarray | None
    unique: bool = True
    excited_population: float = 0.0

    @property
    def sq(self) -> float | None:
        return None if self.rho is None else sync_measure(self.rho)


def exact_state(model: str, drive: DriveConfig, constants=RB87, ideal=None, renormalize=False) -> PointState:
    res: SteadyStateResult = steady_state(model_liouvillian(model, drive, constants, ideal))
    if not res.unique:
        return PointState(None, unique=False)
    if model == "full":
        rho = ground_block(res.rho, renormalize=renormalize)
        return PointState(rho, excited_population=float(1 - np.trace(res.rho[:3, :3]).real))
    return PointState(res.rho)


def effective_beta_state(drive: DriveConfig, beta: float, approach: int, constants=RB87) -> PointState:
    model = beta_scaled_model(build_effective_model(drive, constants), beta, approach)
    res = steady_state(model.liouvillian())
    return PointState(res.rho if res.unique else None, unique=res.unique)


def perturbative_state(model: str, drive: DriveConfig, constants=RB87, ideal=None, order=1, renormalize=False):
    try:
        if model == "full":
            sol = perturbative_full(drive, constants, order)
            rho = ground_block(sol.rho, renormalize=renormalize)
            return PointState(rho, excited_population=float(1 - np.trace(sol.rho[:3, :3]).real))
        if model == "effective":
            return PointState(perturbative_effective(drive, constants, order).rho)
        return PointState(perturbative_ideal(ideal, order).rho)
    except DegenerateSteadyState:
        return PointState(None, unique=False)


def phi_max(rho: np.ndarray | None, n_theta: int = 181, n_phi: int = 360) -> float | None:
    if rho is None:
        return None
    rho = rho / np.trace(rho).real
    peak = husimi_max(husimi_q(rho, n_theta, n_phi))
    return peak.phi if peak.phase_preference else None


def _map(fn, items, jobs: int):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# --- sweeps ------------------------------------------------------------------


@dataclass
class SweepResult:
    header: tuple[str, ...]
    rows: list[tuple]
    degenerate: int = 0  # rows whose steady state was not unique


def alpha_sweep(drive, alphas, constants=RB87, order=1, variant="first-order", jobs=1) -> SweepResult:
    def point(alpha):
        d = drive.with_alpha(float(alpha))
        full = exact_state("full", d, constants)
        eff = exact_state("effective", d, constants)
        pert = perturbative_state("effective", d, constants, order=order)
        closed = closed_form_sq(effective_parameters(d, constants), variant) if d.ideal_mapping else None
        return (float(alpha), full.sq, eff.sq, pert.sq, closed), not (full.unique and eff.unique and pert.unique)

    out = _map(point, alphas, jobs)
    return SweepResult(
        ("alpha", "sq_full", "sq_eff", "sq_pert", "sq_closed"),
        [r for r, _ in out],
        sum(bad for _, bad in out),
    )


def delta_b_sweep(drive, delta_b_values, constants=RB87, order=1, jobs=1, n_theta=181, n_phi=360) -> SweepResult:
    """Sweep the ground Zeeman splitting; ``delta_b_values`` in rad/us."""

    def point(db):
        d = drive.replace(delta_b=float(db), delta_b_prime=float(db) * constants.excited_ratio)
        full = exact_state("full", d, constants)
        eff = exact_state("effective", d, constants)
        pert = perturbative_state("effective", d, constants, order=order)
        row = (
            to_mhz(float(db)),
            full.sq,
            eff.sq,
            pert.sq,
            phi_max(full.rho, n_theta, n_phi),
            phi_max(eff.rho, n_theta, n_phi),
            phi_max(pert.rho, n_theta, n_phi),
        )
        return row, not (full.unique and eff.unique and pert.unique)

    out = _map(point, delta_b_values, jobs)
    return SweepResult(
        ("delta_b_mhz", "sq_full", "sq_eff", "sq_pert", "phi_max_full", "phi_max_eff", "phi_max_pert"),
        [r for r, _ in out],
        sum(bad for _, bad in out),
    )


def beta_sweep(drive, betas, approaches=(1, 2), constants=RB87, jobs=1) -> SweepResult:
    params = effective_parameters(drive, constants)
    variant = {1: "approach1", 2: "approach2"}
    points = [(float(b), a) for a in approaches for b in betas]

    def point(item):
        beta, approach = item
        state = effective_beta_state(drive, beta, approach, constants)
        closed = closed_form_sq(params, variant[approach], beta=beta)
        return (beta, approach, state.sq, closed), not state.unique

    out = _map(point, points, jobs)
    return SweepResult(("beta", "approach", "sq_eff", "sq_closed"), [r for r, _ in out], sum(b for _, b in out))
