"""Acceptance suite: eleven numbered checks with measured values and bounds.

Each criterion returns a :class:`CriterionResult` built from one or more
sub-checks; the report prints one ``PASS``/``FAIL`` line per criterion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import closed_form_sq, evolve, steady_state
from .effective import (
    IdealSpinModel,
    build_effective_model,
    effective_parameters,
)
from .experiments import (
    effective_beta_state,
    exact_state,
    ideal_liouvillian,
    perturbative_effective,
    perturbative_ideal,
    perturbative_state,
    phi_max,
)
from .observables import husimi_max, husimi_q, phase_distance, sync_measure
from .operators import (
    LindbladTerm,
    basis_projector,
    devectorize,
    liouvillian,
    random_density_matrix,
    random_hermitian,
    vectorize,
)
from .oracles import OracleParams, case_i_solution, case_ii_solution, case_iii_solution
from .rb87 import RB87, PhysicalConstants, reference_drive, mhz, to_mhz

# Reference values (units of 2 pi MHz) of the effective-model parameters at
# Omega_+-1 = 9.5, Omega_0 = 1, Omega' = 3, for Delta_B = 0, 0.2, 0.4.
REFERENCE_PARAMETERS = {
    "abs_delta_eff": (0.0, 0.725, 1.437),
    "abs_h23": (0.0, 0.026, 0.051),
    "gamma_control": (4.961, 4.939, 4.875),
    "gamma_probe": (0.055, 0.055, 0.055),
    "gamma_decay": (0.783, 0.781, 0.776),
    "sqrt_control_probe": (0.522, 0.521, 0.518),
}
REFERENCE_DELTA_B_MHZ = (0.0, 0.2, 0.4)

PHI_MAX_ALPHA0 = 0.815 * np.pi
THETA_TOL = 0.05
PHI_TOL = 0.02 * np.pi


@dataclass
class Check:
    label: str
    value: float
    bound: float
    relation: str = "<="  # or ">"

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return False
        return self.value <= self.bound if self.relation == "<=" else self.value > self.bound

    def __str__(self) -> str:
        return f"{self.label}={self.value:.4g}{self.relation}{self.bound:.4g}"


@dataclass
class CriterionResult:
    cid: int
    name: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        detail = "; ".join(f"{c}{'' if c.passed else ' !'}" for c in self.checks)
        return f"{status} {self.cid:2d} {self.name}: {detail}"


def _table_values(constants: PhysicalConstants) -> dict[str, list[float]]:
    out = {k: [] for k in REFERENCE_PARAMETERS}
    for db in REFERENCE_DELTA_B_MHZ:
        p = effective_parameters(reference_drive(delta_b=mhz(db)), constants)
        out["abs_delta_eff"].append(abs(p.delta_eff))
        out["abs_h23"].append(abs(p.h23))
        out["gamma_control"].append(p.gamma_control)
        out["gamma_probe"].append(p.gamma_probe)
        out["gamma_decay"].append(p.gamma_decay)
        out["sqrt_control_probe"].append(p.sqrt_control_probe)
    return {k: [to_mhz(x) for x in v] for k, v in out.items()}


def criterion_table(constants=RB87) -> CriterionResult:
    values = _table_values(constants)
    worst = max(abs(a - b) for k in REFERENCE_PARAMETERS for a, b in zip(values[k], REFERENCE_PARAMETERS[k]))
    return CriterionResult(1, "table-regression", [Check("max_dev_mhz", worst, 1e-3)])


def oracle_errors(constants=RB87, seed: int = 7, n_states: int = 3) -> dict[str, float]:
    """Max element-wise |analytic - evolve| per oracle case over [0, 2] us."""
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 2.0, 20)
    cases = {
        "i": (reference_drive(delta_b=0.0, omega_0=0.0, omega_prime=0.0, phi_plus1=0.4, phi_minus1=-0.9), case_i_solution),
        "ii": (reference_drive(delta_b=0.0, omega_0=0.0), case_ii_solution),
        "iii": (reference_drive(omega_0=0.0, omega_plus1=0.0, omega_minus1=0.0), case_iii_solution),
    }
    out = {}
    for name, (drive, solution) in cases.items():
        lv = build_effective_model(drive, constants).liouvillian()
        params = OracleParams.from_drive(drive, constants)
        err = 0.0
        for _ in range(n_states):
            rho0 = random_density_matrix(3, rng)
            for tt, rho in zip(t, evolve(lv, rho0, t)):
                exact = solution(rho0, tt, params)
                if name == "ii":
                    err = max(err, abs(exact[0] - rho[1, 1]), abs(exact[1] - rho[0, 2]))
                else:
                    err = max(err, float(np.max(np.abs(exact - rho))))
        out[name] = err
    return out


def criterion_oracles(constants=RB87) -> CriterionResult:
    errs = oracle_errors(constants)
    return CriterionResult(2, "oracle-equivalence", [Check(f"case_{k}", v, 1e-8) for k, v in errs.items()])


def criterion_full_vs_effective(constants=RB87) -> CriterionResult:
    base = reference_drive()
    sq_diff = block_diff = 0.0
    for alpha in np.linspace(-np.pi, np.pi, 25):
        d = base.with_alpha(alpha)
        full = exact_state("full", d, constants)
        eff = exact_state("effective", d, constants)
        sq_diff = max(sq_diff, abs(full.sq - eff.sq))
        block_diff = max(block_diff, float(np.max(np.abs(full.rho - eff.rho))))
    return CriterionResult(
        3,
        "full-vs-effective",
        [Check("sq_diff", sq_diff, 5e-3), Check("block_diff", block_diff, 5e-3)],
    )


def criterion_blockade(constants=RB87) -> CriterionResult:
    base = reference_drive()
    first = exact = 0.0
    for alpha in (np.pi, -np.pi, 3 * np.pi, -3 * np.pi):
        d = base.with_alpha(alpha)
        first = max(first, sync_measure(perturbative_effective(d, constants).rho))
        exact = max(exact, exact_state("effective", d, constants).sq)
    ideal = IdealSpinModel(delta=mhz(0.5), omega=mhz(0.2), gamma_g=mhz(1.0), gamma_d=mhz(1.0))
    ideal_first = sync_measure(perturbative_ideal(ideal).rho)
    return CriterionResult(
        4,
        "blockade",
        [
            Check("first_order_sq", first, 1e-12),
            Check("exact_eff_sq", exact, 2e-3),
            Check("ideal_first_order_sq", ideal_first, 1e-12),
        ],
    )


def criterion_cosine_law(constants=RB87) -> CriterionResult:
    base = reference_drive()
    s0 = sync_measure(perturbative_effective(base.with_alpha(0.0), constants).rho)
    worst = 0.0
    for alpha in np.linspace(-2 * np.pi, 2 * np.pi, 50):
        s = sync_measure(perturbative_effective(base.with_alpha(alpha), constants).rho)
        worst = max(worst, abs(s - s0 * abs(np.cos(alpha / 2))))
    return CriterionResult(5, "cosine-law", [Check("max_dev", worst, 1e-10)])


def criterion_dissipative(constants=RB87) -> CriterionResult:
    d = reference_drive(delta_b=0.0)
    closed = closed_form_sq(effective_parameters(d, constants), "zero-field")
    exact = exact_state("effective", d, constants).sq
    checks = [
        Check("zero_field_dev", abs(closed - 0.100), 2e-3),
        Check("exact_rel_dev", abs(exact - closed) / closed, 0.10),
    ]
    states = {
        "full": exact_state("full", d, constants, renormalize=True).rho,
        "eff": exact_state("effective", d, constants).rho,
        "pert": perturbative_state("effective", d, constants).rho,
    }
    for name, rho in states.items():
        peak = husimi_max(husimi_q(rho / np.trace(rho).real))
        checks.append(Check(f"theta_{name}", abs(peak.theta - np.pi / 2), THETA_TOL))
        checks.append(Check(f"phi_{name}", phase_distance(peak.phi, np.pi), PHI_TOL))
    return CriterionResult(6, "dissipative-sync", checks)


def criterion_husimi(constants=RB87) -> CriterionResult:
    base = reference_drive()
    rho_b = exact_state("effective", base.with_alpha(0.0), constants).rho
    peak = husimi_max(husimi_q(rho_b))
    rho_c = exact_state("effective", base.with_alpha(np.pi), constants).rho
    marginal = husimi_q(rho_c).phi_marginal()
    return CriterionResult(
        7,
        "husimi-localization",
        [
            Check("theta_B", abs(peak.theta - np.pi / 2), THETA_TOL),
            Check("phi_B", phase_distance(peak.phi, PHI_MAX_ALPHA0), PHI_TOL),
            Check("marginal_spread_C", float(np.ptp(marginal)), 1e-6),
        ],
    )


def criterion_beta(constants=RB87) -> CriterionResult:
    base = reference_drive()
    p = effective_parameters(base, constants)
    identity = max(
        abs(closed_form_sq(p, "approach1", beta=1.0) - closed_form_sq(p, "first-order")),
        abs(closed_form_sq(p, "approach2", beta=1.0) - closed_form_sq(p, "first-order")),
        abs(closed_form_sq(p, "approach1", beta=0.0) - closed_form_sq(p, "approach1-beta0")),
        abs(closed_form_sq(p, "approach2", beta=0.0) - closed_form_sq(p, "approach2-beta0")),
    )
    tracking = 0.0
    for approach, variant in ((1, "approach1"), (2, "approach2")):
        for beta in np.linspace(0.0, 1.0, 11):
            numeric = effective_beta_state(base, beta, approach, constants).sq
            closed = closed_form_sq(p, variant, beta=beta)
            tracking = max(tracking, abs(numeric - closed) / closed)
    return CriterionResult(
        8,
        "beta-consistency",
        [Check("closed_form_identity", identity, 1e-12), Check("sweep_rel_dev", tracking, 0.02)],
    )


def criterion_limit_cycle(constants=RB87) -> CriterionResult:
    two = basis_projector(3, 1)
    # case (i): no decay beam, no Zeeman splitting
    d_i = reference_drive(delta_b=0.0, omega_0=0.0, omega_prime=0.0)
    lv_i = build_effective_model(d_i, constants).liouvillian()
    mult = steady_state(lv_i).null_multiplicity
    t = np.array([0.0, 1.0])
    late_1 = evolve(lv_i, basis_projector(3, 0), t)[-1]
    late_2 = evolve(lv_i, two, t)[-1]
    checks = [
        Check("case_i_multiplicity", float(mult), 1.0, ">"),
        Check("case_i_drho11", abs(late_1[0, 0] - late_2[0, 0]).real, 0.1, ">"),
    ]
    lvs = {
        "ii": build_effective_model(reference_drive(delta_b=0.0, omega_0=0.0), constants).liouvillian(),
        "iii": build_effective_model(
            reference_drive(omega_0=0.0, omega_plus1=0.0, omega_minus1=0.0), constants
        ).liouvillian(),
        "ideal": ideal_liouvillian(IdealSpinModel(delta=mhz(0.5), gamma_g=mhz(1.0), gamma_d=mhz(0.3))),
    }
    for name, lv in lvs.items():
        res = steady_state(lv)
        checks.append(Check(f"{name}_unique", float(res.unique), 0.5, ">"))
        checks.append(Check(f"{name}_dev", float(np.max(np.abs(res.rho - two))), 1e-8))
    return CriterionResult(9, "limit-cycle", checks)


def structural_invariants(n: int = 100, seed: int = 11, constants=RB87) -> dict[str, float]:
    """Worst violation of each structural invariant over n random inputs."""
    rng = np.random.default_rng(seed)
    worst = dict(trace=0.0, hermiticity=0.0, psd=0.0, pert_trace=0.0, husimi=0.0)
    for _ in range(n):
        dim = int(rng.integers(2, 7))
        h = random_hermitian(dim, rng)
        terms = [
            LindbladTerm(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)), rate=float(rng.uniform(0.1, 2)))
            for _ in range(int(rng.integers(1, 4)))
        ]
        lv = liouvillian(h, terms)
        rho = random_density_matrix(dim, rng)
        out = devectorize(lv @ vectorize(rho))
        worst["trace"] = max(worst["trace"], abs(np.trace(out)))
        worst["hermiticity"] = max(worst["hermiticity"], float(np.max(np.abs(out - out.conj().T))))
        ss = steady_state(lv).rho
        worst["psd"] = max(worst["psd"], -float(np.linalg.eigvalsh(ss).min()))

        drive = reference_drive(
            delta_b=mhz(rng.uniform(-0.8, 0.8)),
            omega_0=mhz(rng.uniform(0.1, 2.0)),
            phi_plus1=rng.uniform(-np.pi, np.pi),
            phi_0=rng.uniform(-np.pi, np.pi),
            phi_minus1=rng.uniform(-np.pi, np.pi),
        )
        sol = perturbative_effective(drive, constants, order=2)
        tr = [abs(np.trace(sol.orders[0]) - 1)] + [abs(np.trace(r)) for r in sol.orders[1:]]
        worst["pert_trace"] = max(worst["pert_trace"], max(tr))
        q = husimi_q(random_density_matrix(3, rng))
        worst["husimi"] = max(worst["husimi"], abs(q.normalization() - 1))
    return worst


def criterion_structural(constants=RB87) -> CriterionResult:
    w = structural_invariants(constants=constants)
    return CriterionResult(
        10,
        "structural-invariants",
        [
            Check("trace_preservation", w["trace"], 1e-10),
            Check("hermiticity_preservation", w["hermiticity"], 1e-10),
            Check("steady_state_neg_eig", w["psd"], 1e-10),
            Check("perturbative_trace", w["pert_trace"], 1e-10),
            Check("husimi_norm", w["husimi"], 1e-6),
        ],
    )


def criterion_phase_sensitivity(constants=RB87) -> CriterionResult:
    zero = reference_drive()
    quarter = reference_drive(phi_plus1=np.pi / 2, phi_minus1=-np.pi / 2)
    a = phi_max(exact_state("effective", zero, constants).rho)
    b = phi_max(exact_state("effective", quarter, constants).rho)
    gap = float("nan") if a is None or b is None else phase_distance(a, b)
    return CriterionResult(11, "phi-max-phase-sensitivity", [Check("phi_max_gap", gap, PHI_TOL, ">")])


CRITERIA = (
    criterion_table,
    criterion_oracles,
    criterion_full_vs_effective,
    criterion_blockade,
    criterion_cosine_law,
    criterion_dissipative,
    criterion_husimi,
    criterion_beta,
    criterion_limit_cycle,
    criterion_structural,
    criterion_phase_sensitivity,
)


@dataclass
class AcceptanceReport:
    results: list[CriterionResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def text(self) -> str:
        lines = [r.line() for r in self.results]
        n_pass = sum(r.passed for r in self.results)
        lines.append(f"# {n_pass}/{len(self.results)} criteria passed")
        return "\n".join(lines) + "\n"


def run_acceptance(constants: PhysicalConstants = RB87, only=None) -> AcceptanceReport:
    """Run every criterion (or the ids in ``only``) against ``constants``."""
    chosen = [c for i, c in enumerate(CRITERIA, start=1) if only is None or i in only]
    return AcceptanceReport([c(constants) for c in chosen])
