"""Steady states, time evolution and perturbative steady-state expansions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .effective import EffectiveModel, EffectiveParams
from .operators import (
    TOL,
    commutator_superop,
    cross_dissipator_superop,
    dagger,
    devectorize,
    dissipator_superop,
    vectorize,
)


class IntegrationError(RuntimeError):
    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved local error {achieved:.3e})")
        self.achieved = achieved


class DegenerateSteadyState(ValueError):
    """The reference generator has more than one stationary state."""


@dataclass
class SteadyStateResult:
    rho: np.ndarray
    residual: float
    null_multiplicity: int
    unique: bool
    singular_values: np.ndarray = field(repr=False, default=None)


def _normalize_null_vector(v: np.ndarray) -> np.ndarray:
    rho = devectorize(v)
    tr = np.trace(rho)
    if abs(tr) < 1e-12:
        # traceless null direction; fall back to a Hermitian part with unit norm
        rho = rho / np.linalg.norm(rho)
        return (rho + dagger(rho)) / 2
    rho = rho / tr
    return (rho + dagger(rho)) / 2


def steady_state(lv: np.ndarray, tol=TOL) -> SteadyStateResult:
    """Null vector of the Liouvillian from a full SVD.

    The multiplicity counts singular values below ``null_singular_rel`` times
    the largest one; more than one signals several stationary states.
    """
    lv = np.asarray(lv, dtype=complex)
    _, s, vh = np.linalg.svd(lv)
    smax = s[0] if s.size else 0.0
    if smax == 0:
        dim = int(round(np.sqrt(lv.shape[0])))
        rho = np.eye(dim, dtype=complex) / dim
        return SteadyStateResult(rho, 0.0, lv.shape[0], False, s)
    mult = int(np.sum(s <= tol.null_singular_rel * smax))
    rho = _normalize_null_vector(vh[-1].conj())
    residual = float(np.linalg.norm(lv @ vectorize(rho)))
    return SteadyStateResult(rho, residual, max(mult, 1), mult <= 1, s)


def _rk4_propagator(lv: np.ndarray, h: float) -> np.ndarray:
    x = h * lv
    eye = np.eye(lv.shape[0])
    x2 = x @ x
    x3 = x2 @ x
    return eye + x + x2 / 2 + x3 / 6 + x3 @ x / 24


def evolve(lv: np.ndarray, rho0: np.ndarray, t_grid, tol=TOL, max_refinements: int = 40) -> list[np.ndarray]:
    """Classical RK4 on vec(rho) with step halving per output interval.

    Each interval is integrated with n and 2n steps; n doubles until the two
    results agree to ``tol.evolve_local`` per element.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0 or t_grid[0] != 0 or np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be ascending and start at 0")
    lv = np.asarray(lv, dtype=complex)
    v = vectorize(rho0).astype(complex)
    out = [devectorize(v).copy()]
    n = 1
    for dt in np.diff(t_grid):
        if dt == 0:
            out.append(out[-1].copy())
            continue
        coarse = np.linalg.matrix_power(_rk4_propagator(lv, dt / n), n) @ v
        err = np.inf
        for _ in range(max_refinements):
            fine = np.linalg.matrix_power(_rk4_propagator(lv, dt / (2 * n)), 2 * n) @ v
            err = float(np.max(np.abs(fine - coarse)))
            n *= 2
            coarse = fine
            if err <= tol.evolve_local:
                break
        else:
            raise IntegrationError("RK4 step halving did not converge", err)
        v = coarse
        rho = devectorize(v)
        drift = max(abs(np.trace(rho) - np.trace(out[0])), float(np.max(np.abs(rho - dagger(rho)))))
        if drift > tol.evolve_drift:
            raise IntegrationError("trace/Hermiticity drift exceeded", drift)
        out.append(rho.copy())
        n = max(1, n // 4)
    return out


@dataclass
class PerturbativeSolution:
    """Orders rho^(0), rho^(1), ... of a steady-state expansion.

    The perturbation parameter is set to 1 on readout; with Tr rho^(0) = 1 and
    traceless corrections the normalization constant is 1.
    """

    orders: list

    @property
    def order(self) -> int:
        return len(self.orders) - 1

    @property
    def rho(self) -> np.ndarray:
        return self.truncated(self.order)

    def truncated(self, k: int) -> np.ndarray:
        total = sum(self.orders[: k + 1])
        return total / np.trace(total)


def _solve_traceless(l_ref: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    dim = int(round(np.sqrt(l_ref.shape[0])))
    row = vectorize(np.eye(dim)).conj()[None, :]
    a = np.vstack([l_ref, row])
    b = np.concatenate([rhs, [0.0]])
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    return x


def _reference_state(l_ref: np.ndarray) -> np.ndarray:
    res = steady_state(l_ref)
    if not res.unique:
        raise DegenerateSteadyState(
            f"reference Liouvillian has {res.null_multiplicity} stationary states"
        )
    return res.rho


def _hermitize(v: np.ndarray) -> np.ndarray:
    m = devectorize(v)
    return (m + dagger(m)) / 2


def perturbative_steady_full(l_ref: np.ndarray, l_pert: np.ndarray, order: int = 1) -> PerturbativeSolution:
    """Solve L_ref rho^(k) = -L_pert rho^(k-1) with Tr rho^(k>=1) = 0."""
    rho0 = _reference_state(l_ref)
    orders = [rho0]
    if not np.any(l_pert):
        return PerturbativeSolution(orders)
    for _ in range(order):
        x = _solve_traceless(l_ref, -l_pert @ vectorize(orders[-1]))
        orders.append(_hermitize(x))
    return PerturbativeSolution(orders)


def effective_perturbation_superops(model_ref: EffectiveModel, model_pert: EffectiveModel):
    """First- and second-order generators of a split effective model.

    The first-order part holds the commutator with the perturbing Hamiltonian
    and the mixed reference/perturbation dissipators; the second-order part
    holds the pure-perturbation dissipators.
    """
    first = commutator_superop(model_pert.h_eff)
    second = np.zeros_like(first)
    for ref, pert in zip(model_ref.terms, model_pert.terms):
        first = first + cross_dissipator_superop(ref.amplitude(), pert.amplitude())
        second = second + dissipator_superop(pert)
    return first, second


def perturbative_steady_effective(
    model_ref: EffectiveModel, model_pert: EffectiveModel, order: int = 1
) -> PerturbativeSolution:
    l_ref = model_ref.liouvillian()
    rho0 = _reference_state(l_ref)
    orders = [rho0]
    if not np.any(model_pert.h_eff) and not any(np.any(t.operator) for t in model_pert.terms):
        return PerturbativeSolution(orders)
    l1, l2 = effective_perturbation_superops(model_ref, model_pert)
    for k in range(1, order + 1):
        rhs = -l1 @ vectorize(orders[k - 1])
        if k >= 2:
            rhs = rhs - l2 @ vectorize(orders[k - 2])
        orders.append(_hermitize(_solve_traceless(l_ref, rhs)))
    return PerturbativeSolution(orders)


CLOSED_FORM_VARIANTS = ("first-order", "approach1", "approach1-beta0", "approach2", "approach2-beta0", "zero-field", "control-limit")


def _sq_beta(params: EffectiveParams, beta: float, approach: int) -> float:
    d = abs(params.delta_eff)
    h = params.h23
    gc, gd = params.gamma_control, params.gamma_decay
    sqcp = params.sqrt_control_probe
    b2 = beta * beta
    gd_eff = (1 + b2) / 2 * gd
    if approach == 1:
        num = 2 * h * (d - 1j * gd_eff) + 3j * b2 * sqcp * (d - 1j * gd_eff) - 6j * b2 * h * gc
        den = d * d + 3 * b2 * gd_eff * gc + gd_eff**2
    else:
        num = (
            2 * h * (d - 1j * gd_eff)
            + 1j * (beta + 2 * b2) * sqcp * (d - 1j * gd_eff)
            - 2j * (1 + 2 * b2) * h * gc
        )
        den = d * d + (1 + 2 * b2) * gd_eff * gc + gd_eff**2
    return abs(np.cos(params.alpha / 2)) * abs(num) / den


def closed_form_sq(params: EffectiveParams, variant: str = "first-order", beta: float | None = None) -> float:
    """First-order synchronization measure in closed form.

    first-order: full effective model. approach1/approach2: beta-scaled approaches 1/2, with
    approach1-beta0/approach2-beta0 their beta=0 limits. zero-field: zero Zeeman splitting. control-limit: its
    control-dominated approximation sqrt(G_probe / G_control).
    """
    c = abs(np.cos(params.alpha / 2))
    if variant == "first-order":
        return _sq_beta(params, 1.0, 1)
    if variant in ("approach1", "approach2"):
        if beta is None:
            raise ValueError(f"{variant} needs beta")
        return _sq_beta(params, beta, 1 if variant == "approach1" else 2)
    if variant == "approach1-beta0":
        d, h, gd = abs(params.delta_eff), params.h23, params.gamma_decay
        return c * abs(2 * h * (d - 0.5j * gd)) / (d * d + gd * gd / 4)
    if variant == "approach2-beta0":
        d, h, gd, gc = abs(params.delta_eff), params.h23, params.gamma_decay, params.gamma_control
        num = 2 * h * (d - 0.5j * gd) - 2j * h * gc
        return c * abs(num) / (d * d + gc * gd / 2 + gd * gd / 4)
    if variant == "zero-field":
        return 3 * c * params.sqrt_control_probe / (params.gamma_decay + 3 * params.gamma_control)
    if variant == "control-limit":
        return c * np.sqrt(params.gamma_probe / params.gamma_control)
    raise ValueError(f"unknown closed-form variant {variant!r}; expected one of {CLOSED_FORM_VARIANTS}")
