"""Closed-form time evolution of the drive-free effective model.

Three limits admit analytic solutions when the probe beam is off:

(i)   zero Zeeman splitting, no decay beam: no unique stationary state;
(ii)  zero Zeeman splitting, control phases zero, decay beam on;
(iii) control beams off, decay beam on, arbitrary Zeeman splitting.

These serve as reference values for the numerical integrator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import check_density_matrix
from .rb87 import RB87, DriveConfig, PhysicalConstants


@dataclass(frozen=True)
class OracleParams:
    omega_c: float = 0.0
    omega_prime: float = 0.0
    phi_diff: float = 0.0  # phi_-1 - phi_+1
    gamma_aux_dprime: float = RB87.gamma_aux_dprime
    gamma_aux_prime: float = RB87.gamma_aux_prime
    delta_b: float = 0.0
    delta_b_prime: float = 0.0

    def __post_init__(self):
        if self.omega_c < 0 or self.omega_prime < 0:
            raise ValueError("coupling magnitudes must be non-negative")

    @classmethod
    def from_drive(cls, config: DriveConfig, constants: PhysicalConstants = RB87) -> "OracleParams":
        return cls(
            omega_c=config.omega_plus1,
            omega_prime=config.omega_prime,
            phi_diff=config.phi_minus1 - config.phi_plus1,
            gamma_aux_dprime=constants.gamma_aux_dprime,
            gamma_aux_prime=constants.gamma_aux_prime,
            delta_b=config.delta_b,
            delta_b_prime=config.delta_b_prime,
        )

    @property
    def gamma_eff_dprime(self) -> float:
        return 2 * self.omega_c**2 / (3 * self.gamma_aux_dprime)

    @property
    def gamma_eff_prime(self) -> float:
        # reduces to |Omega'|^2 / (2 Gamma') without a magnetic field
        dd = self.delta_b - self.delta_b_prime
        half = self.gamma_aux_prime / 2
        return half * (self.omega_prime / 2) ** 2 / (dd**2 + half**2)

    @property
    def delta_eff_prime(self) -> float:
        dd = self.delta_b - self.delta_b_prime
        return -self.delta_b - dd * self.omega_prime**2 / (self.gamma_aux_prime**2 + 4 * dd**2)

    @property
    def gamma_1(self) -> float:
        g2, g1 = self.gamma_eff_dprime, self.gamma_eff_prime
        return np.sqrt(4 * g2**2 + 2 * g2 * g1 + g1**2)

    def gamma_2(self, sign: int) -> float:
        g2, g1, r = self.gamma_eff_dprime, self.gamma_eff_prime, self.gamma_1
        return np.sqrt(4 * g2**2 + g1 * (g1 + sign * r) + g2 * (2 * g1 + sign * r))


def _check_inputs(rho0, t):
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    return check_density_matrix(np.asarray(rho0, dtype=complex), tol=1e-8, positive=False)


def _capped(t: float, slowest_rate: float) -> float:
    if slowest_rate <= 0:
        return t
    return min(t, 100.0 / slowest_rate)


def case_i_solution(rho0: np.ndarray, t: float, p: OracleParams) -> np.ndarray:
    r = _check_inputs(rho0, t)
    g = p.gamma_eff_dprime
    t = _capped(t, 1.5 * g)
    a = np.exp(-1.5 * g * t)
    b = np.exp(-2 * g * t)
    ph = np.exp(1j * p.phi_diff)
    r11, r22, r33 = r[0, 0].real, r[1, 1].real, r[2, 2].real
    r12, r13, r23 = r[0, 1], r[0, 2], r[1, 2]
    re13 = (r13 * np.conj(ph)).real

    out = np.empty((3, 3), dtype=complex)
    out[0, 0] = r11 * (3 / 8 + a / 2 + b / 8) + re13 * (-1 / 4 + b / 4) + r33 * (3 / 8 - a / 2 + b / 8)
    out[0, 1] = r12 * (1 / 2 + a / 2) + np.conj(r23) * ph * (-1 / 2 + a / 2)
    out[0, 2] = (
        r11 * ph * (-3 / 8 + 3 * b / 8)
        + r13 * (1 / 8 + a / 2 + 3 * b / 8)
        + np.conj(r13) * ph**2 * (1 / 8 - a / 2 + 3 * b / 8)
        + r33 * ph * (-3 / 8 + 3 * b / 8)
    )
    out[1, 1] = 1 + r11 * (-3 / 4 - b / 4) + re13 * (1 / 2 - b / 2) + r33 * (-3 / 4 - b / 4)
    out[1, 2] = np.conj(r12) * ph * (-1 / 2 + a / 2) + r23 * (1 / 2 + a / 2)
    out[2, 2] = r11 * (3 / 8 - a / 2 + b / 8) + re13 * (-1 / 4 + b / 4) + r33 * (3 / 8 + a / 2 + b / 8)
    out[1, 0] = np.conj(out[0, 1])
    out[2, 0] = np.conj(out[0, 2])
    out[2, 1] = np.conj(out[1, 2])
    return out


def case_ii_solution(rho0: np.ndarray, t: float, p: OracleParams) -> tuple[float, complex]:
    """(rho_22(t), rho_13(t)); the remaining elements have no printed form."""
    r = _check_inputs(rho0, t)
    g2, g1 = p.gamma_eff_dprime, p.gamma_eff_prime
    r1 = p.gamma_1
    g2p, g2m = p.gamma_2(+1), p.gamma_2(-1)
    slow = g2 + 1.5 * g1 - 0.5 * r1
    t = _capped(t, slow)
    pop = (r[0, 0] + r[2, 2]).real
    re13, im13 = r[0, 2].real, r[0, 2].imag
    e_slow = np.exp(-slow * t)
    e_fast = np.exp((-g2 - 1.5 * g1 - 0.5 * r1) * t)

    rho22 = (
        1
        - e_slow / (2 * r1**2) * (-2 * g2 * r1 * re13 + g2p**2 * pop)
        + e_fast / (2 * r1**2) * ((-(r1**2) + g2 * r1 + g1 * r1) * pop - 2 * g2 * r1 * re13)
    )
    rho13 = (
        -e_slow / (4 * r1**2) * (3 * g2 * r1 * pop - 2 * g2m**2 * re13)
        + e_fast / (4 * r1**2) * (3 * g2 * r1 * pop + 2 * g2p**2 * re13)
        + 1j * np.exp((-1.5 * g2 - 2 * g1) * t) * im13
    )
    return float(rho22), complex(rho13)


def case_iii_solution(rho0: np.ndarray, t: float, p: OracleParams) -> np.ndarray:
    r = _check_inputs(rho0, t)
    g, d = p.gamma_eff_prime, p.delta_eff_prime
    t = _capped(t, g)
    decay = np.exp(-g * t)
    # exp(-(g + i d) t) split into modulus and phase
    rot1 = decay * (np.cos(d * t) - 1j * np.sin(d * t))
    rot2 = decay**2 * (np.cos(2 * d * t) - 1j * np.sin(2 * d * t))

    out = np.empty((3, 3), dtype=complex)
    out[0, 0] = r[0, 0].real * decay
    out[0, 1] = r[0, 1] * rot1
    out[0, 2] = r[0, 2] * rot2
    out[1, 1] = 1 - (r[0, 0] + r[2, 2]).real * decay
    out[1, 2] = r[1, 2] * rot1
    out[2, 2] = r[2, 2].real * decay
    out[1, 0] = np.conj(out[0, 1])
    out[2, 0] = np.conj(out[0, 2])
    out[2, 1] = np.conj(out[1, 2])
    return out
