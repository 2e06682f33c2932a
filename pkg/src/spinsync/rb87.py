"""Rb-87 (3+3)-level scheme: constants, drive parameters, full Hamiltonian.

State order (0-based index in parentheses):
|1> (0) = F=1, M=+1;  |2> (1) = F=1, M=0;  |3> (2) = F=1, M=-1;
|4> (3) = F''=0, M=0; |5> (4) = F'=1, M=+1; |6> (5) = F'=1, M=-1.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .operators import LindbladTerm, transition

TWO_PI = 2 * np.pi

STATE_LABELS = (
    "F=1,M=+1",
    "F=1,M=0",
    "F=1,M=-1",
    "F''=0,M=0",
    "F'=1,M=+1",
    "F'=1,M=-1",
)
N_GROUND = 3


def mhz(value: float) -> float:
    """Ordinary frequency in MHz -> angular frequency in rad/us."""
    return TWO_PI * value


def to_mhz(value: float) -> float:
    return value / TWO_PI


@dataclass(frozen=True)
class PhysicalConstants:
    gamma_aux_dprime: float = mhz(6.065)  # F''=0 total decay rate
    gamma_aux_prime: float = mhz(5.746)  # F'=1 total decay rate
    zeeman_ground: float = mhz(0.70)  # per gauss
    zeeman_excited: float = mhz(0.23)  # per gauss

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"{f.name} must be strictly positive")

    @property
    def excited_ratio(self) -> float:
        return self.zeeman_excited / self.zeeman_ground


RB87 = PhysicalConstants()


@dataclass(frozen=True)
class DriveConfig:
    """Laser magnitudes (rad/us), phases (rad), Zeeman shifts and detunings.

    ``delta_b_prime=None`` takes the excited-manifold shift from ``delta_b``
    through the ratio of the Rb-87 Zeeman coefficients.
    """

    omega_plus1: float = 0.0
    omega_0: float = 0.0
    omega_minus1: float = 0.0
    omega_prime: float = 0.0
    phi_plus1: float = 0.0
    phi_0: float = 0.0
    phi_minus1: float = 0.0
    phi_prime: float = 0.0
    delta_b: float = 0.0
    delta_b_prime: float | None = None
    delta_pi_dprime: float = 0.0
    delta_sigma_dprime: float = 0.0
    delta_pi_prime: float = 0.0
    ideal_mapping: bool = False

    def __post_init__(self):
        for name in ("omega_plus1", "omega_0", "omega_minus1", "omega_prime"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.delta_b_prime is None:
            object.__setattr__(self, "delta_b_prime", self.delta_b * RB87.excited_ratio)
        if self.ideal_mapping:
            if not np.isclose(self.omega_plus1, self.omega_minus1, rtol=1e-12, atol=0):
                raise ValueError("ideal mapping requires |Omega_+1| == |Omega_-1|")
            if any((self.delta_pi_dprime, self.delta_sigma_dprime, self.delta_pi_prime)):
                raise ValueError("ideal mapping requires all laser detunings to vanish")

    @classmethod
    def from_field(cls, b_gauss: float, constants: PhysicalConstants = RB87, **kw):
        db, dbp = zeeman_shifts(b_gauss, constants)
        return cls(delta_b=db, delta_b_prime=dbp, **kw)

    @property
    def alpha(self) -> float:
        return (self.phi_plus1 - self.phi_0) + (self.phi_minus1 - self.phi_0)

    def replace(self, **changes) -> "DriveConfig":
        # a new delta_b without an explicit delta_b_prime re-derives the latter
        if "delta_b" in changes and "delta_b_prime" not in changes:
            changes["delta_b_prime"] = None
        return dataclasses.replace(self, **changes)

    def with_alpha(self, alpha: float) -> "DriveConfig":
        """Set alpha keeping phi_0 and phi_-1 - phi_+1 fixed."""
        diff = self.phi_minus1 - self.phi_plus1
        total = alpha + 2 * self.phi_0
        return self.replace(phi_plus1=(total - diff) / 2, phi_minus1=(total + diff) / 2)

    def without_probe(self) -> "DriveConfig":
        return self.replace(omega_0=0.0, delta_b_prime=self.delta_b_prime)


def reference_drive(delta_b: float = mhz(0.4), **kw) -> DriveConfig:
    """Standard laser settings: Omega_+-1 = 9.5, Omega_0 = 1, Omega' = 3 (x 2pi MHz), all phases zero."""
    base = dict(
        omega_plus1=mhz(9.5),
        omega_0=mhz(1.0),
        omega_minus1=mhz(9.5),
        omega_prime=mhz(3.0),
        delta_b=delta_b,
        ideal_mapping=True,
    )
    base.update(kw)
    return DriveConfig(**base)


def zeeman_shifts(b_gauss: float, constants: PhysicalConstants = RB87) -> tuple[float, float]:
    return constants.zeeman_ground * b_gauss, constants.zeeman_excited * b_gauss


def rotating_frame_energies(config: DriveConfig) -> tuple[float, ...]:
    db, dbp = config.delta_b, config.delta_b_prime
    dpi2, dsig2, dpi1 = config.delta_pi_dprime, config.delta_sigma_dprime, config.delta_pi_prime
    return (
        -db + dpi2 - dsig2,
        0.0,
        db + dpi2 - dsig2,
        dpi2,
        -dbp - dsig2 + dpi2 + dpi1,
        dbp - dsig2 + dpi2 + dpi1,
    )


def build_full_hamiltonian(config: DriveConfig) -> np.ndarray:
    """6x6 rotating-frame Hamiltonian (rad/us)."""
    h = np.diag(rotating_frame_energies(config)).astype(complex)
    couplings = (
        (0, 3, config.omega_plus1, config.phi_plus1),
        (1, 3, config.omega_0, config.phi_0),
        (2, 3, config.omega_minus1, config.phi_minus1),
        (0, 4, config.omega_prime, config.phi_prime),
        (2, 5, config.omega_prime, config.phi_prime),
    )
    for g, e, mag, phase in couplings:
        h[g, e] = -0.5 * mag * np.exp(-1j * phase)
        h[e, g] = np.conj(h[g, e])
    return h


def full_lindblad_terms(constants: PhysicalConstants = RB87) -> list[LindbladTerm]:
    """Seven spontaneous-decay channels |k><l| with Rb-87 branching ratios.

    ``path`` is (from, to, mediator) with 1-based state numbers.
    """
    g4 = constants.gamma_aux_dprime / 3
    g56 = constants.gamma_aux_prime / 2
    channels = [(k, 4, g4) for k in (1, 2, 3)]
    channels += [(k, 5, g56) for k in (1, 2)]
    channels += [(k, 6, g56) for k in (2, 3)]
    return [
        LindbladTerm(transition(6, k - 1, l - 1), rate=rate, path=(l, k, l))
        for k, l, rate in channels
    ]


def total_decay_rates(terms, n_ground: int = N_GROUND) -> dict[int, float]:
    """Total decay rate out of each excited state (0-based index)."""
    out: dict[int, float] = {}
    for term in terms:
        src = int(np.argmax(np.abs(term.operator).sum(axis=0)))
        if src >= n_ground:
            out[src] = out.get(src, 0.0) + (term.rate or 0.0)
    return out
