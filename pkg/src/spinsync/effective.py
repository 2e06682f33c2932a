"""Adiabatic elimination of the lossy excited manifold.

The effective ground-state model follows the effective-operator formalism:

    H_eff = H_g - 1/2 sum_k [V_- (H_NH - eps_k)^-1 V_+ P_k + h.c.]
    L_eff,k,l = sum_j sqrt(G_kl) H_lj / (H_ll - H_jj - i G_l / 2) |k><j|

with H_NH the excited-block Hamiltonian including the decay terms. The
effective jump operators are stored as rate-absorbed amplitudes: the
coefficients of the summed operators carry independent phases and admit
no common rate factor.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .operators import LindbladTerm, dagger, is_hermitian, liouvillian, spin_operators
from .rb87 import (
    N_GROUND,
    RB87,
    DriveConfig,
    PhysicalConstants,
    build_full_hamiltonian,
    full_lindblad_terms,
)


class SingularityError(ArithmeticError):
    """A projected non-Hermitian Hamiltonian could not be inverted."""


@dataclass(frozen=True)
class PartitionedOperators:
    h_g: np.ndarray
    h_e: np.ndarray
    v_plus: np.ndarray  # excited <- ground block
    v_minus: np.ndarray  # ground <- excited block

    @property
    def n_ground(self) -> int:
        return self.h_g.shape[0]

    def reassemble(self) -> np.ndarray:
        return np.block([[self.h_g, self.v_minus], [self.v_plus, self.h_e]])


def partition(h_full: np.ndarray, n_ground: int = N_GROUND) -> PartitionedOperators:
    h = np.asarray(h_full, dtype=complex)
    if not is_hermitian(h):
        raise ValueError("full Hamiltonian is not Hermitian")
    g = slice(0, n_ground)
    e = slice(n_ground, h.shape[0])
    return PartitionedOperators(
        h_g=h[g, g].copy(), h_e=h[e, e].copy(), v_plus=h[e, g].copy(), v_minus=h[g, e].copy()
    )


def _excited_decay(terms, n_ground: int, n_excited: int) -> tuple[np.ndarray, dict]:
    """Anti-Hermitian decay block sum_j rate L^dag L on the excited states,
    plus a map excited index -> list of (destination, rate)."""
    block = np.zeros((n_excited, n_excited), dtype=complex)
    channels: dict[int, list] = {}
    for term in terms:
        a = term.amplitude()
        block += (dagger(a) @ a)[n_ground:, n_ground:]
        rows, cols = np.nonzero(term.operator)
        for k, l in zip(rows, cols):
            if l >= n_ground and k < n_ground:
                rate = abs(term.operator[k, l]) ** 2 * (term.rate if term.rate is not None else 1.0)
                channels.setdefault(l - n_ground, []).append((k, rate))
    return block, channels


def nonhermitian_hamiltonian(
    parts: PartitionedOperators, constants: PhysicalConstants = RB87, terms=None
) -> np.ndarray:
    """H_NH = H_e - (i/2) sum rate L^dag L restricted to the excited block."""
    if terms is None:
        terms = full_lindblad_terms(constants)
    block, _ = _excited_decay(terms, parts.n_ground, parts.h_e.shape[0])
    return parts.h_e - 0.5j * block


def _projected_inverses(parts, h_nh) -> list[np.ndarray]:
    out = []
    eye = np.eye(h_nh.shape[0])
    for k in range(parts.n_ground):
        m = h_nh - parts.h_g[k, k].real * eye
        if np.linalg.cond(m) > 1e12:
            raise SingularityError(
                f"projected non-Hermitian Hamiltonian for ground state k={k + 1} is singular"
            )
        out.append(np.linalg.inv(m))
    return out


def effective_hamiltonian(
    parts: PartitionedOperators, constants: PhysicalConstants = RB87, terms=None
) -> np.ndarray:
    h_nh = nonhermitian_hamiltonian(parts, constants, terms)
    inverses = _projected_inverses(parts, h_nh)
    h_eff = parts.h_g.astype(complex).copy()
    for k, inv in enumerate(inverses):
        x = np.zeros_like(h_eff)
        x[:, k] = parts.v_minus @ inv @ parts.v_plus[:, k]
        h_eff -= 0.5 * (x + dagger(x))
    return h_eff


def auxiliary_operators(
    parts: PartitionedOperators, constants: PhysicalConstants = RB87, terms=None
) -> list[np.ndarray]:
    """Effective jump amplitudes via sqrt(G_kl) L_kl (H_NH - eps_j)^-1 V_+ P_j.

    Matrix route, valid for any excited block; one operator per bare decay
    channel, in the order of ``terms``.
    """
    if terms is None:
        terms = full_lindblad_terms(constants)
    n = parts.n_ground
    h_nh = nonhermitian_hamiltonian(parts, constants, terms)
    inverses = _projected_inverses(parts, h_nh)
    out = []
    for term in terms:
        a = term.amplitude()[:n, n:]  # ground <- excited
        op = np.zeros((n, n), dtype=complex)
        for j, inv in enumerate(inverses):
            op[:, j] = (a @ inv @ parts.v_plus[:, j])
        out.append(op)
    return out


def lindblad_coefficient(
    h_full: np.ndarray, k: int, j: int, l: int, gamma_kl: float, gamma_l: float
) -> complex:
    """Amplitude for ground j -> ground k through excited l (0-based indices)."""
    h = np.asarray(h_full)
    denom = h[l, l] - h[j, j] - 0.5j * gamma_l
    if denom == 0:
        raise ValueError(f"vanishing denominator for path {j + 1} -> {l + 1} -> {k + 1}")
    return np.sqrt(gamma_kl) * h[l, j] / denom


def effective_lindblad_terms(
    parts: PartitionedOperators, constants: PhysicalConstants = RB87, terms=None
) -> list[LindbladTerm]:
    """One effective operator per bare decay channel |k><l|.

    Requires a diagonal excited block (true for the Rb-87 scheme).
    """
    if terms is None:
        terms = full_lindblad_terms(constants)
    n = parts.n_ground
    if np.count_nonzero(parts.h_e - np.diag(np.diag(parts.h_e))):
        raise ValueError("closed-form coefficients need a diagonal excited block")
    h_full = parts.reassemble()
    _, channels = _excited_decay(terms, n, parts.h_e.shape[0])
    totals = {l: sum(r for _, r in ch) for l, ch in channels.items()}
    out = []
    for term in terms:
        rows, cols = np.nonzero(term.operator)
        k, l = int(rows[0]), int(cols[0])
        gamma_kl = abs(term.operator[k, l]) ** 2 * (term.rate if term.rate is not None else 1.0)
        op = np.zeros((n, n), dtype=complex)
        for j in range(n):
            if h_full[l, j] != 0:
                op[k, j] = lindblad_coefficient(h_full, k, j, l, gamma_kl, totals[l - n])
        out.append(LindbladTerm(op, rate=None, path=("ground", k + 1, l + 1)))
    return out


@dataclass(frozen=True)
class EffectiveParams:
    delta_eff: float
    omega_eff: float
    phi_eff: float
    alpha: float
    gamma_control: float
    gamma_probe: float
    gamma_decay: float

    @property
    def h23(self) -> float:
        """|H_eff,2,3| = Omega_eff / sqrt(2)."""
        return self.omega_eff / np.sqrt(2)

    @property
    def sqrt_control_probe(self) -> float:
        return np.sqrt(self.gamma_control * self.gamma_probe)


def effective_parameters(config: DriveConfig, constants: PhysicalConstants = RB87) -> EffectiveParams:
    if not config.ideal_mapping:
        raise ValueError("closed-form effective parameters need the ideal-mapping flag")
    g2 = constants.gamma_aux_dprime
    g1 = constants.gamma_aux_prime
    db = config.delta_b
    dd = config.delta_b - config.delta_b_prime
    oc = config.omega_plus1
    delta_eff = -db - db * oc**2 / (g2**2 + 4 * db**2) - dd * config.omega_prime**2 / (g1**2 + 4 * dd**2)
    omega_eff = (
        np.sqrt(2) / 8 * abs(db) * config.omega_0 * oc / (g2**2 / 4 + db**2)
        * np.sqrt(1 + (2 * db / g2) ** 2)
    )
    phi_eff = (
        config.phi_minus1 - config.phi_0 + np.arctan(2 * db / g2) + np.pi - np.pi / 2 * np.sign(db)
    )
    gamma_control = (g2 / 3) * (oc**2 / 4) / (db**2 + g2**2 / 4)
    gamma_probe = (g2 / 3) * (config.omega_0**2 / 4) / (g2**2 / 4)
    gamma_decay = (g1 / 2) * (config.omega_prime**2 / 4) / (dd**2 + g1**2 / 4)
    return EffectiveParams(
        delta_eff=float(delta_eff),
        omega_eff=float(omega_eff),
        phi_eff=float(phi_eff),
        alpha=config.alpha,
        gamma_control=float(gamma_control),
        gamma_probe=float(gamma_probe),
        gamma_decay=float(gamma_decay),
    )


def ideal_effective_hamiltonian(params: EffectiveParams) -> np.ndarray:
    """3x3 matrix of the effective Hamiltonian in its spin-1-like form."""
    d, w = params.delta_eff, params.omega_eff / np.sqrt(2)
    top = -1j * w * np.exp(1j * (params.phi_eff + np.pi - params.alpha))
    right = -1j * w * np.exp(1j * params.phi_eff)
    return np.array(
        [[d, top, 0], [np.conj(top), 0, right], [0, np.conj(right), -d]], dtype=complex
    )


def effective_hamiltonian_closed_form(config: DriveConfig, constants: PhysicalConstants = RB87) -> np.ndarray:
    """Effective Hamiltonian with general detunings, written out entry by entry."""
    g2 = constants.gamma_aux_dprime
    g1 = constants.gamma_aux_prime
    db, dbp = config.delta_b, config.delta_b_prime
    dpi2, dsig2, dpi1 = config.delta_pi_dprime, config.delta_sigma_dprime, config.delta_pi_prime
    op1 = config.omega_plus1 * np.exp(1j * config.phi_plus1)
    o0 = config.omega_0 * np.exp(1j * config.phi_0)
    om1 = config.omega_minus1 * np.exp(1j * config.phi_minus1)
    opr = config.omega_prime
    a = 1j * g2 / 2
    a1 = 1j * g1 / 2

    def cc(z):
        return z + np.conj(z)

    h1 = 8 * (dpi2 - dsig2 - db) - cc(abs(op1) ** 2 / (-a + dsig2 + db) + opr**2 / (-a1 + dpi1 - dbp + db))
    h2 = -cc(abs(o0) ** 2 / (-a + dpi2))
    h3 = 8 * (dpi2 - dsig2 + db) - cc(abs(om1) ** 2 / (-a + dsig2 - db) + opr**2 / (-a1 + dpi1 + dbp - db))
    m = np.empty((3, 3), dtype=complex)
    m[0, 0], m[1, 1], m[2, 2] = h1.real, h2.real, h3.real
    m[0, 1] = -o0 * np.conj(op1) / (-a + dpi2) - o0 * np.conj(op1) / (a + dsig2 + db)
    m[0, 2] = -om1 * np.conj(op1) / (-a + dsig2 - db) - om1 * np.conj(op1) / (a + dsig2 + db)
    m[1, 0] = -np.conj(o0) * op1 / (a + dpi2) - np.conj(o0) * op1 / (-a + dsig2 + db)
    m[1, 2] = -om1 * np.conj(o0) / (-a + dsig2 - db) - om1 * np.conj(o0) / (a + dpi2)
    m[2, 0] = -np.conj(om1) * op1 / (a + dsig2 - db) - np.conj(om1) * op1 / (-a + dsig2 + db)
    m[2, 1] = -np.conj(om1) * o0 / (a + dsig2 - db) - np.conj(om1) * o0 / (-a + dpi2)
    return m / 8


@dataclass(frozen=True)
class EffectiveModel:
    h_eff: np.ndarray
    terms: tuple
    params: EffectiveParams | None = None

    @property
    def dim(self) -> int:
        return self.h_eff.shape[0]

    def liouvillian(self) -> np.ndarray:
        return liouvillian(self.h_eff, self.terms)

    def coefficient(self, k: int, j: int, l: int) -> complex:
        """c^{(l)}_{k,j} with 1-based state numbers."""
        return self.term(k, l).operator[k - 1, j - 1]

    def term(self, k: int, l: int) -> LindbladTerm:
        for t in self.terms:
            if t.path[1:] == (k, l):
                return t
        raise KeyError(f"no effective channel {l} -> {k}")


def build_effective_model(config: DriveConfig, constants: PhysicalConstants = RB87) -> EffectiveModel:
    parts = partition(build_full_hamiltonian(config))
    terms = full_lindblad_terms(constants)
    h_eff = effective_hamiltonian(parts, constants, terms)
    h_eff = (h_eff + dagger(h_eff)) / 2
    lind = effective_lindblad_terms(parts, constants, terms)
    params = effective_parameters(config, constants) if config.ideal_mapping else None
    return EffectiveModel(h_eff=h_eff, terms=tuple(lind), params=params)


def subtract_models(model: EffectiveModel, reference: EffectiveModel) -> EffectiveModel:
    """Channel-by-channel difference; used to isolate a perturbation."""
    if len(model.terms) != len(reference.terms):
        raise ValueError("models have different channel counts")
    terms = tuple(
        LindbladTerm(a.operator - b.operator, rate=None, path=a.path)
        for a, b in zip(model.terms, reference.terms)
    )
    return EffectiveModel(h_eff=model.h_eff - reference.h_eff, terms=terms)


# channels multiplied by beta: (k, l) -> ground columns j (1-based)
_BETA_APPROACH = {
    1: {(1, 5): (1,), (3, 6): (3,), (1, 4): (1, 2, 3), (2, 4): (1, 2, 3), (3, 4): (1, 2, 3)},
    2: {(1, 5): (1,), (3, 6): (3,), (1, 4): (1, 2, 3), (2, 4): (2,), (3, 4): (1, 2, 3)},
}


def beta_scaled_model(model: EffectiveModel, beta: float, approach: int) -> EffectiveModel:
    """Multiply selected effective coefficients by beta.

    Approach 1 scales c^(5)_{1,1}, c^(6)_{3,3} and every c^(4)_{k,j}; at beta=0
    only the decay-beam transfers into |2> remain. Approach 2 keeps
    c^(4)_{2,1} and c^(4)_{2,3}, the control-beam transfers into |2>.
    """
    if not 0 <= beta <= 1:
        raise ValueError(f"beta must lie in [0, 1], got {beta}")
    if approach not in _BETA_APPROACH:
        raise ValueError(f"approach must be 1 or 2, got {approach}")
    if beta == 1:
        return model
    plan = _BETA_APPROACH[approach]
    terms = []
    for t in model.terms:
        cols = plan.get(tuple(t.path[1:]))
        if cols is None:
            terms.append(t)
            continue
        op = t.operator.copy()
        for j in cols:
            op[:, j - 1] *= beta
        terms.append(LindbladTerm(op, rate=t.rate, path=t.path))
    return dataclasses.replace(model, terms=tuple(terms))


@dataclass(frozen=True)
class IdealSpinModel:
    delta: float = 0.0
    omega: float = 0.0
    phi_s: float = 0.0
    gamma_g: float = 0.0
    gamma_d: float = 0.0
    expanded: bool = False

    def __post_init__(self):
        if self.gamma_g < 0 or self.gamma_d < 0:
            raise ValueError("dissipative rates must be non-negative")


def ideal_spin_model(model: IdealSpinModel) -> tuple[np.ndarray, list[LindbladTerm]]:
    """Spin-1 Hamiltonian plus gain/damping channels.

    The expanded variant carries an extra pi phase on the |+1><0| coupling.
    """
    _, _, sz, sp, sm = spin_operators(1)
    h = model.delta * sz + 0.5j * model.omega * (
        np.exp(-1j * model.phi_s) * sm - np.exp(1j * model.phi_s) * sp
    )
    if model.expanded:
        h[0, 1] *= -1
        h[1, 0] *= -1
    l_g = -sp @ sz / np.sqrt(2)
    l_d = sm @ sz / np.sqrt(2)
    terms = [
        LindbladTerm(l_g, rate=model.gamma_g, path=(-1, 0, "gain")),
        LindbladTerm(l_d, rate=model.gamma_d, path=(1, 0, "damping")),
    ]
    return h, terms
