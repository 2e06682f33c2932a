"""Dense operator algebra for small open quantum systems.

Density matrices, Hamiltonians and jump operators are plain complex numpy
arrays. Superoperators act on column-stacked density matrices, so that
``vec(A @ rho @ B) == kron(B.T, A) @ vec(rho)``.

Generator entries are angular frequencies in rad/us; time is in us.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    trace: float = 1e-10
    psd: float = 1e-10
    null_singular_rel: float = 1e-8
    steady_residual_rel: float = 1e-9
    evolve_local: float = 1e-10
    evolve_drift: float = 1e-9
    husimi_norm: float = 1e-6
    phase_uniform: float = 1e-9


TOL = Tolerances()


@dataclass(frozen=True)
class LindbladTerm:
    """A jump operator with its rate.

    ``rate=None`` marks a rate-absorbed amplitude: the operator already
    carries units of (rad/us)**0.5 and enters the dissipator with unit rate.
    ``path`` is a free-form (from, to, mediator) annotation.
    """

    operator: np.ndarray
    rate: float | None = None
    path: tuple = field(default=())

    def __post_init__(self):
        op = np.asarray(self.operator, dtype=complex)
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise ValueError(f"jump operator must be square, got shape {op.shape}")
        if self.rate is not None and self.rate < 0:
            raise ValueError(f"negative rate {self.rate}")
        object.__setattr__(self, "operator", op)

    @property
    def rate_absorbed(self) -> bool:
        return self.rate is None

    @property
    def dim(self) -> int:
        return self.operator.shape[0]

    def amplitude(self) -> np.ndarray:
        """Operator with the rate folded in, i.e. sqrt(rate) * L."""
        if self.rate is None:
            return self.operator
        return np.sqrt(self.rate) * self.operator


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def is_hermitian(a: np.ndarray, tol: float = TOL.hermitian) -> bool:
    a = np.asarray(a)
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    return bool(np.max(np.abs(a - dagger(a)), initial=0.0) <= tol * scale)


def _require_square(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    return a


def spin_operators(spin: float = 1):
    """Return (Sx, Sy, Sz, S+, S-) in the basis ordered M = +S, ..., -S."""
    m = np.arange(spin, -spin - 1, -1)
    dim = len(m)
    sz = np.diag(m).astype(complex)
    sp = np.zeros((dim, dim), dtype=complex)
    for i in range(1, dim):
        # <m+1| S+ |m>
        sp[i - 1, i] = np.sqrt(spin * (spin + 1) - m[i] * (m[i] + 1))
    sm = dagger(sp)
    sx = (sp + sm) / 2
    sy = (sp - sm) / 2j
    return sx, sy, sz, sp, sm


def basis_projector(dim: int, k: int) -> np.ndarray:
    """|k><k| with 0-based k."""
    p = np.zeros((dim, dim), dtype=complex)
    p[k, k] = 1.0
    return p


def transition(dim: int, to: int, frm: int) -> np.ndarray:
    """|to><frm| with 0-based indices."""
    op = np.zeros((dim, dim), dtype=complex)
    op[to, frm] = 1.0
    return op


def dissipator_apply(term: LindbladTerm, rho: np.ndarray) -> np.ndarray:
    """L rho L^dag - 1/2 {L^dag L, rho}, scaled by the term's rate."""
    rho = _require_square(rho, "rho")
    if rho.shape != term.operator.shape:
        raise ValueError(
            f"dimension mismatch: operator {term.operator.shape}, rho {rho.shape}"
        )
    a = term.operator
    ad = dagger(a)
    ada = ad @ a
    out = a @ rho @ ad - 0.5 * (ada @ rho + rho @ ada)
    if term.rate is not None:
        out = term.rate * out
    return out


def vectorize(rho: np.ndarray) -> np.ndarray:
    return _require_square(rho, "rho").reshape(-1, order="F")


def devectorize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise ValueError(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape((dim, dim), order="F")


def commutator_superop(h: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> -i [h, rho]; h need not be Hermitian."""
    h = _require_square(h, "h")
    eye = np.eye(h.shape[0])
    return -1j * (np.kron(eye, h) - np.kron(h.T, eye))


def dissipator_superop(term: LindbladTerm) -> np.ndarray:
    a = term.amplitude()
    eye = np.eye(a.shape[0])
    ada = dagger(a) @ a
    return np.kron(a.conj(), a) - 0.5 * (np.kron(eye, ada) + np.kron(ada.T, eye))


def cross_dissipator_superop(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator of the mixed dissipator between two jump amplitudes.

    rho -> a rho b^dag + b rho a^dag - 1/2 {a^dag b + b^dag a, rho}; it is
    the part of D[a + b] - D[a] - D[b].
    """
    eye = np.eye(a.shape[0])
    x = dagger(a) @ b + dagger(b) @ a
    return (
        np.kron(b.conj(), a)
        + np.kron(a.conj(), b)
        - 0.5 * (np.kron(eye, x) + np.kron(x.T, eye))
    )


def liouvillian(h: np.ndarray, terms=()) -> np.ndarray:
    """Matrix of the Lindblad generator acting on vec(rho)."""
    h = _require_square(h, "h")
    if not is_hermitian(h):
        raise ValueError("Hamiltonian is not Hermitian")
    sup = commutator_superop(h)
    for term in terms:
        if term.dim != h.shape[0]:
            raise ValueError(
                f"jump operator dim {term.dim} does not match Hamiltonian dim {h.shape[0]}"
            )
        sup = sup + dissipator_superop(term)
    return sup


def lindblad_rhs(h: np.ndarray, terms, rho: np.ndarray) -> np.ndarray:
    """Right-hand side -i[h, rho] + sum of dissipators, evaluated directly."""
    out = -1j * (h @ rho - rho @ h)
    for term in terms:
        out = out + dissipator_apply(term, rho)
    return out


def unitary_exp(a: np.ndarray) -> np.ndarray:
    """exp(-i a) for Hermitian a, by eigendecomposition."""
    a = _require_square(a, "a")
    if not is_hermitian(a):
        raise ValueError("generator of unitary_exp must be Hermitian")
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    return (v * np.exp(-1j * w)) @ dagger(v)


def check_density_matrix(rho: np.ndarray, tol: float = TOL.trace, positive: bool = True):
    """Raise ValueError unless rho is a unit-trace Hermitian (PSD) matrix."""
    rho = _require_square(rho, "rho")
    tr = np.trace(rho)
    if abs(tr - 1) > tol:
        raise ValueError(f"trace {tr} differs from 1")
    if np.max(np.abs(rho - dagger(rho))) > tol:
        raise ValueError("density matrix is not Hermitian")
    if positive:
        lo = np.linalg.eigvalsh((rho + dagger(rho)) / 2).min()
        if lo < -tol:
            raise ValueError(f"density matrix has negative eigenvalue {lo}")
    return rho


def pure_state(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-distributed full-rank (or given rank) density matrix."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho)


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (g + dagger(g)) / 2
