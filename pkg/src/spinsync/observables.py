"""Synchronization measure and Husimi-Q phase-space distributions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .operators import TOL, spin_operators, unitary_exp


def sync_measure(rho: np.ndarray, spin: float = 1) -> float:
    """|sum_M rho_{M,M+1}| over the spin basis ordered +S..-S."""
    rho = np.asarray(rho)
    dim = int(round(2 * spin + 1))
    if rho.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} density matrix for spin {spin}, got {rho.shape}")
    return float(abs(np.trace(rho, offset=1)))


def ground_block(rho6: np.ndarray, renormalize: bool = False, n_ground: int = 3) -> np.ndarray:
    rho6 = np.asarray(rho6)
    if rho6.ndim != 2 or rho6.shape[0] != rho6.shape[1] or rho6.shape[0] <= n_ground:
        raise ValueError(f"expected a full-space density matrix, got shape {rho6.shape}")
    block = rho6[:n_ground, :n_ground].copy()
    if renormalize:
        tr = np.trace(block).real
        if tr <= 0:
            raise ValueError("ground block has zero trace")
        block = block / tr
    return block


def spin_coherent_state(theta: float, phi: float, spin: float = 1) -> np.ndarray:
    """exp(-i phi Sz) exp(-i theta Sy) |M=+S>."""
    _, sy, sz, _, _ = spin_operators(spin)
    top = np.zeros(sz.shape[0], dtype=complex)
    top[0] = 1.0
    return unitary_exp(phi * sz) @ (unitary_exp(theta * sy) @ top)


def coherent_state_grid(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Spin-1 coherent states on a (theta, phi) grid, shape (nt, np, 3).

    Uses the closed-form rotation d^1_{m,1}(theta) times exp(-i m phi).
    """
    th = np.asarray(theta)[:, None]
    ph = np.asarray(phi)[None, :]
    c2 = np.cos(th / 2) ** 2
    s2 = np.sin(th / 2) ** 2
    mid = np.sin(th) / np.sqrt(2)
    return np.stack(
        np.broadcast_arrays(np.exp(-1j * ph) * c2, mid + 0 * ph, np.exp(1j * ph) * s2), axis=-1
    )


@dataclass
class HusimiField:
    theta: np.ndarray
    phi: np.ndarray
    values: np.ndarray  # shape (n_theta, n_phi)
    spin: float = 1

    def phi_marginal(self) -> np.ndarray:
        """Integral of Q over cos(theta) at every phi."""
        return simpson(self.values * np.sin(self.theta)[:, None], x=self.theta, axis=0)

    def normalization(self) -> float:
        dphi = 2 * np.pi / self.phi.size
        return float(np.sum(self.phi_marginal()) * dphi)


def default_phi_grid(n_phi: int) -> np.ndarray:
    return -np.pi + 2 * np.pi * np.arange(n_phi) / n_phi


def husimi_q(rho: np.ndarray, n_theta: int = 181, n_phi: int = 360) -> HusimiField:
    """Q(theta, phi) = (3 / 4 pi) <theta,phi|rho|theta,phi> for spin 1.

    theta spans [0, pi] including both poles; phi is periodic on [-pi, pi).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (3, 3):
        raise ValueError("Husimi-Q is implemented for spin-1 (3x3) states")
    theta = np.linspace(0, np.pi, n_theta)
    phi = default_phi_grid(n_phi)
    psi = coherent_state_grid(theta, phi)
    q = np.einsum("tpi,ij,tpj->tp", psi.conj(), rho, psi).real
    return HusimiField(theta, phi, 3 / (4 * np.pi) * q, spin=1)


@dataclass
class HusimiPeak:
    theta: float
    phi: float
    phase_preference: bool
    value: float


def _parabola_offset(ym: float, y0: float, yp: float) -> float:
    den = ym - 2 * y0 + yp
    if den >= 0:
        return 0.0
    return float(np.clip(0.5 * (ym - yp) / den, -0.5, 0.5))


def husimi_max(field: HusimiField, tol=TOL) -> HusimiPeak:
    """Grid argmax refined by a three-point parabola along each axis.

    phi is reported in (-pi, pi]; a maximum within one grid cell of the
    seam is reported as +pi.
    """
    q = field.values
    spread = np.max(q.max(axis=1) - q.min(axis=1))
    it, ip = np.unravel_index(np.argmax(q), q.shape)
    if spread <= tol.phase_uniform:
        return HusimiPeak(float("nan"), float("nan"), False, float(q[it, ip]))
    nt, nphi = q.shape
    dth = field.theta[1] - field.theta[0]
    dph = 2 * np.pi / nphi
    theta = field.theta[it]
    if 0 < it < nt - 1:
        theta += dth * _parabola_offset(q[it - 1, ip], q[it, ip], q[it + 1, ip])
    phi = field.phi[ip] + dph * _parabola_offset(
        q[it, (ip - 1) % nphi], q[it, ip], q[it, (ip + 1) % nphi]
    )
    phi = float(np.angle(np.exp(1j * phi)))
    if np.pi - abs(phi) <= dph:
        phi = np.pi
    return HusimiPeak(float(theta), phi, True, float(q[it, ip]))


def phase_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle."""
    return float(abs(np.angle(np.exp(1j * (a - b)))))
