"""Pure-state representations and the Fubini-Study distance.

A state vector is a length-2 complex array, a Bloch (polarization) vector a
length-3 real array and a density matrix a 2x2 complex array. Only pure
states are accepted; every constructor validates its input.

Distances are measured in radians of great-circle arc on the Bloch sphere,
so orthogonal states are ``pi`` apart and a full circuit has length ``2*pi``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .mat2 import HERMITIAN_TOL, IDENTITY, SIGMA

NORM_TOL = 1e-12
PURITY_TOL = 1e-10
ANTIPODAL_TOL = 1e-9

SPIN_UP = np.array([1.0, 0.0], dtype=complex)
SPIN_DOWN = np.array([0.0, 1.0], dtype=complex)
NORTH = np.array([0.0, 0.0, 1.0])
SOUTH = np.array([0.0, 0.0, -1.0])


def as_state(psi, *, normalized: bool = True) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise DomainError(f"state vector must have two amplitudes, got shape {psi.shape}")
    if normalized:
        norm2 = float(np.vdot(psi, psi).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise DomainError(f"state vector is not normalized (|psi|^2 = {norm2!r})")
    return psi


def as_bloch(P) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if P.shape != (3,):
        raise DomainError(f"Bloch vector must have three components, got shape {P.shape}")
    norm = float(np.linalg.norm(P))
    if abs(norm - 1.0) > NORM_TOL:
        raise DomainError(f"Bloch vector must have unit norm for a pure state, got {norm!r}")
    return P


def as_density(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DomainError(f"density matrix must be 2x2, got shape {rho.shape}")
    trace = rho[0, 0] + rho[1, 1]
    if abs(trace - 1.0) > NORM_TOL:
        raise DomainError(f"density matrix trace is {trace!r}, expected 1")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise DomainError("density matrix is not Hermitian")
    purity = float(np.trace(rho @ rho).real)
    if abs(purity - 1.0) > PURITY_TOL:
        raise DomainError(f"density matrix is not pure (tr rho^2 = {purity!r})")
    return rho


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return psi / np.sqrt(np.vdot(psi, psi).real)


def state_to_bloch(psi) -> np.ndarray:
    """Polarization vector ``P_i = <psi|sigma_i|psi>``."""
    psi = as_state(psi)
    a, b = psi
    cross = np.conj(a) * b
    return np.array([2 * cross.real, 2 * cross.imag, abs(a) ** 2 - abs(b) ** 2])


def bloch_to_state(P) -> np.ndarray:
    """A state vector whose polarization is ``P`` (global phase fixed)."""
    x, y, z = as_bloch(P)
    if z >= 0:
        psi = np.array([1 + z, x + 1j * y], dtype=complex)
    else:
        psi = np.array([x - 1j * y, 1 - z], dtype=complex)
    return normalize(psi)


def bloch_to_density(P) -> np.ndarray:
    """``rho = (1 + P.sigma) / 2``."""
    P = as_bloch(P)
    return 0.5 * (IDENTITY + np.tensordot(P, SIGMA, axes=1))


def density_to_bloch(rho) -> np.ndarray:
    rho = as_density(rho)
    return np.array([np.trace(rho @ s).real for s in SIGMA])


def fidelity(psi1, psi2) -> float:
    return float(abs(np.vdot(as_state(psi1), as_state(psi2))) ** 2)


def fs_distance(psi1, psi2) -> float:
    """Fubini-Study distance ``2 arccos |<psi1|psi2>|`` in ``[0, pi]``.

    Evaluated as ``2 atan2(|<psi1_perp|psi2>|, |<psi1|psi2>|)``, which is the
    same quantity for normalized states but stays accurate at 0 and pi.
    """
    psi1, psi2 = as_state(psi1), as_state(psi2)
    perp = np.array([-np.conj(psi1[1]), np.conj(psi1[0])])
    return 2.0 * math.atan2(abs(np.vdot(perp, psi2)), abs(np.vdot(psi1, psi2)))


def bloch_angle(P1, P2) -> float:
    """Great-circle angle between two Bloch vectors."""
    P1, P2 = as_bloch(P1), as_bloch(P2)
    # atan2 stays accurate near 0 and pi where arccos of the dot product does not.
    return float(np.arctan2(np.linalg.norm(np.cross(P1, P2)), np.dot(P1, P2)))


def is_antipodal(P1, P2, tol: float = ANTIPODAL_TOL) -> bool:
    return bool(np.dot(as_bloch(P1), as_bloch(P2)) <= -1.0 + tol)
