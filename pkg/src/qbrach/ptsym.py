"""PT-symmetric two-level Hamiltonians and transport under the CPT inner product.

The family is ``H = [[r e^{i theta}, s], [s, r e^{-i theta}]] + offset*1``.
In the unbroken phase ``s^2 > r^2 sin^2 theta`` its spectrum is real,
``eps_pm = r cos(theta) + offset +- s cos(alpha)`` with
``sin(alpha) = (r/s) sin(theta)``, and time evolution is unitary with
respect to the CPT inner product built from

    C = [[i sin(alpha), 1], [1, -i sin(alpha)]] / cos(alpha).

Orthogonal (in the ordinary sense) states ``|up>`` and ``|down>`` are then
``pi - 2|alpha|`` apart along one direction of travel and ``pi + 2|alpha|``
along the other. For ``alpha > 0`` the short leg is ``down -> up``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import bloch
from .errors import DomainError, ExceptionalPointError, PTBrokenError
from .mat2 import IDENTITY, SIGMA, mat_exp
from .search import first_arrival

PARITY = SIGMA[0].copy()
PHASE_TOL = 1e-12


@dataclass(frozen=True)
class PTHamiltonian:
    r: float
    s: float
    theta: float
    offset: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise DomainError(f"r must be non-negative, got {self.r!r}")
        if not self.s > 0:
            raise DomainError(f"s must be positive, got {self.s!r}")

    @property
    def matrix(self) -> np.ndarray:
        z = self.r * np.exp(1j * self.theta)
        return np.array([[z, self.s], [self.s, np.conj(z)]], dtype=complex) + self.offset * IDENTITY

    @property
    def discriminant(self) -> float:
        return self.s**2 - (self.r * math.sin(self.theta)) ** 2

    def is_pt_symmetric(self, tol: float = 1e-12) -> bool:
        """``(PT) H (PT)^-1 = P conj(H) P`` equals ``H``."""
        M = self.matrix
        return bool(np.max(np.abs(PARITY @ M.conj() @ PARITY - M)) <= tol)


@dataclass(frozen=True)
class PTSpectrum:
    eps_plus: float
    eps_minus: float
    alpha: float
    omega: float

    @property
    def deltaE(self) -> float:
        return self.omega / 2


@dataclass(frozen=True)
class CPTOperator:
    C: np.ndarray

    @property
    def metric(self) -> np.ndarray:
        """Hermitian positive ``G`` with ``<u|v>_CPT = u^dagger G v``."""
        return (self.C @ PARITY).T


def _check_unbroken(H: PTHamiltonian) -> None:
    d = H.discriminant
    if abs(d) <= PHASE_TOL:
        raise ExceptionalPointError(f"exceptional point: s^2 - r^2 sin^2(theta) = {d:.3e}")
    if d < 0:
        raise PTBrokenError(f"PT symmetry is broken: s^2 - r^2 sin^2(theta) = {d:.6g} < 0")


def pt_spectrum(H: PTHamiltonian) -> PTSpectrum:
    _check_unbroken(H)
    alpha = math.asin(H.r / H.s * math.sin(H.theta))
    half = H.s * math.cos(alpha)
    center = H.r * math.cos(H.theta) + H.offset
    return PTSpectrum(eps_plus=center + half, eps_minus=center - half, alpha=alpha, omega=2 * half)


def build_pt_from_alpha(alpha: float, deltaE: float, rcos_offset: float = 0.0) -> PTHamiltonian:
    """Canonical ``theta = +-pi/2`` member with the given ``alpha`` and gap ``2*deltaE``.

    ``s = deltaE / cos(alpha)`` and ``r = s |sin(alpha)|``; the sign of
    ``alpha`` is carried by ``theta`` so that ``r`` stays non-negative.
    ``rcos_offset`` adds a multiple of the identity.
    """
    if not abs(alpha) < math.pi / 2:
        raise DomainError(f"|alpha| must be below pi/2, got {alpha!r}")
    if not deltaE > 0:
        raise DomainError(f"deltaE must be positive, got {deltaE!r}")
    s = deltaE / math.cos(alpha)
    theta = math.pi / 2 if alpha >= 0 else -math.pi / 2
    return PTHamiltonian(r=s * abs(math.sin(alpha)), s=s, theta=theta, offset=rcos_offset)


def c_operator(H: PTHamiltonian) -> CPTOperator:
    alpha = pt_spectrum(H).alpha
    sa, ca = math.sin(alpha), math.cos(alpha)
    return CPTOperator(np.array([[1j * sa, 1], [1, -1j * sa]], dtype=complex) / ca)


def cpt_inner(u, v, C: CPTOperator) -> complex:
    """``<u|v>_CPT = (C P conj(u))^T v``; conjugate-linear in ``u``."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    return complex((C.C @ (PARITY @ np.conj(u))) @ v)


def cpt_norm2(u, C: CPTOperator) -> float:
    return cpt_inner(u, u, C).real


def pt_evolve(H: PTHamiltonian, psi, t):
    """``exp(-i t H) psi`` without renormalization; ``t`` may be an array."""
    psi = np.asarray(psi, dtype=complex)
    return mat_exp(H.matrix, -1j * np.asarray(t, dtype=float)) @ psi


def nqm_distances(alpha: float) -> tuple[float, float]:
    """Forward and return arc lengths ``(pi - 2|alpha|, pi + 2|alpha|)``."""
    if not abs(alpha) < math.pi / 2:
        raise DomainError(f"|alpha| must be below pi/2, got {alpha!r}")
    return math.pi - 2 * abs(alpha), math.pi + 2 * abs(alpha)


def short_leg_endpoints(alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """``(psi_I, psi_F)`` among up/down for which the passage is the ``pi - 2|alpha|`` leg."""
    if alpha >= 0:
        return bloch.SPIN_DOWN.copy(), bloch.SPIN_UP.copy()
    return bloch.SPIN_UP.copy(), bloch.SPIN_DOWN.copy()


def _cpt_infidelity_fn(H: PTHamiltonian, C: CPTOperator, psi_I, psi_target):
    """Vectorized ``1 - |<F|psi>|^2 / (<F|F> <psi|psi>)`` in the CPT metric.

    Evaluated through the CPT-orthogonal complement of the target so that
    values near zero keep full relative precision.
    """
    G = C.metric
    F = np.asarray(psi_target, dtype=complex)
    w = G @ F
    perp = np.array([-np.conj(w[1]), np.conj(w[0])])
    perp_row = np.conj(perp) @ G
    perp_norm2 = float((np.conj(perp) @ G @ perp).real)
    psi_I = np.asarray(psi_I, dtype=complex)

    def infidelity(t):
        psi = pt_evolve(H, psi_I, t)
        norm2 = np.einsum("...i,ij,...j->...", np.conj(psi), G, psi).real
        return np.abs(psi @ perp_row) ** 2 / (perp_norm2 * norm2)

    return infidelity


def default_t_max(H: PTHamiltonian) -> float:
    """Two full periods of the CPT-unitary evolution."""
    return 4 * math.pi / pt_spectrum(H).omega


def pt_passage_time(H: PTHamiltonian, psi_I, psi_F, t_max: Optional[float] = None) -> Optional[float]:
    """First time the evolved ray coincides with ``psi_F`` in the CPT sense."""
    C = c_operator(H)
    if t_max is None:
        t_max = default_t_max(H)
    if not t_max > 0:
        raise DomainError(f"t_max must be positive, got {t_max!r}")
    return first_arrival(_cpt_infidelity_fn(H, C, psi_I, psi_F), 0.0, t_max)


def pt_round_trip_time(H: PTHamiltonian, psi_I, psi_via, t_max: Optional[float] = None) -> Optional[float]:
    """First return to ``psi_I`` after an arrival at ``psi_via``."""
    C = c_operator(H)
    if t_max is None:
        t_max = default_t_max(H)
    if not t_max > 0:
        raise DomainError(f"t_max must be positive, got {t_max!r}")
    t1 = first_arrival(_cpt_infidelity_fn(H, C, psi_I, psi_via), 0.0, t_max)
    if t1 is None or t1 >= t_max:
        return None
    return first_arrival(_cpt_infidelity_fn(H, C, psi_I, psi_I), t1, t_max)
