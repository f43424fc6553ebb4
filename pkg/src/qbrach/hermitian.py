"""Minimal-time Hermitian Hamiltonians and state transport under them.

A Hamiltonian ``H = (O0*1 + gap*axis.sigma)/2`` has eigenvalues
``(O0 -+ gap)/2``. It rotates the Bloch vector about ``axis`` at angular
speed ``gap`` (``dP/dt = gap*axis x P``), so transport between two states
is fastest when the axis is perpendicular to both of them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import bloch
from .errors import DegeneratePairError, DomainError
from .mat2 import IDENTITY, SIGMA, eig2, mat_exp
from .search import SCAN_POINTS, first_arrival, golden_section_min

AXIS_TOL = 1e-10


@dataclass(frozen=True)
class EnergySpectrum:
    E1: float
    E2: float

    def __post_init__(self):
        if self.E2 < self.E1:
            raise DomainError(f"E2 ({self.E2}) must not be below E1 ({self.E1})")

    @property
    def deltaE(self) -> float:
        return (self.E2 - self.E1) / 2


@dataclass(frozen=True)
class TransportMetrics:
    """Arc length, speed and the resulting transport time ``distance/speed``."""

    distance: float
    speed: float

    @property
    def time(self) -> float:
        if self.speed <= 0:
            return math.inf
        return self.distance / self.speed


@dataclass(frozen=True)
class HermitianHamiltonian:
    """``H = (O0*1 + gap*axis.sigma) / 2`` with ``axis`` a unit vector."""

    O0: float
    axis: np.ndarray
    gap: float
    _matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        if axis.shape != (3,):
            raise DomainError(f"axis must be a 3-vector, got shape {axis.shape}")
        norm = float(np.linalg.norm(axis))
        if abs(norm - 1.0) > AXIS_TOL:
            raise DomainError(f"axis must be a unit vector, got norm {norm!r}")
        if not self.gap > 0:
            raise DomainError(f"gap must be positive, got {self.gap!r}")
        object.__setattr__(self, "axis", axis)
        matrix = 0.5 * (self.O0 * IDENTITY + self.gap * np.tensordot(axis, SIGMA, axes=1))
        object.__setattr__(self, "_matrix", matrix)

    @classmethod
    def from_matrix(cls, M) -> "HermitianHamiltonian":
        from .mat2 import decompose, is_hermitian

        if not is_hermitian(M):
            raise DomainError("matrix is not Hermitian")
        dec = decompose(M)
        vec = dec.vector.real
        norm = float(np.linalg.norm(vec))
        if norm == 0:
            raise DomainError("matrix is a multiple of the identity; no rotation axis")
        return cls(O0=2 * dec.scalar.real, axis=vec / norm, gap=2 * norm)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix.copy()

    @property
    def vector(self) -> np.ndarray:
        """The rotation vector ``gap*axis``."""
        return self.gap * self.axis

    def spectrum(self) -> EnergySpectrum:
        vals, _ = eig2(self._matrix)
        return EnergySpectrum(float(vals[0].real), float(vals[1].real))


def transverse_frame(P) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic orthonormal basis ``(e1, e2)`` of the plane normal to ``P``."""
    P = bloch.as_bloch(P)
    v = np.array([1.0, 0.0, 0.0])
    if abs(P @ v) > 0.9:
        v = np.array([0.0, 1.0, 0.0])
    e1 = v - (v @ P) * P
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(P, e1)


def build_optimal_hamiltonian(P_I, P_F, deltaE: float, O0: float = 0.0, theta: float = 0.0) -> HermitianHamiltonian:
    """Fastest Hamiltonian with gap ``2*deltaE`` carrying ``P_I`` to ``P_F``.

    For antipodal endpoints every great circle through them is a geodesic and
    ``theta`` picks one: the axis is ``cos(theta)*e1 + sin(theta)*e2`` in the
    frame of :func:`transverse_frame`. Otherwise the axis is along
    ``P_I x P_F`` and ``theta`` is ignored.
    """
    if not deltaE > 0:
        raise DomainError(f"deltaE must be positive, got {deltaE!r}")
    P_I, P_F = bloch.as_bloch(P_I), bloch.as_bloch(P_F)
    if bloch.bloch_angle(P_I, P_F) < 1e-12:
        raise DegeneratePairError("initial and final Bloch vectors coincide")
    if bloch.is_antipodal(P_I, P_F):
        e1, e2 = transverse_frame(P_I)
        axis = math.cos(theta) * e1 + math.sin(theta) * e2
    else:
        axis = np.cross(P_I, P_F)
    axis = axis / np.linalg.norm(axis)
    return HermitianHamiltonian(O0=O0, axis=axis, gap=2 * deltaE)


def speed(H: HermitianHamiltonian) -> float:
    """Geodesic transport speed ``E2 - E1``."""
    return H.gap


def propagator(H: HermitianHamiltonian, t) -> np.ndarray:
    return mat_exp(H.matrix, -1j * np.asarray(t, dtype=float))


def evolve_state(H: HermitianHamiltonian, psi, t):
    """``exp(-i t H) psi``; ``t`` may be an array of times."""
    psi = bloch.as_state(psi)
    return propagator(H, t) @ psi


def evolve_bloch_ode(H: HermitianHamiltonian, P, t: float, steps: int, return_drift: bool = False):
    """Integrate ``dP/dt = O x P`` with fixed-step classical RK4.

    ``P`` is renormalized after each step. With ``return_drift`` the largest
    pre-normalization deviation ``| |P| - 1 |`` is returned alongside.
    """
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps!r}")
    x, y, z = (float(c) for c in bloch.as_bloch(P))
    ox, oy, oz = (float(c) for c in H.vector)
    h = t / steps

    def rate(x, y, z):
        return oy * z - oz * y, oz * x - ox * z, ox * y - oy * x

    drift = 0.0
    for _ in range(steps):
        k1 = rate(x, y, z)
        k2 = rate(x + 0.5 * h * k1[0], y + 0.5 * h * k1[1], z + 0.5 * h * k1[2])
        k3 = rate(x + 0.5 * h * k2[0], y + 0.5 * h * k2[1], z + 0.5 * h * k2[2])
        k4 = rate(x + h * k3[0], y + h * k3[1], z + h * k3[2])
        x += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        y += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        z += h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        norm = math.sqrt(x * x + y * y + z * z)
        drift = max(drift, abs(norm - 1.0))
        x, y, z = x / norm, y / norm, z / norm
    P = np.array([x, y, z])
    if return_drift:
        return P, drift
    return P


def _orthogonal_complement(psi) -> np.ndarray:
    return np.array([-np.conj(psi[1]), np.conj(psi[0])])


def _infidelity_fn(H: HermitianHamiltonian, psi_I, psi_target):
    """Vectorized ``1 - |<target|psi(t)>|^2``, computed from the orthogonal
    complement so that values near zero keep full relative precision."""
    perp = _orthogonal_complement(bloch.as_state(psi_target))
    psi_I = bloch.as_state(psi_I)

    def infidelity(t):
        return np.abs(evolve_state(H, psi_I, t) @ np.conj(perp)) ** 2

    return infidelity


def default_t_max(gap: float) -> float:
    """Two full rotation periods."""
    return 4 * math.pi / gap


def passage_time(H: HermitianHamiltonian, psi_I, psi_F, t_max: Optional[float] = None) -> Optional[float]:
    """First time ``psi_I`` evolves onto ``psi_F`` (up to phase), or ``None``."""
    if t_max is None:
        t_max = default_t_max(H.gap)
    if not t_max > 0:
        raise DomainError(f"t_max must be positive, got {t_max!r}")
    return first_arrival(_infidelity_fn(H, psi_I, psi_F), 0.0, t_max)


def round_trip_time(H: HermitianHamiltonian, psi_I, psi_via, t_max: Optional[float] = None) -> Optional[float]:
    """First return to ``psi_I`` after having passed through ``psi_via``."""
    if t_max is None:
        t_max = default_t_max(H.gap)
    if not t_max > 0:
        raise DomainError(f"t_max must be positive, got {t_max!r}")
    t1 = first_arrival(_infidelity_fn(H, psi_I, psi_via), 0.0, t_max)
    if t1 is None or t1 >= t_max:
        return None
    return first_arrival(_infidelity_fn(H, psi_I, psi_I), t1, t_max)


def transport_metrics(psi_I, psi_F, H: HermitianHamiltonian) -> TransportMetrics:
    return TransportMetrics(distance=bloch.fs_distance(psi_I, psi_F), speed=speed(H))


# -- brute-force certification -------------------------------------------------

# Grid axes only come within roughly half a lattice spacing of the feasible
# set, so candidate selection uses a loose infidelity threshold.
CANDIDATE_TOL = 0.05
N_CANDIDATES = 3


def fibonacci_axes(n: int, seed: Optional[int] = None) -> np.ndarray:
    """``n`` near-uniform unit vectors on a Fibonacci lattice.

    A ``seed`` applies a reproducible random rotation to the whole lattice.
    """
    i = np.arange(n)
    z = 1.0 - (2 * i + 1) / n
    r = np.sqrt(1.0 - z * z)
    phi = i * math.pi * (3.0 - math.sqrt(5.0))
    pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    if seed is not None:
        from scipy.spatial.transform import Rotation

        pts = Rotation.random(random_state=seed).apply(pts)
        pts /= np.linalg.norm(pts, axis=1)[:, None]
    return pts


def _closest_approach(axis, psi_I, psi_F, gap: float, t_max: float, n_grid: int) -> tuple[float, float]:
    """Time and infidelity of the first near-arrival (``CANDIDATE_TOL``) at ``psi_F``."""
    # psi(t) = cos(gap t/2) psi_I - i sin(gap t/2) (axis.sigma) psi_I, projected
    # on the complement of psi_F: two fixed overlaps carry the whole time dependence.
    perp = np.conj(_orthogonal_complement(psi_F))
    n_sigma = np.tensordot(np.asarray(axis, dtype=float), SIGMA, axes=1)
    A = complex(perp @ psi_I)
    B = complex(perp @ (n_sigma @ psi_I))
    half = 0.5 * gap

    def infid(t):
        return np.abs(A * np.cos(half * t) - 1j * B * np.sin(half * t)) ** 2

    def infid_scalar(x: float) -> float:
        return abs(A * math.cos(half * x) - 1j * B * math.sin(half * x)) ** 2

    t = np.linspace(0.0, t_max, n_grid)
    f = infid(t)
    left = np.concatenate(([np.inf], f[:-1]))
    right = np.concatenate((f[1:], [np.inf]))
    minima = np.flatnonzero((f <= left) & (f <= right) & (f <= CANDIDATE_TOL) & (t > 0))
    if len(minima) == 0:
        return math.inf, 1.0
    k = minima[0]
    lo, hi = t[max(k - 1, 0)], t[min(k + 1, n_grid - 1)]
    return golden_section_min(infid_scalar, lo, hi)


def _merit(t_star: float, f_star: float, gap: float) -> float:
    """Arrival time plus the remaining arc at full speed."""
    return t_star + 2 * math.asin(math.sqrt(min(max(f_star, 0.0), 1.0))) / gap


def _axis_from_angles(frame, polar: float, azimuth: float) -> np.ndarray:
    e1, e2, p = frame
    return math.sin(polar) * (math.cos(azimuth) * e1 + math.sin(azimuth) * e2) + math.cos(polar) * p


def _refine(axis0, frame, psi_I, psi_F, gap, t_max, width) -> np.ndarray:
    e1, e2, p = frame
    polar0 = math.acos(max(-1.0, min(1.0, float(axis0 @ p))))
    azimuth0 = math.atan2(float(axis0 @ e2), float(axis0 @ e1))
    n_grid = 2000
    lo_p, hi_p = max(polar0 - width, 1e-6), min(polar0 + width, math.pi - 1e-6)

    def project(azimuth: float) -> tuple[float, float, float]:
        def infid(polar):
            return _closest_approach(_axis_from_angles(frame, polar, azimuth), psi_I, psi_F, gap, t_max, n_grid)[1]

        polar, _ = golden_section_min(infid, lo_p, hi_p, tol=1e-10)
        t_star, f_star = _closest_approach(_axis_from_angles(frame, polar, azimuth), psi_I, psi_F, gap, t_max, n_grid)
        return polar, t_star, f_star

    def outer(azimuth: float) -> float:
        _, t_star, f_star = project(azimuth)
        return _merit(t_star, f_star, gap)

    azimuth, _ = golden_section_min(outer, azimuth0 - width, azimuth0 + width, tol=1e-7)
    polar, _, _ = project(azimuth)
    return _axis_from_angles(frame, polar, azimuth)


def brute_force_min_passage(
    P_I, P_F, deltaE: float, grid_size: int = 1000, seed: Optional[int] = None, workers: Optional[int] = None
) -> tuple[np.ndarray, float]:
    """Search all rotation axes for the fastest passage ``P_I -> P_F`` at gap ``2*deltaE``.

    This is an independent optimality check: it never uses the closed-form
    optimal axis. Every lattice axis is scanned for its first near-arrival,
    the best few are refined by golden section in spherical coordinates
    about ``P_I`` (polar angle onto the feasible set, azimuth for time), and
    the winner is timed with :func:`passage_time`.

    Lattice evaluations are independent; ``workers > 1`` runs them in a thread
    pool. The reduction sorts on ``(merit, axis)`` so the result does not
    depend on evaluation order.
    """
    if grid_size < 100:
        raise DomainError(f"grid_size must be >= 100, got {grid_size!r}")
    if not deltaE > 0:
        raise DomainError(f"deltaE must be positive, got {deltaE!r}")
    P_I, P_F = bloch.as_bloch(P_I), bloch.as_bloch(P_F)
    if bloch.bloch_angle(P_I, P_F) < 1e-12:
        raise DegeneratePairError("initial and final Bloch vectors coincide")
    psi_I, psi_F = bloch.bloch_to_state(P_I), bloch.bloch_to_state(P_F)
    gap = 2 * deltaE
    t_max = default_t_max(gap)
    axes = fibonacci_axes(grid_size, seed)

    def evaluate(axis):
        return _closest_approach(axis, psi_I, psi_F, gap, t_max, SCAN_POINTS)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate, axes))
    else:
        results = [evaluate(a) for a in axes]

    ranked = sorted(
        (_merit(t, f, gap), tuple(axis)) for axis, (t, f) in zip(axes, results) if math.isfinite(t)
    )
    if not ranked:
        raise DomainError("no lattice axis comes near the target; increase grid_size")

    frame = (*transverse_frame(P_I), P_I)
    width = 2 * math.sqrt(4 * math.pi / grid_size)
    best = None
    for _, axis in ranked[:N_CANDIDATES]:
        refined = _refine(np.array(axis), frame, psi_I, psi_F, gap, t_max, width)
        refined /= np.linalg.norm(refined)
        t = passage_time(HermitianHamiltonian(0.0, refined, gap), psi_I, psi_F, t_max)
        if t is None:
            continue
        key = (t, tuple(refined))
        if best is None or key < best:
            best = key
    if best is None:
        raise DomainError("refinement did not reach the target state")
    return np.array(best[1]), best[0]
