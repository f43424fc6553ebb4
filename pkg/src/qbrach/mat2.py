"""Exact 2x2 complex operator algebra.

Matrices are plain ``(2, 2)`` complex numpy arrays. Every matrix is
decomposed in the Pauli basis ``M = a*1 + b.sigma``, which gives closed
forms for the exponential and the eigensystem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonDiagonalizableError

IDENTITY = np.eye(2, dtype=complex)
SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
SIGMA.setflags(write=False)
IDENTITY.setflags(write=False)

HERMITIAN_TOL = 1e-12
DEFECTIVE_TOL = 1e-12
# Below this |mu| the sinc branch switches to its power series.
SINC_SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class PauliDecomposition:
    """Coefficients of ``M = scalar*1 + vector.sigma``."""

    scalar: complex
    vector: np.ndarray

    def is_real(self, tol: float = HERMITIAN_TOL) -> bool:
        return abs(np.imag(self.scalar)) <= tol and bool(np.all(np.abs(self.vector.imag) <= tol))


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {M.shape}")
    return M


def pauli(index: int) -> np.ndarray:
    """Return the Pauli matrix sigma_1, sigma_2 or sigma_3."""
    if index not in (1, 2, 3):
        raise DomainError(f"Pauli index must be 1, 2 or 3, got {index!r}")
    return SIGMA[index - 1].copy()


def is_hermitian(M, tol: float = HERMITIAN_TOL) -> bool:
    M = as_matrix(M)
    return bool(np.all(np.abs(M - M.conj().T) <= tol))


def decompose(M) -> PauliDecomposition:
    """Pauli coefficients ``a = tr(M)/2`` and ``b_i = tr(sigma_i M)/2``."""
    M = as_matrix(M)
    scalar = (M[0, 0] + M[1, 1]) / 2
    vector = np.array(
        [
            (M[0, 1] + M[1, 0]) / 2,
            1j * (M[0, 1] - M[1, 0]) / 2,
            (M[0, 0] - M[1, 1]) / 2,
        ],
        dtype=complex,
    )
    return PauliDecomposition(complex(scalar), vector)


def recompose(dec: PauliDecomposition) -> np.ndarray:
    a = dec.scalar
    bx, by, bz = dec.vector
    return np.array([[a + bz, bx - 1j * by], [bx + 1j * by, a - bz]], dtype=complex)


def _cos_sinc(mu):
    """cos(mu) and sin(mu)/mu, both even entire functions of mu."""
    mu = np.asarray(mu, dtype=complex)
    mu2 = mu * mu
    small = np.abs(mu) < SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, mu)
    sinc = np.where(small, 1 - mu2 / 6 + mu2 * mu2 / 120, np.sin(safe) / safe)
    return np.cos(mu), sinc


def mat_exp(M, scale=1.0) -> np.ndarray:
    """Closed-form ``exp(scale * M)``.

    ``scale`` may be a scalar or an array of scalars; in the latter case the
    result has shape ``scale.shape + (2, 2)``.

    With ``scale*M = a*1 + c.sigma`` we have ``(c.sigma)^2 = (c.c) 1``, so with
    ``mu = sqrt(-c.c)`` this evaluates ``e^a (cos(mu) 1 + sinc(mu) c.sigma)``.
    Both factors are even in ``mu``, so the square-root branch is irrelevant.
    """
    dec = decompose(M)
    scale = np.asarray(scale, dtype=complex)
    a = scale * dec.scalar
    c = scale[..., None] * dec.vector
    mu = np.sqrt(-np.sum(c * c, axis=-1))
    cos_mu, sinc_mu = _cos_sinc(mu)
    ea = np.exp(a)
    k = (ea * sinc_mu)[..., None] * c
    out = np.empty(scale.shape + (2, 2), dtype=complex)
    diag = ea * cos_mu
    out[..., 0, 0] = diag + k[..., 2]
    out[..., 1, 1] = diag - k[..., 2]
    out[..., 0, 1] = k[..., 0] - 1j * k[..., 1]
    out[..., 1, 0] = k[..., 0] + 1j * k[..., 1]
    return out


def _phase_fix(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    lead = v[0] if abs(v[0]) > 1e-12 else v[1]
    return v * (abs(lead) / lead)


def eig2(M) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and unit eigenvectors of a diagonalizable 2x2 matrix.

    Eigenvalues are ordered by real part ascending, ties broken by the
    imaginary part. ``vecs[:, k]`` is the eigenvector of ``vals[k]``.

    Raises:
        NonDiagonalizableError: the eigenvalues coincide but the matrix is
            not a multiple of the identity.
    """
    M = as_matrix(M)
    scale = max(1.0, float(np.max(np.abs(M))))
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    half_trace = (a + d) / 2
    disc = ((a - d) / 2) ** 2 + b * c
    if abs(disc) <= DEFECTIVE_TOL * scale**2:
        if np.max(np.abs(M - half_trace * IDENTITY)) <= DEFECTIVE_TOL * scale:
            return np.array([half_trace, half_trace]), np.eye(2, dtype=complex)
        raise NonDiagonalizableError(
            f"matrix is defective (discriminant {abs(disc):.3e}); eigenvectors coalesce"
        )
    root = np.sqrt(disc)
    lams = [complex(half_trace - root), complex(half_trace + root)]
    tie_tol = 1e-12 * scale
    lams.sort(key=lambda lam: (lam.real, lam.imag))
    if abs(lams[0].real - lams[1].real) <= tie_tol and lams[0].imag > lams[1].imag:
        lams.reverse()
    vecs = np.empty((2, 2), dtype=complex)
    for k, lam in enumerate(lams):
        v1 = np.array([b, lam - a])
        v2 = np.array([lam - d, c])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        vecs[:, k] = _phase_fix(v)
    return np.array(lams), vecs
