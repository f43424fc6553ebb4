"""Golden-section minimization and first-arrival detection on a time axis."""

from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

SCAN_POINTS = 10_000
SCAN_TOL = 1e-6
HIT_TOL = 1e-9
REFINE_WIDTH = 1e-12


def golden_section_min(
    f: Callable[[float], float], a: float, b: float, tol: float = REFINE_WIDTH, max_iter: int = 200
) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[a, b]`` until the bracket is narrower than ``tol``.

    Returns the best abscissa seen and its value.
    """
    if b < a:
        a, b = b, a
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    if fc <= fd:
        return c, fc
    return d, fd


def first_arrival(
    infidelity: Callable[[np.ndarray], np.ndarray],
    t_lo: float,
    t_hi: float,
    *,
    n_grid: int = SCAN_POINTS,
    scan_tol: float = SCAN_TOL,
    hit_tol: float = HIT_TOL,
    refine_width: float = REFINE_WIDTH,
) -> Optional[float]:
    """Earliest time in ``(t_lo, t_hi]`` at which ``infidelity`` touches zero.

    ``infidelity`` must accept an array of times. The scan looks for discrete
    local minima on an ``n_grid`` point grid whose value is at most
    ``scan_tol``; each such bracket is refined by golden section and accepted
    once the refined infidelity is at most ``hit_tol``.
    """
    t = np.linspace(t_lo, t_hi, n_grid)
    f = np.asarray(infidelity(t), dtype=float)
    n = len(t)
    left = np.concatenate(([np.inf], f[:-1]))
    right = np.concatenate((f[1:], [np.inf]))
    minima = np.flatnonzero((f <= left) & (f <= right) & (f <= scan_tol))

    def scalar(x: float) -> float:
        return float(infidelity(np.array([x]))[0])

    for k in minima:
        lo = t[max(k - 1, 0)]
        hi = t[min(k + 1, n - 1)]
        t_star, f_star = golden_section_min(scalar, lo, hi, refine_width)
        if t_star - t_lo <= 2 * refine_width:
            continue
        if f_star <= hit_tol:
            return float(t_star)
    return None
