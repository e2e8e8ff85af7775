"""
Line integrals of the quasihyperbolic density 1/δ_D along straight segments.
"""
import logging

import numpy as np
from django.conf import settings
from scipy.integrate import simpson

from geometry.primitives import boundary_distances

logger = logging.getLogger(__name__)


def segments_inside(config, starts, ends):
    """Segments [a,b] contained in D, tested exactly against every circle"""
    a = np.atleast_1d(np.asarray(starts, dtype=complex))
    b = np.atleast_1d(np.asarray(ends, dtype=complex))
    a, b = np.broadcast_arrays(a, b)
    R = config.outer_radius
    inside = (np.abs(a) < R) & (np.abs(b) < R)
    d = b - a
    length2 = np.abs(d) ** 2
    for disk in config.disks:
        offset = disk.center - a
        with np.errstate(invalid='ignore', divide='ignore'):
            t = np.where(length2 > 0, (offset * np.conj(d)).real / length2, 0.0)
        t = np.clip(t, 0.0, 1.0)
        inside &= np.abs(a + t * d - disk.center) > disk.radius
    return inside


def _composite_simpson(config, a, b, panels):
    t = np.linspace(0.0, 1.0, panels + 1)
    points = a[:, None] + (b - a)[:, None] * t[None, :]
    delta = boundary_distances(config, points)
    blocked = np.any(delta <= 0, axis=1)
    with np.errstate(divide='ignore'):
        density = np.where(delta > 0, 1.0 / np.where(delta > 0, delta, 1.0), 0.0)
    values = simpson(density, dx=1.0 / panels, axis=1) * np.abs(b - a)
    values[blocked] = np.inf
    return values


def inverse_distance_integrals(config, starts, ends, tol=None, max_depth=None):
    """
    ∫_[a,b] ds / δ_D(s) for many segments by adaptive Simpson: panel counts
    double per segment until successive estimates agree to tol (relative).
    Segments leaving D get +inf.
    """
    if tol is None:
        tol = settings.SCHOTTKY_LAB['QUADRATURE_TOLERANCE']
    if max_depth is None:
        max_depth = settings.SCHOTTKY_LAB['QUADRATURE_MAX_DEPTH']
    a = np.atleast_1d(np.asarray(starts, dtype=complex))
    b = np.atleast_1d(np.asarray(ends, dtype=complex))
    a, b = np.broadcast_arrays(a, b)
    result = np.zeros(a.shape, dtype=float)

    active = np.flatnonzero(a != b)
    if active.size == 0:
        return result
    panels = 2
    previous = _composite_simpson(config, a[active], b[active], panels)
    for _ in range(max_depth):
        panels *= 2
        current = _composite_simpson(config, a[active], b[active], panels)
        finite = np.isfinite(current)
        with np.errstate(invalid='ignore'):
            converged = ~finite | (np.abs(current - previous) <= tol * np.abs(current))
        extrapolated = np.where(finite, current + (current - previous) / 15.0, np.inf)
        result[active[converged]] = extrapolated[converged]
        active = active[~converged]
        previous = current[~converged]
        if active.size == 0:
            return result

    logger.warning(f"Quadrature: {active.size} segment(s) not converged after {panels} panels")
    result[active] = previous
    return result


def segment_weight(config, a, b, tol=None):
    """Quasihyperbolic length of a single segment"""
    return float(inverse_distance_integrals(config, [a], [b], tol)[0])
