"""
Distortion of planar maps on small scales: circular dilatation, Koebe
bi-Lipschitz ratios on B(z0, c·r), and Whitney-cube distortion.
"""
import logging
import math

import numpy as np
from scipy.spatial.distance import pdist

from geometry.exceptions import PoleError
from geometry.primitives import boundary_distances

from .exceptions import MapEvaluationError
from .models import DilatationReport, DistortionReport

logger = logging.getLogger(__name__)


def _evaluate(mapping, points):
    try:
        values = np.asarray(mapping(points), dtype=complex)
    except (PoleError, ArithmeticError, ValueError) as exc:
        raise MapEvaluationError(f"Map evaluation failed: {exc}") from exc
    if not np.all(np.isfinite(values)):
        raise MapEvaluationError("Map returned non-finite values on the sample")
    return values


def geometric_radii(rho0, levels):
    """ρ0·2^{-i} for i = 0..levels-1"""
    return tuple(rho0 * 2.0 ** -i for i in range(levels))


def circular_dilatation(mapping, z0, radii=None, angles=64):
    """
    H = max over the radii grid of R_ρ/r_ρ, with R_ρ and r_ρ the largest and
    smallest |f(z) - f(z0)| on |z - z0| = ρ.
    """
    if angles < 4 or angles % 4:
        raise ValueError(f"Angle count must be a positive multiple of 4, got {angles}")
    if radii is None:
        radii = geometric_radii(1e-2, 8)
    z0 = complex(z0)
    center = complex(_evaluate(mapping, np.array([z0]))[0])
    circle = np.exp(2j * np.pi * np.arange(angles) / angles)

    ratios = []
    for rho in radii:
        distances = np.abs(_evaluate(mapping, z0 + rho * circle) - center)
        smallest = float(distances.min())
        if smallest == 0:
            raise MapEvaluationError(f"Map is not injective on |z - {z0}| = {rho}")
        ratios.append(float(distances.max()) / smallest)
    return DilatationReport(tuple(radii), tuple(ratios), max(ratios))


def _disk_samples(rng, z0, radius, count):
    return z0 + radius * np.sqrt(rng.random(count)) * np.exp(2j * np.pi * rng.random(count))


def koebe_distortion_check(mapping, z0, r, c=0.5, samples=500, seed=0, derivative=None):
    """
    Range of |f'(x)|·|y - z| / |f(y) - f(z)| over triples drawn in B(z0, c·r).
    derivative returns |f'| or f'; Möbius primitives supply their own.
    """
    if not 0 < c < 1:
        raise ValueError(f"Koebe scale c must lie in (0,1), got {c}")
    z0 = complex(z0)
    if derivative is None:
        if not hasattr(mapping, 'derivative_modulus'):
            raise ValueError("Provide the derivative of a map that is not a primitive")
        derivative = mapping.derivative_modulus
        pole = mapping.pole()
        if pole is not None and abs(pole - z0) <= r:
            raise MapEvaluationError(f"Pole {pole} lies in B({z0}, {r})")

    rng = np.random.default_rng(seed)
    x, y, z = (_disk_samples(rng, z0, c * r, samples) for _ in range(3))
    separation = np.abs(y - z)
    if np.any(separation == 0):
        raise MapEvaluationError("Sampled points coincide")
    image_gap = np.abs(_evaluate(mapping, y) - _evaluate(mapping, z))
    if np.any(image_gap == 0):
        raise MapEvaluationError("Map identifies two sampled points")

    ratios = np.abs(derivative(x)) * separation / image_gap
    return DistortionReport(float(ratios.min()), float(ratios.max()), samples, c)


def cube_distortion(mapping, cube, config_star, per_side=32):
    """diam f(Q) / dist(f(Q), ∂D*), infinite when f(Q) leaves D*"""
    t = np.arange(per_side) / per_side
    corners = cube.corners()
    boundary = np.concatenate([a + t * (b - a) for a, b in zip(corners, np.roll(corners, -1))])
    image = _evaluate(mapping, boundary)

    diameter = float(pdist(np.column_stack([image.real, image.imag])).max())
    clearance = float(boundary_distances(config_star, image).min())
    if clearance <= 0:
        logger.warning(f"Image of cube {cube.key} meets the boundary of the target domain")
        return math.inf
    return diameter / clearance


def cube_distortion_range(mapping, dec, config_star, per_side=32):
    """(min, max) of cube_distortion over a decomposition"""
    values = [cube_distortion(mapping, cube, config_star, per_side) for cube in dec.cubes]
    logger.info(f"Cube distortion over {len(values)} cubes")
    return min(values), max(values)
