"""
Fatness of complementary components: Area(B ∩ B(z,r)) ≥ c·r² for z ∈ B and
r ≤ diam B. Disks are measured with the exact lens area, unions of disjoint
disks by seeded Monte Carlo. Points are fat for every c.
"""
import logging
import math
from numbers import Number

import numpy as np
from django.conf import settings
from scipy.spatial.distance import pdist

from geometry.models import Disk
from transboundary.estimates import radial_diameter

from .exceptions import DegenerateShapeError
from .models import FatnessReport

logger = logging.getLogger(__name__)


def lens_area(first, second):
    """Area of the intersection of two disks"""
    d = abs(first.center - second.center)
    r1, r2 = first.radius, second.radius
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        return math.pi * min(r1, r2) ** 2
    a1 = r1 * r1 * math.acos(min(max((d * d + r1 * r1 - r2 * r2) / (2 * d * r1), -1.0), 1.0))
    a2 = r2 * r2 * math.acos(min(max((d * d + r2 * r2 - r1 * r1) / (2 * d * r2), -1.0), 1.0))
    kite = 0.5 * math.sqrt(max((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2), 0.0))
    return a1 + a2 - kite


def _as_shape(shape):
    """A Disk, a point, or a tuple of disks for a union"""
    if isinstance(shape, (Disk, Number)):
        return shape
    items = [getattr(item, 'disk', item) for item in shape]
    points = {complex(item) for item in items if isinstance(item, Number)}
    disks = tuple(item for item in items if isinstance(item, Disk))
    if disks and points:
        raise DegenerateShapeError("Union mixes disks and points")
    if not disks:
        if len(points) == 1:
            return points.pop()
        raise DegenerateShapeError(f"Shape has zero area and {len(points)} points")
    return disks[0] if len(disks) == 1 else disks


def radial_measure(disks, center, radius):
    """d_r of a union of disks: measure of s ∈ [0, radius] whose circle meets the union"""
    center = complex(center)
    intervals = sorted(
        (max(abs(d.center - center) - d.radius, 0.0), min(abs(d.center - center) + d.radius, radius))
        for d in disks
    )
    total, reach = 0.0, 0.0
    for near, far in intervals:
        if far <= near:
            continue
        start = max(near, reach)
        if far > start:
            total += far - start
            reach = far
    return total


def _disk_report(disk, samples):
    diameter = disk.diameter
    best = (math.inf, ())
    for t in np.linspace(0.0, 1.0, samples):
        z = disk.center + t * disk.radius
        for r in diameter * np.arange(1, samples + 1) / samples:
            value = lens_area(disk, Disk(z, r)) / r ** 2
            if value < best[0]:
                best = (value, (complex(z), float(r)))

    radial = []
    for offset in np.linspace(0.0, 3.0, 7):
        z = disk.center + offset * disk.radius
        enclosing = abs(z - disk.center) + disk.radius
        radial.append(radial_diameter(disk, z, enclosing))
    return FatnessReport(best[0], best[1], tuple(radial), diameter)


def _union_report(disks, samples, rng, points):
    boundary = np.concatenate([d.boundary_samples(64) for d in disks])
    diameter = float(pdist(np.column_stack([boundary.real, boundary.imag])).max())
    centers = np.array([d.center for d in disks])
    radii = np.array([d.radius for d in disks])

    anchors = list(centers) + list(rng.choice(boundary, size=min(samples, len(boundary)), replace=False))
    # one uniform cloud in the unit disk, shared by every (z, r)
    unit = np.sqrt(rng.random(points)) * np.exp(2j * np.pi * rng.random(points))
    best = (math.inf, ())
    for z in anchors:
        for r in diameter * np.arange(1, samples + 1) / samples:
            cloud = z + r * unit
            inside = np.zeros(points, dtype=bool)
            for center, radius in zip(centers, radii):
                inside |= np.abs(cloud - center) <= radius
            value = inside.mean() * math.pi
            if value < best[0]:
                best = (float(value), (complex(z), float(r)))

    middle = complex(centers.mean())
    enclosing = float(np.max(np.abs(centers - middle) + radii))
    radial = (radial_measure(disks, middle, enclosing),)
    return FatnessReport(best[0], best[1], radial, diameter)


def fatness_check(shape, samples=24, seed=None, monte_carlo_points=None):
    """
    Measured fatness constant of a disk, a point or a union of disjoint disks.
    Every (z, r) on a union is estimated from the same cloud of
    monte_carlo_points samples, MONTE_CARLO_POINTS by default.
    """
    shape = _as_shape(shape)
    if isinstance(shape, Number):
        return FatnessReport(math.inf, (complex(shape), 0.0))
    if isinstance(shape, Disk):
        return _disk_report(shape, samples)

    if seed is None:
        seed = settings.SCHOTTKY_LAB['DEFAULT_SEED']
    if monte_carlo_points is None:
        monte_carlo_points = settings.SCHOTTKY_LAB['MONTE_CARLO_POINTS']
    report = _union_report(shape, samples, np.random.default_rng(seed), monte_carlo_points)
    logger.info(f"Fatness of a union of {len(shape)} disks: c = {report.constant:.4f}")
    return report


def annulus_fatness(shape, z, r_in, r_out):
    """Area(B ∩ {r_in < |w - z| < r_out}) / (r_out - r_in)²"""
    if not 0 <= r_in < r_out:
        raise ValueError(f"Need 0 ≤ r_in < r_out, got {r_in} and {r_out}")
    shape = _as_shape(shape)
    if isinstance(shape, Number):
        return 0.0
    disks = (shape,) if isinstance(shape, Disk) else shape
    area = 0.0
    for disk in disks:
        area += lens_area(disk, Disk(z, r_out))
        if r_in > 0:
            area -= lens_area(disk, Disk(z, r_in))
    return area / (r_out - r_in) ** 2
