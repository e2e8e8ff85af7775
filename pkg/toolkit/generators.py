"""
Domain generators: seeded random packings and finite-depth Sierpiński-type
domains where every circle of depth < d is ringed by smaller circles.
Lengths are given as fractions of the outer radius R.
"""
import logging
import math

import numpy as np
from django.conf import settings

from geometry.models import CircleDomainConfig, Disk
from geometry.primitives import boundary_distances

from .exceptions import InfeasiblePackingError
from .specs import spec_document

logger = logging.getLogger(__name__)


def _separated(center, radius, disks, gap):
    return all(abs(center - d.center) > radius + d.radius + gap for d in disks)


def random_packing(count, outer_radius=1.0, min_radius=0.03, max_radius=0.12, min_gap=0.02,
                   seed=0, max_attempts=10000):
    """
    count disjoint disks placed by rejection, each at least min_gap·R away from
    the other disks, the outer circle and the basepoint 0.
    """
    if count < 0:
        raise ValueError(f"Disk count must be nonnegative, got {count}")
    if not 0 < min_radius <= max_radius < 1:
        raise ValueError(f"Need 0 < min_radius ≤ max_radius < 1, got {min_radius} and {max_radius}")
    if not 0 <= min_gap < 1:
        raise ValueError(f"min_gap must lie in [0,1), got {min_gap}")

    R = float(outer_radius)
    gap = min_gap * R
    rng = np.random.default_rng(seed)
    disks = []
    attempts = 0
    while len(disks) < count:
        if attempts >= max_attempts:
            raise InfeasiblePackingError(
                f"Placed {len(disks)} of {count} disks in {max_attempts} attempts"
            )
        attempts += 1
        radius = rng.uniform(min_radius, max_radius) * R
        reach = R - gap - radius
        spread = reach * math.sqrt(rng.random())
        angle = 2 * math.pi * rng.random()
        center = spread * complex(math.cos(angle), math.sin(angle))
        if reach <= 0 or abs(center) <= radius + gap:
            continue
        if _separated(center, radius, disks, gap):
            disks.append(Disk(center, radius))
    logger.info(f"Random packing: {count} disks in {attempts} attempts")
    return CircleDomainConfig(R, disks, 0j)


def _ring_radius(parent_radius, ring_size, shrink, gap_ratio):
    """Child radius s ≤ shrink·ρ small enough that neighbouring children keep the gap"""
    s = shrink * parent_radius
    if ring_size >= 3:
        sigma = math.sin(math.pi / ring_size)
        # 2(ρ + (1+γ)s)·sin(π/n) ≥ (2+γ)s
        denominator = 2 + gap_ratio - 2 * (1 + gap_ratio) * sigma
        if denominator > 0:
            s = min(s, 0.9 * 2 * parent_radius * sigma / denominator)
    return s


def _basepoint(disks, outer_radius):
    """Grid point of largest clearance to the boundary"""
    probe = CircleDomainConfig(outer_radius, disks, 0j)
    radii = outer_radius * np.array([0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9])
    angles = 2 * np.pi * np.arange(16) / 16
    candidates = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    clearance = boundary_distances(probe, candidates)
    best = int(np.argmax(clearance))
    if not clearance[best] > 0:
        raise InfeasiblePackingError("No basepoint candidate lies in the domain")
    return complex(candidates[best])


def sierpinski_type(depth, ring_size=6, outer_radius=1.0, root_radius=0.25, shrink=0.3,
                    gap_ratio=0.5, seed=0):
    """
    A root disk B(0, root_radius·R) and, around every disk of depth < depth, a
    ring of ring_size smaller disks at a seeded phase. Depth-one rings must fit
    completely; deeper candidates that would touch an earlier disk are dropped.
    """
    if depth < 0:
        raise ValueError(f"Depth must be nonnegative, got {depth}")
    if ring_size < 1:
        raise ValueError(f"Ring size must be positive, got {ring_size}")
    if not 0 < root_radius < 1 or not 0 < shrink < 1 or not gap_ratio > 0:
        raise ValueError("Need 0 < root_radius < 1, 0 < shrink < 1 and gap_ratio > 0")
    total = sum(ring_size ** k for k in range(depth + 1))
    if total > settings.SCHOTTKY_LAB['WORD_BUDGET']:
        raise ValueError(f"{total} disks at depth {depth} exceed the budget")

    R = float(outer_radius)
    rng = np.random.default_rng(seed)
    disks = [Disk(0j, root_radius * R)]
    level = list(disks)
    dropped = 0
    for k in range(1, depth + 1):
        children = []
        for parent in level:
            s = _ring_radius(parent.radius, ring_size, shrink, gap_ratio)
            gap = gap_ratio * s
            distance = parent.radius + gap + s
            phase = rng.uniform(0.0, 2 * math.pi / ring_size)
            for m in range(ring_size):
                theta = phase + 2 * math.pi * m / ring_size
                center = parent.center + distance * complex(math.cos(theta), math.sin(theta))
                fits = abs(center) + s < R - gap and _separated(center, s, disks, 0.5 * gap)
                if fits:
                    child = Disk(center, s)
                    disks.append(child)
                    children.append(child)
                elif k == 1:
                    raise InfeasiblePackingError(f"Ring disk {m + 1} around the root does not fit in B(0,{R:g})")
                else:
                    dropped += 1
        level = children
    if dropped:
        logger.debug(f"Sierpiński-type domain: {dropped} ring disks dropped")
    logger.info(f"Sierpiński-type domain: {len(disks)} disks at depth {depth}")
    return CircleDomainConfig(R, disks, _basepoint(disks, R))


GENERATORS = {
    'random_packing': random_packing,
    'sierpinski_type': sierpinski_type,
}


def generate_domain(kind, params=None, seed=None):
    """Spec document of a generated domain, with the generator block recorded"""
    if kind not in GENERATORS:
        raise ValueError(f"Unknown generator '{kind}', expected one of {', '.join(GENERATORS)}")
    if seed is None:
        seed = settings.SCHOTTKY_LAB['DEFAULT_SEED']
    params = dict(params or {})
    try:
        config = GENERATORS[kind](seed=seed, **params)
    except TypeError as exc:
        raise ValueError(f"Invalid parameters for {kind}: {exc}") from exc
    return spec_document(config, generator={'kind': kind, 'params': params, 'seed': seed})
