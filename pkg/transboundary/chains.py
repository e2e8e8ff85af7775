"""
Transboundary chains of polylines in circle domains.

A finite configuration has ∂D equal to finitely many circles, so each
crossing of a disk collapses to the first entry point and the last exit
point on its circle.
"""
import logging
import math

import numpy as np
from django.conf import settings
from scipy.spatial.distance import pdist

from geometry.models import Disk
from geometry.primitives import image_disk

from .exceptions import ChainError, CorrespondenceError
from .models import TransboundaryChain, polyline_lengths, point_at, sub_polyline

logger = logging.getLogger(__name__)


def _segment_disk_events(a, b, disk, tol):
    """
    Parameters t ∈ [0,1] where [a,b] meets the closed disk: ('cross', t0, t1)
    for a chord or ('touch', t, t) for a tangential contact.
    """
    d = b - a
    length2 = abs(d) ** 2
    if length2 == 0:
        return None
    offset = a - disk.center
    # |offset + t·d|² = r²
    p = (offset * d.conjugate()).real / length2
    q = (abs(offset) ** 2 - disk.radius ** 2) / length2
    disc = p * p - q
    closest = abs(offset - (offset * d.conjugate()).real / length2 * d)
    gap = closest - disk.radius
    if gap > tol:
        return None
    t_mid = -p
    if abs(gap) <= tol:
        if 0.0 <= t_mid <= 1.0:
            return ('touch', t_mid, t_mid)
        return None
    root = math.sqrt(max(disc, 0.0))
    t0, t1 = max(t_mid - root, 0.0), min(t_mid + root, 1.0)
    if t0 > t1:
        return None
    return ('cross', t0, t1)


def _disk_events(config, vertices, cumulative, tol):
    crossings = {i: [] for i in range(1, config.n + 1)}
    touches = []
    for k, (a, b) in enumerate(zip(vertices[:-1], vertices[1:])):
        length = cumulative[k + 1] - cumulative[k]
        for i, disk in enumerate(config.disks, start=1):
            event = _segment_disk_events(complex(a), complex(b), disk, tol)
            if event is None:
                continue
            kind, t0, t1 = event
            s0, s1 = cumulative[k] + t0 * length, cumulative[k] + t1 * length
            if kind == 'touch':
                touches.append((i, s0))
            else:
                crossings[i].append((s0, s1))
    return crossings, touches


def _merge(intervals, tol):
    merged = []
    for s0, s1 in sorted(intervals):
        if merged and s0 <= merged[-1][1] + tol:
            merged[-1] = (merged[-1][0], max(merged[-1][1], s1))
        else:
            merged.append((s0, s1))
    return merged


def chain_decompose(config, path, tol=None):
    """Transboundary chain of a polyline whose endpoints lie in the closure of D"""
    if tol is None:
        tol = settings.SCHOTTKY_LAB['DISJOINTNESS_TOLERANCE'] * config.outer_radius
    vertices = np.asarray(path, dtype=complex)
    if vertices.ndim != 1 or len(vertices) < 2:
        raise ChainError("A path needs at least two vertices")
    cumulative = polyline_lengths(vertices)
    total = cumulative[-1]
    if total == 0:
        raise ChainError("Path has zero length")
    if np.any(np.abs(vertices) > config.outer_radius + tol):
        raise ChainError(f"Path leaves the ball B(0,{config.outer_radius:g})")

    for i, disk in enumerate(config.disks, start=1):
        if np.all(np.abs(vertices - disk.center) < disk.radius - tol):
            raise ChainError(f"Path lies entirely inside complementary disk {i}")
        for name, z in (('start', vertices[0]), ('end', vertices[-1])):
            if abs(z - disk.center) < disk.radius - tol:
                raise ChainError(f"Path {name} {z} lies inside complementary disk {i}")

    crossings, touches = _disk_events(config, vertices, cumulative, tol)
    intervals = {}
    for i, found in crossings.items():
        merged = _merge(found, tol)
        # a chord shorter than tol at an endpoint is the endpoint resting on the circle
        merged = [(s0, s1) for s0, s1 in merged if s1 - s0 > tol or tol < s0 < total - tol]
        if not merged:
            continue
        disk = config.disk(i)
        for name, z in (('start', vertices[0]), ('end', vertices[-1])):
            if abs(z - disk.center) <= disk.radius + tol:
                raise ChainError(f"Path interior meets disk {i}, the component containing its {name}")
        intervals[i] = merged

    pieces, components, spans = [], [], []
    s = 0.0
    used = set()
    while True:
        ahead = [(s0, i) for i, merged in intervals.items() if i not in used
                 for s0, _ in merged if s0 > s + tol]
        if not ahead:
            break
        entry, disk = min(ahead)
        pieces.append(sub_polyline(vertices, cumulative, s, entry))
        spans.append((s, entry))
        components.append(disk)
        used.add(disk)
        s = intervals[disk][-1][1]
    pieces.append(sub_polyline(vertices, cumulative, s, total))
    spans.append((s, total))

    kept_touches = tuple(
        (i, point_at(vertices, cumulative, t)) for i, t in sorted(touches, key=lambda e: e[1])
        if any(s0 - tol <= t <= s1 + tol for s0, s1 in spans)
    )
    if kept_touches:
        logger.debug(f"Chain: {len(kept_touches)} tangential contact(s) recorded")
    return TransboundaryChain(tuple(pieces), tuple(components), tuple(spans), kept_touches)


def perturb_path(path, tol, seed=0):
    """Shift interior vertices by a seeded displacement of size tol"""
    vertices = np.array(path, dtype=complex)
    if len(vertices) > 2:
        rng = np.random.default_rng(seed)
        angles = 2.0 * np.pi * rng.random(len(vertices) - 2)
        vertices[1:-1] += tol * np.exp(1j * angles)
    return vertices


def _sample_polyline(vertices, count):
    cumulative = polyline_lengths(vertices)
    s = np.linspace(0.0, cumulative[-1], count)
    return np.array([point_at(np.asarray(vertices), cumulative, t) for t in s])


def _diameter(points):
    if len(points) < 2:
        return 0.0
    return float(pdist(np.column_stack([points.real, points.imag])).max())


def descriptor_diameter(shape):
    """Diameter of a circle descriptor, infinite for unbounded images"""
    if isinstance(shape, Disk):
        return 2.0 * shape.radius
    return math.inf


def chain_diameter_bound(chain, image_map, config, correspondence=None, samples=64):
    """
    diam of ∪ f(γ_i) ∪ B_i* against Σ diam f(γ_i) + Σ diam B_i*.
    B_i* comes from the correspondence mapping disk index to image, or from
    image_disk when none is supplied.
    """
    pieces = [image_map(_sample_polyline(piece, samples)) for piece in chain.pieces]
    images = []
    for i in chain.components:
        if correspondence is None:
            images.append(image_disk(image_map, config.disk(i)))
        elif i in correspondence:
            images.append(correspondence[i])
        else:
            raise CorrespondenceError(f"No image supplied for disk {i}")

    rhs = sum(_diameter(p) for p in pieces) + sum(descriptor_diameter(b) for b in images)
    clouds = list(pieces)
    for k, shape in enumerate(images):
        if not math.isfinite(descriptor_diameter(shape)):
            continue
        clouds.append(np.concatenate([
            shape.boundary_samples(samples),
            [pieces[k][-1], pieces[k + 1][0]],
        ]))
    lhs = _diameter(np.concatenate(clouds)) if math.isfinite(rhs) else math.inf
    return lhs, rhs
