"""
Numerical verification of the chain inequalities behind the circles-to-circles
and points-to-points arguments.

Radial mode: a ray γ from a boundary circle is split into a chain and
    |f(b) - f(a)| ≤ Σ_i Σ_{Q∩γ_i≠∅} diam(Q)·avg_Q|f'| + ∫_{uncovered} |f'| + Σ_i d_r(B_i*)
with d_r measured from f(a) up to r = |f(b) - f(a)|. The cube term weighs each
cube by diam(Q) = √2·ℓ(Q), the longest piece of a segment inside Q.

Circular mode: a circle γ_r inside B(0,R) and the disks of Ω_k it meets,
    diam f(γ_r) ≤ ∫_{γ_r ∩ Ω_k} |f'| ds + Σ_{B∩γ_r≠∅} diam f(B).
"""
import logging
import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from geometry.models import Disk, DiskComplement, HalfPlane
from geometry.primitives import image_disk
from whitney.decomposition import decompose, polyline_cube_spans

from .chains import chain_decompose, descriptor_diameter
from .exceptions import GeometryReachError
from .models import CircleGeometry, EstimateResult, RayGeometry, point_at, polyline_lengths

logger = logging.getLogger(__name__)

_NODES, _WEIGHTS = leggauss(2)


def radial_diameter(shape, center, radius):
    """d_r: measure of s ∈ [0, radius] with shape ∩ ∂B(center, s) ≠ ∅"""
    center = complex(center)
    if isinstance(shape, Disk):
        distance = abs(shape.center - center)
        near, far = max(distance - shape.radius, 0.0), distance + shape.radius
    elif isinstance(shape, DiskComplement):
        distance = abs(shape.center - center)
        near, far = max(shape.radius - distance, 0.0), math.inf
    elif isinstance(shape, HalfPlane):
        signed = ((center - shape.point) * shape.normal.conjugate()).real
        near, far = max(-signed, 0.0), math.inf
    else:
        # a point
        near = far = abs(complex(shape) - center)
    return max(min(radius, far) - near, 0.0)


def cube_average_derivative(mapping, cube):
    """avg_Q |f'| by 2×2 Gauss–Legendre on the square"""
    half = cube.side / 2.0
    x, y = np.meshgrid(_NODES, _NODES)
    points = cube.center + half * (x + 1j * y)
    weights = np.outer(_WEIGHTS, _WEIGHTS) / 4.0
    return float(np.sum(weights * mapping.derivative_modulus(points)))


def _line_integral(mapping, vertices, s0, s1):
    """∫ |f'| ds over the arclength interval [s0, s1] of a polyline"""
    if s1 <= s0:
        return 0.0
    vertices = np.asarray(vertices, dtype=complex)
    cumulative = polyline_lengths(vertices)
    corners = [s for s in cumulative if s0 < s < s1]

    def integrand(s):
        return float(mapping.derivative_modulus(point_at(vertices, cumulative, s)))

    value, _ = quad(integrand, s0, s1, points=corners or None, limit=200)
    return value


def _uncovered_intervals(spans, total):
    gaps = []
    position = 0.0
    for _, s_in, s_out in sorted(spans, key=lambda span: span[1]):
        if s_in > position:
            gaps.append((position, s_in))
        position = max(position, s_out)
    if position < total:
        gaps.append((position, total))
    return gaps


def _check_ray(config, ray, tol):
    for name, z in (('start', ray.start), ('end', ray.end)):
        if abs(z) > config.outer_radius + tol:
            raise GeometryReachError(f"Ray {name} {z} outside B(0,{config.outer_radius:g})")
        for i, disk in enumerate(config.disks, start=1):
            if abs(z - disk.center) < disk.radius - tol:
                raise GeometryReachError(f"Ray {name} {z} inside complementary disk {i}")


def _check_circle(config, circle, mapping, tol):
    if abs(circle.center) + circle.radius > config.outer_radius + tol:
        raise GeometryReachError(f"Circle around {circle.center} leaves B(0,{config.outer_radius:g})")
    pole = mapping.pole()
    if pole is not None and abs(abs(pole - circle.center) - circle.radius) <= tol:
        raise GeometryReachError(f"Circle passes through the pole {pole} of the map")


def radial_estimate(config, mapping, ray, dec=None, max_level=None, tol=None):
    """Both sides of the radial chain inequality along a ray"""
    if tol is None:
        tol = 1e-9 * config.outer_radius
    _check_ray(config, ray, tol)
    if dec is None:
        dec = decompose(config, max_level)
    chain = chain_decompose(config, ray.polyline(), tol)

    base = mapping(chain.starts[0])
    lhs = abs(mapping(chain.ends[-1]) - base)

    cube_term = 0.0
    uncovered_term = 0.0
    uncovered_length = 0.0
    cube_count = 0
    for piece in chain.pieces:
        spans = polyline_cube_spans(dec, piece)
        cube_count += len(spans)
        for n, _, _ in spans:
            cube = dec.cubes[n]
            cube_term += cube.diameter * cube_average_derivative(mapping, cube)
        total = polyline_lengths(piece)[-1]
        for s0, s1 in _uncovered_intervals(spans, total):
            uncovered_length += s1 - s0
            uncovered_term += _line_integral(mapping, piece, s0, s1)

    images = [image_disk(mapping, config.disk(i)) for i in chain.components]
    component_term = sum(radial_diameter(shape, base, lhs) for shape in images)
    rhs = cube_term + uncovered_term + component_term
    return EstimateResult(
        mode='radial',
        lhs=lhs,
        rhs=rhs,
        details={
            'cube_count': cube_count,
            'cube_term': cube_term,
            'uncovered_length': uncovered_length,
            'uncovered_term': uncovered_term,
            'component_term': component_term,
            'components': list(chain.components),
            'resolution': dec.resolution,
        },
        chain=chain,
    )


def _covered_arcs(circle, disks):
    """Angular intervals of the circle inside each disk it meets"""
    arcs = []
    met = []
    r = circle.radius
    for disk in disks:
        offset = disk.center - circle.center
        d = abs(offset)
        if d >= r + disk.radius:
            continue
        if d + r <= disk.radius:
            arcs.append((0.0, 2.0 * math.pi))
            met.append(disk)
            continue
        if d + disk.radius <= r or d == 0:
            continue
        half = math.acos(min(max((r * r + d * d - disk.radius ** 2) / (2 * r * d), -1.0), 1.0))
        phi = math.atan2(offset.imag, offset.real) % (2.0 * math.pi)
        met.append(disk)
        lo, hi = phi - half, phi + half
        if lo < 0:
            arcs.extend([(lo + 2.0 * math.pi, 2.0 * math.pi), (0.0, hi)])
        elif hi > 2.0 * math.pi:
            arcs.extend([(lo, 2.0 * math.pi), (0.0, hi - 2.0 * math.pi)])
        else:
            arcs.append((lo, hi))
    return arcs, met


def circular_estimate(config, mapping, circle, depth=0):
    """Both sides of the circular chain inequality for the disks of Ω_k"""
    tol = 1e-9 * config.outer_radius
    _check_circle(config, circle, mapping, tol)
    if depth:
        from schottky.groups import complement_disks
        disks = [reflected.disk for reflected in complement_disks(config, depth)]
    else:
        disks = list(config.disks)

    arcs, met = _covered_arcs(circle, disks)
    free = _uncovered_intervals([(None, lo, hi) for lo, hi in arcs], 2.0 * math.pi)

    def integrand(t):
        return float(mapping.derivative_modulus(circle.point(t))) * circle.radius

    arc_term = sum(quad(integrand, lo, hi, limit=200)[0] for lo, hi in free)
    free_length = sum(hi - lo for lo, hi in free) * circle.radius
    component_term = sum(descriptor_diameter(image_disk(mapping, disk)) for disk in met)

    image = image_disk(mapping, Disk(circle.center, circle.radius))
    lhs = 2.0 * image.radius if isinstance(image, (Disk, DiskComplement)) else math.inf
    rhs = arc_term + component_term
    return EstimateResult(
        mode='circular',
        lhs=lhs,
        rhs=rhs,
        details={
            'depth': depth,
            'arc_term': arc_term,
            'free_length': free_length,
            'component_term': component_term,
            'components_met': len(met),
        },
    )


def transboundary_estimate(config, mapping, mode, geometry, dec=None, max_level=None, depth=0):
    """Dispatch on mode: 'radial' with a RayGeometry, 'circular' with a CircleGeometry"""
    if mode == 'radial':
        if not isinstance(geometry, RayGeometry):
            raise ValueError("Radial mode takes a RayGeometry")
        result = radial_estimate(config, mapping, geometry, dec, max_level)
    elif mode == 'circular':
        if not isinstance(geometry, CircleGeometry):
            raise ValueError("Circular mode takes a CircleGeometry")
        result = circular_estimate(config, mapping, geometry, depth)
    else:
        raise ValueError(f"Unknown estimate mode '{mode}'")
    logger.debug(f"{mode} estimate: lhs={result.lhs:.6g} rhs={result.rhs:.6g}")
    return result
