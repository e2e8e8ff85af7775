"""
Exact primitives over circle domain configurations: validation, reflections,
images of disks under (anti-)Möbius maps and the boundary distance δ_D.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from .exceptions import DomainMembershipError, PoleError
from .models import CircleDomainConfig, ConformalPrimitive, Disk, DiskComplement, HalfPlane

logger = logging.getLogger(__name__)

# Relative size below which the |w|² coefficient of an image circle counts as zero
_LINE_EPS = 1e-12


@dataclass(frozen=True)
class Violation:
    """One failed configuration invariant"""

    code: str
    message: str
    subjects: tuple = ()


def validate_config(config, tolerance=None):
    """Return the list of violated invariants, empty for a valid configuration"""
    if tolerance is None:
        tolerance = settings.SCHOTTKY_LAB['DISJOINTNESS_TOLERANCE']
    R = config.outer_radius
    min_gap = tolerance * R
    violations = []

    for i, disk in enumerate(config.disks, start=1):
        clearance = R - abs(disk.center) - disk.radius
        if clearance < min_gap:
            violations.append(Violation(
                'disk_outside_ball',
                f"Disk {i}: closed disk not inside the open ball B(0,{R:g}) (clearance {clearance:.3e})",
                (i,),
            ))

    for i in range(config.n):
        for j in range(i + 1, config.n):
            first, second = config.disks[i], config.disks[j]
            gap = abs(first.center - second.center) - first.radius - second.radius
            if gap < min_gap:
                violations.append(Violation(
                    'overlapping_closures',
                    f"Disks {i + 1} and {j + 1}: overlapping closures (gap {gap:.3e})",
                    (i + 1, j + 1),
                ))

    x0 = config.basepoint
    if not abs(x0) < R:
        violations.append(Violation(
            'basepoint_outside_ball',
            f"Basepoint {x0}: outside the open ball B(0,{R:g})",
            ('basepoint',),
        ))
    for i, disk in enumerate(config.disks, start=1):
        if abs(x0 - disk.center) <= disk.radius:
            violations.append(Violation(
                'basepoint_inside_disk',
                f"Basepoint {x0}: basepoint inside complementary disk {i}",
                ('basepoint', i),
            ))

    if violations:
        logger.info(f"Configuration has {len(violations)} violation(s)")
    return violations


def reflect_point(disk, z):
    """R(z) = a + r²/(conj(z) - conj(a))"""
    offset = complex(z) - disk.center
    if offset == 0:
        raise PoleError(f"Reflection in {disk} sends its center to the point at infinity")
    return disk.center + disk.radius ** 2 / offset.conjugate()


def reflect_disk(mirror, disk):
    """
    Image of a closed disk under reflection in the circle ∂mirror, from its
    centre and radius directly. A Disk when the mirror's centre lies outside
    the closed disk, a DiskComplement when it lies inside.
    """
    offset = disk.center - mirror.center
    power = abs(offset) ** 2 - disk.radius ** 2
    if power == 0:
        raise PoleError(f"Reflection in {mirror} sends a point of {disk} to infinity")
    rho2 = mirror.radius ** 2
    center = mirror.center + rho2 * offset / power
    radius = rho2 * disk.radius / abs(power)
    if power > 0:
        return Disk(center, radius)
    return DiskComplement(center, radius)


def reflection_jacobian(disk, z):
    """Absolute Jacobian r⁴/|z - a|⁴ of the reflection"""
    distance = abs(complex(z) - disk.center)
    if distance == 0:
        raise PoleError(f"Jacobian of reflection in {disk} is undefined at its center")
    return (disk.radius / distance) ** 4


def _hermitian_form(disk):
    """Matrix H with (z,1)^* H (z,1) = |z - c|² - r², negative inside the disk"""
    c, r = disk.center, disk.radius
    return np.array([[1.0, -c], [-c.conjugate(), abs(c) ** 2 - r * r]], dtype=complex)


def image_disk(mapping, disk):
    """
    Exact image of a closed disk under a Möbius or anti-Möbius map.

    Returns a Disk when the pole lies outside the closed disk, a DiskComplement
    when it lies inside and a HalfPlane when it lies on the circle.
    """
    if mapping.conjugate_first:
        disk = Disk(disk.center.conjugate(), disk.radius)
    m = mapping.matrix
    inverse = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex)
    form = inverse.conj().T @ _hermitian_form(disk) @ inverse

    A = form[0, 0].real
    beta = form[0, 1]
    K = form[1, 1].real
    scale = max(abs(A), abs(beta), abs(K))
    if abs(A) <= _LINE_EPS * scale:
        # 2·Re(conj(β)·w) + K < 0 on the image side
        point = -K * beta / (2.0 * abs(beta) ** 2)
        return HalfPlane(point, -beta)

    center = -beta / A
    radius = math.sqrt(max(abs(beta) ** 2 / A ** 2 - K / A, 0.0))
    if A > 0:
        return Disk(center, radius)
    return DiskComplement(center, radius)


def boundary_distances(config, points):
    """Signed distance to ∂D for an array of points, negative outside D"""
    z = np.asarray(points, dtype=complex)
    distance = config.outer_radius - np.abs(z)
    for disk in config.disks:
        distance = np.minimum(distance, np.abs(z - disk.center) - disk.radius)
    return distance


def in_domain(config, z):
    return bool(boundary_distances(config, complex(z)) > 0)


def in_closure_of_omega(config, z, tol=0.0):
    """z lies outside every open complementary disk"""
    z = complex(z)
    return all(abs(z - disk.center) >= disk.radius - tol for disk in config.disks)


def boundary_distance(config, z):
    """δ_D(z) = min(R - |z|, min_j |z - a_j| - r_j)"""
    distance = float(boundary_distances(config, complex(z)))
    if not distance > 0:
        raise DomainMembershipError(f"Point {z} does not lie in D")
    return distance


def sample_domain_points(config, count, rng, margin=0.0):
    """Uniform rejection samples from {z ∈ D : δ_D(z) > margin}"""
    R = config.outer_radius
    accepted = []
    total = 0
    while total < count:
        batch = max(2 * (count - total), 64)
        radius = R * np.sqrt(rng.random(batch))
        angle = 2.0 * np.pi * rng.random(batch)
        candidates = radius * np.exp(1j * angle)
        candidates = candidates[boundary_distances(config, candidates) > margin]
        accepted.append(candidates)
        total += len(candidates)
    return np.concatenate(accepted)[:count]


def scale_config(config, s):
    """Image of the configuration under z ↦ s·z, s > 0"""
    return CircleDomainConfig(
        outer_radius=config.outer_radius * s,
        disks=[disk.scaled(s) for disk in config.disks],
        basepoint=config.basepoint * s,
    )


def rotate_config(config, angle):
    """Image of the configuration under rotation about 0"""
    u = complex(math.cos(angle), math.sin(angle))
    if angle % (math.pi / 2) == 0:
        # quarter turns are exact in floating point
        u = 1j ** int(round(angle / (math.pi / 2)) % 4)
    return CircleDomainConfig(
        outer_radius=config.outer_radius,
        disks=[Disk(disk.center * u, disk.radius) for disk in config.disks],
        basepoint=config.basepoint * u,
    )


