"""Seeded configuration builders shared by the test suites"""
from .models import CircleDomainConfig, Disk


def random_config(rng, count=4, outer_radius=1.0):
    """Disks placed by rejection with a comfortable gap, basepoint at 0"""
    disks = []
    while len(disks) < count:
        center = complex(*rng.uniform(-0.8, 0.8, size=2)) * outer_radius
        radius = rng.uniform(0.03, 0.12) * outer_radius
        if abs(center) + radius > 0.92 * outer_radius or abs(center) < radius + 0.05 * outer_radius:
            continue
        if all(abs(center - d.center) > radius + d.radius + 0.02 * outer_radius for d in disks):
            disks.append(Disk(center, radius))
    return CircleDomainConfig(outer_radius, disks, 0j)


def three_disk_config():
    """Reference configuration with three well separated disks"""
    return CircleDomainConfig(
        1.0,
        [Disk(0.5, 0.15), Disk(-0.25 + 0.45j, 0.15), Disk(-0.25 - 0.45j, 0.15)],
        0j,
    )


def two_disk_config():
    """Reference configuration with two unit-separated disks"""
    return CircleDomainConfig(2.0, [Disk(-0.75, 0.25), Disk(0.75, 0.25)], 0j)
