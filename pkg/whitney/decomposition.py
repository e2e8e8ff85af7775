"""
Dyadic Whitney decomposition of D = B(0,R) ∩ Ω.

Cubes live on the grid of [-R,R]² with side ℓ = R·2^{-level}. A cube is
accepted when its clearance dist(Q,∂D) exceeds √2·ℓ; its parent was rejected,
so the clearance is also at most 4√2·ℓ.
"""
import logging
import math

import numpy as np
from django.conf import settings

from geometry.exceptions import ConfigValidationError
from geometry.primitives import boundary_distances, validate_config

from .models import SQRT2, AdjacencyReport, WhitneyCube, WhitneyDecomposition

logger = logging.getLogger(__name__)

# Probes per cube side in the neighbour scan; finds neighbours down to ℓ/8
PROBES_PER_SIDE = 8


def _square_clearance(config, x0, y0, side):
    """
    Exact dist(Q, ∂D) for squares lying in D, a nonpositive value otherwise.
    Also returns a mask of squares lying entirely outside D.
    """
    x1, y1 = x0 + side, y0 + side
    far_x = np.maximum(np.abs(x0), np.abs(x1))
    far_y = np.maximum(np.abs(y0), np.abs(y1))
    near_x = np.where(x0 * x1 <= 0, 0.0, np.minimum(np.abs(x0), np.abs(x1)))
    near_y = np.where(y0 * y1 <= 0, 0.0, np.minimum(np.abs(y0), np.abs(y1)))

    R = config.outer_radius
    clearance = R - np.hypot(far_x, far_y)
    outside = np.hypot(near_x, near_y) >= R

    for disk in config.disks:
        ax, ay, r = disk.center.real, disk.center.imag, disk.radius
        dx = np.maximum(np.maximum(x0 - ax, 0.0), ax - x1)
        dy = np.maximum(np.maximum(y0 - ay, 0.0), ay - y1)
        clearance = np.minimum(clearance, np.hypot(dx, dy) - r)
        fx = np.maximum(np.abs(x0 - ax), np.abs(x1 - ax))
        fy = np.maximum(np.abs(y0 - ay), np.abs(y1 - ay))
        outside |= np.hypot(fx, fy) <= r

    return clearance, outside


def decompose(config, max_level=None):
    """Whitney cubes of D down to max_level, with the uncovered area of D"""
    if max_level is None:
        max_level = settings.SCHOTTKY_LAB['WHITNEY_MAX_LEVEL']
    if max_level < 4:
        raise ValueError(f"max_level must be at least 4, got {max_level}")
    violations = validate_config(config)
    if violations:
        raise ConfigValidationError(violations)

    R = config.outer_radius
    I = np.array([-1, -1, 0, 0])
    J = np.array([-1, 0, -1, 0])
    cubes = []
    pending = 0

    for level in range(max_level + 1):
        side = R * 2.0 ** (-level)
        clearance, outside = _square_clearance(config, I * side, J * side, side)
        accepted = clearance > SQRT2 * side
        refine = ~accepted & ~outside

        cubes.extend(
            WhitneyCube(level, int(i), int(j), side)
            for i, j in zip(I[accepted], J[accepted])
        )

        if level == max_level:
            pending = int(np.count_nonzero(refine))
            break
        parents_i, parents_j = I[refine], J[refine]
        I = np.concatenate([2 * parents_i + a for a in (0, 0, 1, 1)])
        J = np.concatenate([2 * parents_j + b for b in (0, 1, 0, 1)])
        if len(I) == 0:
            break

    cubes.sort(key=lambda q: q.key)
    covered = sum(q.area for q in cubes)
    uncovered = max(config.area - covered, 0.0)
    logger.info(
        f"Whitney decomposition: {len(cubes)} cubes to level {max_level}, "
        f"{pending} pending, uncovered area {uncovered:.3e}"
    )
    return WhitneyDecomposition(config, max_level, cubes, uncovered, pending)


def _level_keys(level, i, j):
    offset = 1 << level
    return (i + offset) * (offset << 1) + (j + offset)


def _locate(dec, px, py, levels):
    """Index of the emitted cube containing each probe point, -1 if none"""
    R = dec.config.outer_radius
    found = np.full(len(px), -1, dtype=int)
    cube_levels = dec.levels
    for level in levels:
        members = np.flatnonzero(cube_levels == level)
        if len(members) == 0:
            continue
        side = R * 2.0 ** (-level)
        keys = _level_keys(level, np.array([dec.cubes[m].i for m in members]), np.array([dec.cubes[m].j for m in members]))
        order = np.argsort(keys)
        keys, members = keys[order], members[order]

        i = np.floor(px / side).astype(np.int64)
        j = np.floor(py / side).astype(np.int64)
        span = 1 << level
        valid = (i >= -span) & (i < span) & (j >= -span) & (j < span) & (found < 0)
        probe_keys = _level_keys(level, i, j)
        slot = np.searchsorted(keys, probe_keys)
        slot = np.minimum(slot, len(keys) - 1)
        hit = valid & (keys[slot] == probe_keys)
        found[hit] = members[slot[hit]]
    return found


def neighbor_lists(dec):
    """Adjacent cubes of every cube: a side of the smaller lies in a side of the larger"""
    count = len(dec.cubes)
    if count == 0:
        return ()
    sides = dec.sides
    lower = np.array([q.lower_left for q in dec.cubes])
    x0, y0 = lower.real, lower.imag
    epsilon = sides.min() / 4.0
    t = (np.arange(PROBES_PER_SIDE) + 0.5) / PROBES_PER_SIDE

    owners, px, py = [], [], []
    along = sides[:, None] * t[None, :]
    for dx, dy in ((-1, None), (1, None), (None, -1), (None, 1)):
        if dy is None:
            xs = (x0 - epsilon if dx < 0 else x0 + sides + epsilon)[:, None] + 0 * along
            ys = y0[:, None] + along
        else:
            xs = x0[:, None] + along
            ys = (y0 - epsilon if dy < 0 else y0 + sides + epsilon)[:, None] + 0 * along
        owners.append(np.repeat(np.arange(count), PROBES_PER_SIDE))
        px.append(xs.ravel())
        py.append(ys.ravel())

    owners = np.concatenate(owners)
    found = _locate(dec, np.concatenate(px), np.concatenate(py), range(dec.max_level + 1))
    hit = found >= 0
    pairs = np.unique(np.stack([owners[hit], found[hit]], axis=1), axis=0)

    neighbors = [set() for _ in range(count)]
    for a, b in pairs:
        if a != b:
            neighbors[a].add(int(b))
            neighbors[b].add(int(a))
    return tuple(tuple(sorted(n)) for n in neighbors)


def adjacency_check(dec):
    """All adjacent pairs including Q1 = Q2, and the side-ratio bound 4"""
    pairs = []
    violations = []
    max_ratio = 1.0 if dec.cubes else 0.0
    for a, neighbors in enumerate(dec.adjacency):
        pairs.append((a, a))
        for b in neighbors:
            if b < a:
                continue
            pairs.append((a, b))
            ratio = dec.cubes[a].side / dec.cubes[b].side
            ratio = max(ratio, 1.0 / ratio)
            max_ratio = max(max_ratio, ratio)
            if ratio > 4.0:
                violations.append((a, b, ratio))
    if violations:
        logger.warning(f"Adjacency check: {len(violations)} pairs exceed side ratio 4")
    return AdjacencyReport(
        pairs=tuple(pairs),
        neighbor_counts=tuple(len(n) for n in dec.adjacency),
        ratio_violations=tuple(violations),
        max_ratio=max_ratio,
    )


def property_violations(dec):
    """Cubes breaking √2·ℓ < dist(Q,∂D) ≤ 4√2·ℓ, rechecked with exact δ_D"""
    if not dec.cubes:
        return []
    sides = dec.sides
    lower = np.array([q.lower_left for q in dec.cubes])
    clearance, outside = _square_clearance(dec.config, lower.real, lower.imag, sides)
    ratio = clearance / sides
    bad = (ratio <= SQRT2) | (ratio > 4 * SQRT2) | outside
    return [(int(n), float(ratio[n])) for n in np.flatnonzero(bad)]


def overlapping(first, second):
    """Interiors of two cubes intersect"""
    ax0, ay0 = first.i * first.side, first.j * first.side
    bx0, by0 = second.i * second.side, second.j * second.side
    overlap_x = min(ax0 + first.side, bx0 + second.side) - max(ax0, bx0)
    overlap_y = min(ay0 + first.side, by0 + second.side) - max(ay0, by0)
    return overlap_x > 0 and overlap_y > 0


def cube_containing(dec, z):
    """Index of an emitted cube containing z, or None in the uncovered region"""
    z = complex(z)
    R = dec.config.outer_radius
    for level in range(dec.max_level + 1):
        side = R * 2.0 ** (-level)
        key = (level, math.floor(z.real / side), math.floor(z.imag / side))
        if key in dec.index:
            return dec.index[key]
    # points on a grid line may sit on the closed edge of the left/lower neighbour
    for n in np.flatnonzero(np.abs(dec.centers - z) <= dec.sides / SQRT2 * 1.000001):
        if dec.cubes[n].contains(z):
            return int(n)
    return None


def coverage_threshold(dec):
    """δ_D above which every point is covered by an emitted cube"""
    return 8 * SQRT2 * dec.resolution


def uncovered_points(dec, points):
    """Points of D with δ_D above the coverage threshold that no cube covers"""
    points = np.asarray(points, dtype=complex)
    deep = points[boundary_distances(dec.config, points) >= coverage_threshold(dec)]
    return [z for z in deep if cube_containing(dec, z) is None]


def polyline_cube_spans(dec, vertices, candidates=None):
    """
    Cubes met by a polyline, in traversal order, as (index, s_in, s_out)
    with s the arclength at which the closed cube is entered and left.
    """
    vertices = np.asarray(vertices, dtype=complex)
    if candidates is None:
        candidates = np.arange(len(dec.cubes))
    candidates = np.asarray(candidates, dtype=int)
    if len(candidates) == 0 or len(vertices) == 0:
        return ()
    lower = np.array([dec.cubes[n].lower_left for n in candidates])
    sides = dec.sides[candidates]
    bx0, by0 = lower.real, lower.imag
    bx1, by1 = bx0 + sides, by0 + sides

    entered, left = {}, {}
    if len(vertices) == 1:
        z = vertices[0]
        inside = (bx0 <= z.real) & (z.real <= bx1) & (by0 <= z.imag) & (z.imag <= by1)
        return tuple((int(n), 0.0, 0.0) for n in candidates[inside])

    arclength = 0.0
    for a, b in zip(vertices[:-1], vertices[1:]):
        d = b - a
        length = abs(d)
        near = (
            (np.minimum(a.real, b.real) <= bx1) & (np.maximum(a.real, b.real) >= bx0)
            & (np.minimum(a.imag, b.imag) <= by1) & (np.maximum(a.imag, b.imag) >= by0)
        )
        if np.any(near):
            t_lo = np.zeros(np.count_nonzero(near))
            t_hi = np.ones_like(t_lo)
            for start, delta, low, high in (
                (a.real, d.real, bx0[near], bx1[near]),
                (a.imag, d.imag, by0[near], by1[near]),
            ):
                if delta != 0:
                    t1, t2 = (low - start) / delta, (high - start) / delta
                    t_lo = np.maximum(t_lo, np.minimum(t1, t2))
                    t_hi = np.minimum(t_hi, np.maximum(t1, t2))
                else:
                    blocked = (start < low) | (start > high)
                    t_hi = np.where(blocked, -1.0, t_hi)
            meets = t_lo <= t_hi
            for n, lo, hi in zip(candidates[near][meets], t_lo[meets], t_hi[meets]):
                n = int(n)
                s_in, s_out = arclength + lo * length, arclength + hi * length
                entered[n] = min(entered.get(n, s_in), s_in)
                left[n] = max(left.get(n, s_out), s_out)
        arclength += length

    order = sorted(entered, key=lambda n: (entered[n], n))
    return tuple((n, entered[n], left[n]) for n in order)
