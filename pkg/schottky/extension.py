"""
Extension of a circle-respecting map f: Ω → Ω* by reflection,
f̃ = T*∘f∘T^{-1} on T(Ω̄), and the checks that it conjugates the two groups.
"""
import logging
import math

import numpy as np
from django.conf import settings

from geometry.models import CircleDomainConfig, Disk, HalfPlane
from geometry.primitives import image_disk, in_closure_of_omega, reflect_point

from .exceptions import ExtensionError
from .groups import address_point, apply_word, word_disk, word_to_map, words_up_to
from .models import ConjugationReport, ExtensionValue, ReducedWord

logger = logging.getLogger(__name__)


def _circle_of(shape):
    if isinstance(shape, HalfPlane):
        return None
    return shape.center, shape.radius


def image_config(config, f, outer_radius=None):
    """Configuration whose disks are bounded by the image circles f(∂B_j)"""
    disks = []
    for j, disk in enumerate(config.disks, start=1):
        circle = _circle_of(image_disk(f, disk))
        if circle is None:
            raise ExtensionError(f"Image of circle {j} is a line")
        disks.append(Disk(*circle))
    if outer_radius is None:
        outer_radius = 2.0 * max((abs(d.center) + d.radius for d in disks), default=1.0)
    return CircleDomainConfig(outer_radius, disks, f(config.basepoint))


def circle_correspondence(config, config_star, f, tol=None):
    """
    Index map j ↦ j* with f(∂B_j) = ∂B*_{j*}, matched greedily by nearest
    image circle and checked to tol relative to the image scale.
    """
    if tol is None:
        tol = settings.SCHOTTKY_LAB['DISJOINTNESS_TOLERANCE']
    if config.n != config_star.n:
        raise ExtensionError(f"Circle counts differ: {config.n} and {config_star.n}")

    images = []
    for j, disk in enumerate(config.disks, start=1):
        circle = _circle_of(image_disk(f, disk))
        if circle is None:
            raise ExtensionError(f"f maps circle {j} onto a line")
        images.append(circle)

    costs = sorted(
        (abs(c - star.center) + abs(r - star.radius), j, k)
        for j, (c, r) in enumerate(images, start=1)
        for k, star in enumerate(config_star.disks, start=1)
    )
    matched, taken = {}, set()
    for cost, j, k in costs:
        if j in matched or k in taken:
            continue
        scale = max(images[j - 1][1], 1.0)
        if cost > tol * scale:
            raise ExtensionError(f"f(∂B_{j}) matches no circle of Ω* (closest misses by {cost:.3e})")
        matched[j] = k
        taken.add(k)
    return matched


def _reflect_star(config_star, correspondence, word, w):
    for index in reversed(tuple(word)):
        w = reflect_point(config_star.disk(correspondence[index]), w)
    return w


def extend_by_reflection(config, config_star, f, word, z, correspondence=None, tol=None):
    """f̃(z) = T*(f(T^{-1}(z))) for z in the copy T(Ω̄)"""
    if correspondence is None:
        correspondence = circle_correspondence(config, config_star, f)
    if tol is None:
        tol = settings.SCHOTTKY_LAB['DISJOINTNESS_TOLERANCE'] * config.outer_radius
    word = word if isinstance(word, ReducedWord) else ReducedWord(tuple(word))

    z0 = apply_word(config, word.inverse(), z)
    if not in_closure_of_omega(config, z0, tol):
        raise ExtensionError(f"{z} is not in the copy {word}(Ω̄)")
    return _reflect_star(config_star, correspondence, word, f(z0))


def evaluate_extension(config, config_star, f, z, max_depth=12, correspondence=None):
    """
    f̃ at an arbitrary point by addressing. A point still inside a disk after
    max_depth reflections gets the centre of the nested image disk and its
    diameter as error bound.
    """
    if correspondence is None:
        correspondence = circle_correspondence(config, config_star, f)
    word, z0, inside = address_point(config, z, max_depth)
    if not inside:
        return ExtensionValue(_reflect_star(config_star, correspondence, word, f(z0)), 0.0, word)

    holder = next(j for j, disk in enumerate(config.disks, start=1) if abs(z0 - disk.center) < disk.radius)
    star_word = ReducedWord(tuple(correspondence[i] for i in word))
    nested = word_disk(config_star, star_word, correspondence[holder])
    return ExtensionValue(nested.center, 2.0 * nested.radius, word)


def _boundary_samples(config, samples, rng):
    per_circle = max(1, math.ceil(samples / max(config.n, 1)))
    points = []
    for j, disk in enumerate(config.disks, start=1):
        theta = 2.0 * np.pi * rng.random(per_circle)
        points.extend((j, complex(z)) for z in disk.center + disk.radius * np.exp(1j * theta))
    return points[:samples] if config.n else []


def conjugation_residual(config, config_star, f, max_word_length, samples=50, seed=0,
                         correspondence=None, threshold=1e-9):
    """
    max |f̃(T(w)) - T*(f̃(w))| over words T and points w on the circles ∂B_j,
    with f̃(T(w)) read in the neighbouring copy T∘R_j. Also reports the
    largest |f̃ - f| over the same points.
    """
    if correspondence is None:
        correspondence = circle_correspondence(config, config_star, f)
    rng = np.random.default_rng(seed)
    points = _boundary_samples(config, samples, rng)
    words = words_up_to(config.n, max_word_length)

    residual, agreement, witness = 0.0, 0.0, ()
    for word in words:
        for j, w in points:
            z = apply_word(config, word, w)
            direct = _reflect_star(config_star, correspondence, word, f(w))
            neighbor = word.extended(j)
            w_other = apply_word(config, neighbor.inverse(), z)
            across = _reflect_star(config_star, correspondence, neighbor, f(w_other))
            gap = abs(across - direct)
            if gap > residual:
                residual, witness = gap, (str(word), j, w)
            agreement = max(agreement, abs(direct - f(z)))

    flagged = residual > threshold
    if flagged:
        logger.warning(f"Conjugation residual {residual:.3e} at word {witness[0]}, circle {witness[1]}")
    return ConjugationReport(residual, agreement, len(words), len(points), witness, flagged)
