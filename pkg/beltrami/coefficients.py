"""
Beltrami coefficients μ = ∂_z̄ f / ∂_z f of sampled maps, their pullbacks
under (anti-)Möbius maps, and invariance under the reflection group.
"""
import logging

import numpy as np
from django.conf import settings

from geometry.models import ConformalPrimitive
from geometry.primitives import image_disk, sample_domain_points
from schottky.exceptions import ExtensionError
from schottky.groups import address_point, word_to_map, words_up_to

from .exceptions import DilatationSingularError
from .models import CoefficientField, InvarianceReport, PropInvariantReport, WirtingerSample

logger = logging.getLogger(__name__)


def default_step(z):
    return 1e-5 * (1.0 + abs(z))


def wirtinger(mapping, z, h=None):
    """Central differences for ∂_z f = (f_x - i f_y)/2 and ∂_z̄ f = (f_x + i f_y)/2"""
    z = complex(z)
    if h is None:
        h = default_step(z)
    fx = (complex(mapping(z + h)) - complex(mapping(z - h))) / (2.0 * h)
    fy = (complex(mapping(z + 1j * h)) - complex(mapping(z - 1j * h))) / (2.0 * h)
    return WirtingerSample(0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy), h)


def exact_wirtinger(primitive, z):
    """Closed-form WirtingerSample of an (anti-)Möbius map"""
    dz, dzbar = primitive.wirtinger(complex(z))
    return WirtingerSample(complex(dz), complex(dzbar), 0.0)


def beltrami_of_map(mapping, z, h=None):
    """μ_f(z) from central-difference Wirtinger derivatives"""
    sample = wirtinger(mapping, z, h)
    if abs(sample.dz) <= 1e-8 * (abs(sample.dz) + abs(sample.dzbar)):
        raise DilatationSingularError(f"∂_z f vanishes at {z}")
    return sample.mu


def _pullback_value(dz, dzbar, value, reversing):
    if reversing:
        value = value.conjugate()
        return (dz.conjugate() + value * dzbar) / (dzbar.conjugate() + value * dz)
    return (dzbar + value * dz.conjugate()) / (dz + value * dzbar.conjugate())


def pullback(mapping, mu):
    """
    f*μ for an (anti-)Möbius f: the preserving formula
    (∂̄f + μ(f)·conj(∂f)) / (∂f + μ(f)·conj(∂̄f)) or its reversing counterpart.
    """
    reversing = mapping.is_orientation_reversing

    def evaluator(z):
        dz, dzbar = mapping.wirtinger(z)
        return _pullback_value(complex(dz), complex(dzbar), complex(mu(mapping(z))), reversing)

    return CoefficientField(evaluator, mu.bound)


def sampled_pullback(mapping, mu, bound, reversing=False, h=None):
    """f*μ for a map known only through evaluation; bound is the caller's ‖f*μ‖∞"""

    def evaluator(z):
        sample = wirtinger(mapping, z, h)
        return _pullback_value(sample.dz, sample.dzbar, complex(mu(mapping(z))), reversing)

    return CoefficientField(evaluator, bound)


def invariance_residual(config, mu, max_word_length, samples=100, seed=None, margin=None):
    """max over words 1 ≤ |T| ≤ max_word_length and points of D of |T*μ - μ|"""
    if seed is None:
        seed = settings.SCHOTTKY_LAB['DEFAULT_SEED']
    if margin is None:
        margin = 1e-3 * config.outer_radius
    points = sample_domain_points(config, samples, np.random.default_rng(seed), margin=margin)
    words = [word for word in words_up_to(config.n, max_word_length) if len(word)] if config.n else []

    residual, witness = 0.0, ()
    for word in words:
        pulled = pullback(word_to_map(config, word), mu)
        for z in points:
            gap = abs(pulled(z) - mu(z))
            if gap > residual:
                residual, witness = gap, (str(word), complex(z))
    logger.info(f"Invariance residual {residual:.3e} over {len(words)} words")
    return InvarianceReport(residual, witness, len(words), len(points))


def symmetrize(config, base, depth):
    """
    The field equal to base on Ω and to (T^{-1})*base on the copy T(Ω),
    for words found by addressing up to depth reflections.
    """

    def evaluator(w):
        word, _, _ = address_point(config, w, depth)
        if not len(word):
            return base(w)
        return pullback(word_to_map(config, word.inverse()), base)(w)

    return CoefficientField(evaluator, base.bound)


def dilatation_bounds(dilatation=None, norm=None):
    """K ↦ (K-1)/(K+1) or ‖μ‖∞ ↦ (1+‖μ‖)/(1-‖μ‖)"""
    if (dilatation is None) == (norm is None):
        raise ValueError("Give exactly one of the dilatation K and the norm ‖μ‖∞")
    if dilatation is not None:
        if not dilatation >= 1:
            raise ValueError(f"Dilatation must be at least 1, got {dilatation}")
        return (dilatation - 1.0) / (dilatation + 1.0)
    if not 0 <= norm < 1:
        raise ValueError(f"Coefficient norm must lie in [0,1), got {norm}")
    return (1.0 + norm) / (1.0 - norm)


def _circle_reflection(shape, j):
    if not hasattr(shape, 'radius'):
        raise ExtensionError(f"f maps circle {j} onto a line")
    return ConformalPrimitive.reflection(shape)


def prop_invariant_check(config, f, max_word_length=1, samples=100, seed=None, tol=1e-10):
    """
    For a circle-respecting Möbius f: μ_f ≡ 0 is group invariant, and each
    f∘R_j∘f^{-1} is the reflection across image_disk(f, B_j), compared in
    relative terms at images of points of D.
    """
    if seed is None:
        seed = settings.SCHOTTKY_LAB['DEFAULT_SEED']
    mu_f = pullback(f, CoefficientField.zero())
    coefficient = invariance_residual(config, mu_f, max_word_length, samples, seed).residual

    points = f(sample_domain_points(config, samples, np.random.default_rng(seed), margin=1e-3 * config.outer_radius))
    inverse = f.inverse()
    residuals = []
    for j, disk in enumerate(config.disks, start=1):
        conjugated = f.compose(ConformalPrimitive.reflection(disk)).compose(inverse)
        reflection = _circle_reflection(image_disk(f, disk), j)
        expected = reflection(points)
        residuals.append(float(np.max(np.abs(conjugated(points) - expected) / np.maximum(1.0, np.abs(expected)))))

    report = PropInvariantReport(coefficient, tuple(residuals), tol)
    if not report.holds:
        logger.warning(f"Invariance criterion fails: residuals {coefficient:.3e}, {report.conjugation_residual:.3e}")
    return report
