import math

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase

from geometry.models import ConformalPrimitive, Disk
from geometry.primitives import image_disk, rotate_config, scale_config
from geometry.testing import three_disk_config
from whitney.decomposition import decompose

from .distortion import circular_dilatation, cube_distortion_range, geometric_radii, koebe_distortion_check
from .exceptions import DegenerateShapeError, InvalidNestingError, MapEvaluationError, NoInformationError
from .fatness import annulus_fatness, fatness_check, lens_area, radial_measure
from .models import CircularAnnulus
from .moduli import (
    annulus_modulus,
    grotzsch_mu,
    modulus_chain_bound,
    separating_witness,
    superadditivity_margin,
    teichmuller_bound,
)


def _random_mobius(rng):
    while True:
        a, b, c, d = rng.normal(size=4) + 1j * rng.normal(size=4)
        if abs(a * d - b * c) > 0.1:
            return ConformalPrimitive(a, b, c, d)


class AnnulusModulusTest(SimpleTestCase):
    """Test cases for annulus_modulus and superadditivity_margin"""

    def setUp(self):
        self.annulus = CircularAnnulus(0, 1, 4)

    def test_unit_modulus(self):
        """Test Mod A(0;1,e^{2π}) = 1"""
        self.assertAlmostEqual(annulus_modulus(CircularAnnulus(0, 1, math.exp(2 * math.pi))), 1.0, places=12)
        self.assertAlmostEqual(annulus_modulus(CircularAnnulus(0, 1, 2)), 0.110318, places=6)

    def test_similarity_invariance(self):
        """Test that scaling and translation keep the modulus"""
        value = annulus_modulus(self.annulus)
        self.assertAlmostEqual(annulus_modulus(self.annulus.scaled(3.5 - 2j)), value, delta=1e-12)
        self.assertAlmostEqual(annulus_modulus(self.annulus.translated(2 + 1j)), value, delta=1e-12)

    def test_invalid_annulus(self):
        """Test that r_in ≥ r_out is rejected"""
        with self.assertRaises(ValueError):
            CircularAnnulus(0, 2, 1)

    def test_exact_partition(self):
        """Test that A(0;1,4) = A(0;1,2) ⊔ A(0;2,4) has zero margin"""
        nested = [CircularAnnulus(0, 1, 2), CircularAnnulus(0, 2, 4)]
        self.assertAlmostEqual(superadditivity_margin(self.annulus, nested), 0.0, delta=1e-12)

    def test_partition_with_gap(self):
        """Test that a gap contributes its own modulus to the margin"""
        nested = [CircularAnnulus(0, 1, 1.5), CircularAnnulus(0, 2, 4)]
        gap = annulus_modulus(CircularAnnulus(0, 1.5, 2))
        self.assertAlmostEqual(superadditivity_margin(self.annulus, nested), gap, delta=1e-12)

    def test_random_concentric_margins(self):
        """Test that random concentric sub-annuli never beat superadditivity"""
        rng = np.random.default_rng(2)
        for _ in range(50):
            cuts = np.sort(rng.uniform(1, 4, size=6))
            nested = [CircularAnnulus(0, lo, hi) for lo, hi in zip(cuts[0::2], cuts[1::2]) if lo < hi]
            self.assertGreaterEqual(superadditivity_margin(self.annulus, nested), -1e-12)

    def test_non_concentric_nesting(self):
        """Test an eccentric sub-annulus that still separates the boundary components"""
        nested = [CircularAnnulus(0.2, 1.5, 3)]
        self.assertGreater(superadditivity_margin(self.annulus, nested), 0)

    def test_invalid_nesting(self):
        """Test overlapping or non-separating sub-annuli"""
        with self.assertRaises(InvalidNestingError):
            superadditivity_margin(self.annulus, [CircularAnnulus(0, 1, 3), CircularAnnulus(0, 2, 4)])
        with self.assertRaises(InvalidNestingError):
            superadditivity_margin(self.annulus, [CircularAnnulus(2.5, 0.1, 0.5)])
        with self.assertRaises(InvalidNestingError):
            superadditivity_margin(self.annulus, [CircularAnnulus(0, 2, 5)])

    def test_declared_nesting_skips_check(self):
        """Test that declared nesting is trusted"""
        margin = superadditivity_margin(self.annulus, [CircularAnnulus(2.5, 0.1, 0.5)], declared=True)
        self.assertLess(margin, annulus_modulus(self.annulus))


class GrotzschMuTest(SimpleTestCase):
    """Test cases for grotzsch_mu and teichmuller_bound"""

    def setUp(self):
        self.grid = np.linspace(0.01, 0.99, 99)

    def test_symmetric_point(self):
        """Test μ(1/√2) = π/2"""
        self.assertAlmostEqual(grotzsch_mu(1 / math.sqrt(2)), math.pi / 2, places=12)

    def test_product_identity(self):
        """Test μ(x)·μ(√(1-x²)) = π²/4 across (0,1)"""
        for x in self.grid:
            product = grotzsch_mu(x) * grotzsch_mu(math.sqrt(1 - x * x))
            self.assertAlmostEqual(product, math.pi ** 2 / 4, delta=1e-9)

    def test_decreasing(self):
        """Test that μ decreases on (0,1)"""
        values = [grotzsch_mu(x) for x in self.grid]
        self.assertTrue(all(a > b for a, b in zip(values[:-1], values[1:])))
        self.assertGreater(grotzsch_mu(0.1), grotzsch_mu(0.9))

    def test_small_argument_expansion(self):
        """Test μ(x) - log(4/x) → 0 as x → 0"""
        for x in (1e-3, 1e-4):
            self.assertAlmostEqual(grotzsch_mu(x), math.log(4 / x), delta=1e-5)

    def test_domain(self):
        """Test that μ rejects arguments outside (0,1)"""
        for x in (0.0, 1.0, -0.5, 2.0):
            with self.assertRaises(ValueError):
                grotzsch_mu(x)

    def test_equal_moduli_bound(self):
        """Test that |z1| = |z2| gives the bound π"""
        self.assertAlmostEqual(teichmuller_bound(1, 1j), math.pi, places=12)
        with self.assertRaises(ValueError):
            teichmuller_bound(0, 1)

    def test_witness_below_bound(self):
        """Test Mod A(0;|z1|,|z2|) ≤ bound on a grid of separations"""
        for t in np.linspace(0.01, 0.99, 50):
            witness = separating_witness(t, 1.0)
            self.assertLessEqual(annulus_modulus(witness), teichmuller_bound(t, 1.0))

    def test_bound_nonincreasing(self):
        """Test that the bound does not grow with |z1|/|z2|"""
        bounds = [teichmuller_bound(t, 1.0) for t in np.linspace(0.01, 3.0, 60)]
        self.assertTrue(all(a >= b for a, b in zip(bounds[:-1], bounds[1:])))


class ModulusChainBoundTest(SimpleTestCase):
    """Test cases for modulus_chain_bound"""

    def setUp(self):
        self.c1 = math.log(2) / (2 * math.pi)

    def test_formula(self):
        """Test the linear bound (1/2)(2πC2/log L)·Mod(A)"""
        bound = modulus_chain_bound(self.c1, self.c1, 2 * self.c1)
        log_l = 2 * math.pi * self.c1
        expected = 0.5 * (2 * math.pi * self.c1 / log_l) * 2 * self.c1
        self.assertAlmostEqual(bound.linear, expected, delta=1e-15)
        self.assertAlmostEqual(bound.linear, self.c1, delta=1e-15)
        self.assertAlmostEqual(bound.count_based, 2 * self.c1, delta=1e-15)

    def test_linear_in_c2_and_mod(self):
        """Test that the bound scales linearly in C2 and is M2·Mod(A)"""
        first = modulus_chain_bound(self.c1, 0.3, 5 * self.c1)
        second = modulus_chain_bound(self.c1, 0.6, 5 * self.c1)
        self.assertAlmostEqual(second.linear, 2 * first.linear, delta=1e-14)
        for mod_a in (1.5 * self.c1, 4 * self.c1, 11 * self.c1):
            bound = modulus_chain_bound(self.c1, 0.3, mod_a)
            self.assertAlmostEqual(bound.linear / mod_a, first.constant, delta=1e-12)

    def test_count_bound_is_sharper(self):
        """Test that ⌊Mod(A)/C1⌋·C2 dominates the linear bound"""
        for mod_a in np.linspace(1.01 * self.c1, 20 * self.c1, 40):
            bound = modulus_chain_bound(self.c1, 0.2, mod_a)
            self.assertGreaterEqual(bound.count_based, bound.linear - 1e-15)

    def test_no_information(self):
        """Test that Mod(A) ≤ C1 carries no information"""
        with self.assertRaises(NoInformationError):
            modulus_chain_bound(self.c1, 0.2, self.c1)
        with self.assertRaises(ValueError):
            modulus_chain_bound(0, 0.2, 1.0)


class CircularDilatationTest(SimpleTestCase):
    """Test cases for circular_dilatation"""

    def setUp(self):
        self.affine = lambda z: z + 0.2 * np.conj(z)

    def test_affine_map(self):
        """Test z + 0.2·z̄ has H = 1.5 at every radius"""
        report = circular_dilatation(self.affine, 0.3 + 0.1j, geometric_radii(0.1, 6))
        for ratio in report.ratios:
            self.assertAlmostEqual(ratio, 1.5, delta=1e-12)
        self.assertAlmostEqual(report.min_radius, 0.1 / 32)

    def test_mobius_maps_tend_to_one(self):
        """Test H(ρ) - 1 ≤ 2.1ρ/δ for Möbius maps, δ the distance to the pole, and H ≤ 1 + 1e-6 once ρ/δ is small"""
        rng = np.random.default_rng(9)
        for _ in range(10):
            mapping = _random_mobius(rng)
            pole = mapping.pole()
            z0 = pole + np.exp(2j * np.pi * rng.random())
            coarse = circular_dilatation(mapping, z0, [1e-4]).dilatation
            fine = circular_dilatation(mapping, z0, [1e-7]).dilatation
            self.assertLessEqual(coarse - 1, 2.1e-4)
            self.assertLessEqual(fine, 1 + 1e-6)
            self.assertLessEqual(fine, coarse)

    def test_conformal_composition(self):
        """Test that pre- and post-composition by similarities keep H"""
        rotation = lambda z: np.exp(0.7j) * z
        post = lambda z: 2.5 * self.affine(z) - 1j
        base = circular_dilatation(self.affine, 0.0, [0.01]).dilatation
        rotated = circular_dilatation(lambda z: self.affine(rotation(z)), 0.0, [0.01]).dilatation
        self.assertAlmostEqual(circular_dilatation(post, 0.0, [0.01]).dilatation, base, delta=1e-9)
        self.assertAlmostEqual(rotated, base, delta=1e-2)

    def test_bad_angle_grid(self):
        """Test that the angle grid must be a multiple of 4"""
        with self.assertRaises(ValueError):
            circular_dilatation(self.affine, 0, [0.1], angles=30)

    def test_collapsing_map(self):
        """Test that a map collapsing a circle is reported"""
        with self.assertRaises(MapEvaluationError):
            circular_dilatation(lambda z: 0 * z, 0, [0.1])


class KoebeDistortionTest(SimpleTestCase):
    """Test cases for koebe_distortion_check and cube_distortion"""

    def test_identity(self):
        """Test that the identity has all ratios 1"""
        report = koebe_distortion_check(ConformalPrimitive.identity(), 0.2j, 1.0, 0.5, samples=200)
        self.assertAlmostEqual(report.min_ratio, 1.0, delta=1e-12)
        self.assertAlmostEqual(report.max_ratio, 1.0, delta=1e-12)

    def test_mobius_uniform_constant(self):
        """Test ratios within [1/9, 9] for 20 Möbius maps on B(z0, r/2) away from the pole"""
        rng = np.random.default_rng(4)
        constants = []
        for _ in range(20):
            mapping = _random_mobius(rng)
            z0 = mapping.pole() + 2.0 * np.exp(2j * np.pi * rng.random())
            report = koebe_distortion_check(mapping, z0, 1.9, 0.5, samples=300, seed=1)
            constants.append(report.constant)
        self.assertLessEqual(max(constants), 9.0 + 1e-9)

    def test_square_map_degrades_with_scale(self):
        """Test z ↦ z² on B(2,1): bounded ratios that spread as c grows"""
        square = lambda z: z * z
        derivative = lambda z: 2 * z
        half = koebe_distortion_check(square, 2.0, 1.0, 0.5, samples=2000, seed=3, derivative=derivative)
        wide = koebe_distortion_check(square, 2.0, 1.0, 0.9, samples=2000, seed=3, derivative=derivative)
        self.assertGreaterEqual(half.min_ratio, 0.6 - 1e-12)
        self.assertLessEqual(half.max_ratio, 5 / 3 + 1e-12)
        self.assertGreater(wide.max_ratio / wide.min_ratio, half.max_ratio / half.min_ratio)

    def test_pole_in_ball(self):
        """Test that the ball must avoid the pole"""
        with self.assertRaises(MapEvaluationError):
            koebe_distortion_check(ConformalPrimitive(0, 1, 1, 0), 0.5, 1.0)

    def test_whitney_cube_distortion(self):
        """Test diam f(Q) / dist(f(Q), ∂D*) for similarities of a Whitney decomposition"""
        config = three_disk_config()
        dec = decompose(config, 6)
        low, high = cube_distortion_range(ConformalPrimitive.identity(), dec, config)
        self.assertGreaterEqual(low, 0.24)
        self.assertLess(high, 1.0)
        scaled = cube_distortion_range(ConformalPrimitive.similarity(2.0), dec, scale_config(config, 2.0))
        self.assertAlmostEqual(scaled[0], low, delta=1e-9)
        self.assertAlmostEqual(scaled[1], high, delta=1e-9)
        turned = cube_distortion_range(
            ConformalPrimitive.similarity(1j), dec, rotate_config(config, math.pi / 2)
        )
        self.assertAlmostEqual(turned[1], high, delta=1e-9)


class FatnessTest(SimpleTestCase):
    """Test cases for lens_area, fatness_check and annulus_fatness"""

    def setUp(self):
        self.unit = Disk(0, 1)

    def test_lens_area(self):
        """Test lens areas in the disjoint, nested and symmetric cases"""
        self.assertEqual(lens_area(self.unit, Disk(3, 1)), 0.0)
        self.assertAlmostEqual(lens_area(self.unit, Disk(0.1, 3)), math.pi)
        self.assertAlmostEqual(lens_area(self.unit, Disk(1, 2)), math.pi)
        # two unit disks at distance 1
        self.assertAlmostEqual(lens_area(self.unit, Disk(1, 1)), 2 * math.pi / 3 - math.sqrt(3) / 2, places=12)

    def test_unit_disk(self):
        """Test c ≥ 0.3 for the unit disk with the worst case on the boundary at r = 2"""
        report = fatness_check(self.unit)
        self.assertGreaterEqual(report.constant, 0.3)
        self.assertAlmostEqual(report.constant, math.pi / 4, delta=1e-9)
        self.assertAlmostEqual(report.witness[1], 2.0)
        self.assertGreaterEqual(report.radial_ratio, 0.5 - 1e-12)
        self.assertLessEqual(max(report.radial_diameters), report.diameter + 1e-12)

    def test_scale_invariance(self):
        """Test that every disk has the same constant"""
        base = fatness_check(self.unit).constant
        for disk in (Disk(3 + 1j, 0.01), Disk(-2j, 40)):
            self.assertAlmostEqual(fatness_check(disk).constant, base, delta=1e-9)

    def test_reflected_disk_stays_fat(self):
        """Test that the image of a fat disk under a reflection keeps the constant"""
        reflection = ConformalPrimitive.reflection(Disk(0, 1))
        image = image_disk(reflection, Disk(0.5, 0.1))
        self.assertAlmostEqual(fatness_check(image).constant, fatness_check(self.unit).constant, delta=1e-9)

    def test_point_sentinel(self):
        """Test that points are fat for every constant"""
        report = fatness_check(0.5 + 0.5j)
        self.assertTrue(report.is_point)
        self.assertEqual(report.constant, math.inf)
        self.assertTrue(fatness_check([0.5j]).is_point)

    def test_degenerate_shape(self):
        """Test that two points are not a fat shape"""
        with self.assertRaises(DegenerateShapeError):
            fatness_check([0j, 1 + 0j])

    def test_union_of_disks(self):
        """Test the Monte Carlo constant of a union of two disks"""
        union = [Disk(-1, 0.5), Disk(1, 0.5)]
        report = fatness_check(union, samples=8, seed=3, monte_carlo_points=4000)
        self.assertGreater(report.constant, 0)
        self.assertLess(report.constant, fatness_check(self.unit).constant)
        self.assertAlmostEqual(report.diameter, 3.0, delta=1e-2)
        self.assertEqual(report, fatness_check(union, samples=8, seed=3, monte_carlo_points=4000))

    def test_union_uses_configured_point_count(self):
        """Test that each Monte Carlo estimate draws MONTE_CARLO_POINTS points"""
        union = [Disk(-1, 0.5), Disk(1, 0.5)]
        with self.settings(SCHOTTKY_LAB={**settings.SCHOTTKY_LAB, 'MONTE_CARLO_POINTS': 4000}):
            configured = fatness_check(union, samples=8, seed=3)
        self.assertEqual(configured, fatness_check(union, samples=8, seed=3, monte_carlo_points=4000))

    def test_radial_measure(self):
        """Test d_r of a union merges the overlapping radial intervals"""
        union = [Disk(2, 1), Disk(-2.5, 1)]
        self.assertAlmostEqual(radial_measure(union, 0, 10), 2.5)
        self.assertAlmostEqual(radial_measure(union, 0, 2), 1.0)

    def test_annulus_fatness(self):
        """Test the area of a disk in an annulus it crosses against c/4"""
        c = fatness_check(self.unit).constant
        for z, r_in, r_out in ((0.5, 0.2, 1.0), (1.0, 0.5, 1.5), (0.0, 0.0, 0.5)):
            self.assertGreaterEqual(annulus_fatness(self.unit, z, r_in, r_out), c / 4)
        self.assertAlmostEqual(annulus_fatness(self.unit, 0, 0.5, 1.0), 0.75 * math.pi / 0.25)
        self.assertEqual(annulus_fatness(0.3 + 0j, 0, 0.1, 0.5), 0.0)
