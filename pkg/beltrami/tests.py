import numpy as np
from django.test import SimpleTestCase

from geometry.models import CircleDomainConfig, ConformalPrimitive, Disk
from geometry.primitives import sample_domain_points, scale_config
from geometry.testing import three_disk_config, two_disk_config
from schottky.exceptions import ExtensionError

from .coefficients import (
    beltrami_of_map,
    dilatation_bounds,
    exact_wirtinger,
    invariance_residual,
    prop_invariant_check,
    pullback,
    sampled_pullback,
    symmetrize,
    wirtinger,
)
from .exceptions import DilatationSingularError
from .models import CoefficientField


class BeltramiOfMapTest(SimpleTestCase):
    """Test cases for wirtinger and beltrami_of_map"""

    def setUp(self):
        self.mobius = ConformalPrimitive(1, 0.3, 0.2, 1.5)

    def test_mobius_is_conformal(self):
        """Test μ ≈ 0 for a Möbius map"""
        for z in (0.1, 0.5 + 0.5j, -1 - 2j):
            self.assertLess(abs(beltrami_of_map(self.mobius, z)), 1e-8)

    def test_affine_map(self):
        """Test μ = 0.2 for z + 0.2·z̄"""
        affine = lambda z: z + 0.2 * np.conj(z)
        for z in (0, 0.3 - 0.1j, 2j):
            self.assertAlmostEqual(beltrami_of_map(affine, z, h=0.1), 0.2, delta=1e-12)

    def test_quadratic_map(self):
        """Test z + 0.1·z̄² against ∂_z̄ f = 0.2·z̄ at z = 1"""
        quadratic = lambda z: z + 0.1 * np.conj(z) ** 2
        sample = wirtinger(quadratic, 1.0, h=1e-3)
        self.assertAlmostEqual(sample.dzbar, 0.2, delta=1e-9)
        self.assertAlmostEqual(beltrami_of_map(quadratic, 1.0, h=1e-3), 0.2, delta=1e-9)

    def test_second_order_convergence(self):
        """Test that the error of z + 0.1·z²z̄ shrinks like h²"""
        cubic = lambda z: z + 0.1 * z * z * np.conj(z)
        exact = 0.1 / 1.2
        coarse = abs(beltrami_of_map(cubic, 1.0, h=1e-2) - exact)
        fine = abs(beltrami_of_map(cubic, 1.0, h=1e-3) - exact)
        self.assertGreater(coarse / fine, 50)
        self.assertLess(coarse / fine, 200)

    def test_exact_wirtinger(self):
        """Test that central differences agree with the closed form on a Möbius map"""
        z = 0.4 - 0.2j
        numeric, exact = wirtinger(self.mobius, z), exact_wirtinger(self.mobius, z)
        self.assertAlmostEqual(numeric.dz, exact.dz, delta=1e-8)
        self.assertEqual(exact.dzbar, 0)
        self.assertGreater(exact.jacobian, 0)
        reflection = exact_wirtinger(ConformalPrimitive.reflection(Disk(0, 1)), z)
        self.assertEqual(reflection.dz, 0)
        self.assertLess(reflection.jacobian, 0)

    def test_antiholomorphic_map(self):
        """Test that z ↦ z̄ has no Beltrami coefficient"""
        with self.assertRaises(DilatationSingularError):
            beltrami_of_map(np.conj, 0.5 + 0.5j)


class PullbackTest(SimpleTestCase):
    """Test cases for pullback and CoefficientField"""

    def setUp(self):
        self.rng = np.random.default_rng(12)
        self.field = CoefficientField(lambda z: 0.3 * z / (1 + abs(z)), 0.3)

    def _random_mobius(self):
        a, b, c, d = self.rng.normal(size=4) + 1j * self.rng.normal(size=4)
        return ConformalPrimitive(a, b, c, d)

    def _random_reflection(self):
        center = complex(*self.rng.normal(size=2))
        return ConformalPrimitive.reflection(Disk(center, 0.2 + self.rng.random()))

    def test_identity(self):
        """Test that the identity leaves μ unchanged"""
        pulled = pullback(ConformalPrimitive.identity(), self.field)
        for z in (0.2, 1 - 1j, 3j):
            self.assertAlmostEqual(pulled(z), self.field(z), delta=1e-15)

    def test_reflection_of_zero(self):
        """Test that reflections pull 0 back to 0"""
        pulled = pullback(self._random_reflection(), CoefficientField.zero())
        self.assertEqual(pulled(0.7 + 0.2j), 0)

    def test_composition_law(self):
        """Test (f∘g)*μ = g*(f*μ) for Möbius f, reflection g and μ = 0.3i"""
        mu = CoefficientField.constant(0.3j)
        worst = 0.0
        for _ in range(100):
            f, g = self._random_mobius(), self._random_reflection()
            z = complex(*self.rng.normal(size=2))
            left = pullback(f.compose(g), mu)(z)
            right = pullback(g, pullback(f, mu))(z)
            worst = max(worst, abs(left - right))
        self.assertLessEqual(worst, 1e-10)

    def test_modulus_preserved(self):
        """Test |f*μ(z)| = |μ(f(z))| for Möbius and anti-Möbius maps"""
        for _ in range(20):
            for mapping in (self._random_mobius(), self._random_reflection()):
                z = complex(*self.rng.normal(size=2))
                self.assertAlmostEqual(abs(pullback(mapping, self.field)(z)), abs(self.field(mapping(z))), delta=1e-10)

    def test_double_reflection(self):
        """Test that two reflections pull back like their Möbius composite"""
        first, second = self._random_reflection(), self._random_reflection()
        composite = second.compose(first)
        self.assertFalse(composite.is_orientation_reversing)
        for z in (0.1 + 0.1j, -0.5, 2j):
            nested = pullback(first, pullback(second, self.field))(z)
            self.assertAlmostEqual(nested, pullback(composite, self.field)(z), delta=1e-10)

    def test_sampled_pullback(self):
        """Test that the finite-difference pullback matches the closed form"""
        mapping = ConformalPrimitive(1, 0.3, 0.2, 1.5)
        sampled = sampled_pullback(lambda z: mapping(z), self.field, self.field.bound)
        for z in (0.1, 0.5 + 0.5j, -1 - 2j):
            self.assertAlmostEqual(sampled(z), pullback(mapping, self.field)(z), delta=1e-7)
        reflection = self._random_reflection()
        sampled = sampled_pullback(lambda z: reflection(z), self.field, self.field.bound, reversing=True)
        z = reflection.pole() + 1.5
        self.assertAlmostEqual(sampled(z), pullback(reflection, self.field)(z), delta=1e-6)

    def test_field_bounds(self):
        """Test bound validation, sampling and rescaling"""
        with self.assertRaises(ValueError):
            CoefficientField.constant(1.0)
        points = np.linspace(-5, 5, 41) + 0.5j
        self.assertLessEqual(self.field.sampled_norm(points), 0.3)
        scaled = self.field.scaled(0.9)
        self.assertEqual(scaled.bound, 0.9)
        self.assertAlmostEqual(scaled(2.0), 3 * self.field(2.0), delta=1e-15)
        with self.assertRaises(ValueError):
            CoefficientField(lambda z: 0.5, 0.1).sampled_norm(points)
        with self.assertRaises(ValueError):
            CoefficientField.zero().scaled(0.5)
        self.assertEqual(self.field(np.array([[1.0, 2.0]])).shape, (1, 2))


class InvarianceResidualTest(SimpleTestCase):
    """Test cases for invariance_residual and symmetrize"""

    def setUp(self):
        self.config = three_disk_config()

    def test_zero_field(self):
        """Test that μ ≡ 0 is invariant"""
        report = invariance_residual(self.config, CoefficientField.zero(), 2, samples=30)
        self.assertEqual(report.residual, 0.0)
        self.assertEqual(report.words, 3 + 6)

    def test_constant_field_single_circle(self):
        """Test that a constant field is not reflection invariant"""
        config = CircleDomainConfig(1.0, [Disk(0.2, 0.3)], 0.8)
        report = invariance_residual(config, CoefficientField.constant(0.3), 1, samples=30)
        self.assertGreater(report.residual, 0)
        word, z = report.witness
        self.assertEqual(word, '(1)')
        self.assertGreater(abs(z - 0.2), 0.3)

    def test_symmetrized_field(self):
        """Test that pushing a field to the word copies makes it invariant"""
        base = CoefficientField(lambda z: 0.3 * z / (1 + abs(z)), 0.3)
        field = symmetrize(self.config, base, 3)
        report = invariance_residual(self.config, field, 3, samples=20, seed=6)
        self.assertLessEqual(report.residual, 1e-8)
        self.assertGreater(invariance_residual(self.config, base, 1, samples=20, seed=6).residual, 1e-3)

    def test_symmetrized_field_on_domain(self):
        """Test that symmetrizing leaves the field on Ω unchanged"""
        base = CoefficientField(lambda z: 0.2j * z, 0.2)
        field = symmetrize(self.config, base, 2)
        for z in sample_domain_points(self.config, 10, np.random.default_rng(1)):
            self.assertEqual(field(z), base(z))


class DilatationBoundsTest(SimpleTestCase):
    """Test cases for dilatation_bounds"""

    def test_values(self):
        """Test K = 1 ↔ 0 and ‖μ‖ = 0.2 ↔ K = 1.5"""
        self.assertEqual(dilatation_bounds(dilatation=1), 0.0)
        self.assertAlmostEqual(dilatation_bounds(norm=0.2), 1.5, delta=1e-15)

    def test_round_trip(self):
        """Test K → ‖μ‖ → K"""
        for k in (1.0, 1.5, 3.0, 17.25):
            self.assertAlmostEqual(dilatation_bounds(norm=dilatation_bounds(dilatation=k)), k, delta=1e-15 * k)

    def test_out_of_range(self):
        """Test K < 1, ‖μ‖ ≥ 1 and ambiguous calls"""
        with self.assertRaises(ValueError):
            dilatation_bounds(dilatation=0.5)
        with self.assertRaises(ValueError):
            dilatation_bounds(norm=1.0)
        with self.assertRaises(ValueError):
            dilatation_bounds()
        with self.assertRaises(ValueError):
            dilatation_bounds(dilatation=2, norm=0.3)


class PropInvariantCheckTest(SimpleTestCase):
    """Test cases for prop_invariant_check"""

    def setUp(self):
        self.config = three_disk_config()

    def test_identity(self):
        """Test that the identity conjugates R_j to itself"""
        report = prop_invariant_check(self.config, ConformalPrimitive.identity(), samples=50)
        self.assertTrue(report.holds)
        self.assertEqual(len(report.conjugation_residuals), 3)
        self.assertLessEqual(report.conjugation_residual, 1e-13)

    def test_doubling(self):
        """Test that z ↦ 2z conjugates R_j to the reflection across the doubled circle"""
        doubling = ConformalPrimitive.similarity(2.0)
        scaled = scale_config(self.config, 2.0)
        report = prop_invariant_check(self.config, doubling, samples=50)
        self.assertTrue(report.holds)
        inverse = doubling.inverse()
        for disk, doubled in zip(self.config.disks, scaled.disks):
            conjugated = doubling.compose(ConformalPrimitive.reflection(disk)).compose(inverse)
            for w in (0.1 + 1.9j, -1.5, 0.7j):
                self.assertAlmostEqual(conjugated(w), ConformalPrimitive.reflection(doubled)(w), delta=1e-12)

    def test_generic_mobius(self):
        """Test residuals ≤ 1e-10 for a generic Möbius map"""
        mapping = ConformalPrimitive(1, 0.3, 0.2, 1.5)
        report = prop_invariant_check(two_disk_config(), mapping, max_word_length=2, samples=100)
        self.assertLessEqual(report.coefficient_residual, 1e-10)
        self.assertLessEqual(report.conjugation_residual, 1e-10)
        self.assertTrue(report.holds)

    def test_circle_onto_line(self):
        """Test that a map sending a boundary circle through ∞ is rejected"""
        disk = self.config.disk(1)
        # pole on ∂B_1
        pole = disk.center + disk.radius
        with self.assertRaises(ExtensionError):
            prop_invariant_check(self.config, ConformalPrimitive(1, 0, 1, -pole), samples=10)
