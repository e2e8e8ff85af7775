import math

import numpy as np
from django.test import SimpleTestCase

from .exceptions import DomainMembershipError, PoleError
from .models import CircleDomainConfig, ConformalPrimitive, Disk, DiskComplement, HalfPlane
from .primitives import (
    boundary_distance,
    boundary_distances,
    image_disk,
    reflect_disk,
    reflect_point,
    reflection_jacobian,
    rotate_config,
    sample_domain_points,
    scale_config,
    validate_config,
)
from .testing import random_config


class DiskModelTest(SimpleTestCase):
    """Test cases for Disk and CircleDomainConfig value types"""

    def test_radius_must_be_positive(self):
        """Test that a nonpositive radius is rejected"""
        with self.assertRaises(ValueError):
            Disk(0, 0)
        with self.assertRaises(ValueError):
            Disk(1j, -0.5)

    def test_config_area(self):
        """Test area of D"""
        config = CircleDomainConfig(2.0, [Disk(0.5, 0.25)], 0.0)
        self.assertAlmostEqual(config.area, math.pi * 4 - math.pi / 16)

    def test_one_based_disk_lookup(self):
        """Test disk lookup by reflection index"""
        config = CircleDomainConfig(1.0, [Disk(0.5, 0.1), Disk(-0.5, 0.1)])
        self.assertEqual(config.disk(2).center, -0.5)
        with self.assertRaises(IndexError):
            config.disk(3)


class ValidateConfigTest(SimpleTestCase):
    """Test cases for validate_config"""

    def test_empty_complement_is_valid(self):
        """Test unit ball without disks"""
        self.assertEqual(validate_config(CircleDomainConfig(1.0, [], 0)), [])

    def test_overlapping_closures(self):
        """Test that overlapping disks are reported by pair"""
        config = CircleDomainConfig(1.0, [Disk(0.3, 0.2), Disk(0.5, 0.2)], -0.5)
        violations = validate_config(config)
        self.assertEqual([v.code for v in violations], ['overlapping_closures'])
        self.assertEqual(violations[0].subjects, (1, 2))
        self.assertIn('overlapping closures', violations[0].message)

    def test_basepoint_inside_disk(self):
        """Test that a basepoint in a complementary disk is reported"""
        config = CircleDomainConfig(1.0, [Disk(0, 0.5)], 0.2)
        violations = validate_config(config)
        self.assertEqual([v.code for v in violations], ['basepoint_inside_disk'])
        self.assertIn('basepoint inside complementary disk', violations[0].message)

    def test_disk_touching_outer_circle(self):
        """Test that a disk reaching ∂B(0,R) is reported"""
        config = CircleDomainConfig(1.0, [Disk(0.8, 0.2)], 0)
        self.assertEqual([v.code for v in validate_config(config)], ['disk_outside_ball'])

    def test_gap_below_tolerance(self):
        """Test the relative disjointness tolerance"""
        config = CircleDomainConfig(1.0, [Disk(-0.25, 0.25), Disk(0.25 + 1e-12, 0.25)], 0.9j)
        self.assertEqual([v.code for v in validate_config(config)], ['overlapping_closures'])
        self.assertEqual(validate_config(config, tolerance=1e-13), [])


class ReflectPointTest(SimpleTestCase):
    """Test cases for reflect_point"""

    def setUp(self):
        self.unit = Disk(0, 1)

    def test_inversion_in_unit_circle(self):
        """Test unit disk, z=2"""
        self.assertAlmostEqual(reflect_point(self.unit, 2), 0.5)

    def test_boundary_is_fixed(self):
        """Test that points of the circle are fixed"""
        for theta in np.linspace(0, 2 * np.pi, 17):
            z = complex(np.cos(theta), np.sin(theta))
            self.assertAlmostEqual(abs(reflect_point(self.unit, z) - z), 0, places=14)

    def test_against_ray_construction(self):
        """Test against the point on the ray from a at distance r²/|z - a|"""
        disk = Disk(1 + 1j, 0.5)
        z = 3
        offset = z - disk.center
        expected = disk.center + offset / abs(offset) * disk.radius ** 2 / abs(offset)
        self.assertAlmostEqual(abs(reflect_point(disk, z) - expected), 0, places=14)

    def test_involution(self):
        """Test that reflecting twice returns the point"""
        rng = np.random.default_rng(1)
        for _ in range(200):
            disk = Disk(complex(*rng.normal(size=2)), rng.uniform(0.1, 2))
            z = complex(*rng.normal(scale=3, size=2))
            back = reflect_point(disk, reflect_point(disk, z))
            self.assertLessEqual(abs(back - z), 1e-10 * (1 + abs(z)))

    def test_center_is_pole(self):
        """Test pole error at the center"""
        with self.assertRaises(PoleError):
            reflect_point(Disk(1j, 0.3), 1j)

    def test_matches_reflection_primitive(self):
        """Test the matrix form of the reflection"""
        disk = Disk(0.3 - 0.2j, 0.4)
        mapping = ConformalPrimitive.reflection(disk)
        self.assertTrue(mapping.is_orientation_reversing)
        for z in (1.0, 2j, -0.7 + 0.1j):
            self.assertAlmostEqual(abs(mapping(z) - reflect_point(disk, z)), 0, places=13)


class ImageDiskTest(SimpleTestCase):
    """Test cases for image_disk"""

    def assertOnCircle(self, samples, center, radius):
        deviation = np.max(np.abs(np.abs(samples - center) - radius))
        self.assertLessEqual(deviation, 1e-10)

    def test_identity(self):
        """Test identity map leaves a disk unchanged"""
        disk = Disk(0.4 + 0.1j, 0.2)
        image = image_disk(ConformalPrimitive.identity(), disk)
        self.assertIsInstance(image, Disk)
        self.assertAlmostEqual(abs(image.center - disk.center), 0, places=12)
        self.assertAlmostEqual(image.radius, disk.radius, places=12)

    def test_reflected_disk_is_inside_unit_disk(self):
        """Test reflection across the unit circle of disk(3, 0.5)"""
        image = image_disk(ConformalPrimitive.reflection(Disk(0, 1)), Disk(3, 0.5))
        self.assertIsInstance(image, Disk)
        self.assertLess(abs(image.center) + image.radius, 1)

    def test_boundary_samples_fit_image_circle(self):
        """Test that 16 mapped boundary samples lie on the image circle"""
        disk = Disk(3, 0.5)
        reflection = ConformalPrimitive.reflection(Disk(0, 1))
        image = image_disk(reflection, disk)
        self.assertOnCircle(reflection(disk.boundary_samples(16)), image.center, image.radius)
        # closed form: the circle through 1/2.5 and 1/3.5
        self.assertAlmostEqual(image.center.real, (0.4 + 1 / 3.5) / 2, places=12)
        self.assertAlmostEqual(image.radius, (0.4 - 1 / 3.5) / 2, places=12)

    def test_generic_mobius_samples(self):
        """Test random Möbius maps on random disks away from the pole"""
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 50:
            a, b, c, d = (complex(*rng.normal(size=2)) for _ in range(4))
            mapping = ConformalPrimitive(a, b, c, d, bool(rng.integers(2)))
            disk = Disk(complex(*rng.normal(size=2)), rng.uniform(0.1, 1))
            pole = mapping.pole()
            if pole is not None and abs(pole - disk.center) < disk.radius * 1.5:
                continue
            image = image_disk(mapping, disk)
            self.assertIsInstance(image, Disk)
            samples = mapping(disk.boundary_samples(32))
            deviation = np.max(np.abs(np.abs(samples - image.center) - image.radius))
            self.assertLessEqual(deviation, 1e-10 * max(1.0, image.radius))
            checked += 1

    def test_respects_composition(self):
        """Test that image under a composition is the image of the image"""
        f = ConformalPrimitive(1, 0.2j, 0.1, 1)
        g = ConformalPrimitive.reflection(Disk(0.5, 0.3))
        disk = Disk(-0.4 + 0.3j, 0.15)
        direct = image_disk(f.compose(g), disk)
        stepwise = image_disk(f, image_disk(g, disk))
        self.assertAlmostEqual(abs(direct.center - stepwise.center), 0, places=9)
        self.assertAlmostEqual(direct.radius, stepwise.radius, places=9)

    def test_pole_inside_gives_complement(self):
        """Test that a disk containing the pole maps to a complement descriptor"""
        image = image_disk(ConformalPrimitive(0, 1, 1, 0), Disk(0, 0.5))
        self.assertIsInstance(image, DiskComplement)
        self.assertAlmostEqual(abs(image.center), 0, places=12)
        self.assertAlmostEqual(image.radius, 2, places=12)

    def test_pole_on_boundary_gives_half_plane(self):
        """Test that a circle through the pole maps to a line"""
        image = image_disk(ConformalPrimitive(0, 1, 1, 0), Disk(0.5, 0.5))
        self.assertIsInstance(image, HalfPlane)
        self.assertAlmostEqual(image.point.real, 1, places=12)
        self.assertTrue(image.contains(2))
        self.assertFalse(image.contains(0))


class ReflectDiskTest(SimpleTestCase):
    """Test cases for reflect_disk"""

    def setUp(self):
        self.mirror = Disk(-0.75, 0.25)

    def test_closed_form(self):
        """Test R_1(B_2) on the 2-disk configuration against 1/140"""
        image = reflect_disk(self.mirror, Disk(0.75, 0.25))
        self.assertIsInstance(image, Disk)
        self.assertAlmostEqual(image.radius, 1 / 140, delta=1e-17)
        self.assertAlmostEqual(image.center.real, -0.75 + 0.09375 / 2.1875, delta=1e-15)

    def test_matches_image_disk(self):
        """Test agreement with image_disk on random disjoint disks"""
        rng = np.random.default_rng(5)
        reflection = ConformalPrimitive.reflection(self.mirror)
        for _ in range(20):
            disk = Disk(complex(*rng.uniform(0.2, 2, size=2)), rng.uniform(0.05, 0.2))
            image = reflect_disk(self.mirror, disk)
            expected = image_disk(reflection, disk)
            self.assertAlmostEqual(abs(image.center - expected.center), 0, places=10)
            self.assertAlmostEqual(image.radius, expected.radius, places=10)

    def test_iterated_radii_stay_positive(self):
        """Test that twelve alternating reflections keep a positive, decreasing radius"""
        other = Disk(0.75, 0.25)
        disk = other
        radii = []
        for step in range(12):
            disk = reflect_disk(self.mirror if step % 2 == 0 else other, disk)
            radii.append(disk.radius)
        self.assertGreater(radii[-1], 0)
        for coarse, fine in zip(radii, radii[1:]):
            self.assertLess(fine, coarse)
        self.assertAlmostEqual(radii[0], 1 / 140, delta=1e-17)

    def test_mirror_centre_inside(self):
        """Test that a disk around the mirror's centre maps to a complement"""
        image = reflect_disk(Disk(0, 1), Disk(0, 0.5))
        self.assertIsInstance(image, DiskComplement)
        self.assertAlmostEqual(image.radius, 2, places=12)

    def test_circle_through_centre(self):
        """Test that a circle through the mirror's centre is refused"""
        with self.assertRaises(PoleError):
            reflect_disk(Disk(0, 1), Disk(0.5, 0.5))


class ReflectionJacobianTest(SimpleTestCase):
    """Test cases for reflection_jacobian"""

    def setUp(self):
        self.unit = Disk(0, 1)

    def test_isometric_on_circle(self):
        """Test unit disk, z=1"""
        self.assertAlmostEqual(reflection_jacobian(self.unit, 1), 1)

    def test_finite_difference_area(self):
        """Test unit disk, z=2 against the area distortion of a tiny square"""
        z, h = 2.0, 1e-5
        corners = [z, z + h, z + h + 1j * h, z + 1j * h]
        image = [reflect_point(self.unit, w) for w in corners]
        x = np.array([w.real for w in image])
        y = np.array([w.imag for w in image])
        area = 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
        self.assertAlmostEqual(reflection_jacobian(self.unit, z), 0.0625)
        self.assertAlmostEqual(area / h ** 2, 0.0625, places=5)

    def test_contraction_outside(self):
        """Test that the Jacobian is below 1 outside and above 1 inside"""
        disk = Disk(0.3 + 0.4j, 0.7)
        for angle in np.linspace(0, 2 * np.pi, 9):
            direction = complex(np.cos(angle), np.sin(angle))
            self.assertLess(reflection_jacobian(disk, disk.center + 2 * disk.radius * direction), 1)
            self.assertGreater(reflection_jacobian(disk, disk.center + 0.5 * disk.radius * direction), 1)

    def test_pole(self):
        """Test pole error at the center"""
        with self.assertRaises(PoleError):
            reflection_jacobian(self.unit, 0)


class BoundaryDistanceTest(SimpleTestCase):
    """Test cases for boundary_distance"""

    def test_unit_ball_center(self):
        """Test R=1, no disks, z=0"""
        self.assertEqual(boundary_distance(CircleDomainConfig(1.0), 0), 1.0)

    def test_equidistant(self):
        """Test R=1, disk(0, 0.25), z=0.5"""
        config = CircleDomainConfig(1.0, [Disk(0, 0.25)], 0.5)
        self.assertAlmostEqual(boundary_distance(config, 0.5), 0.25)

    def test_outside_domain(self):
        """Test domain-membership error"""
        config = CircleDomainConfig(1.0, [Disk(0, 0.25)], 0.5)
        with self.assertRaises(DomainMembershipError):
            boundary_distance(config, 0.1)
        with self.assertRaises(DomainMembershipError):
            boundary_distance(config, 1.5)

    def test_positive_on_random_samples(self):
        """Test δ_D > 0 on rejection-sampled points of random configurations"""
        rng = np.random.default_rng(3)
        for _ in range(5):
            config = random_config(rng)
            self.assertEqual(validate_config(config), [])
            points = sample_domain_points(config, 2000, rng)
            self.assertTrue(np.all(boundary_distances(config, points) > 0))

    def test_lipschitz(self):
        """Test that δ_D is 1-Lipschitz on sampled pairs"""
        rng = np.random.default_rng(4)
        config = random_config(rng)
        first = sample_domain_points(config, 500, rng)
        second = sample_domain_points(config, 500, rng)
        gap = np.abs(boundary_distances(config, first) - boundary_distances(config, second))
        self.assertTrue(np.all(gap <= np.abs(first - second) + 1e-12))


class ConfigTransformTest(SimpleTestCase):
    """Test cases for scaling and rotating configurations"""

    def test_scaling_scales_distances(self):
        """Test δ_D(s·z) = s·δ_D(z)"""
        config = CircleDomainConfig(1.0, [Disk(0.5j, 0.2)], 0)
        scaled = scale_config(config, 3.0)
        self.assertAlmostEqual(boundary_distance(scaled, 0.3), 3 * boundary_distance(config, 0.1))

    def test_quarter_turn_is_exact(self):
        """Test that a quarter turn permutes coordinates exactly"""
        config = CircleDomainConfig(1.0, [Disk(0.5 + 0.25j, 0.2)], 0.1)
        rotated = rotate_config(config, math.pi / 2)
        self.assertEqual(rotated.disks[0].center, -0.25 + 0.5j)
        self.assertEqual(rotated.basepoint, 0.1j)
