import cmath
import math

import numpy as np
from django.test import SimpleTestCase

from geometry.models import CircleDomainConfig, ConformalPrimitive, Disk, DiskComplement
from geometry.primitives import sample_domain_points, scale_config
from geometry.testing import three_disk_config, two_disk_config
from whitney.decomposition import decompose

from .chains import chain_decompose, chain_diameter_bound, perturb_path
from .estimates import radial_diameter, transboundary_estimate
from .exceptions import ChainError, CorrespondenceError, GeometryReachError
from .models import CircleGeometry, RayGeometry


def _distance_to_polyline(z, vertices):
    best = math.inf
    for a, b in zip(vertices[:-1], vertices[1:]):
        d = b - a
        t = min(max(((z - a) * d.conjugate()).real / abs(d) ** 2, 0.0), 1.0)
        best = min(best, abs(a + t * d - z))
    return best


class ChainDecomposeTest(SimpleTestCase):
    """Test cases for chain_decompose"""

    def setUp(self):
        self.config = CircleDomainConfig(1.0, [Disk(0, 0.2), Disk(0.6j, 0.1)], 0.5)

    def test_path_avoiding_disks(self):
        """Test that a path meeting no disk is a single piece"""
        chain = chain_decompose(self.config, [0.5, 0.5 + 0.3j, 0.3 - 0.4j])
        self.assertEqual(chain.m, 1)
        self.assertEqual(chain.components, ())

    def test_segment_crossing_one_disk(self):
        """Test (γ1, B1, γ2) with b1 and a2 on the crossed circle"""
        chain = chain_decompose(self.config, [-0.6, 0.6])
        self.assertEqual(chain.m, 2)
        self.assertEqual(chain.components, (1,))
        self.assertAlmostEqual(chain.ends[0], -0.2, delta=1e-9)
        self.assertAlmostEqual(chain.starts[1], 0.2, delta=1e-9)
        for z in (chain.ends[0], chain.starts[1]):
            self.assertAlmostEqual(abs(z), 0.2, delta=1e-9)

    def test_tangential_contact(self):
        """Test that a grazing path records a touch point and no component"""
        chain = chain_decompose(self.config, [-0.6 - 0.2j, 0.6 - 0.2j])
        self.assertEqual(chain.m, 1)
        self.assertEqual(len(chain.touch_points), 1)
        disk, point = chain.touch_points[0]
        self.assertEqual(disk, 1)
        self.assertAlmostEqual(point, -0.2j, delta=1e-9)

    def test_repeated_crossings_collapse(self):
        """Test that re-entering a disk collapses to its last exit"""
        path = [-0.6, 0.6, 0.6 + 0.1j, -0.6 + 0.1j, -0.6 + 0.6j, 0.6 + 0.6j]
        chain = chain_decompose(self.config, path)
        self.assertEqual(chain.components, (1, 2))
        self.assertEqual(len(set(chain.components)), len(chain.components))

    def test_reversal(self):
        """Test that reversing the path reverses the chain"""
        path = [-0.6, 0.6, 0.6 + 0.6j, -0.6 + 0.6j]
        forward = chain_decompose(self.config, path)
        backward = chain_decompose(self.config, path[::-1])
        self.assertEqual(backward.components, forward.components[::-1])
        self.assertEqual(forward.components, (1, 2))
        self.assertEqual(backward.m, forward.m)

    def test_pieces_follow_path(self):
        """Test that every piece lies on the original path outside the disks"""
        path = np.array([-0.6, 0.6, 0.6 + 0.5j, -0.3 + 0.7j])
        chain = chain_decompose(self.config, path)
        for piece in chain.pieces:
            for z in piece:
                self.assertLess(_distance_to_polyline(z, path), 1e-9)
                for disk in self.config.disks:
                    self.assertGreaterEqual(abs(z - disk.center), disk.radius - 1e-9)
        for i, disk_index in enumerate(chain.components):
            disk = self.config.disk(disk_index)
            self.assertAlmostEqual(abs(chain.ends[i] - disk.center), disk.radius, delta=1e-9)
            self.assertAlmostEqual(abs(chain.starts[i + 1] - disk.center), disk.radius, delta=1e-9)

    def test_endpoint_violations(self):
        """Test endpoint-component and containment errors"""
        with self.assertRaises(ChainError):
            chain_decompose(self.config, [0.05, 0.5])
        with self.assertRaises(ChainError):
            chain_decompose(self.config, [0.05, -0.05j])
        with self.assertRaises(ChainError):
            chain_decompose(self.config, [0.2, 0.5, -0.5])
        with self.assertRaises(ChainError):
            chain_decompose(self.config, [0.5, 1.5])

    def test_perturbation(self):
        """Test that perturbation keeps endpoints and moves interior vertices by tol"""
        path = [-0.6, 0.2j, 0.6]
        moved = perturb_path(path, 1e-6, seed=4)
        self.assertEqual(moved[0], -0.6)
        self.assertEqual(moved[-1], 0.6)
        self.assertAlmostEqual(abs(moved[1] - 0.2j), 1e-6, delta=1e-15)
        self.assertTrue(np.array_equal(moved, perturb_path(path, 1e-6, seed=4)))


class ChainDiameterBoundTest(SimpleTestCase):
    """Test cases for chain_diameter_bound"""

    def setUp(self):
        self.config = three_disk_config()
        self.identity = ConformalPrimitive.identity()

    def test_single_piece_identity(self):
        """Test diam(γ1) ≤ length(γ1)"""
        chain = chain_decompose(self.config, [0.1j, 0.3 + 0.2j, 0.2 - 0.1j])
        lhs, rhs = chain_diameter_bound(chain, self.identity, self.config)
        self.assertLessEqual(lhs, chain.piece_length(0) + 1e-12)
        self.assertLessEqual(lhs, rhs * (1 + 1e-9))

    def test_two_pieces_identity(self):
        """Test lhs ≤ rhs for a chain through one disk"""
        chain = chain_decompose(self.config, [0.1, 0.9])
        self.assertEqual(chain.components, (1,))
        lhs, rhs = chain_diameter_bound(chain, self.identity, self.config)
        self.assertLessEqual(lhs, rhs * (1 + 1e-9))
        self.assertAlmostEqual(lhs, 0.8, delta=1e-9)

    def test_random_mobius_chains(self):
        """Test the inequality on 100 random chains under a Möbius map"""
        rng = np.random.default_rng(8)
        mapping = ConformalPrimitive(1, 0.2, 0.3, 1.2)
        points = sample_domain_points(self.config, 200, rng, margin=1e-3)
        for a, b in points.reshape(100, 2):
            chain = chain_decompose(self.config, [a, b])
            lhs, rhs = chain_diameter_bound(chain, mapping, self.config)
            self.assertLessEqual(lhs, rhs * (1 + 1e-9))

    def test_missing_correspondence(self):
        """Test that a chain component without an image is an error"""
        chain = chain_decompose(self.config, [0.1, 0.9])
        with self.assertRaises(CorrespondenceError):
            chain_diameter_bound(chain, self.identity, self.config, correspondence={2: Disk(0, 1)})


class RadialDiameterTest(SimpleTestCase):
    """Test cases for radial_diameter"""

    def test_disk(self):
        """Test d_r of a disk seen from outside"""
        self.assertAlmostEqual(radial_diameter(Disk(3, 1), 0, 10), 2.0)
        self.assertAlmostEqual(radial_diameter(Disk(3, 1), 0, 3), 1.0)
        self.assertEqual(radial_diameter(Disk(3, 1), 0, 1), 0.0)

    def test_complement_and_point(self):
        """Test d_r of an unbounded image and of a point"""
        self.assertAlmostEqual(radial_diameter(DiskComplement(0, 2), 0.5, 4), 2.5)
        self.assertEqual(radial_diameter(0.5 + 0j, 0, 1), 0.0)


class TransboundaryEstimateTest(SimpleTestCase):
    """Test cases for the radial and circular estimates"""

    def setUp(self):
        self.ball = CircleDomainConfig(1.0, [], 0j)
        self.config = three_disk_config()
        self.dec = decompose(self.config, 7)
        self.maps = [
            ConformalPrimitive(1, 0.2, 0.3, 1.2),
            ConformalPrimitive(1, 0.1, 1, -0.5),
        ]

    def _rays(self, count):
        disk = self.config.disk(2)
        rays = []
        for k in range(count):
            angle = 2 * math.pi * (k + 0.37) / count
            length = 0.35
            ray = RayGeometry.leaving_disk(disk, angle, length)
            while not self._end_in_closure(ray.end):
                length *= 0.8
                ray = RayGeometry.leaving_disk(disk, angle, length)
            rays.append(ray)
        return rays

    def _end_in_closure(self, z):
        if abs(z) > 1.0:
            return False
        return all(abs(z - d.center) > d.radius for d in self.config.disks)

    def test_identity_radial(self):
        """Test rhs ≥ ray length ≥ lhs for the identity on a ray meeting no disk"""
        ray = RayGeometry(0.1, 0.3, 0.6)
        result = transboundary_estimate(self.ball, ConformalPrimitive.identity(), 'radial', ray, max_level=7)
        self.assertAlmostEqual(result.lhs, 0.6, delta=1e-12)
        self.assertGreaterEqual(result.rhs, 0.6)
        self.assertEqual(result.chain.m, 1)

    def test_identity_circular(self):
        """Test rhs = 2πr ≥ lhs for the identity on a circle meeting no disk"""
        circle = CircleGeometry(0.1j, 0.3)
        result = transboundary_estimate(self.ball, ConformalPrimitive.identity(), 'circular', circle)
        self.assertAlmostEqual(result.rhs, 2 * math.pi * 0.3, delta=1e-9)
        self.assertAlmostEqual(result.lhs, 0.6, delta=1e-12)

    def test_mobius_rays(self):
        """Test ratio ≤ 1 on 32 rays for Möbius maps on the 3-disk configuration"""
        rays = self._rays(32)
        worst = 0.0
        for mapping in self.maps:
            for ray in rays:
                result = transboundary_estimate(self.config, mapping, 'radial', ray, dec=self.dec)
                self.assertLessEqual(result.ratio, 1.0)
                worst = max(worst, result.ratio)
        self.assertGreater(worst, 0.0)

    def test_steep_ray_across_levels(self):
        """Test ratio ≤ 1 on a steep ray for the map with pole near disk 2 at levels 7 and 9"""
        ray = self._rays(32)[31]
        mapping = self.maps[1]
        for level in (7, 9):
            result = transboundary_estimate(self.config, mapping, 'radial', ray, max_level=level)
            self.assertLessEqual(result.ratio, 1.0)

    def test_cube_term_covers_diagonal_path(self):
        """Test that the cube term of the identity bounds the covered length of a diagonal ray"""
        ray = RayGeometry(0.05 + 0.02j, math.pi / 4, 0.8)
        result = transboundary_estimate(self.ball, ConformalPrimitive.identity(), 'radial', ray, max_level=7)
        covered = ray.length - result.details['uncovered_length']
        self.assertGreaterEqual(result.details['cube_term'], covered)
        self.assertLessEqual(result.ratio, 1.0)

    def test_mobius_circles(self):
        """Test ratio ≤ 1 on 32 circles for Möbius maps on the 3-disk configuration"""
        for mapping in self.maps:
            for k in range(32):
                circle = CircleGeometry(0.05 * cmath.exp(1j * k), 0.1 + 0.8 * (k + 0.5) / 32)
                result = transboundary_estimate(self.config, mapping, 'circular', circle)
                self.assertLessEqual(result.ratio, 1.0)

    def test_circular_with_reflected_disks(self):
        """Test the circular estimate against the disks of Ω_1"""
        config = two_disk_config()
        mapping = ConformalPrimitive(1, 0.5, 0.1, 2)
        circle = CircleGeometry(0, 0.707)
        result = transboundary_estimate(config, mapping, 'circular', circle, depth=1)
        self.assertLessEqual(result.ratio, 1.0)
        self.assertEqual(result.details['components_met'], 2)

    def test_scale_invariance(self):
        """Test that scaling config, map and ray leaves the ratio unchanged"""
        ray = self._rays(4)[1]
        mapping = self.maps[0]
        base = transboundary_estimate(self.config, mapping, 'radial', ray, dec=self.dec)
        scaled_config = scale_config(self.config, 2.0)
        scaled = transboundary_estimate(
            scaled_config, mapping.conjugate_by_scaling(2.0), 'radial', ray.scaled(2.0), max_level=7
        )
        self.assertAlmostEqual(scaled.ratio, base.ratio, delta=1e-6)
        self.assertAlmostEqual(scaled.lhs, 2 * base.lhs, delta=1e-9)

    def test_geometry_out_of_reach(self):
        """Test that rays and circles leaving the ball are rejected"""
        with self.assertRaises(GeometryReachError):
            transboundary_estimate(self.ball, ConformalPrimitive.identity(), 'radial', RayGeometry(0.5, 0, 1), max_level=5)
        with self.assertRaises(GeometryReachError):
            transboundary_estimate(self.ball, ConformalPrimitive.identity(), 'circular', CircleGeometry(0.5, 0.6))
        with self.assertRaises(ValueError):
            transboundary_estimate(self.ball, ConformalPrimitive.identity(), 'spiral', CircleGeometry(0, 0.5))
