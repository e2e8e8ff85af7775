import math

import numpy as np
from django.test import SimpleTestCase

from geometry.exceptions import ConfigValidationError
from geometry.models import CircleDomainConfig, Disk
from geometry.primitives import sample_domain_points
from geometry.testing import random_config, three_disk_config

from .decomposition import (
    adjacency_check,
    cube_containing,
    decompose,
    overlapping,
    property_violations,
    uncovered_points,
)
from .models import SQRT2, WhitneyCube, WhitneyDecomposition


class DecomposeUnitBallTest(SimpleTestCase):
    """Test cases for decompose on the unit ball"""

    def setUp(self):
        self.config = CircleDomainConfig(1.0, [], 0j)
        self.dec = decompose(self.config, 8)

    def test_distance_ratios(self):
        """Test that every cube has dist(Q,∂D)/ℓ(Q) in (√2, 4√2]"""
        self.assertGreater(len(self.dec), 0)
        self.assertEqual(property_violations(self.dec), [])
        for cube in self.dec.cubes[::25]:
            clearance = min(1 - abs(corner) for corner in cube.corners())
            self.assertGreater(clearance, SQRT2 * cube.side)
            self.assertLessEqual(clearance, 4 * SQRT2 * cube.side + 1e-15)

    def test_area_bookkeeping(self):
        """Test Σ area + uncovered_area = Area(D)"""
        total = self.dec.covered_area + self.dec.uncovered_area
        self.assertAlmostEqual(total, math.pi, delta=1e-8)
        self.assertGreater(self.dec.pending_count, 0)

    def test_uncovered_area_decays(self):
        """Test that the uncovered area shrinks geometrically with max_level"""
        areas = [decompose(self.config, level).uncovered_area for level in range(6, 12)]
        for coarse, fine in zip(areas, areas[1:]):
            self.assertLess(fine, 0.75 * coarse)

    def test_no_overlaps(self):
        """Test pairwise interior intersection on random cube pairs"""
        rng = np.random.default_rng(0)
        pairs = rng.integers(len(self.dec), size=(1000, 2))
        for a, b in pairs:
            if a != b:
                self.assertFalse(overlapping(self.dec.cubes[a], self.dec.cubes[b]))

    def test_determinism(self):
        """Test that the same input gives the same cube set"""
        self.assertEqual(decompose(self.config, 8).cubes, self.dec.cubes)

    def test_refinement_consistency(self):
        """Test that refining keeps every coarse cube"""
        finer = {q.key for q in decompose(self.config, 10).cubes}
        self.assertTrue({q.key for q in self.dec.cubes} <= finer)

    def test_coverage(self):
        """Test that points far enough from ∂D are covered"""
        rng = np.random.default_rng(1)
        points = sample_domain_points(self.config, 2000, rng)
        self.assertEqual(uncovered_points(self.dec, points), [])

    def test_cube_containing_basepoint(self):
        """Test lookup of the cube containing x0"""
        index = cube_containing(self.dec, 0.1 + 0.05j)
        self.assertIsNotNone(index)
        self.assertTrue(self.dec.cubes[index].contains(0.1 + 0.05j))
        self.assertIsNone(cube_containing(self.dec, 0.9999))


class DecomposeErrorsTest(SimpleTestCase):
    """Test cases for decompose preconditions"""

    def test_invalid_config(self):
        """Test that an invalid configuration is refused"""
        config = CircleDomainConfig(1.0, [Disk(0.3, 0.2), Disk(0.5, 0.2)], -0.5)
        with self.assertRaises(ConfigValidationError):
            decompose(config, 6)

    def test_max_level_too_small(self):
        """Test max_level below 4"""
        with self.assertRaises(ValueError):
            decompose(CircleDomainConfig(1.0), 3)


class DecomposeRandomConfigsTest(SimpleTestCase):
    """Test cases for decompose on seeded random configurations"""

    def test_properties_hold(self):
        """Test Whitney properties and area closure on random configurations"""
        rng = np.random.default_rng(11)
        for _ in range(3):
            config = random_config(rng, count=int(rng.integers(1, 9)))
            dec = decompose(config, 9)
            self.assertEqual(property_violations(dec), [])
            self.assertAlmostEqual(dec.covered_area + dec.uncovered_area, config.area, delta=1e-8)
            report = adjacency_check(dec)
            self.assertTrue(report.is_valid)
            self.assertLessEqual(report.max_ratio, 4.0)

    def test_cubes_avoid_disks(self):
        """Test that no cube meets a complementary disk"""
        config = three_disk_config()
        dec = decompose(config, 8)
        for disk in config.disks:
            distances = np.array([q.distance_to(disk.center) for q in dec.cubes])
            self.assertTrue(np.all(distances > disk.radius))


class AdjacencyCheckTest(SimpleTestCase):
    """Test cases for adjacency_check"""

    def test_single_cube(self):
        """Test that a lone cube is adjacent to itself only"""
        config = CircleDomainConfig(1.0, [], 0j)
        dec = WhitneyDecomposition(config, 4, [WhitneyCube(3, 0, 0, 0.125)])
        report = adjacency_check(dec)
        self.assertEqual(report.pairs, ((0, 0),))
        self.assertEqual(report.neighbor_counts, (0,))

    def test_neighbor_counts(self):
        """Test R=1 without disks: between 1 and 12 neighbours per cube"""
        dec = decompose(CircleDomainConfig(1.0, [], 0j), 8)
        report = adjacency_check(dec)
        self.assertGreaterEqual(min(report.neighbor_counts), 1)
        self.assertLessEqual(max(report.neighbor_counts), 12)

    def test_ratio_bound(self):
        """Test that adjacent sides differ by at most a factor 4"""
        dec = decompose(three_disk_config(), 8)
        report = adjacency_check(dec)
        self.assertEqual(report.ratio_violations, ())
        for a, b in report.pairs:
            ratio = dec.cubes[a].side / dec.cubes[b].side
            self.assertTrue(0.25 <= ratio <= 4)

    def test_adjacency_is_symmetric_and_touching(self):
        """Test that neighbours share a boundary segment"""
        dec = decompose(CircleDomainConfig(1.0, [], 0j), 6)
        for a, neighbors in enumerate(dec.adjacency):
            for b in neighbors:
                self.assertIn(a, dec.adjacency[b])
                first, second = dec.cubes[a], dec.cubes[b]
                gap = min(
                    first.distance_to(second.center) - second.side / 2,
                    second.distance_to(first.center) - first.side / 2,
                )
                self.assertLessEqual(gap, 1e-12)
                self.assertFalse(overlapping(first, second))
