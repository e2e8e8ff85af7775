import math

import numpy as np
from django.test import SimpleTestCase

from geometry.exceptions import DomainMembershipError
from geometry.models import CircleDomainConfig, Disk
from geometry.primitives import rotate_config, sample_domain_points, scale_config
from geometry.testing import random_config, three_disk_config
from whitney.decomposition import cube_containing, decompose

from .functionals import (
    boundary_sample_points,
    geodesic_tail_check,
    layer_indices,
    monte_carlo_qh_integral,
    qh_condition_functional,
    shadows,
)
from .graph import MetricGraph, qh_distance
from .quadrature import inverse_distance_integrals, segment_weight, segments_inside


class QuadratureTest(SimpleTestCase):
    """Test cases for the 1/δ_D line integrals"""

    def setUp(self):
        self.ball = CircleDomainConfig(1.0, [], 0j)

    def test_radial_integral(self):
        """Test ∫_0^x dr/(1-r) = -log(1-x) on the unit ball"""
        for x in (0.3, 0.5, 0.9):
            self.assertAlmostEqual(segment_weight(self.ball, 0, x), -math.log(1 - x), delta=1e-8)

    def test_zero_length_segment(self):
        """Test that a degenerate segment has weight zero"""
        self.assertEqual(segment_weight(self.ball, 0.2j, 0.2j), 0.0)

    def test_blocked_segment(self):
        """Test that segments crossing a disk are detected and get +inf"""
        config = CircleDomainConfig(1.0, [Disk(0, 0.1)], 0.5)
        self.assertFalse(segments_inside(config, -0.5, 0.5)[0])
        self.assertTrue(segments_inside(config, -0.5 + 0.5j, 0.5 + 0.5j)[0])
        self.assertEqual(inverse_distance_integrals(config, [-0.5], [0.5])[0], math.inf)


class QhDistanceTest(SimpleTestCase):
    """Test cases for qh_distance"""

    def setUp(self):
        self.ball = CircleDomainConfig(1.0, [], 0j)
        self.ball_dec = decompose(self.ball, 9)
        self.config = three_disk_config()
        self.dec = decompose(self.config, 8)

    def test_equal_endpoints(self):
        """Test k(x, x) = 0"""
        distance, geodesic = qh_distance(self.ball, 0.3, 0.3, dec=self.ball_dec)
        self.assertEqual(distance, 0.0)
        self.assertEqual(geodesic.vertices, (0.3 + 0j,))

    def test_unit_ball_oracle(self):
        """Test k(0, x) against -log(1 - |x|) within 2%"""
        graph = MetricGraph(self.ball_dec)
        for x in (0.3, 0.5, 0.7, 0.9):
            distance, _ = qh_distance(self.ball, 0, x, graph=graph)
            expected = -math.log(1 - x)
            self.assertLess(abs(distance - expected), 0.02 * expected)

    def test_endpoint_outside_domain(self):
        """Test that endpoints outside D are rejected"""
        with self.assertRaises(DomainMembershipError):
            qh_distance(self.config, 0, 0.5, dec=self.dec)
        with self.assertRaises(DomainMembershipError):
            qh_distance(self.config, 0, 1.5, dec=self.dec)

    def test_same_cube_bound(self):
        """Test that two points of one Whitney cube are at distance at most 1"""
        rng = np.random.default_rng(3)
        graph = MetricGraph(self.dec)
        for n in rng.choice(len(self.dec), size=10, replace=False):
            cube = self.dec.cubes[n]
            corner = cube.lower_left
            x1, x2 = corner + cube.side * complex(*rng.random(2)), corner + cube.side * complex(*rng.random(2))
            distance, _ = qh_distance(self.config, x1, x2, graph=graph)
            self.assertLessEqual(distance, 1.0)

    def test_symmetry(self):
        """Test |k(x1,x2) - k(x2,x1)| ≤ 1e-9"""
        forward, _ = qh_distance(self.config, -0.6, 0.8, dec=self.dec)
        backward, _ = qh_distance(self.config, 0.8, -0.6, dec=self.dec)
        self.assertAlmostEqual(forward, backward, delta=1e-9)

    def test_geodesic_realizes_distance(self):
        """Test that the polyline weights add up to the reported distance"""
        distance, geodesic = qh_distance(self.config, -0.6, 0.8, dec=self.dec)
        self.assertAlmostEqual(sum(geodesic.edge_weights), distance, delta=1e-9 * distance)
        self.assertEqual(geodesic.start, -0.6 + 0j)
        self.assertEqual(geodesic.end, 0.8 + 0j)
        self.assertTrue(all(w > 0 and math.isfinite(w) for w in geodesic.edge_weights))
        self.assertGreaterEqual(geodesic.euclidean_length, 1.4 - 1e-12)

    def test_triangle_inequality(self):
        """Test k(x,z) ≤ k(x,y) + k(y,z) on one graph"""
        rng = np.random.default_rng(11)
        graph = MetricGraph(self.dec)
        points = [graph.add_point(z) for z in sample_domain_points(self.config, 12, rng, margin=0.05)]
        for _ in range(30):
            x, y, z = (points[k] for k in rng.choice(len(points), size=3, replace=False))
            self.assertLessEqual(
                graph.distance(x, z), graph.distance(x, y) + graph.distance(y, z) + 1e-9
            )

    def test_rotation_invariance(self):
        """Test that a quarter turn of the configuration leaves distances unchanged"""
        rotated = rotate_config(self.config, math.pi / 2)
        rotated_dec = decompose(rotated, 8)
        for x1, x2 in ((-0.6, 0.8), (0.2j, -0.7 + 0.1j)):
            before, _ = qh_distance(self.config, x1, x2, dec=self.dec)
            after, _ = qh_distance(rotated, x1 * 1j, x2 * 1j, dec=rotated_dec)
            self.assertAlmostEqual(before, after, delta=1e-9)

    def test_refinement(self):
        """Test that refining the decomposition does not increase the distance beyond slack"""
        coarse, _ = qh_distance(self.config, -0.6, 0.8, max_level=6)
        fine, _ = qh_distance(self.config, -0.6, 0.8, dec=self.dec)
        self.assertLessEqual(fine, coarse * 1.02 + 1e-9)

    def test_domain_monotonicity(self):
        """Test that removing a disk does not increase the distance beyond slack"""
        with_disk, _ = qh_distance(self.config, -0.6, 0.8, dec=self.dec)
        reduced = CircleDomainConfig(1.0, self.config.disks[1:], 0j)
        without_disk, _ = qh_distance(reduced, -0.6, 0.8, max_level=8)
        self.assertLessEqual(without_disk, with_disk * 1.02 + 1e-9)


class LayerIndicesTest(SimpleTestCase):
    """Test cases for layer_indices and the condition functional"""

    def setUp(self):
        self.ball = CircleDomainConfig(1.0, [], 0j)
        self.dec = decompose(self.ball, 8)
        self.graph = MetricGraph(self.dec)
        self.layers = layer_indices(self.ball, self.dec, graph=self.graph)

    def test_basepoint_cube(self):
        """Test that the cube containing x0 has j = 1 and its neighbours j ≤ 2"""
        home = cube_containing(self.dec, 0)
        self.assertEqual(self.layers[home], 1)
        for n in self.dec.adjacency[home]:
            self.assertLessEqual(self.layers[n], 2)

    def test_layers_finite(self):
        """Test that every cube gets a positive layer and D_j is finite"""
        self.assertEqual(len(self.layers), len(self.dec))
        self.assertTrue(all(j >= 1 for j in self.layers.layers))
        histogram = self.layers.histogram()
        self.assertEqual(sum(histogram.values()), len(self.dec))
        self.assertEqual(len(self.layers.members(self.layers.max_layer)), len(self.dec))

    def test_layers_along_geodesic(self):
        """Test that j is nondecreasing along a geodesic leaving x0 up to 1"""
        _, geodesic = qh_distance(self.ball, 0, 0.95 * np.exp(0.3j), graph=self.graph)
        running = 0
        for layer in geodesic.layers_along(self.layers):
            self.assertGreaterEqual(layer, running - 1)
            running = max(running, layer)

    def test_functional_stability(self):
        """Test that the functional settles between max_level 8 and 10"""
        values = {}
        for level in (8, 10):
            dec = decompose(self.ball, level)
            values[level] = qh_condition_functional(dec, layer_indices(self.ball, dec))
        self.assertTrue(math.isfinite(values[10].value))
        self.assertLess(abs(values[10].value - values[8].value) / values[10].value, 0.2)
        self.assertLessEqual(values[10].value, values[8].upper)

    def test_functional_scaling(self):
        """Test functional(s·config) = s²·functional(config)"""
        config = three_disk_config()
        dec = decompose(config, 7)
        base = qh_condition_functional(dec, layer_indices(config, dec))
        scaled = scale_config(config, 3.0)
        scaled_dec = decompose(scaled, 7)
        scaled_layers = layer_indices(scaled, scaled_dec)
        value = qh_condition_functional(scaled_dec, scaled_layers)
        self.assertAlmostEqual(value.value / base.value, 9.0, delta=9e-6)
        self.assertEqual(scaled_layers.layers, layer_indices(config, dec).layers)

    def test_monte_carlo_comparison(self):
        """Test that ∫ k(x, x0)² dx and Σ ℓ(Q)²j(Q)² agree within a factor of 8"""
        functional = qh_condition_functional(self.dec, self.layers)
        estimate = monte_carlo_qh_integral(self.ball, self.dec, samples=300, seed=5)
        ratio = estimate / functional.value
        self.assertGreater(ratio, 1 / 8)
        self.assertLess(ratio, 8)

    def test_mismatched_layers(self):
        """Test that layers of another decomposition are rejected"""
        with self.assertRaises(ValueError):
            qh_condition_functional(decompose(self.ball, 6), self.layers)


class ShadowsTest(SimpleTestCase):
    """Test cases for shadows and geodesic tails"""

    def setUp(self):
        self.config = three_disk_config()
        self.dec = decompose(self.config, 7)
        self.graph = MetricGraph(self.dec)
        self.report = shadows(self.config, self.dec, boundary_samples=64, graph=self.graph)

    def test_boundary_samples(self):
        """Test that boundary samples lie on ∂D in the requested number"""
        samples = boundary_sample_points(self.config, 64)
        self.assertEqual(len(samples), 64)
        on_outer = np.isclose(np.abs(samples), 1.0)
        on_disks = np.zeros(len(samples), dtype=bool)
        for disk in self.config.disks:
            on_disks |= np.isclose(np.abs(samples - disk.center), disk.radius)
        self.assertTrue(np.all(on_outer | on_disks))

    def test_shadow_diameters_bounded(self):
        """Test s(Q) ≤ diam(∂D)"""
        self.assertTrue(all(s <= 2.0 + 1e-12 for s in self.report.diameters.values()))

    def test_basepoint_cube_sees_everything(self):
        """Test that SH(Q) of the cube containing x0 is every sample"""
        home = cube_containing(self.dec, self.config.basepoint)
        self.assertEqual(len(self.report.members[home]), 64)

    def test_too_few_samples(self):
        """Test that fewer than 64 boundary samples are rejected"""
        with self.assertRaises(ValueError):
            shadows(self.config, self.dec, boundary_samples=32, graph=self.graph)

    def test_shadow_constant(self):
        """Test that Σ s(Q)² / functional is finite and positive"""
        layers = layer_indices(self.config, self.dec, graph=self.graph)
        functional = qh_condition_functional(self.dec, layers)
        constant = self.report.shadow_sum / functional.value
        self.assertTrue(math.isfinite(constant))
        self.assertGreater(constant, 0)

    def test_tail_lengths(self):
        """Test the tail of the whole geodesic and the √j0 decay"""
        layers = layer_indices(self.config, self.dec, graph=self.graph)
        for geodesic in self.report.geodesics[::8]:
            whole = geodesic_tail_check(geodesic, layers, 1)
            self.assertAlmostEqual(whole.length, geodesic.euclidean_length, delta=1e-12)
            for j0 in (4, 9, 16, 25):
                tail = geodesic_tail_check(geodesic, layers, j0)
                self.assertLessEqual(tail.length * math.sqrt(j0), 2.0 * self.config.outer_radius)
            self.assertEqual(geodesic_tail_check(geodesic, layers, layers.max_layer + 1).length, 0.0)
            self.assertLessEqual(whole.max_per_layer, 32)


class ShadowConstantRandomConfigsTest(SimpleTestCase):
    """Test cases for the shadow-sum constant across random configurations"""

    def setUp(self):
        self.rng = np.random.default_rng(2024)

    def test_constant_spread(self):
        """Test that the measured constant stays within a bounded spread"""
        constants = []
        for _ in range(3):
            config = random_config(self.rng, count=3)
            dec = decompose(config, 6)
            graph = MetricGraph(dec)
            layers = layer_indices(config, dec, graph=graph)
            report = shadows(config, dec, boundary_samples=64, graph=graph)
            constants.append(report.shadow_sum / qh_condition_functional(dec, layers).value)
        self.assertLess(max(constants) / min(constants), 10.0)
