import itertools
import math

import numpy as np
from django.test import SimpleTestCase

from geometry.models import CircleDomainConfig, ConformalPrimitive, Disk
from geometry.primitives import image_disk, reflect_point, sample_domain_points
from geometry.testing import random_config, three_disk_config, two_disk_config

from .exceptions import ExtensionError, WordBudgetExceeded
from .extension import (
    circle_correspondence,
    conjugation_residual,
    evaluate_extension,
    extend_by_reflection,
    image_config,
)
from .groups import (
    address_point,
    apply_word,
    area_decay_rate,
    complement_disks,
    enumerate_words,
    limit_point,
    limit_set_points,
    max_complement_disk_area,
    omega_k_contains,
    word_to_map,
    words_up_to,
)
from .models import LimitAddress, ReducedWord, ReflectedDisk


class ReducedWordTest(SimpleTestCase):
    """Test cases for ReducedWord and enumerate_words"""

    def test_repeated_index_rejected(self):
        """Test that (j, j) is not a reduced word"""
        with self.assertRaises(ValueError):
            ReducedWord((1, 1))
        with self.assertRaises(ValueError):
            ReducedWord((0, 2))

    def test_word_counts(self):
        """Test counts 3, 6 and 324 against brute force"""
        self.assertEqual(len(enumerate_words(3, 1)), 3)
        self.assertEqual(len(enumerate_words(3, 2)), 6)
        words = enumerate_words(4, 5)
        brute = [w for w in itertools.product(range(1, 5), repeat=5)
                 if all(a != b for a, b in zip(w, w[1:]))]
        self.assertEqual(len(words), 324)
        self.assertEqual([w.indices for w in words], brute)

    def test_single_generator(self):
        """Test n = 1 yields one length-1 word and none longer"""
        self.assertEqual([w.indices for w in enumerate_words(1, 1)], [(1,)])
        self.assertEqual(enumerate_words(1, 2), [])
        self.assertEqual([w.indices for w in enumerate_words(3, 0)], [()])

    def test_budget(self):
        """Test that enumeration beyond the budget is refused"""
        with self.assertRaises(WordBudgetExceeded):
            enumerate_words(4, 12, budget=1000)

    def test_concatenate_and_inverse(self):
        """Test free reduction at the junction and the inverse word"""
        word = ReducedWord((1, 2, 3))
        self.assertEqual(word.concatenate((3, 2, 1)).indices, ())
        self.assertEqual(word.concatenate((3, 1)).indices, (1, 2, 1))
        self.assertEqual(word.inverse().indices, (3, 2, 1))
        self.assertEqual(word.concatenate(word.inverse()), ReducedWord())


class WordToMapTest(SimpleTestCase):
    """Test cases for word_to_map"""

    def setUp(self):
        self.config = three_disk_config()
        self.rng = np.random.default_rng(5)

    def test_empty_word(self):
        """Test that the empty word is the identity"""
        mapping = word_to_map(self.config, ReducedWord())
        self.assertEqual(mapping(0.3 + 0.2j), 0.3 + 0.2j)
        self.assertFalse(mapping.is_orientation_reversing)

    def test_two_letter_word(self):
        """Test (1,2) at x0 against step-by-step reflection"""
        x0 = 0.1 + 0.05j
        expected = reflect_point(self.config.disk(1), reflect_point(self.config.disk(2), x0))
        self.assertAlmostEqual(word_to_map(self.config, ReducedWord((1, 2)))(x0), expected, delta=1e-12)

    def test_parity_and_no_identity(self):
        """Test parity = length mod 2 and that no nonempty word fixes x0"""
        x0 = 0.1 + 0.05j
        for word in words_up_to(3, 4)[1:]:
            mapping = word_to_map(self.config, word)
            self.assertEqual(mapping.is_orientation_reversing, len(word) % 2 == 1)
            self.assertGreater(abs(mapping(x0) - x0), 1e-9)

    def test_index_out_of_range(self):
        """Test that a generator index beyond the disk list is rejected"""
        with self.assertRaises(IndexError):
            word_to_map(self.config, ReducedWord((1, 4)))

    def test_group_law(self):
        """Test map(w1·w2) = map(w1)∘map(w2) with cancellation"""
        points = sample_domain_points(self.config, 100, self.rng)
        for w1, w2 in (((1, 2, 3), (3, 1)), ((2, 1), (1, 2, 3)), ((1, 3), (2,))):
            first, second = ReducedWord(w1), ReducedWord(w2)
            product = word_to_map(self.config, first.concatenate(second))
            composite = word_to_map(self.config, first).compose(word_to_map(self.config, second))
            self.assertLess(np.max(np.abs(product(points) - composite(points))), 1e-10)

    def test_copies_inside_first_disk(self):
        """Test T(Ω) ⊂ B_{i1} for nonempty reduced words"""
        points = sample_domain_points(self.config, 50, self.rng)
        for word in words_up_to(3, 3)[1:]:
            first = self.config.disk(word.first)
            images = word_to_map(self.config, word)(points)
            self.assertTrue(np.all(np.abs(images - first.center) < first.radius))

    def test_apply_word_matches_map(self):
        """Test successive reflections against the composed primitive"""
        word = ReducedWord((2, 3, 1))
        z = 0.2 - 0.1j
        self.assertAlmostEqual(apply_word(self.config, word, z), word_to_map(self.config, word)(z), delta=1e-12)


class ComplementDisksTest(SimpleTestCase):
    """Test cases for complement_disks and the area decay"""

    def setUp(self):
        self.two = two_disk_config()
        self.three = three_disk_config()

    def test_level_zero(self):
        """Test that k = 0 gives the configuration's own disks"""
        disks = complement_disks(self.three, 0)
        self.assertEqual([d.disk for d in disks], list(self.three.disks))

    def test_level_one_two_disks(self):
        """Test two level-1 disks each inside one original disk with positive gap"""
        disks = complement_disks(self.two, 1)
        self.assertEqual(len(disks), 2)
        for reflected in disks:
            parent = self.two.disk(reflected.word.first)
            gap = parent.radius - abs(reflected.disk.center - parent.center) - reflected.disk.radius
            self.assertGreater(gap, 0)

    def test_level_three_disjoint(self):
        """Test 24 pairwise disjoint disks at depth 3 on the 3-disk configuration"""
        disks = complement_disks(self.three, 3)
        self.assertEqual(len(disks), 24)
        for a, b in itertools.combinations(disks, 2):
            self.assertGreater(abs(a.disk.center - b.disk.center), a.disk.radius + b.disk.radius)

    def test_counts(self):
        """Test n(n-1)^k for k ≤ 5 and n ≤ 4"""
        rng = np.random.default_rng(12)
        for n in (2, 3, 4):
            config = random_config(rng, count=n)
            for k in range(6):
                self.assertEqual(len(complement_disks(config, k)), n * (n - 1) ** k)

    def test_children_per_parent(self):
        """Test n-1 children inside each parent disk"""
        parents = complement_disks(self.three, 1)
        children = complement_disks(self.three, 2)
        for parent in parents:
            inside = [c for c in children
                      if abs(c.disk.center - parent.disk.center) + c.disk.radius < parent.disk.radius]
            self.assertEqual(len(inside), 2)
            for child in inside:
                self.assertEqual(child.address[:2], parent.address)

    def test_reflected_disk_address(self):
        """Test that a terminal equal to the last word index is rejected"""
        with self.assertRaises(ValueError):
            ReflectedDisk(ReducedWord((1, 2)), 2, Disk(0, 1))

    def test_budget(self):
        """Test that expansion beyond the budget is refused"""
        with self.assertRaises(WordBudgetExceeded):
            complement_disks(self.three, 10, budget=1000)

    def test_max_area_monotone(self):
        """Test value(k+1) ≤ value(k) for k = 0..6 on random configurations"""
        self.assertAlmostEqual(max_complement_disk_area(self.three, 0), math.pi * 0.15 ** 2)
        rng = np.random.default_rng(21)
        for _ in range(3):
            config = random_config(rng, count=3)
            areas = [max_complement_disk_area(config, k) for k in range(7)]
            for coarse, fine in zip(areas, areas[1:]):
                self.assertLessEqual(fine, coarse)

    def test_area_decay_rate(self):
        """Test the measured rate against the Jacobian bound on the 2-disk configuration"""
        decay = area_decay_rate(self.two, 6)
        self.assertLess(decay.rate, 1.0)
        self.assertLessEqual(decay.rate, decay.jacobian_bound + 1e-12)
        self.assertAlmostEqual(decay.jacobian_bound, 0.2 ** 4)
        for coarse, fine in zip(decay.areas, decay.areas[1:]):
            self.assertLess(fine, coarse)
        self.assertLess(decay.areas[-1], 1e-6 * decay.areas[0])

    def test_deep_levels(self):
        """Test radii on the 2-disk configuration down to depth 12"""
        self.assertAlmostEqual(complement_disks(self.two, 1)[0].disk.radius, 1 / 140, delta=1e-17)
        decay = area_decay_rate(self.two, 12)
        self.assertEqual(len(decay.areas), 13)
        self.assertGreater(decay.areas[-1], 0)
        for coarse, fine in zip(decay.areas, decay.areas[1:]):
            self.assertLess(fine, coarse)
        self.assertLess(decay.areas[-1], 1e-6 * decay.areas[0])
        self.assertLessEqual(decay.rate, decay.jacobian_bound + 1e-12)
        for reflected in complement_disks(self.two, 12):
            parent = self.two.disk(reflected.word.first)
            self.assertLess(abs(reflected.disk.center - parent.center), parent.radius)

    def test_matches_composed_maps(self):
        """Test the stepwise disks against image_disk of the composed word at depth 3"""
        for reflected in complement_disks(self.three, 3):
            expected = image_disk(word_to_map(self.three, reflected.word), self.three.disk(reflected.terminal))
            self.assertAlmostEqual(abs(reflected.disk.center - expected.center), 0, places=10)
            self.assertAlmostEqual(reflected.disk.radius, expected.radius, places=10)


class LimitPointTest(SimpleTestCase):
    """Test cases for limit points and addressing"""

    def setUp(self):
        self.config = two_disk_config()
        self.address = LimitAddress.periodic((1, 2), 10)

    def test_depth_one(self):
        """Test that depth 1 gives the centre of R_1(B_2)"""
        point = limit_point(self.config, self.address, 1)
        disk = complement_disks(self.config, 1)[0]
        self.assertEqual(disk.address, (1, 2))
        self.assertAlmostEqual(point.point, disk.disk.center, delta=1e-12)

    def test_diameters_decrease(self):
        """Test strictly decreasing diameters and nested estimates"""
        points = [limit_point(self.config, self.address, d) for d in range(1, 9)]
        for coarse, fine in zip(points, points[1:]):
            self.assertLess(fine.diameter, coarse.diameter)
            self.assertLessEqual(abs(fine.point - coarse.point), coarse.diameter)

    def test_non_reduced_address(self):
        """Test that a repeated index is rejected"""
        with self.assertRaises(ValueError):
            limit_point(self.config, (1, 2, 2, 1), 2)
        with self.assertRaises(ValueError):
            limit_point(self.config, self.address, 10)

    def test_limit_set_points(self):
        """Test the point cloud size"""
        self.assertEqual(len(limit_set_points(self.config, 4)), 2)

    def test_address_point(self):
        """Test T(z0) = z with z0 in Ω̄ and the Ω_k membership"""
        z = apply_word(self.config, ReducedWord((1, 2, 1)), 0.3j)
        word, z0, inside = address_point(self.config, z, 10)
        self.assertFalse(inside)
        self.assertEqual(word.indices, (1, 2, 1))
        self.assertAlmostEqual(z0, 0.3j, delta=1e-9)
        self.assertTrue(omega_k_contains(self.config, z, 3))
        self.assertFalse(omega_k_contains(self.config, z, 2))
        self.assertTrue(omega_k_contains(self.config, 0.3j, 0))


class ExtensionTest(SimpleTestCase):
    """Test cases for the reflection extension f̃"""

    def setUp(self):
        self.config = three_disk_config()
        self.f = ConformalPrimitive(1, 0.3, 0.2, 1.5)
        self.star = image_config(self.config, self.f)
        self.rng = np.random.default_rng(17)

    def test_correspondence(self):
        """Test that circles are matched one to one"""
        self.assertEqual(circle_correspondence(self.config, self.star, self.f), {1: 1, 2: 2, 3: 3})
        shuffled = CircleDomainConfig(self.star.outer_radius, self.star.disks[::-1], 0)
        self.assertEqual(circle_correspondence(self.config, shuffled, self.f), {1: 3, 2: 2, 3: 1})

    def test_not_circle_respecting(self):
        """Test that a map missing the target circles is rejected"""
        other = ConformalPrimitive(1, 0.1, 0, 1)
        with self.assertRaises(ExtensionError):
            circle_correspondence(self.config, self.star, other)

    def test_empty_word(self):
        """Test f̃ = f on Ω̄"""
        z = 0.1 + 0.2j
        self.assertEqual(extend_by_reflection(self.config, self.star, self.f, (), z), self.f(z))

    def test_single_reflection(self):
        """Test f̃ = R*_j∘f∘R_j on R_j(Ω̄) at 100 points"""
        points = sample_domain_points(self.config, 100, self.rng)
        for j in (1, 2, 3):
            disk, star = self.config.disk(j), self.star.disk(j)
            for x in points:
                z = reflect_point(disk, x)
                expected = reflect_point(star, self.f(reflect_point(disk, z)))
                value = extend_by_reflection(self.config, self.star, self.f, (j,), z)
                self.assertAlmostEqual(value, expected, delta=1e-12)

    def test_global_mobius_agreement(self):
        """Test that f̃ agrees with a global Möbius f everywhere sampled"""
        points = sample_domain_points(self.config, 20, self.rng)
        for word in words_up_to(3, 3):
            for x in points:
                z = apply_word(self.config, word, x)
                value = evaluate_extension(self.config, self.star, self.f, z)
                self.assertEqual(value.word, word)
                self.assertAlmostEqual(value.value, self.f(z), delta=1e-9)

    def test_point_outside_copy(self):
        """Test that a point outside the named copy is rejected"""
        with self.assertRaises(ExtensionError):
            extend_by_reflection(self.config, self.star, self.f, (1,), 0.1 + 0.2j)

    def test_depth_limited_evaluation(self):
        """Test the nested-disk estimate for points deeper than max_depth"""
        z = apply_word(self.config, ReducedWord((1, 2, 3, 1)), 0.05j)
        value = evaluate_extension(self.config, self.star, self.f, z, max_depth=2)
        self.assertGreater(value.error_bound, 0)
        self.assertLessEqual(abs(value.value - self.f(z)), value.error_bound)

    def test_conjugation_residual(self):
        """Test residual ≤ 1e-9 for words to length 4 and 50 samples"""
        report = conjugation_residual(self.config, self.star, self.f, 4, samples=50)
        self.assertLessEqual(report.residual, 1e-9)
        self.assertLessEqual(report.agreement, 1e-9)
        self.assertFalse(report.flagged)
        self.assertEqual(report.samples, 50)

    def test_identity_residual(self):
        """Test that the identity on identical configurations has zero residual"""
        identity = ConformalPrimitive.identity()
        report = conjugation_residual(self.config, self.config, identity, 3, samples=30)
        self.assertAlmostEqual(report.residual, 0.0, delta=1e-12)

    def test_mismatched_correspondence(self):
        """Test that a wrong circle correspondence is flagged"""
        report = conjugation_residual(
            self.config, self.star, self.f, 2, samples=30, correspondence={1: 2, 2: 1, 3: 3}
        )
        self.assertGreater(report.residual, 0.0)
        self.assertTrue(report.flagged)
        self.assertTrue(report.witness)
