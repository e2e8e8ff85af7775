import json
import math
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.apps import apps
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError

from geometry.models import CircleDomainConfig, Disk
from geometry.primitives import validate_config
from geometry.testing import random_config, three_disk_config

from .exceptions import InfeasiblePackingError, SpecReadError
from .generators import generate_domain, random_packing, sierpinski_type
from .scenes import Scene, domain_scene
from .specs import canonical, dump_spec, load_spec, parse_spec, render_document

FIXTURES = Path(__file__).resolve().parent / 'fixtures'


class SpecTest(SimpleTestCase):
    """Test cases for spec parsing and rendering"""

    def setUp(self):
        self.rng = np.random.default_rng(4)

    def test_golden_round_trip(self):
        """Test that loading and dumping a fixture reproduces its bytes"""
        for name in ('unit_ball.json', 'two_disks.json', 'three_disks.json'):
            path = FIXTURES / name
            self.assertEqual(dump_spec(load_spec(path)), path.read_bytes())

    def test_round_trip_values(self):
        """Test spec → parse → serialize → parse on random configurations"""
        for _ in range(5):
            config = random_config(self.rng, count=5, outer_radius=2.5)
            first = parse_spec(dump_spec(config))
            self.assertEqual(first, config)
            self.assertEqual(parse_spec(dump_spec(first)), first)

    def test_fixture_values(self):
        """Test that the 3-disk fixture is the reference configuration"""
        self.assertEqual(load_spec(FIXTURES / 'three_disks.json'), three_disk_config())

    def test_invalid_geometry(self):
        """Test that overlapping disks fail validation unless geometry checks are off"""
        document = {'version': 1, 'outer_radius': 1.0, 'disks': [[0.3, 0, 0.2], [0.5, 0, 0.2]], 'basepoint': [-0.5, 0]}
        with self.assertRaises(ValidationError):
            parse_spec(document)
        config = parse_spec(document, check_geometry=False)
        self.assertEqual(config.n, 2)

    def test_invalid_fields(self):
        """Test version, radius and shape checks"""
        for document in (
            {'version': 2, 'outer_radius': 1.0},
            {'version': 1, 'outer_radius': -1.0},
            {'version': 1, 'outer_radius': 1.0, 'disks': [[0.3, 0.0, -0.1]]},
            {'version': 1, 'outer_radius': 1.0, 'disks': [[0.3, 0.0]]},
            {'version': 1, 'outer_radius': 1.0, 'basepoint': [0.0]},
        ):
            with self.assertRaises(ValidationError):
                parse_spec(document)

    def test_defaults(self):
        """Test that disks and basepoint may be omitted"""
        config = parse_spec(b'{"version": 1, "outer_radius": 3}')
        self.assertEqual(config, CircleDomainConfig(3.0, [], 0j))

    def test_unreadable(self):
        """Test missing files and malformed documents"""
        with self.assertRaises(SpecReadError):
            load_spec(FIXTURES / 'missing.json')
        with self.assertRaises(SpecReadError):
            parse_spec(b'{"version": 1,')
        with self.assertRaises(SpecReadError):
            parse_spec(b'[1, 2, 3]')

    def test_sentinels(self):
        """Test that non-finite floats render as null with a sentinel"""
        data = json.loads(render_document({'b': math.inf, 'a': -math.inf, 'c': [1 + 2j], 'd': float('nan')}))
        self.assertIsNone(data['b'])
        self.assertEqual(data['b_sentinel'], '+inf')
        self.assertEqual(data['a_sentinel'], '-inf')
        self.assertEqual(data['d_sentinel'], 'nan')
        self.assertEqual(data['c'], [[1.0, 2.0]])

    def test_sorted_keys(self):
        """Test key order and the numpy conversions of canonical"""
        value = canonical({'z': np.float64(0.5), 'a': {'y': np.int64(3), 'b': np.bool_(True)}})
        self.assertEqual(list(value), ['a', 'z'])
        self.assertEqual(list(value['a']), ['b', 'y'])
        self.assertIs(value['a']['b'], True)
        self.assertEqual(render_document(value), render_document({'a': {'b': True, 'y': 3}, 'z': 0.5}))


class GeneratorTest(SimpleTestCase):
    """Test cases for random_packing, sierpinski_type and generate_domain"""

    def test_empty_packing(self):
        """Test that n = 0 gives a spec without disks"""
        config = random_packing(0)
        self.assertEqual(config.n, 0)
        self.assertEqual(generate_domain('random_packing', {'count': 0})['disks'], [])

    def test_random_packing_valid(self):
        """Test that random packings satisfy the configuration invariants and gaps"""
        for seed in range(5):
            config = random_packing(8, seed=seed)
            self.assertEqual(config.n, 8)
            self.assertEqual(validate_config(config), [])
            for i, first in enumerate(config.disks):
                self.assertGreater(1.0 - abs(first.center) - first.radius, 0.02 - 1e-12)
                for second in config.disks[i + 1:]:
                    self.assertGreater(abs(first.center - second.center) - first.radius - second.radius, 0.02)

    def test_infeasible_packing(self):
        """Test that impossible gap constraints fail after bounded retries"""
        with self.assertRaises(InfeasiblePackingError):
            random_packing(40, min_radius=0.3, max_radius=0.3, max_attempts=500)

    def test_parameter_ranges(self):
        """Test out-of-range generator parameters"""
        with self.assertRaises(ValueError):
            random_packing(-1)
        with self.assertRaises(ValueError):
            random_packing(3, min_radius=0.2, max_radius=0.1)
        with self.assertRaises(ValueError):
            sierpinski_type(1, ring_size=0)
        with self.assertRaises(ValueError):
            generate_domain('apollonian')
        with self.assertRaises(ValueError):
            generate_domain('random_packing', {'radius': 0.1})

    def test_sierpinski_depth_one(self):
        """Test that depth 1 with ring size 6 gives 1 + 6 disjoint disks"""
        config = sierpinski_type(1, ring_size=6)
        self.assertEqual(config.n, 7)
        self.assertEqual(validate_config(config), [])
        root = config.disk(1)
        for disk in config.disks[1:]:
            self.assertLess(disk.radius, root.radius)
            self.assertAlmostEqual(abs(disk.center - root.center), abs(config.disk(2).center - root.center), delta=1e-12)

    def test_sierpinski_deeper(self):
        """Test that deeper rings add smaller disks around the previous ones"""
        shallow = sierpinski_type(1, ring_size=5, seed=2)
        deep = sierpinski_type(2, ring_size=5, seed=2)
        self.assertGreater(deep.n, shallow.n)
        self.assertEqual(validate_config(deep), [])
        self.assertLess(min(deep.radii), min(shallow.radii))

    def test_sierpinski_infeasible(self):
        """Test that a root ring leaving the ball is reported"""
        with self.assertRaises(InfeasiblePackingError):
            sierpinski_type(1, root_radius=0.9)

    def test_deterministic(self):
        """Test that the same seed gives byte-identical spec files"""
        for kind, params in (('random_packing', {'count': 6}), ('sierpinski_type', {'depth': 2})):
            first = render_document(generate_domain(kind, params, seed=11))
            second = render_document(generate_domain(kind, params, seed=11))
            self.assertEqual(first, second)
        self.assertNotEqual(
            render_document(generate_domain('random_packing', {'count': 6}, seed=1)),
            render_document(generate_domain('random_packing', {'count': 6}, seed=2)),
        )

    def test_generator_block(self):
        """Test that generated specs record the generator and parse back"""
        document = generate_domain('sierpinski_type', {'depth': 1, 'ring_size': 6}, seed=3)
        self.assertEqual(document['generator'], {'kind': 'sierpinski_type', 'params': {'depth': 1, 'ring_size': 6}, 'seed': 3})
        self.assertEqual(parse_spec(document), sierpinski_type(1, ring_size=6, seed=3))


class SceneTest(SimpleTestCase):
    """Test cases for SVG scenes"""

    def setUp(self):
        self.config = three_disk_config()

    def test_domain_scene(self):
        """Test the view box and the drawn circles of a domain"""
        content = domain_scene(self.config).render()
        self.assertIn('viewBox="-1 -1 2 2"', content)
        self.assertEqual(content.count('<circle'), 1 + 3 + 1)
        self.assertEqual(content.count('<text'), 3)
        # y axis points up
        self.assertIn('cy="-0.45"', content)

    def test_layer_order(self):
        """Test that layers keep their first-use order"""
        scene = domain_scene(self.config)
        scene.add_polyline('geodesic', [0, 0.1 + 0.1j])
        scene.add_points('domain', [0.2j])
        self.assertEqual([layer.name for layer in scene.layers], ['domain', 'labels', 'basepoint', 'geodesic'])
        content = scene.render()
        self.assertLess(content.index('id="domain"'), content.index('id="geodesic"'))
        self.assertIn('points="0,-0 0.1,-0.1"', content)

    def test_precision(self):
        """Test significant digits of scene coordinates"""
        scene = Scene(2.0, precision=3)
        scene.add_circle('one', 1 / 3, math.pi)
        self.assertIn('cx="0.333"', scene.render())
        self.assertIn('r="3.14"', scene.render())

    def test_non_finite(self):
        """Test that non-finite coordinates are rejected"""
        with self.assertRaises(ValueError):
            Scene(1.0).add_points('cloud', [complex(math.inf, 0)])


class LabCommandTest(SimpleTestCase):
    """Test cases for the lab management command"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def _run(self, *args, **options):
        out = self.dir / 'result.json'
        call_command('lab', *args, out=str(out), stdout=StringIO(), stderr=StringIO(), **options)
        return json.loads(out.read_text())

    def _spec(self, name, document):
        path = self.dir / name
        path.write_text(json.dumps(document))
        return str(path)

    def test_validate(self):
        """Test validate on a valid spec"""
        result = self._run('validate', spec=str(FIXTURES / 'three_disks.json'))
        self.assertEqual(result['command'], 'validate')
        self.assertEqual(result['measurements']['violation_count'], 0)
        self.assertEqual(result['inputs']['outer_radius'], 1.0)

    def test_whitney_unit_ball(self):
        """Test whitney on the unit ball: no property violations and area bookkeeping"""
        result = self._run('whitney', spec=str(FIXTURES / 'unit_ball.json'), max_level=6)
        self.assertGreater(result['measurements']['cube_count'], 0)
        self.assertEqual(result['measurements']['property_violation_count'], 0)
        self.assertGreater(result['residuals']['uncovered_area'], 0)
        self.assertLess(result['residuals']['area_closure'], 1e-8)
        self.assertEqual(result['parameters']['max_level'], 6)
        self.assertLessEqual(result['empirical_constants']['max_side_ratio'], 4)

    def test_schottky_depth_three(self):
        """Test that depth 3 on three disks gives 24 complement disks"""
        result = self._run('schottky', spec=str(FIXTURES / 'three_disks.json'), depth=3, samples=16)
        self.assertEqual(result['measurements']['complement_disk_count'], 24)
        self.assertEqual(result['measurements']['counts_per_level'], [3, 6, 12, 24])
        areas = result['measurements']['max_area_sequence']
        self.assertTrue(all(b < a for a, b in zip(areas, areas[1:])))
        self.assertLessEqual(result['residuals']['conjugation_residual'], 1e-9)

    def test_qh_unit_ball(self):
        """Test k(x0, 0.5) ≈ log 2 on the unit ball"""
        result = self._run('qh', spec=str(FIXTURES / 'unit_ball.json'), source='x0', target='0.5+0i')
        distance = result['measurements']['distance']
        self.assertLess(abs(distance - math.log(2)), 0.02 * math.log(2))
        self.assertEqual(result['measurements']['to'], [0.5, 0.0])
        self.assertGreaterEqual(result['empirical_constants']['distance_over_j'], 1 - 1e-9)

    def test_shadows_monte_carlo(self):
        """Test that shadows reports ∫k² next to the functional within a factor of 8"""
        result = self._run('shadows', spec=str(FIXTURES / 'unit_ball.json'), max_level=6, samples=128)
        self.assertGreater(result['measurements']['monte_carlo_integral'], 0)
        ratio = result['empirical_constants']['monte_carlo_ratio']
        self.assertGreaterEqual(ratio, 1 / 8)
        self.assertLessEqual(ratio, 8)

    def test_rerun_is_bit_identical(self):
        """Test that reruns with identical inputs give identical result and scene files"""
        outputs = []
        for n in range(2):
            out, scene = self.dir / f'out{n}.json', self.dir / f'scene{n}.svg'
            call_command(
                'lab', 'whitney', spec=str(FIXTURES / 'two_disks.json'), max_level=5,
                out=str(out), scene=str(scene), stdout=StringIO(),
            )
            outputs.append((out.read_bytes(), scene.read_bytes()))
        self.assertEqual(outputs[0], outputs[1])
        self.assertIn(b'<rect', outputs[0][1])

    def test_generate(self):
        """Test that generate writes a spec that the other commands accept"""
        out = self.dir / 'generated.json'
        call_command('lab', 'generate', kind='sierpinski_type', depth=1, ring_size=6, seed=5,
                     out=str(out), stdout=StringIO())
        self.assertEqual(load_spec(out).n, 7)
        result = self._run('validate', spec=str(out))
        self.assertEqual(result['measurements']['disk_count'], 7)

    def test_modulus_and_beltrami(self):
        """Test the modulus and beltrami reports on two disks"""
        spec = str(FIXTURES / 'two_disks.json')
        modulus = self._run('modulus', spec=spec, samples=32)
        self.assertTrue(all(m >= -1e-12 for m in modulus['measurements']['teichmuller_margins']))
        self.assertAlmostEqual(modulus['measurements']['disk_fatness'], math.pi / 4, delta=0.05)
        self.assertLess(modulus['residuals']['dilatation_excess'], 1e-2)
        beltrami = self._run('beltrami', spec=spec, samples=20, word_length=2, depth=3)
        self.assertTrue(beltrami['measurements']['criterion_holds'])
        self.assertLessEqual(beltrami['residuals']['symmetrized_residual'], 1e-8)

    def test_unknown_command(self):
        """Test exit status 64 and the usage text"""
        stderr = StringIO()
        with self.assertRaises(CommandError) as ctx:
            call_command('lab', 'frobnicate', stdout=StringIO(), stderr=stderr)
        self.assertEqual(ctx.exception.returncode, 64)
        self.assertIn('usage:', stderr.getvalue())

    def test_unreadable_spec(self):
        """Test exit status 66 for missing and malformed specs"""
        broken = self.dir / 'broken.json'
        broken.write_text('{"version": ')
        for spec in (str(self.dir / 'missing.json'), str(broken)):
            with self.assertRaises(CommandError) as ctx:
                call_command('lab', 'whitney', spec=spec, stdout=StringIO())
            self.assertEqual(ctx.exception.returncode, 66)

    def test_validation_failure(self):
        """Test exit status 1 with the violations in the result document"""
        spec = self._spec('overlap.json', {
            'version': 1, 'outer_radius': 1.0, 'disks': [[0.3, 0, 0.2], [0.5, 0, 0.2]], 'basepoint': [-0.5, 0],
        })
        out = self.dir / 'validate.json'
        with self.assertRaises(CommandError) as ctx:
            call_command('lab', 'validate', spec=spec, out=str(out), stdout=StringIO(), stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertEqual(json.loads(out.read_text())['measurements']['violation_count'], 1)
        with self.assertRaises(CommandError) as ctx:
            call_command('lab', 'whitney', spec=spec, stdout=StringIO(), stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 1)

    def test_resolution_insufficient(self):
        """Test exit status 2 when a neck narrower than the cubes splits the domain"""
        spec = self._spec('neck.json', {
            'version': 1, 'outer_radius': 1.0,
            'disks': [[0, 0.5, 0.49], [0, -0.5, 0.49]], 'basepoint': [-0.7, 0],
        })
        out = self.dir / 'qh.json'
        with self.assertRaises(CommandError) as ctx:
            call_command('lab', 'qh', spec=spec, max_level=4, source='-0.7+0.3i', target='0.7+0.3i',
                         out=str(out), stdout=StringIO(), stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('errors', json.loads(out.read_text()))


class SettingsTest(SimpleTestCase):
    """Test cases for the project settings"""

    def test_installed_apps(self):
        """Test that the lab apps are installed without user authentication"""
        self.assertTrue(apps.is_installed('toolkit'))
        self.assertTrue(apps.is_installed('rest_framework'))
        self.assertFalse(apps.is_installed('django.contrib.auth'))

    def test_rest_framework_defaults(self):
        """Test that only JSON rendering and parsing are configured"""
        self.assertEqual(
            settings.REST_FRAMEWORK,
            {
                'DEFAULT_RENDERER_CLASSES': ['rest_framework.renderers.JSONRenderer'],
                'DEFAULT_PARSER_CLASSES': ['rest_framework.parsers.JSONParser'],
            },
        )
