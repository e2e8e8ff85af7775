"""
Batch commands behind `manage.py lab`. Each command loads a spec, runs one
family of measurements and returns a result document with the inputs, the
resolution parameters, measurements, truncation residuals and empirical
constants. Exit codes: 0 ok, 1 validation, 2 resolution insufficient,
64 unknown command, 66 unreadable spec.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from beltrami.coefficients import dilatation_bounds, invariance_residual, prop_invariant_check, symmetrize
from beltrami.models import CoefficientField
from geometry.exceptions import LabError
from geometry.models import ConformalPrimitive
from geometry.primitives import boundary_distance, validate_config
from modulus.distortion import circular_dilatation, koebe_distortion_check
from modulus.fatness import fatness_check
from modulus.models import CircularAnnulus
from modulus.moduli import annulus_modulus, teichmuller_bound
from quasihyperbolic.exceptions import ResolutionInsufficientError
from quasihyperbolic.functionals import (
    geodesic_tail_check,
    layer_indices,
    monte_carlo_qh_integral,
    qh_condition_functional,
    shadows,
)
from quasihyperbolic.graph import MetricGraph, qh_distance
from schottky.extension import conjugation_residual, image_config
from schottky.groups import area_decay_rate, complement_levels, limit_set_points
from transboundary.chains import chain_decompose, chain_diameter_bound
from transboundary.estimates import circular_estimate, radial_estimate
from transboundary.exceptions import ChainError, GeometryReachError
from transboundary.models import CircleGeometry, RayGeometry
from whitney.decomposition import adjacency_check, decompose, property_violations

from .exceptions import SpecReadError, UnknownCommandError
from .generators import generate_domain
from .scenes import domain_scene
from .specs import parse_spec, read_spec, result_document, spec_serializer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RESOLUTION = 2
EXIT_USAGE = 64
EXIT_NO_INPUT = 66

COMMANDS = ('validate', 'whitney', 'qh', 'shadows', 'chains', 'schottky', 'modulus', 'beltrami', 'generate')

RESOLUTION_OPTIONS = ('max_level', 'depth', 'samples', 'seed', 'tol', 'word_length')

TAIL_LAYERS = (4, 9, 16, 25)


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    document: dict
    scene: object = None
    message: str = ''


@dataclass
class Outcome:
    """What a command handler measured"""

    measurements: dict
    residuals: dict = None
    empirical_constants: dict = None
    scene: object = None
    exit_code: int = EXIT_OK
    message: str = ''


def resolution_parameters(options):
    lab = settings.SCHOTTKY_LAB
    defaults = {
        'max_level': lab['WHITNEY_MAX_LEVEL'],
        'depth': 3,
        'samples': 128,
        'seed': lab['DEFAULT_SEED'],
        'tol': lab['DISJOINTNESS_TOLERANCE'],
        'word_length': 2,
    }
    return {
        name: defaults[name] if options.get(name) is None else options[name]
        for name in RESOLUTION_OPTIONS
    }


def parse_point(token, config):
    """'x0' or a complex literal such as 0.5+0i"""
    token = str(token).strip().replace(' ', '')
    if token == 'x0':
        return config.basepoint
    if token.endswith('i'):
        token = token[:-1] + 'j'
    try:
        return complex(token)
    except ValueError as exc:
        raise ValueError(f"Cannot read point '{token}'") from exc


def reference_mobius(config):
    """Möbius map z ↦ z/(1 + z/(10R)), its pole far outside B(0,R)"""
    return ConformalPrimitive(1, 0, 0.1 / config.outer_radius, 1)


def run_validate(config, params, options):
    violations = validate_config(config, params['tol'])
    return Outcome(
        measurements={
            'disk_count': config.n,
            'violation_count': len(violations),
            'violations': [{'code': v.code, 'message': v.message} for v in violations],
        },
        scene=domain_scene(config),
        exit_code=EXIT_VALIDATION if violations else EXIT_OK,
        message='; '.join(v.message for v in violations),
    )


def run_whitney(config, params, options):
    dec = decompose(config, params['max_level'])
    adjacency = adjacency_check(dec)
    violations = property_violations(dec)
    scene = domain_scene(config)
    scene.add_cubes('cubes', dec.cubes)
    closure = abs(config.area - dec.covered_area - dec.uncovered_area)
    return Outcome(
        measurements={
            'cube_count': len(dec),
            'level_histogram': {int(k): int(v) for k, v in zip(*np.unique(dec.levels, return_counts=True))},
            'property_violation_count': len(violations),
            'adjacent_pairs': len(adjacency.pairs),
            'ratio_violation_count': len(adjacency.ratio_violations),
            'covered_area': dec.covered_area,
            'domain_area': config.area,
        },
        residuals={
            'uncovered_area': dec.uncovered_area,
            'pending_count': dec.pending_count,
            'area_closure': closure,
            'resolution': dec.resolution,
        },
        empirical_constants={
            'max_side_ratio': adjacency.max_ratio,
            'max_neighbor_count': max(adjacency.neighbor_counts, default=0),
        },
        scene=scene,
    )


def run_qh(config, params, options):
    source = parse_point(options.get('source') or 'x0', config)
    if options.get('target') is None:
        raise ValueError("qh needs an endpoint: --to")
    target = parse_point(options['target'], config)
    dec = decompose(config, params['max_level'])
    distance, geodesic = qh_distance(config, source, target, dec=dec)

    nearest = min(boundary_distance(config, source), boundary_distance(config, target))
    # j_D(x1, x2) = log(1 + |x1 - x2| / min δ_D) bounds k_D from below
    j_metric = math.log1p(abs(source - target) / nearest)
    scene = domain_scene(config)
    scene.add_polyline('geodesic', geodesic.vertices)
    return Outcome(
        measurements={
            'from': source,
            'to': target,
            'distance': distance,
            'euclidean_length': geodesic.euclidean_length,
            'vertex_count': len(geodesic.vertices),
            'j_distance': j_metric,
        },
        residuals={
            'resolution': dec.resolution,
            'uncovered_area': dec.uncovered_area,
            'pending_count': dec.pending_count,
        },
        empirical_constants={
            'distance_over_j': distance / j_metric if j_metric > 0 else 1.0,
        },
        scene=scene,
    )


def run_shadows(config, params, options):
    dec = decompose(config, params['max_level'])
    graph = MetricGraph(dec)
    layers = layer_indices(config, dec, graph=graph)
    functional = qh_condition_functional(dec, layers)
    report = shadows(config, dec, boundary_samples=params['samples'], graph=graph)
    # adds its sample points to graph
    integral = monte_carlo_qh_integral(config, dec, samples=params['samples'], seed=params['seed'], graph=graph)

    tails = {}
    for j0 in TAIL_LAYERS:
        longest = max((geodesic_tail_check(g, layers, j0).length for g in report.geodesics), default=0.0)
        tails[str(j0)] = longest * math.sqrt(j0)

    scene = domain_scene(config)
    for geodesic in report.geodesics:
        scene.add_polyline('geodesics', geodesic.vertices)
    return Outcome(
        measurements={
            'functional': functional.value,
            'max_layer': functional.max_layer,
            'layer_histogram': layers.histogram(),
            'shadow_sum': report.shadow_sum,
            'shadow_cube_count': len(report.members),
            'boundary_samples': len(report.samples),
            'tail_lengths_scaled': tails,
            'monte_carlo_integral': integral,
        },
        residuals={
            'functional_residual': functional.residual,
            'resolution': dec.resolution,
            'uncovered_area': dec.uncovered_area,
        },
        empirical_constants={
            'shadow_constant': report.shadow_sum / functional.value if functional.value > 0 else 0.0,
            'tail_constant': max(tails.values()),
            'monte_carlo_ratio': integral / functional.value if functional.value > 0 else 0.0,
        },
        scene=scene,
    )


def run_chains(config, params, options):
    R = config.outer_radius
    source = parse_point(options['source'], config) if options.get('source') else -0.95 * R
    target = parse_point(options['target'], config) if options.get('target') else 0.95 * R
    mapping = reference_mobius(config)
    tol = params['tol'] * R
    chain = chain_decompose(config, [source, target], tol)
    lhs, rhs = chain_diameter_bound(chain, mapping, config)

    dec = decompose(config, params['max_level'])
    rng = np.random.default_rng(params['seed'])
    ratios, holds, skipped = [], 0, 0
    for disk in config.disks:
        for angle in rng.uniform(0.0, 2.0 * math.pi, 4):
            start = disk.center + disk.radius * complex(math.cos(angle), math.sin(angle))
            ray = RayGeometry.leaving_disk(disk, angle, 0.5 * (R - abs(start)))
            try:
                result = radial_estimate(config, mapping, ray, dec=dec)
            except (ChainError, GeometryReachError):
                skipped += 1
                continue
            ratios.append(result.ratio)
            holds += result.holds
    circular = circular_estimate(config, mapping, CircleGeometry(0j, 0.5 * R), depth=params['depth'])

    scene = domain_scene(config)
    for piece in chain.pieces:
        scene.add_polyline('chain', piece)
    return Outcome(
        measurements={
            'pieces': chain.m,
            'components': list(chain.components),
            'touch_points': len(chain.touch_points),
            'diameter_lhs': lhs,
            'diameter_rhs': rhs,
            'radial_count': len(ratios),
            'radial_holds': holds,
            'radial_skipped': skipped,
            'circular_lhs': circular.lhs,
            'circular_rhs': circular.rhs,
            'circular_holds': circular.holds,
        },
        residuals={
            'resolution': dec.resolution,
            'uncovered_area': dec.uncovered_area,
        },
        empirical_constants={
            'max_radial_ratio': max(ratios, default=0.0),
            'circular_ratio': circular.ratio,
            'diameter_ratio': lhs / rhs if rhs > 0 else 0.0,
        },
        scene=scene,
    )


def run_schottky(config, params, options):
    depth = params['depth']
    levels = complement_levels(config, depth)
    decay = area_decay_rate(config, depth)
    deepest = levels[-1]

    residuals = {'nested_diameter': max((2.0 * d.disk.radius for d in deepest), default=0.0)}
    if config.n:
        f = reference_mobius(config)
        report = conjugation_residual(
            config, image_config(config, f), f, params['word_length'],
            samples=params['samples'], seed=params['seed'],
        )
        residuals['conjugation_residual'] = report.residual
        residuals['extension_agreement'] = report.agreement

    scene = domain_scene(config)
    scene.add_disks('omega', [d.disk for d in deepest], css='omega')
    scene.add_points('limit_points', limit_set_points(config, depth))
    return Outcome(
        measurements={
            'complement_disk_count': len(deepest),
            'counts_per_level': [len(level) for level in levels],
            'max_area_sequence': list(decay.areas),
        },
        residuals=residuals,
        empirical_constants={
            'area_decay_rate': decay.rate,
            'jacobian_bound': decay.jacobian_bound,
        },
        scene=scene,
    )


def _separation(config, j):
    disk = config.disk(j)
    others = [abs(disk.center - o.center) - o.radius - disk.radius for o in config.disks if o is not disk]
    return min([config.outer_radius - abs(disk.center) - disk.radius, *others])


def run_modulus(config, params, options):
    moduli, margins = [], []
    for j, disk in enumerate(config.disks, start=1):
        r_out = disk.radius + _separation(config, j)
        modulus = annulus_modulus(CircularAnnulus(disk.center, disk.radius, r_out))
        moduli.append(modulus)
        # the Teichmüller bound is on the log scale, Mod on the 1/2π scale
        margins.append(teichmuller_bound(disk.radius, r_out) - 2.0 * math.pi * modulus)

    disk_fatness = min((fatness_check(d).constant for d in config.disks), default=math.inf)
    measurements = {
        'separation_moduli': moduli,
        'teichmuller_margins': margins,
        'disk_fatness': disk_fatness,
    }
    if config.n >= 2:
        measurements['union_fatness'] = fatness_check(config.disks, seed=params['seed']).constant

    f = reference_mobius(config)
    x0 = config.basepoint
    r = boundary_distance(config, x0)
    koebe = koebe_distortion_check(f, x0, r, samples=params['samples'] * 4, seed=params['seed'])
    dilatation = circular_dilatation(f, x0)
    measurements['koebe_min_ratio'] = koebe.min_ratio
    measurements['koebe_max_ratio'] = koebe.max_ratio
    measurements['circular_dilatation'] = dilatation.dilatation
    return Outcome(
        measurements=measurements,
        residuals={'dilatation_excess': dilatation.dilatation - 1.0},
        empirical_constants={
            'min_separation_modulus': min(moduli, default=math.inf),
            'fatness_constant': min(disk_fatness, measurements.get('union_fatness', math.inf)),
            'koebe_constant': koebe.constant,
        },
        scene=domain_scene(config),
    )


def run_beltrami(config, params, options):
    f = reference_mobius(config)
    report = prop_invariant_check(
        config, f, params['word_length'], samples=params['samples'], seed=params['seed'], tol=params['tol'],
    )
    R = config.outer_radius
    base = CoefficientField(lambda z: 0.3 * z / (R + np.abs(z)), 0.3)
    symmetric = symmetrize(config, base, params['depth'])
    sym_report = invariance_residual(config, symmetric, params['word_length'], params['samples'], params['seed'])
    base_report = invariance_residual(config, base, params['word_length'], params['samples'], params['seed'])
    return Outcome(
        measurements={
            'criterion_holds': report.holds,
            'coefficient_residual': report.coefficient_residual,
            'conjugation_residuals': list(report.conjugation_residuals),
            'base_field_residual': base_report.residual,
            'words': sym_report.words,
        },
        residuals={
            'symmetrized_residual': sym_report.residual,
            'conjugation_residual': report.conjugation_residual,
        },
        empirical_constants={
            'base_field_dilatation': dilatation_bounds(norm=base.bound),
        },
        scene=domain_scene(config),
    )


HANDLERS = {
    'validate': run_validate,
    'whitney': run_whitney,
    'qh': run_qh,
    'shadows': run_shadows,
    'chains': run_chains,
    'schottky': run_schottky,
    'modulus': run_modulus,
    'beltrami': run_beltrami,
}


def run_generate(options):
    kind = options.get('kind') or 'random_packing'
    params = {}
    if kind == 'random_packing':
        params['count'] = 4 if options.get('count') is None else options['count']
        for name in ('min_radius', 'max_radius', 'min_gap'):
            if options.get(name) is not None:
                params[name] = options[name]
    else:
        params['depth'] = 1 if options.get('depth') is None else options['depth']
        if options.get('ring_size') is not None:
            params['ring_size'] = options['ring_size']
    seed = options.get('seed')
    if seed is None:
        seed = settings.SCHOTTKY_LAB['DEFAULT_SEED']
    try:
        document = generate_domain(kind, params, seed)
    except (LabError, ValueError) as exc:
        logger.warning(f"generate failed: {exc}")
        return CommandResult(EXIT_VALIDATION, {}, message=str(exc))
    return CommandResult(EXIT_OK, document, domain_scene(parse_spec(document)))


def _failure(command, data, params, exit_code, errors):
    return CommandResult(exit_code, result_document(command, data, params, errors=errors), message=str(errors))


def run_command(command, spec=None, **options):
    """
    Run one lab command on the spec file at spec. Unknown commands raise
    UnknownCommandError and unreadable specs SpecReadError; every other
    outcome is a CommandResult.
    """
    if command not in COMMANDS:
        raise UnknownCommandError(f"Unknown command '{command}', expected one of {', '.join(COMMANDS)}")
    if command == 'generate':
        return run_generate(options)
    if spec is None:
        raise SpecReadError(f"{command} needs a spec file: --spec PATH")

    data = read_spec(spec)
    params = resolution_parameters(options)
    if command in ('qh', 'chains'):
        params['from'] = options.get('source')
        params['to'] = options.get('target')

    serializer = spec_serializer(data, check_geometry=command != 'validate')
    if not serializer.is_valid():
        logger.warning(f"{command}: invalid spec {spec}")
        return _failure(command, data, params, EXIT_VALIDATION, serializer.errors)
    config = serializer.save()

    try:
        outcome = HANDLERS[command](config, params, options)
    except ResolutionInsufficientError as exc:
        logger.warning(f"{command}: {exc}")
        return _failure(command, data, params, EXIT_RESOLUTION, [str(exc)])
    except (LabError, ValueError) as exc:
        logger.warning(f"{command}: {exc}")
        return _failure(command, data, params, EXIT_VALIDATION, [str(exc)])

    document = result_document(
        command, data, params,
        measurements=outcome.measurements,
        residuals=outcome.residuals,
        empirical_constants=outcome.empirical_constants,
    )
    logger.info(f"{command}: done with exit code {outcome.exit_code}")
    return CommandResult(outcome.exit_code, document, outcome.scene, outcome.message)
