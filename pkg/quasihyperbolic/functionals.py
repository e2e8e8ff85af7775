"""
Layers D_j, the quasihyperbolic condition functional, shadows and geodesic
tail diagnostics over a truncated Whitney decomposition.
"""
import logging
import math
from collections import Counter

import networkx as nx
import numpy as np
from scipy.spatial.distance import pdist

from geometry.primitives import boundary_distances, sample_domain_points
from whitney.decomposition import coverage_threshold, cube_containing

from .exceptions import ResolutionInsufficientError
from .graph import MetricGraph
from .models import FunctionalValue, LayerAssignment, ShadowReport, TailReport

logger = logging.getLogger(__name__)


def layer_indices(config, dec, x0=None, graph=None):
    """j(Q) = least positive integer j with k(x0, Q) ≤ j"""
    if x0 is None:
        x0 = config.basepoint
    if graph is None:
        graph = MetricGraph(dec)
    source = graph.add_point(x0)
    lengths = graph.distances_from(source)

    missing = [n for n in range(len(dec.cubes)) if n not in lengths]
    if missing:
        logger.warning(f"Layer assignment: {len(missing)} cubes unreachable from {x0}")
        raise ResolutionInsufficientError(
            f"{len(missing)} cubes are not connected to {x0} at max_level {dec.max_level}"
        )

    distances = tuple(float(lengths[n]) for n in range(len(dec.cubes)))
    layers = tuple(max(1, math.ceil(d)) for d in distances)
    home = cube_containing(dec, x0)
    if home is not None:
        layers = layers[:home] + (1,) + layers[home + 1:]
    return LayerAssignment(complex(x0), layers, distances)


def qh_condition_functional(dec, layers):
    """
    Σ ℓ(Q)²·j(Q)² over emitted cubes. The residual extrapolates the missing
    cubes: each further level adds at most half the remaining area and one layer.
    """
    if len(layers) != len(dec.cubes):
        raise ValueError("Layer assignment does not belong to this decomposition")
    j = np.array(layers.layers, dtype=float)
    value = float(np.sum(dec.sides ** 2 * j ** 2))
    top = layers.max_layer
    residual = dec.uncovered_area * (top ** 2 + 4 * top + 6)
    return FunctionalValue(value, float(residual), top)


def boundary_sample_points(config, count):
    """Equispaced samples on ∂D, shared among circles in proportion to length"""
    circles = [(0j, config.outer_radius)] + [(d.center, d.radius) for d in config.disks]
    lengths = np.array([r for _, r in circles])
    quota = count * lengths / lengths.sum()
    counts = np.floor(quota).astype(int)
    remainder = count - counts.sum()
    for index in np.argsort(-(quota - counts), kind='stable')[:remainder]:
        counts[index] += 1

    points = []
    for (center, radius), m in zip(circles, counts):
        theta = 2.0 * np.pi * np.arange(m) / max(m, 1)
        points.append(center + radius * np.exp(1j * theta))
    return np.concatenate(points)


def _path_to(predecessors, source, target):
    path = [target]
    while path[-1] != source:
        path.append(predecessors[path[-1]][0])
    return path[::-1]


def trace_boundary_geodesics(config, dec, x0, samples, graph=None):
    """
    Geodesics from x0 toward boundary samples, each ending at the cube
    centre nearest to its sample (the finest layer reached at truncation).
    """
    if graph is None:
        graph = MetricGraph(dec)
    source = graph.add_point(x0)
    predecessors, _ = nx.dijkstra_predecessor_and_distance(graph.graph, source)
    home = cube_containing(dec, x0)

    geodesics = []
    for z in samples:
        target = int(np.argmin(np.abs(dec.centers - z)))
        if target not in predecessors:
            raise ResolutionInsufficientError(f"Boundary point {z} not reachable from {x0}")
        nodes = _path_to(predecessors, source, target)
        vertices, weights = graph.path_polyline(nodes)
        candidates = set()
        for node in nodes:
            if not isinstance(node, tuple):
                candidates.add(node)
                candidates.update(dec.adjacency[node])
        if home is not None:
            candidates.add(home)
            candidates.update(dec.adjacency[home])
        geodesics.append(graph.geodesic(vertices, weights, sorted(candidates)))
    return geodesics


def shadows(config, dec, x0=None, boundary_samples=128, graph=None):
    """Shadow sample sets SH(Q), diameters s(Q) and Σ s(Q)²"""
    if boundary_samples < 64:
        raise ValueError(f"boundary_samples must be at least 64, got {boundary_samples}")
    if x0 is None:
        x0 = config.basepoint
    samples = boundary_sample_points(config, boundary_samples)
    geodesics = trace_boundary_geodesics(config, dec, x0, samples, graph)

    members = {}
    for index, geodesic in enumerate(geodesics):
        for cube in geodesic.cubes:
            members.setdefault(cube, []).append(index)

    diameters = {}
    for cube, indices in members.items():
        if len(indices) < 2:
            diameters[cube] = 0.0
            continue
        points = samples[indices]
        diameters[cube] = float(pdist(np.column_stack([points.real, points.imag])).max())

    shadow_sum = float(sum(s ** 2 for s in diameters.values()))
    logger.info(f"Shadows: {len(members)} cubes, Σ s(Q)² = {shadow_sum:.6g}")
    return ShadowReport(
        samples=samples,
        members={cube: tuple(indices) for cube, indices in members.items()},
        diameters=diameters,
        shadow_sum=shadow_sum,
        resolution=dec.resolution,
        geodesics=tuple(geodesics),
    )


def geodesic_tail_check(geodesic, layers, j0):
    """Length of the maximal terminal subpath meeting only cubes with j(Q) ≥ j0"""
    histogram = Counter()
    for cube, layer in zip(geodesic.cubes, geodesic.layers_along(layers)):
        histogram[layer] += 1
    histogram = dict(sorted(histogram.items()))

    if j0 > layers.max_layer:
        return TailReport(j0, 0.0, histogram)
    start = 0.0
    for (cube, _, s_out), layer in zip(geodesic.cube_spans, geodesic.layers_along(layers)):
        if layer < j0:
            start = max(start, s_out)
    length = max(geodesic.euclidean_length - start, 0.0)
    return TailReport(j0, length, histogram)


def monte_carlo_qh_integral(config, dec, x0=None, samples=400, seed=0, graph=None):
    """
    Seeded estimate of ∫ k(x, x0)² dx over the part of D where δ_D is at
    least the coverage threshold of the decomposition.
    """
    if x0 is None:
        x0 = config.basepoint
    rng = np.random.default_rng(seed)
    points = sample_domain_points(config, samples, rng)
    deep = points[boundary_distances(config, points) >= coverage_threshold(dec)]

    if graph is None:
        graph = MetricGraph(dec)
    source = graph.add_point(x0)
    nodes = [graph.add_point(z) for z in deep]
    lengths = graph.distances_from(source)
    missing = [node for node in nodes if node not in lengths]
    if missing:
        raise ResolutionInsufficientError(f"{len(missing)} Monte Carlo points not reachable from {x0}")
    k = np.array([lengths[node] for node in nodes])
    return float(config.area * np.sum(k ** 2) / samples)
