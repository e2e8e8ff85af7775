"""
Discrete quasihyperbolic metric: a weighted graph on Whitney cube centres,
query points attached to nearby cubes, Dijkstra shortest paths and a
shortcutting pass that straightens the resulting polylines.
"""
import logging

import networkx as nx
import numpy as np

from geometry.exceptions import DomainMembershipError
from geometry.primitives import in_domain
from whitney.decomposition import decompose, polyline_cube_spans

from .exceptions import ResolutionInsufficientError
from .models import Geodesic
from .quadrature import inverse_distance_integrals, segments_inside

logger = logging.getLogger(__name__)

# Query points link to cubes whose centre lies within this many cube diameters
ATTACH_DIAMETERS = 2.0


class MetricGraph:
    """Cube-centre graph with edge weights ∫ ds/δ_D along segments"""

    def __init__(self, dec, tol=None):
        self.dec = dec
        self.config = dec.config
        self.tol = tol
        self.graph = nx.Graph()
        self._points = []
        self._point_nodes = {}

        self.graph.add_nodes_from(range(len(dec.cubes)))
        first, second = [], []
        for a, neighbors in enumerate(dec.adjacency):
            for b in neighbors:
                if a < b:
                    first.append(a)
                    second.append(b)
        if first:
            first, second = np.array(first), np.array(second)
            weights = inverse_distance_integrals(
                self.config, dec.centers[first], dec.centers[second], tol
            )
            self.graph.add_weighted_edges_from(
                zip(first.tolist(), second.tolist(), weights.tolist())
            )
        logger.info(
            f"Metric graph: {self.graph.number_of_nodes()} nodes, "
            f"{self.graph.number_of_edges()} edges"
        )

    def position(self, node):
        if isinstance(node, tuple):
            return self._points[node[1]]
        return complex(self.dec.centers[node])

    def add_point(self, z, link=()):
        """Attach a query point; link names earlier query nodes to join directly"""
        z = complex(z)
        if z in self._point_nodes:
            return self._point_nodes[z]
        if not in_domain(self.config, z):
            raise DomainMembershipError(f"Endpoint {z} outside D")

        node = ('x', len(self._points))
        self._points.append(z)
        self._point_nodes[z] = node
        self.graph.add_node(node)

        centers = self.dec.centers
        if len(centers):
            reach = ATTACH_DIAMETERS * np.sqrt(2.0) * self.dec.sides
            near = np.flatnonzero(np.abs(centers - z) <= reach)
            near = near[segments_inside(self.config, z, centers[near])]
            if len(near):
                weights = inverse_distance_integrals(self.config, z, centers[near], self.tol)
                self.graph.add_weighted_edges_from(
                    (node, int(n), float(w)) for n, w in zip(near, weights)
                )

        others = [other for other in link if other != node]
        if others:
            ends = np.array([self.position(other) for other in others])
            inside = segments_inside(self.config, z, ends)
            if np.any(inside):
                weights = inverse_distance_integrals(self.config, z, ends[inside], self.tol)
                linked = [other for other, ok in zip(others, inside) if ok]
                self.graph.add_weighted_edges_from(
                    (node, other, float(w)) for other, w in zip(linked, weights)
                )
        return node

    def distance(self, source, target):
        try:
            return nx.dijkstra_path_length(self.graph, source, target)
        except nx.NetworkXNoPath:
            raise ResolutionInsufficientError(
                f"No path between {self.position(source)} and {self.position(target)} "
                f"at max_level {self.dec.max_level}"
            )

    def shortest_path(self, source, target):
        try:
            return nx.dijkstra_path(self.graph, source, target)
        except nx.NetworkXNoPath:
            raise ResolutionInsufficientError(
                f"No path between {self.position(source)} and {self.position(target)} "
                f"at max_level {self.dec.max_level}"
            )

    def distances_from(self, source):
        return nx.single_source_dijkstra_path_length(self.graph, source)

    def path_polyline(self, nodes):
        vertices = np.array([self.position(n) for n in nodes])
        weights = np.array([self.graph[u][v]['weight'] for u, v in zip(nodes[:-1], nodes[1:])])
        return vertices, weights

    def _shortcut(self, vertices, weights):
        """Greedy farthest-jump shortening that never increases the length"""
        cumulative = np.concatenate([[0.0], np.cumsum(weights)])
        kept, kept_weights = [vertices[0]], []
        last = len(vertices) - 1
        i = 0
        while i < last:
            targets = np.arange(last, i + 1, -1)
            jump, jump_weight = i + 1, weights[i]
            if len(targets):
                inside = segments_inside(self.config, vertices[i], vertices[targets])
                if np.any(inside):
                    candidates = targets[inside]
                    direct = inverse_distance_integrals(
                        self.config, vertices[i], vertices[candidates], self.tol
                    )
                    along = cumulative[candidates] - cumulative[i]
                    better = np.flatnonzero(direct <= along * (1 + 1e-12))
                    if len(better):
                        jump, jump_weight = int(candidates[better[0]]), float(direct[better[0]])
            kept.append(vertices[jump])
            kept_weights.append(jump_weight)
            i = jump
        return np.array(kept), np.array(kept_weights)

    def straighten(self, vertices, weights):
        """Shortcut in both directions and keep the shorter polyline"""
        if len(vertices) <= 2:
            return vertices, weights
        forward = self._shortcut(vertices, weights)
        backward_v, backward_w = self._shortcut(vertices[::-1], weights[::-1])
        backward = (backward_v[::-1], backward_w[::-1])
        return min(forward, backward, key=lambda polyline: (polyline[1].sum(), len(polyline[1])))

    def geodesic(self, vertices, weights, candidates=None):
        vertices = np.asarray(vertices, dtype=complex)
        weights = np.asarray(weights, dtype=float)
        euclidean = float(np.sum(np.abs(np.diff(vertices)))) if len(vertices) > 1 else 0.0
        spans = polyline_cube_spans(self.dec, vertices, candidates)
        return Geodesic(
            vertices=tuple(vertices),
            qh_length=float(np.sum(weights)),
            euclidean_length=euclidean,
            edge_weights=tuple(float(w) for w in weights),
            cube_spans=spans,
        )


def qh_distance(config, x1, x2, max_level=None, dec=None, graph=None, straighten=True):
    """
    Upper approximation of k_D(x1, x2) by a shortest path in the cube graph,
    shortened by direct segments. Returns (distance, geodesic).
    """
    x1, x2 = complex(x1), complex(x2)
    for endpoint in (x1, x2):
        if not in_domain(config, endpoint):
            raise DomainMembershipError(f"Endpoint {endpoint} outside D")
    if x1 == x2:
        return 0.0, Geodesic((x1,), 0.0, 0.0)

    if graph is None:
        graph = MetricGraph(dec if dec is not None else decompose(config, max_level))
    source = graph.add_point(x1)
    target = graph.add_point(x2, link=[source])
    nodes = graph.shortest_path(source, target)
    vertices, weights = graph.path_polyline(nodes)
    if straighten:
        vertices, weights = graph.straighten(vertices, weights)
    geodesic = graph.geodesic(vertices, weights)
    logger.debug(f"k({x1}, {x2}) ≈ {geodesic.qh_length:.6f} over {len(vertices)} vertices")
    return geodesic.qh_length, geodesic
