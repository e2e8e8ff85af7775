from collections import Counter
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Geodesic:
    """Polyline realizing a computed quasihyperbolic distance"""

    vertices: tuple
    qh_length: float
    euclidean_length: float
    edge_weights: tuple = ()
    # (cube index, arclength in, arclength out) in traversal order
    cube_spans: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'vertices', tuple(complex(v) for v in self.vertices))

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    @property
    def cubes(self):
        return tuple(n for n, _, _ in self.cube_spans)

    def layers_along(self, layers):
        """j(Q) of the traversed cubes in traversal order"""
        return tuple(layers[n] for n in self.cubes)

    def reversed(self):
        total = self.euclidean_length
        spans = sorted(((n, total - s_out, total - s_in) for n, s_in, s_out in self.cube_spans),
                       key=lambda span: (span[1], span[0]))
        return Geodesic(
            vertices=self.vertices[::-1],
            qh_length=self.qh_length,
            euclidean_length=total,
            edge_weights=self.edge_weights[::-1],
            cube_spans=tuple(spans),
        )


@dataclass(frozen=True)
class LayerAssignment:
    """j(Q) for every cube of a decomposition, indexed like dec.cubes"""

    basepoint: complex
    layers: tuple
    distances: tuple

    def __getitem__(self, index):
        return self.layers[index]

    def __len__(self):
        return len(self.layers)

    @property
    def max_layer(self):
        return max(self.layers) if self.layers else 0

    def members(self, j):
        """Cube indices of D_j = {Q : k(x0,Q) ≤ j}"""
        return tuple(n for n, layer in enumerate(self.layers) if layer <= j)

    def histogram(self):
        """Number of cubes in D_j minus D_{j-1}, per j"""
        return dict(sorted(Counter(self.layers).items()))

    def as_dict(self, dec):
        return {cube: layer for cube, layer in zip(dec.cubes, self.layers)}


@dataclass(frozen=True)
class FunctionalValue:
    """Truncated Σ ℓ(Q)²·j(Q)² and the bound on the part missed by truncation"""

    value: float
    residual: float
    max_layer: int

    @property
    def upper(self):
        return self.value + self.residual


@dataclass(frozen=True)
class ShadowReport:
    """Sampled shadows SH(Q), their diameters s(Q) and Σ s(Q)²"""

    samples: np.ndarray
    members: dict = field(default_factory=dict)
    diameters: dict = field(default_factory=dict)
    shadow_sum: float = 0.0
    resolution: float = 0.0
    geodesics: tuple = ()


@dataclass(frozen=True)
class TailReport:
    """Terminal subpath in layers ≥ j0 and distinct cubes per layer"""

    j0: int
    length: float
    histogram: dict

    @property
    def max_per_layer(self):
        return max(self.histogram.values()) if self.histogram else 0
