import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np


SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class WhitneyCube:
    """Dyadic square [i·ℓ, (i+1)·ℓ] × [j·ℓ, (j+1)·ℓ] with ℓ = R·2^{-level}"""

    level: int
    i: int
    j: int
    side: float

    @property
    def lower_left(self):
        return complex(self.i * self.side, self.j * self.side)

    @property
    def center(self):
        return complex((self.i + 0.5) * self.side, (self.j + 0.5) * self.side)

    @property
    def diameter(self):
        return SQRT2 * self.side

    @property
    def area(self):
        return self.side ** 2

    @property
    def key(self):
        return (self.level, self.i, self.j)

    def corners(self):
        z = self.lower_left
        s = self.side
        return np.array([z, z + s, z + s + 1j * s, z + 1j * s])

    def contains(self, z):
        z = complex(z)
        x0, y0 = self.i * self.side, self.j * self.side
        return x0 <= z.real <= x0 + self.side and y0 <= z.imag <= y0 + self.side

    def distance_to(self, z):
        """Euclidean distance from a point to the closed square"""
        z = complex(z)
        x0, y0 = self.i * self.side, self.j * self.side
        dx = max(x0 - z.real, 0.0, z.real - x0 - self.side)
        dy = max(y0 - z.imag, 0.0, z.imag - y0 - self.side)
        return math.hypot(dx, dy)


@dataclass(frozen=True)
class AdjacencyReport:
    """Adjacent pairs (self-pairs included) with the side-ratio audit"""

    pairs: tuple
    neighbor_counts: tuple
    ratio_violations: tuple
    max_ratio: float

    @property
    def is_valid(self):
        return not self.ratio_violations


@dataclass(frozen=True)
class WhitneyDecomposition:
    """Truncated Whitney decomposition of D with its area bookkeeping"""

    config: object
    max_level: int
    cubes: tuple
    uncovered_area: float = 0.0
    pending_count: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'cubes', tuple(self.cubes))

    def __len__(self):
        return len(self.cubes)

    @cached_property
    def centers(self):
        return np.array([q.center for q in self.cubes], dtype=complex)

    @cached_property
    def sides(self):
        return np.array([q.side for q in self.cubes], dtype=float)

    @cached_property
    def levels(self):
        return np.array([q.level for q in self.cubes], dtype=int)

    @cached_property
    def index(self):
        return {q.key: n for n, q in enumerate(self.cubes)}

    @cached_property
    def adjacency(self):
        """Neighbour indices per cube, the cube itself excluded"""
        from .decomposition import neighbor_lists
        return neighbor_lists(self)

    @property
    def covered_area(self):
        return float(np.sum(self.sides ** 2)) if self.cubes else 0.0

    @property
    def resolution(self):
        """Side length of the finest admissible cube"""
        return self.config.outer_radius * 2.0 ** (-self.max_level)
