import cmath
import math
from dataclasses import dataclass, field

import numpy as np


def polyline_lengths(vertices):
    """Cumulative arclength at each vertex"""
    vertices = np.asarray(vertices, dtype=complex)
    return np.concatenate([[0.0], np.cumsum(np.abs(np.diff(vertices)))])


def point_at(vertices, cumulative, s):
    """Point of the polyline at arclength s"""
    k = int(np.clip(np.searchsorted(cumulative, s, side='right') - 1, 0, len(vertices) - 2))
    length = cumulative[k + 1] - cumulative[k]
    t = 0.0 if length == 0 else (s - cumulative[k]) / length
    return complex(vertices[k] + min(max(t, 0.0), 1.0) * (vertices[k + 1] - vertices[k]))


def sub_polyline(vertices, cumulative, s0, s1):
    """Vertices of the polyline restricted to arclengths [s0, s1]"""
    inner = [complex(v) for v, s in zip(vertices, cumulative) if s0 < s < s1]
    return (point_at(vertices, cumulative, s0), *inner, point_at(vertices, cumulative, s1))


@dataclass(frozen=True)
class TransboundaryChain:
    """
    (γ_1, B_1, …, γ_{m-1}, B_{m-1}, γ_m): polyline pieces in D joined through
    distinct complementary disks, given by 1-based index.
    """

    pieces: tuple
    components: tuple = ()
    # arclength interval of the original path covered by each piece
    spans: tuple = ()
    # (disk index, point) for tangential contacts inside the pieces
    touch_points: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'pieces', tuple(tuple(complex(v) for v in p) for p in self.pieces))
        object.__setattr__(self, 'components', tuple(int(i) for i in self.components))
        if len(self.components) != len(self.pieces) - 1:
            raise ValueError("A chain alternates pieces and components")

    @property
    def m(self):
        return len(self.pieces)

    @property
    def starts(self):
        """a_i"""
        return tuple(p[0] for p in self.pieces)

    @property
    def ends(self):
        """b_i"""
        return tuple(p[-1] for p in self.pieces)

    def piece_length(self, i):
        return float(polyline_lengths(self.pieces[i])[-1])

    def reversed(self):
        total = self.spans[-1][1] if self.spans else 0.0
        return TransboundaryChain(
            pieces=tuple(p[::-1] for p in self.pieces[::-1]),
            components=self.components[::-1],
            spans=tuple((total - s1, total - s0) for s0, s1 in self.spans[::-1]),
            touch_points=self.touch_points[::-1],
        )


@dataclass(frozen=True)
class RayGeometry:
    """Segment start + t·e^{iθ}, 0 ≤ t ≤ length"""

    start: complex
    angle: float
    length: float

    def __post_init__(self):
        object.__setattr__(self, 'start', complex(self.start))
        if not self.length > 0:
            raise ValueError(f"Ray length must be positive, got {self.length}")

    @classmethod
    def leaving_disk(cls, disk, angle, length):
        """Ray leaving the circle of a disk radially outward"""
        return cls(disk.center + disk.radius * cmath.exp(1j * angle), angle, length)

    @property
    def end(self):
        return self.start + self.length * cmath.exp(1j * self.angle)

    def polyline(self):
        return np.array([self.start, self.end])

    def scaled(self, s):
        return RayGeometry(self.start * s, self.angle, self.length * s)


@dataclass(frozen=True)
class CircleGeometry:
    """Circle ∂B(center, radius)"""

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, 'center', complex(self.center))
        if not self.radius > 0:
            raise ValueError(f"Circle radius must be positive, got {self.radius}")

    def point(self, t):
        return self.center + self.radius * np.exp(1j * np.asarray(t))

    def scaled(self, s):
        return CircleGeometry(self.center * s, self.radius * s)

    @property
    def circumference(self):
        return 2.0 * math.pi * self.radius


@dataclass(frozen=True)
class EstimateResult:
    """Both sides of a chain inequality with its bookkeeping"""

    mode: str
    lhs: float
    rhs: float
    details: dict = field(default_factory=dict)
    chain: object = None

    @property
    def ratio(self):
        if math.isinf(self.rhs):
            return 0.0
        return self.lhs / self.rhs if self.rhs > 0 else math.inf

    @property
    def holds(self):
        return self.lhs <= self.rhs * (1 + 1e-9)
