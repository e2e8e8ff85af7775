import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import PoleError


@dataclass(frozen=True)
class Disk:
    """Closed disk B(center, radius)"""

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, 'center', complex(self.center))
        object.__setattr__(self, 'radius', float(self.radius))
        if not self.radius > 0 or not math.isfinite(self.radius):
            raise ValueError(f"Disk radius must be positive, got {self.radius}")

    @property
    def area(self):
        return math.pi * self.radius ** 2

    @property
    def diameter(self):
        return 2.0 * self.radius

    def contains(self, z, tol=0.0):
        """Closed containment with an absolute tolerance"""
        return abs(complex(z) - self.center) <= self.radius + tol

    def boundary_samples(self, count):
        theta = 2.0 * np.pi * np.arange(count) / count
        return self.center + self.radius * np.exp(1j * theta)

    def scaled(self, s):
        return Disk(self.center * s, self.radius * abs(s))

    def __str__(self):
        return f"Disk(c={self.center:.6g}, r={self.radius:.6g})"


@dataclass(frozen=True)
class DiskComplement:
    """Complement of the open disk B(center, radius), the image of a disk containing the pole"""

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, 'center', complex(self.center))
        object.__setattr__(self, 'radius', float(self.radius))

    def contains(self, z, tol=0.0):
        return abs(complex(z) - self.center) >= self.radius - tol

    def boundary_samples(self, count):
        theta = 2.0 * np.pi * np.arange(count) / count
        return self.center + self.radius * np.exp(1j * theta)


@dataclass(frozen=True)
class HalfPlane:
    """Closed half-plane {z : Re((z - point)·conj(normal)) >= 0}, the image of a disk with the pole on its boundary"""

    point: complex
    normal: complex

    def __post_init__(self):
        normal = complex(self.normal)
        if normal == 0:
            raise ValueError("Half-plane normal must be nonzero")
        object.__setattr__(self, 'point', complex(self.point))
        object.__setattr__(self, 'normal', normal / abs(normal))

    def contains(self, z, tol=0.0):
        return ((complex(z) - self.point) * self.normal.conjugate()).real >= -tol


@dataclass(frozen=True)
class CircleDomainConfig:
    """Outer ball B(0,R), finitely many closed disks and a basepoint x0"""

    outer_radius: float
    disks: tuple = field(default_factory=tuple)
    basepoint: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, 'outer_radius', float(self.outer_radius))
        object.__setattr__(self, 'disks', tuple(self.disks))
        object.__setattr__(self, 'basepoint', complex(self.basepoint))
        if not self.outer_radius > 0:
            raise ValueError(f"Outer radius must be positive, got {self.outer_radius}")

    @property
    def n(self):
        return len(self.disks)

    @property
    def centers(self):
        return np.array([d.center for d in self.disks], dtype=complex)

    @property
    def radii(self):
        return np.array([d.radius for d in self.disks], dtype=float)

    @property
    def area(self):
        """Area of D"""
        return math.pi * self.outer_radius ** 2 - sum(d.area for d in self.disks)

    def disk(self, index):
        """Disk by 1-based index, the indexing used by reflection words"""
        if not 1 <= index <= self.n:
            raise IndexError(f"Disk index {index} outside 1..{self.n}")
        return self.disks[index - 1]


@dataclass(frozen=True)
class ConformalPrimitive:
    """
    z ↦ (a·w + b) / (c·w + d) with w = conj(z) when conjugate_first is set.
    The parity flag marks the orientation-reversing (anti-Möbius) maps.
    """

    a: complex
    b: complex
    c: complex
    d: complex
    conjugate_first: bool = False

    def __post_init__(self):
        for name in ('a', 'b', 'c', 'd'):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, 'conjugate_first', bool(self.conjugate_first))
        if self.determinant == 0:
            raise ValueError("Conformal primitive has zero determinant")

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, matrix, conjugate_first=False):
        m = np.asarray(matrix, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1], conjugate_first)

    @classmethod
    def reflection(cls, disk):
        """R(z) = a + r²/(conj(z) - conj(a)) as a matrix acting on conj(z)"""
        a, r = disk.center, disk.radius
        return cls(a, r * r - abs(a) ** 2, 1, -a.conjugate(), True)

    @classmethod
    def similarity(cls, scale=1, shift=0):
        """z ↦ scale·z + shift"""
        return cls(scale, shift, 0, 1)

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def determinant(self):
        return self.a * self.d - self.b * self.c

    @property
    def is_orientation_reversing(self):
        return self.conjugate_first

    def normalized(self):
        """Same map with unit determinant"""
        s = cmath.sqrt(self.determinant)
        return ConformalPrimitive(self.a / s, self.b / s, self.c / s, self.d / s, self.conjugate_first)

    def _argument(self, z):
        return np.conj(z) if self.conjugate_first else z

    def __call__(self, z):
        w = self._argument(z)
        denominator = self.c * w + self.d
        if np.isscalar(denominator) or np.ndim(denominator) == 0:
            if denominator == 0:
                raise PoleError(f"{z} is the pole of {self}")
            return complex((self.a * w + self.b) / denominator)
        denominator = np.asarray(denominator)
        if np.any(denominator == 0):
            raise PoleError(f"Sample set contains the pole of {self}")
        return (self.a * w + self.b) / denominator

    def compose(self, other):
        """self ∘ other"""
        inner = other.matrix.conj() if self.conjugate_first else other.matrix
        product = self.matrix @ inner
        parity = self.conjugate_first != other.conjugate_first
        return ConformalPrimitive.from_matrix(product, parity).normalized()

    def inverse(self):
        m = np.array([[self.d, -self.b], [-self.c, self.a]], dtype=complex)
        if self.conjugate_first:
            # (M∘σ)^{-1} = σ∘M^{-1} = conj(M^{-1})∘σ
            m = m.conj()
        return ConformalPrimitive.from_matrix(m, self.conjugate_first).normalized()

    def pole(self):
        """Preimage of ∞, or None for affine maps"""
        if self.c == 0:
            return None
        w = -self.d / self.c
        return w.conjugate() if self.conjugate_first else w

    def wirtinger(self, z):
        """Exact (∂_z f, ∂_z̄ f) at z"""
        w = self._argument(z)
        denominator = self.c * w + self.d
        if np.any(np.asarray(denominator) == 0):
            raise PoleError(f"Derivative requested at the pole of {self}")
        derivative = self.determinant / denominator ** 2
        if np.ndim(derivative) == 0:
            derivative, zero = complex(derivative), 0j
        else:
            zero = np.zeros_like(derivative)
        if self.conjugate_first:
            return zero, derivative
        return derivative, zero

    def derivative_modulus(self, z):
        """|f'(z)|, the linear stretch of the map at z"""
        dz, dzbar = self.wirtinger(z)
        return np.abs(dz) + np.abs(dzbar)

    def conjugate_by_scaling(self, s):
        """z ↦ s·f(z/s), the same map viewed in a configuration scaled by s"""
        scale = ConformalPrimitive.similarity(s)
        unscale = ConformalPrimitive.similarity(1.0 / s)
        return scale.compose(self).compose(unscale)

    def __str__(self):
        kind = 'anti-Möbius' if self.conjugate_first else 'Möbius'
        return f"{kind}[{self.a:.4g}, {self.b:.4g}; {self.c:.4g}, {self.d:.4g}]"
