import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CircularAnnulus:
    """A(z0; r_in, r_out) = {r_in < |z - z0| < r_out}"""

    center: complex
    r_in: float
    r_out: float

    def __post_init__(self):
        object.__setattr__(self, 'center', complex(self.center))
        object.__setattr__(self, 'r_in', float(self.r_in))
        object.__setattr__(self, 'r_out', float(self.r_out))
        if not 0 < self.r_in < self.r_out:
            raise ValueError(f"Need 0 < r_in < r_out, got {self.r_in} and {self.r_out}")

    def scaled(self, s):
        return CircularAnnulus(self.center * s, self.r_in * abs(s), self.r_out * abs(s))

    def translated(self, w):
        return CircularAnnulus(self.center + w, self.r_in, self.r_out)

    def separates(self, z):
        """Side of the annulus a point lies on: -1 inside, 1 outside, 0 in the ring"""
        distance = abs(complex(z) - self.center)
        if distance <= self.r_in:
            return -1
        if distance >= self.r_out:
            return 1
        return 0


@dataclass(frozen=True)
class FatnessReport:
    """
    Measured fatness constant inf Area(B ∩ B(z,r))/r² with its worst (z, r),
    and the radial diameters d_r(B) seen from balls containing B.
    Points report constant = +inf.
    """

    constant: float
    witness: tuple = ()
    radial_diameters: tuple = ()
    diameter: float = 0.0

    @property
    def is_point(self):
        return math.isinf(self.constant)

    @property
    def radial_ratio(self):
        """min d_r(B)/diam(B), bounded below for fat sets"""
        if not self.radial_diameters or not self.diameter:
            return math.inf
        return min(self.radial_diameters) / self.diameter


@dataclass(frozen=True)
class DilatationReport:
    """R_ρ/r_ρ per radius of the grid and their maximum"""

    radii: tuple
    ratios: tuple
    dilatation: float

    @property
    def min_radius(self):
        return min(self.radii)


@dataclass(frozen=True)
class DistortionReport:
    """Range of |f'(x)|·|y - z| / |f(y) - f(z)| over sampled triples"""

    min_ratio: float
    max_ratio: float
    samples: int
    scale: float

    @property
    def constant(self):
        """C with all ratios in [1/C, C]"""
        return max(self.max_ratio, 1.0 / self.min_ratio)


@dataclass(frozen=True)
class ModulusChainBound:
    """Lower bounds for Mod(f(A)) from sub-annuli of modulus C1"""

    linear: float
    count_based: float
    constant: float
