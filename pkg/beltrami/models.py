from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class CoefficientField:
    """
    Pointwise evaluator z ↦ μ(z) with a declared bound ‖μ‖∞ < 1.
    Fields are never resampled; pullbacks wrap the evaluator.
    """

    evaluator: Callable
    bound: float

    def __post_init__(self):
        object.__setattr__(self, 'bound', float(self.bound))
        if not 0 <= self.bound < 1:
            raise ValueError(f"Coefficient bound must lie in [0,1), got {self.bound}")

    @classmethod
    def constant(cls, value):
        value = complex(value)
        return cls(lambda z: value, abs(value))

    @classmethod
    def zero(cls):
        return cls.constant(0)

    def __call__(self, z):
        if np.ndim(z) == 0:
            return complex(self.evaluator(complex(z)))
        z = np.asarray(z, dtype=complex)
        return np.array([self.evaluator(complex(w)) for w in z.ravel()], dtype=complex).reshape(z.shape)

    def scaled(self, c):
        """ν = (c/‖μ‖∞)·μ, the rescaling to norm c"""
        if not 0 <= c < 1:
            raise ValueError(f"Target norm must lie in [0,1), got {c}")
        if self.bound == 0:
            raise ValueError("Cannot rescale a field with zero bound")
        factor = c / self.bound
        evaluator = self.evaluator
        return CoefficientField(lambda z: factor * evaluator(z), c)

    def sampled_norm(self, points):
        """max |μ| over the points, checked against the declared bound"""
        norm = float(np.max(np.abs(self(points)), initial=0.0))
        if norm > self.bound * (1 + 1e-12) + 1e-15:
            raise ValueError(f"Sampled |μ| = {norm:.6g} exceeds the declared bound {self.bound:.6g}")
        return norm


@dataclass(frozen=True)
class WirtingerSample:
    """Central-difference ∂_z f and ∂_z̄ f at a point with the step used"""

    dz: complex
    dzbar: complex
    step: float

    @property
    def jacobian(self):
        return abs(self.dz) ** 2 - abs(self.dzbar) ** 2

    @property
    def mu(self):
        return self.dzbar / self.dz


@dataclass(frozen=True)
class InvarianceReport:
    """max |T*μ - μ| over words and samples, with the worst (word, point)"""

    residual: float
    witness: tuple
    words: int
    samples: int


@dataclass(frozen=True)
class PropInvariantReport:
    """Both directions of the invariance criterion for a circle-respecting Möbius map"""

    coefficient_residual: float
    conjugation_residuals: tuple
    tolerance: float

    @property
    def conjugation_residual(self):
        return max(self.conjugation_residuals, default=0.0)

    @property
    def holds(self):
        return max(self.coefficient_residual, self.conjugation_residual) <= self.tolerance
