"""
Conformal modulus of circular annuli and the two modulus inequalities used by
the quasiconformality argument: superadditivity and Teichmüller's bound.
"""
import logging
import math

from scipy.special import ellipkm1

from .exceptions import InvalidNestingError, NoInformationError
from .models import CircularAnnulus, ModulusChainBound

logger = logging.getLogger(__name__)


def annulus_modulus(annulus):
    """Mod A = log(r_out / r_in) / 2π"""
    return math.log(annulus.r_out / annulus.r_in) / (2.0 * math.pi)


def _check_nesting(annulus, nested, tol):
    scale = annulus.r_out
    for j, sub in enumerate(nested, start=1):
        offset = abs(sub.center - annulus.center)
        # B(c_j, r_in_j) ⊇ B(c, r_in) and B(c_j, r_out_j) ⊆ B(c, r_out)
        if offset + annulus.r_in > sub.r_in + tol * scale:
            raise InvalidNestingError(f"Sub-annulus {j} does not surround the inner boundary")
        if offset + sub.r_out > annulus.r_out + tol * scale:
            raise InvalidNestingError(f"Sub-annulus {j} leaves the outer boundary")

    ordered = sorted(nested, key=lambda sub: sub.r_out)
    for inner, outer in zip(ordered[:-1], ordered[1:]):
        if abs(inner.center - outer.center) + inner.r_out > outer.r_in + tol * scale:
            raise InvalidNestingError(f"Sub-annuli {inner} and {outer} overlap")


def superadditivity_margin(annulus, nested, declared=False, tol=1e-12):
    """
    Mod(A) - Σ Mod(A_j) for disjoint circular annuli nested inside A.
    Nesting is checked geometrically unless the caller declares it.
    """
    nested = list(nested)
    if not declared:
        _check_nesting(annulus, nested, tol)
    return annulus_modulus(annulus) - sum(annulus_modulus(sub) for sub in nested)


def grotzsch_mu(x):
    """
    μ(x) = (π/2)·K(√(1-x²))/K(x), the modulus of the Grötzsch ring
    B(0,1) \\ [0,x] in the log convention.
    """
    x = float(x)
    if not 0 < x < 1:
        raise ValueError(f"μ is defined on (0,1), got {x}")
    # ellipkm1(p) = K(m = 1 - p) keeps both ends of (0,1) accurate
    k_prime = ellipkm1(x * x)
    k = ellipkm1((1.0 - x) * (1.0 + x))
    return 0.5 * math.pi * float(k_prime) / float(k)


def teichmuller_bound(z1, z2):
    """2μ(√(|z1|/(|z1|+|z2|))) bounding annuli separating {0, z1} from {z2, ∞}"""
    a, b = abs(complex(z1)), abs(complex(z2))
    if a == 0 or b == 0:
        raise ValueError("Teichmüller's bound needs z1, z2 ≠ 0")
    return 2.0 * grotzsch_mu(math.sqrt(a / (a + b)))


def separating_witness(z1, z2):
    """Largest centred circular annulus separating {0, z1} from {z2, ∞}"""
    a, b = abs(complex(z1)), abs(complex(z2))
    if not 0 < a < b:
        return None
    return CircularAnnulus(0j, a, b)


def modulus_chain_bound(c1, c2, mod_a):
    """
    Lower bounds for Mod(f(A)) when every annulus of modulus C1 maps to one of
    modulus at least C2. With L = e^{2πC1} the linear bound is
    (1/2)·(2πC2/log L)·Mod(A); the count bound uses ⌊Mod(A)/C1⌋ sub-annuli.

    The linear bound is the formula value as written. For C2 = C1 and
    Mod(A) = 2·C1 it equals C1, not C1/2.
    """
    if not c1 > 0 or not c2 > 0:
        raise ValueError(f"C1 and C2 must be positive, got {c1} and {c2}")
    if mod_a <= c1:
        raise NoInformationError(f"Mod(A) = {mod_a:.6g} does not exceed C1 = {c1:.6g}")

    log_l = 2.0 * math.pi * c1
    constant = 0.5 * (2.0 * math.pi * c2 / log_l)
    count = math.floor(mod_a / c1)
    return ModulusChainBound(
        linear=constant * mod_a,
        count_based=count * c2,
        constant=constant,
    )
