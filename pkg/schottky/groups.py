"""
The reflection group generated by the boundary circles of Ω: reduced words,
the disks complementary to Ω_k, their area decay and limit-set addresses.
"""
import logging
import math

from django.conf import settings

from geometry.models import ConformalPrimitive, Disk
from geometry.primitives import reflect_disk, reflect_point

from .exceptions import WordBudgetExceeded
from .models import AreaDecay, LimitAddress, LimitPoint, ReducedWord, ReflectedDisk

logger = logging.getLogger(__name__)


def word_count(n, k):
    """Number of reduced words of length k over n generators"""
    if k == 0:
        return 1
    return n * (n - 1) ** (k - 1)


def _budget(budget):
    return settings.SCHOTTKY_LAB['WORD_BUDGET'] if budget is None else budget


def enumerate_words(n, k, budget=None):
    """All reduced words of length k in lexicographic order"""
    if n < 1 or k < 0:
        raise ValueError(f"Need n ≥ 1 and k ≥ 0, got n={n}, k={k}")
    if word_count(n, k) > _budget(budget):
        raise WordBudgetExceeded(f"{word_count(n, k)} words of length {k} exceed the budget")

    words = [()]
    for _ in range(k):
        words = [w + (i,) for w in words for i in range(1, n + 1) if not w or w[-1] != i]
    return [ReducedWord(w) for w in words]


def words_up_to(n, max_length, budget=None):
    """Reduced words of length 0..max_length, shortest first"""
    words = []
    for k in range(max_length + 1):
        words.extend(enumerate_words(n, k, budget))
    return words


def word_to_map(config, word):
    """R_{i1}∘…∘R_{ik} as a (anti-)Möbius primitive"""
    mapping = ConformalPrimitive.identity()
    for index in word:
        mapping = mapping.compose(ConformalPrimitive.reflection(config.disk(index)))
    return mapping


def apply_word(config, word, z):
    """T(z) by successive reflections, innermost generator first"""
    z = complex(z)
    for index in reversed(tuple(word)):
        z = reflect_point(config.disk(index), z)
    return z


def complement_disks(config, k, budget=None):
    """The n(n-1)^k disks whose union is the complement of Ω̄_k inside the plane"""
    if k < 0:
        raise ValueError(f"Reflection depth must be nonnegative, got {k}")
    n = config.n
    total = n * max(n - 1, 0) ** k if k else n
    if total > _budget(budget):
        raise WordBudgetExceeded(f"{total} complement disks at depth {k} exceed the budget")

    level = [ReflectedDisk(ReducedWord(), j, config.disk(j)) for j in range(1, n + 1)]
    for _ in range(k):
        children = []
        for parent in level:
            # R_i(T(B_j)) is the disk of the word i·T whenever i differs from its first letter
            first = parent.word.first or parent.terminal
            for i in range(1, n + 1):
                if i == first:
                    continue
                disk = reflect_disk(config.disk(i), parent.disk)
                if not isinstance(disk, Disk):
                    raise ArithmeticError(f"Image of disk {parent.terminal} under {i}·{parent.word} is not a disk")
                children.append(ReflectedDisk(ReducedWord((i,) + parent.word.indices), parent.terminal, disk))
        level = children
    level.sort(key=lambda reflected: reflected.word.indices + (reflected.terminal,))
    logger.info(f"Complement of Ω_{k}: {len(level)} disks")
    return level


def complement_levels(config, k, budget=None):
    """complement_disks for every depth 0..k"""
    return [complement_disks(config, depth, budget) for depth in range(k + 1)]


def max_complement_disk_area(config, k, budget=None):
    disks = complement_disks(config, k, budget)
    return max((math.pi * d.disk.radius ** 2 for d in disks), default=0.0)


def jacobian_bound(config):
    """max_j (r_j / d_j)^4, d_j the distance from a_j to the nearest other circle"""
    bound = 0.0
    for j, disk in enumerate(config.disks):
        others = [abs(disk.center - o.center) - o.radius for i, o in enumerate(config.disks) if i != j]
        if others:
            bound = max(bound, (disk.radius / min(others)) ** 4)
    return bound


def area_decay_rate(config, k_max, budget=None):
    """Measured q with value(k) ≤ value(0)·q^k, next to the Jacobian bound"""
    areas = tuple(max_complement_disk_area(config, k, budget) for k in range(k_max + 1))
    rates = [(areas[k] / areas[0]) ** (1.0 / k) for k in range(1, k_max + 1) if areas[0] > 0]
    rate = max(rates) if rates else 0.0
    return AreaDecay(areas, rate, jacobian_bound(config))


def word_disk(config, word, index):
    """T(B_index) for a reduced word T, one reflection at a time from the innermost"""
    disk = config.disk(index)
    for i in reversed(tuple(word)):
        disk = reflect_disk(config.disk(i), disk)
    return disk


def nested_disk(config, address, depth):
    """R_{i1}∘…∘R_{id}(B_{i_{d+1}})"""
    return word_disk(config, address.indices[:depth], address.indices[depth])


def limit_point(config, address, depth):
    """Centre and diameter of the depth-d disk of a limit address"""
    if not isinstance(address, LimitAddress):
        address = LimitAddress(tuple(address))
    if not 0 <= depth < address.depth:
        raise ValueError(f"Depth {depth} needs an address of length at least {depth + 1}")
    disk = nested_disk(config, address, depth)
    return LimitPoint(disk.center, disk.diameter, depth)


def limit_set_points(config, depth, budget=None):
    """Centres of the complement disks at a depth, a point cloud near the limit set"""
    return [reflected.disk.center for reflected in complement_disks(config, depth, budget)]


def address_point(config, z, max_depth):
    """
    Reflect z out of the disk containing it until it lands in Ω̄ or max_depth
    reflections are used. Returns (T, z0, inside) with T(z0) = z; inside marks
    a point still in a disk at max_depth.
    """
    z = complex(z)
    word = []
    while True:
        holder = next(
            (j for j, disk in enumerate(config.disks, start=1) if abs(z - disk.center) < disk.radius),
            None,
        )
        if holder is None:
            return ReducedWord(tuple(word)), z, False
        if len(word) >= max_depth:
            return ReducedWord(tuple(word)), z, True
        z = reflect_point(config.disk(holder), z)
        word.append(holder)


def omega_k_contains(config, z, k):
    """z ∈ Ω_k, the union of T(Ω) over words of length at most k"""
    _, _, inside = address_point(config, z, k)
    return not inside
