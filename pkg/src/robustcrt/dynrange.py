"""Largest two-integer dynamic ranges, plus a brute-force verification oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .modmath import ModulusSet

__all__ = [
    "DynamicRangeReport",
    "dynamic_range_coprime",
    "dynamic_range_gcd",
    "tightness_counterexample",
    "verify_dynamic_range",
    "VERIFY_BOUND_LIMIT",
]

# pair enumeration is quadratic in the bound; past this it stops being a desk job
VERIFY_BOUND_LIMIT = 5000


@dataclass(frozen=True)
class DynamicRangeReport:
    """Minimizing subset split of the coprime factors and the ranges it yields.

    `subset` holds 1-based indices into the factor list; d = d1 + d2 where d1
    is the product over the subset and d2 the product over its complement, and
    d1 * d2 equals the full factor product.  `d_guaranteed` marks the
    coprime-case uniqueness condition (second-largest factor >= 3);
    `Md_guaranteed` marks the shared-gcd condition (smallest factor >= 3 and
    more than two factors).
    """

    d: int
    subset: tuple[int, ...]
    d1: int
    d2: int
    Md: int
    d_guaranteed: bool
    Md_guaranteed: bool


@lru_cache(maxsize=None)
def dynamic_range_coprime(ms: ModulusSet) -> DynamicRangeReport:
    """Exhaustively minimize d1 + d2 over all 2^K subset splits of the factors.

    Ties resolve to the lexicographically smallest 1-based index subset (the
    empty subset, contributing 1 + product, is included but never optimal for
    factors >= 2 and K >= 2).
    """
    k = len(ms.m)
    total = ms.m_product
    best: tuple[int, tuple[int, ...]] | None = None
    for mask in range(2**k):
        subset = tuple(i + 1 for i in range(k) if mask >> i & 1)
        d1 = math.prod(ms.m[i - 1] for i in subset)
        candidate = (d1 + total // d1, subset)
        if best is None or candidate < best:
            best = candidate
    d, subset = best
    d1 = math.prod(ms.m[i - 1] for i in subset)
    return DynamicRangeReport(
        d=d,
        subset=subset,
        d1=d1,
        d2=total // d1,
        Md=ms.M * d,
        d_guaranteed=k >= 2 and ms.m[-2] >= 3,
        Md_guaranteed=ms.guarantee,
    )


def dynamic_range_gcd(ms: ModulusSet) -> int:
    """Largest range [0, M*d) in which unordered pairs have unique residue sets."""
    return ms.M * dynamic_range_coprime(ms).d


def tightness_counterexample(ms: ModulusSet) -> tuple[frozenset[int], frozenset[int]]:
    """Two distinct 2-sets with identical residue sets at every modulus.

    The first is {0, M*d}; the second {M*d1, M*d2} from the minimizing split.
    Their existence shows the dynamic range bound M*d cannot be enlarged.
    """
    report = dynamic_range_coprime(ms)
    return (
        frozenset({0, report.Md}),
        frozenset({ms.M * report.d1, ms.M * report.d2}),
    )


def _family_key(a: int, b: int, moduli: tuple[int, ...]) -> int:
    # residue SETS per modulus, packed into one integer key
    key = 0
    for mk in moduli:
        ra, rb = a % mk, b % mk
        if ra > rb:
            ra, rb = rb, ra
        key = (key * mk + ra) * mk + rb
    return key


def verify_dynamic_range(ms: ModulusSet, bound: int) -> bool:
    """True when no two distinct pairs drawn from [0, bound) share residue sets.

    Exhaustive oracle: checking the claimed range R passes at bound = R and
    fails at bound = R + 1.  Bounds above VERIFY_BOUND_LIMIT are rejected.
    """
    if bound < 1:
        raise ValueError("bound must be a positive integer")
    if bound > VERIFY_BOUND_LIMIT:
        raise ValueError(
            f"bound {bound} exceeds the enumeration limit {VERIFY_BOUND_LIMIT}"
        )
    moduli = ms.moduli
    seen: set[int] = set()
    for b in range(1, bound):
        for a in range(b):
            key = _family_key(a, b, moduli)
            if key in seen:
                return False
            seen.add(key)
    return True
