"""Exact integer and modular arithmetic primitives.

Everything here is pure and exact: rationals are `fractions.Fraction`,
integers are arbitrary precision, and floating point only enters if the
caller passes floats in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

from .errors import InconsistentResiduesError

Real = Union[int, float, Fraction]

__all__ = [
    "ModulusSet",
    "round_half_up",
    "circular_distance",
    "crt_single",
    "crt_single_noncoprime",
    "common_remainder",
]


def round_half_up(x: Real) -> int:
    """Round to the nearest integer, exact halves rounding up.

    Returns the unique integer n with -1/2 <= x - n < 1/2, so 2.5 -> 3 and
    -2.5 -> -2.  This is not banker's rounding.
    """
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot round non-finite value {x!r}")
        # exact binary expansion avoids double rounding near .5 boundaries
        x = Fraction(x)
    return math.floor(x + Fraction(1, 2))


def circular_distance(x: Real, y: Real, period: Real) -> Real:
    """Signed wraparound distance from x to y, reduced into [-period/2, period/2).

    Zero exactly when x and y are congruent modulo the period.  Integer and
    Fraction inputs are handled exactly.
    """
    if not period > 0:
        raise ValueError("period must be positive")
    diff = x - y
    if isinstance(diff, float) or isinstance(period, float):
        turns = round_half_up(diff / period)
    elif isinstance(diff, int) and isinstance(period, int):
        turns = round_half_up(Fraction(diff, period))
    else:
        turns = round_half_up(Fraction(diff) / Fraction(period))
    return diff - turns * period


def common_remainder(value: int, modulus: int) -> int:
    """Remainder of `value` modulo `modulus`, always in [0, modulus).

    Negative inputs reduce mathematically, e.g. (-8) mod 100 = 92.
    """
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    return value % modulus


@dataclass(frozen=True)
class ModulusSet:
    """A moduli system M*m_1 < ... < M*m_K with pairwise-coprime factors m_k.

    M is the shared gcd of the full moduli.  The two-integer uniqueness and
    robustness guarantees need m_1 >= 3 and K >= 3; sets below those floors
    are still constructed, with `guarantee` False.
    """

    M: int
    m: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", tuple(int(v) for v in self.m))
        if self.M < 1:
            raise ValueError("M must be a positive integer")
        if not self.m:
            raise ValueError("at least one coprime factor is required")
        if any(v < 2 for v in self.m):
            raise ValueError("coprime factors must be at least 2")
        if any(a >= b for a, b in zip(self.m, self.m[1:])):
            raise ValueError("coprime factors must be strictly increasing")
        for i in range(len(self.m)):
            for j in range(i + 1, len(self.m)):
                if math.gcd(self.m[i], self.m[j]) != 1:
                    raise ValueError(
                        f"factors {self.m[i]} and {self.m[j]} are not coprime"
                    )

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        """The full moduli M*m_k."""
        return tuple(self.M * v for v in self.m)

    @cached_property
    def m_product(self) -> int:
        """Product of the coprime factors."""
        return math.prod(self.m)

    @property
    def full_range(self) -> int:
        """M times the factor product: the single-integer uniqueness range."""
        return self.M * self.m_product

    @property
    def guarantee(self) -> bool:
        """True when the two-integer guarantees apply (m_1 >= 3 and K >= 3)."""
        return len(self.m) >= 3 and self.m[0] >= 3

    @cached_property
    def crt_basis(self) -> tuple[tuple[int, int], ...]:
        """Per-factor (cofactor, inverse) with cofactor * inverse = 1 mod m_k."""
        total = self.m_product
        out = []
        for mk in self.m:
            cofactor = total // mk
            out.append((cofactor, pow(cofactor, -1, mk)))
        return tuple(out)

    @cached_property
    def coprime_part(self) -> "ModulusSet":
        """The same factor list with M = 1 (self when M is already 1)."""
        return self if self.M == 1 else ModulusSet(1, self.m)


def crt_single(remainders: Sequence[int], moduli: Sequence[int]) -> int:
    """Solve q = remainders[k] mod moduli[k] for pairwise-coprime moduli.

    Returns the unique solution in [0, prod(moduli)).
    """
    if len(remainders) != len(moduli):
        raise ValueError("remainders and moduli must have equal length")
    for i in range(len(moduli)):
        for j in range(i + 1, len(moduli)):
            if math.gcd(moduli[i], moduli[j]) != 1:
                raise ValueError(f"moduli {moduli[i]} and {moduli[j]} are not coprime")
    total = math.prod(moduli)
    acc = 0
    for r, mk in zip(remainders, moduli):
        if not 0 <= r < mk:
            raise ValueError(f"remainder {r} out of range for modulus {mk}")
        cofactor = total // mk
        acc += cofactor * pow(cofactor, -1, mk) * r
    return acc % total


def crt_single_noncoprime(remainders: Sequence[int], ms: ModulusSet) -> int:
    """Reconstruct N from its remainders modulo the full moduli M*m_k.

    All remainders must agree modulo M (share a common remainder); the result
    N = M*Q + r_c is the unique solution in [0, ms.full_range).
    """
    if len(remainders) != len(ms.m):
        raise ValueError("one remainder per modulus is required")
    for r, mk in zip(remainders, ms.moduli):
        if not 0 <= r < mk:
            raise ValueError(f"remainder {r} out of range for modulus {mk}")
    shared = remainders[0] % ms.M
    if any(r % ms.M != shared for r in remainders):
        raise InconsistentResiduesError(
            "remainders do not share a common remainder modulo "
            f"{ms.M}: {[r % ms.M for r in remainders]}"
        )
    quotients = [(r - shared) // ms.M for r in remainders]
    return ms.M * crt_single(quotients, ms.m) + shared
