"""Error-free reconstruction of two integers from unordered residue pairs."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .dynrange import dynamic_range_coprime
from .errors import AmbiguousResiduesError, InconsistentResiduesError
from .modmath import ModulusSet, crt_single_noncoprime

__all__ = ["ResidueFamily", "IntegerPair", "solve_two_coprime", "solve_two_gcd"]


@dataclass(frozen=True)
class ResidueFamily:
    """K unordered remainder pairs, one per modulus M*m_k.

    Pair order carries no information about which integer produced which
    remainder; two integers sharing a remainder are stored as a repeated pair.
    """

    ms: ModulusSet
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if len(pairs) != len(self.ms.m):
            raise ValueError("one remainder pair per modulus is required")
        for (a, b), mk in zip(pairs, self.ms.moduli):
            if not (0 <= a < mk and 0 <= b < mk):
                raise ValueError(f"pair ({a}, {b}) out of range for modulus {mk}")

    @classmethod
    def from_integers(cls, ms: ModulusSet, n1: int, n2: int) -> ResidueFamily:
        """Exact residue pairs of two nonnegative integers."""
        if n1 < 0 or n2 < 0:
            raise ValueError("integers must be nonnegative")
        return cls(ms, tuple((n1 % mk, n2 % mk) for mk in ms.moduli))

    def common_remainder_pairs(self) -> tuple[tuple[int, int], ...]:
        """Every pair reduced modulo the shared factor M."""
        return tuple((a % self.ms.M, b % self.ms.M) for a, b in self.pairs)


@dataclass(frozen=True)
class IntegerPair:
    """An unordered two-integer solution, normalized so that n1 <= n2."""

    n1: int
    n2: int

    def __post_init__(self) -> None:
        a, b = self.n1, self.n2
        if a > b:
            object.__setattr__(self, "n1", b)
            object.__setattr__(self, "n2", a)

    def values(self) -> tuple[int, int]:
        return (self.n1, self.n2)


def solve_two_coprime(fam: ResidueFamily) -> IntegerPair:
    """Solve for the unordered pair {Q1, Q2} inside the coprime dynamic range.

    Enumerates the 2^(K-1) correspondences between pair elements and the two
    unknowns (the first modulus is pinned by tone symmetry), CRT-solves each
    candidate, and keeps those with both values in [0, d) whose residue pairs
    reproduce the input.  Exactly one surviving pair is required.

    Raises:
        InconsistentResiduesError: no candidate reproduces the residues.
        AmbiguousResiduesError: several distinct pairs survive, which can only
            happen for inputs outside the guaranteed dynamic range.
    """
    ms = fam.ms
    if ms.M != 1:
        raise ValueError("coprime solver requires a modulus set with M = 1")
    d = dynamic_range_coprime(ms).d
    basis = ms.crt_basis
    total = ms.m_product
    sorted_pairs = [sorted(p) for p in fam.pairs]
    first, rest = fam.pairs[0], fam.pairs[1:]
    survivors: set[tuple[int, int]] = set()
    for flips in product((False, True), repeat=len(rest)):
        left = [first[0]]
        right = [first[1]]
        for (a, b), flip in zip(rest, flips):
            left.append(b if flip else a)
            right.append(a if flip else b)
        qa = sum(cof * inv * r for (cof, inv), r in zip(basis, left)) % total
        qb = sum(cof * inv * r for (cof, inv), r in zip(basis, right)) % total
        if qa >= d or qb >= d:
            continue
        candidate = (qa, qb) if qa <= qb else (qb, qa)
        if candidate in survivors:
            continue
        reproduced = all(
            sorted((qa % mk, qb % mk)) == want
            for mk, want in zip(ms.m, sorted_pairs)
        )
        if reproduced:
            survivors.add(candidate)
    if not survivors:
        raise InconsistentResiduesError(
            "no pair within the dynamic range matches the residue sets"
        )
    if len(survivors) > 1:
        raise AmbiguousResiduesError(
            f"{len(survivors)} pairs match the residue sets: "
            "inputs exceed the dynamic range"
        )
    (pair,) = survivors
    return IntegerPair(*pair)


def solve_two_gcd(fam: ResidueFamily) -> IntegerPair:
    """Reconstruct {N1, N2} from error-free unordered residue pairs.

    With distinct common remainders the remainders split into two
    single-integer groups, each solved on its own (unique for pairs below
    M * prod(m)).  With a shared common remainder the problem reduces to the
    coprime pair solver on the quotients (unique for pairs below M*d).
    """
    ms = fam.ms
    rc_pairs = fam.common_remainder_pairs()
    rc_multiset = tuple(sorted(rc_pairs[0]))
    if any(tuple(sorted(p)) != rc_multiset for p in rc_pairs):
        raise InconsistentResiduesError(
            f"common remainder sets disagree across moduli: {rc_pairs}"
        )
    rc1, rc2 = rc_multiset
    if rc1 != rc2:
        group1, group2 = [], []
        for (a, b), (ca, _) in zip(fam.pairs, rc_pairs):
            if ca == rc1:
                group1.append(a)
                group2.append(b)
            else:
                group1.append(b)
                group2.append(a)
        return IntegerPair(
            crt_single_noncoprime(group1, ms),
            crt_single_noncoprime(group2, ms),
        )
    quotients = tuple(
        ((a - rc1) // ms.M, (b - rc1) // ms.M) for a, b in fam.pairs
    )
    qpair = solve_two_coprime(ResidueFamily(ModulusSet(1, ms.m), quotients))
    return IntegerPair(ms.M * qpair.n1 + rc1, ms.M * qpair.n2 + rc1)
