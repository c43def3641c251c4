"""Reference estimators: exhaustive folding search and a non-robust baseline.

The searching estimator is the comparison oracle, deliberately exhaustive (no
pruning): its cost grows with the dynamic range, while the robust pipeline's
does not.  The non-robust estimator reconstructs through a fixed positional
grouping with no wraparound handling, which is exactly what makes it exhibit
an error floor on noisy inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .dynrange import dynamic_range_coprime
from .gcrt2 import IntegerPair, ResidueFamily
from .modmath import crt_single, round_half_up

__all__ = ["FoldingSolution", "searching_solution", "searching_estimate", "nonrobust_estimate"]


@dataclass(frozen=True)
class FoldingSolution:
    """Best folding assignment found by the exhaustive search.

    `assignment[k]` is True where the remainder pair at modulus k was swapped
    relative to its input order (the first entry is always False).  The
    unfolded candidates n*M*m_k + r all lie in [0, M*d).  `objective` is K
    times the summed squared deviation of the candidates from their per-tone
    mean, an exact integer, totalled over both tones.
    """

    assignment: tuple[bool, ...]
    folding1: tuple[int, ...]
    folding2: tuple[int, ...]
    candidates1: tuple[int, ...]
    candidates2: tuple[int, ...]
    estimate1: int
    estimate2: int
    objective: int


def _spread(combo: tuple[int, ...], count: int) -> int:
    total = sum(combo)
    return count * sum(c * c for c in combo) - total * total


def searching_solution(fam: ResidueFamily) -> FoldingSolution:
    """Exhaustive search over correspondences and joint folding vectors.

    For each of the 2^(K-1) pair correspondences (the first modulus is pinned
    by tone symmetry), every joint combination of the two tones' folding
    vectors is evaluated; the smallest total spread wins, with ties broken by
    smaller estimates, then smaller candidate vectors.  The enumeration is the
    point of this baseline: its cost grows with the folding space, squared.
    """
    ms = fam.ms
    moduli = ms.moduli
    count = len(moduli)
    limit = ms.M * dynamic_range_coprime(ms).d
    first, rest = fam.pairs[0], fam.pairs[1:]
    best_key = None
    best = None
    for flips in product((False, True), repeat=len(rest)):
        tone1 = [first[0]]
        tone2 = [first[1]]
        for (a, b), flip in zip(rest, flips):
            tone1.append(b if flip else a)
            tone2.append(a if flip else b)
        options1 = [range(r, limit, mk) for r, mk in zip(tone1, moduli)]
        options2 = [range(r, limit, mk) for r, mk in zip(tone2, moduli)]
        for combo1 in product(*options1):
            spread1 = _spread(combo1, count)
            for combo2 in product(*options2):
                objective = spread1 + _spread(combo2, count)
                if best_key is not None and objective > best_key[0]:
                    continue
                est1 = round_half_up(Fraction(sum(combo1), count))
                est2 = round_half_up(Fraction(sum(combo2), count))
                key = (objective, tuple(sorted((est1, est2))), combo1, combo2)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (flips, combo1, combo2, est1, est2)
    flips, combo1, combo2, est1, est2 = best
    return FoldingSolution(
        assignment=(False,) + flips,
        folding1=tuple((c - r) // mk for c, r, mk in zip(combo1, _tone(fam, flips, 0), moduli)),
        folding2=tuple((c - r) // mk for c, r, mk in zip(combo2, _tone(fam, flips, 1), moduli)),
        candidates1=combo1,
        candidates2=combo2,
        estimate1=est1,
        estimate2=est2,
        objective=best_key[0],
    )


def _tone(fam: ResidueFamily, flips: tuple[bool, ...], which: int) -> list[int]:
    out = [fam.pairs[0][which]]
    for (a, b), flip in zip(fam.pairs[1:], flips):
        pair = (b, a) if flip else (a, b)
        out.append(pair[which])
    return out


def searching_estimate(fam: ResidueFamily) -> IntegerPair:
    """Rounded per-tone means of the best folding solution."""
    sol = searching_solution(fam)
    return IntegerPair(sol.estimate1, sol.estimate2)


def nonrobust_estimate(fam: ResidueFamily) -> IntegerPair:
    """Group remainders by within-pair position and reconstruct each group.

    The position grouping stands in for an arbitrary correspondence choice:
    each group's common remainder is estimated as the plain rounded average of
    its remainders mod M (no clustering, no wraparound handling), then the
    group is solved as a single-integer system.  Misordered pairs or wrapped
    remainders corrupt the averages, which is the error floor this baseline
    demonstrates.
    """
    ms = fam.ms
    modulus = ms.M
    count = len(ms.m)
    values = []
    for position in (0, 1):
        remainders = [pair[position] for pair in fam.pairs]
        rc = round_half_up(Fraction(sum(r % modulus for r in remainders), count))
        quotients = [
            round_half_up(Fraction(r - rc, modulus)) % mk
            for r, mk in zip(remainders, ms.m)
        ]
        values.append(modulus * crt_single(quotients, ms.m) + rc)
    return IntegerPair(values[0], values[1])
