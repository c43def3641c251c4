"""Robust reconstruction of two integers from erroneous unordered residue pairs.

The pipeline clusters the 2K remainders-mod-M into the two groups separated by
the largest antipodal pair of circular gaps, estimates the two common
remainders from the cluster means, recovers the quotient residues by
cancelling the matched mean, solves them with the error-free pair solver, and
reassembles the integer estimates.  When the recovered quotients differ, the
common-remainder estimates are regrouped per quotient before averaging.

All estimation runs in exact rational arithmetic; rounding happens once, at
the very end.  Accuracy within the maximum remainder error is guaranteed when
that error stays below M/8 and the true pair lies inside the dynamic range;
outside those hypotheses the pipeline still completes on a best-effort basis
and reports `guarantee_ok` False when the dominant-gap condition fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ClusterMembershipError
from .gcrt2 import IntegerPair, ResidueFamily, solve_two_coprime
from .modmath import ModulusSet, round_half_up

__all__ = [
    "ClusterDecomposition",
    "Estimate2",
    "sort_common_remainders",
    "gaps",
    "split_index",
    "form_clusters",
    "decompose",
    "cluster_means",
    "recover_quotients",
    "robust_reconstruct",
]


@dataclass(frozen=True)
class ClusterDecomposition:
    """Sorted common remainders split into two wraparound-aware clusters.

    `split_index` is the 1-based position k0 whose gap, paired with the gap
    half a turn away, separates the two clusters.  `cluster2` entries may be
    negative after the wraparound shift; `cluster1_shifted` is `cluster1`
    downshifted by the modulus when the two clusters straddle the wrap point
    (all elements shift or none do).
    """

    modulus: int
    sorted_remainders: tuple[int, ...]
    sort_order: tuple[int, ...]
    gaps: tuple[int, ...]
    split_index: int
    cluster1: tuple[int, ...]
    cluster2: tuple[int, ...]
    cluster1_shifted: tuple[int, ...]

    @property
    def split_gap_sum(self) -> int:
        half = len(self.gaps) // 2
        return self.gaps[self.split_index - 1] + self.gaps[self.split_index - 1 + half]

    @property
    def split_dominant(self) -> bool:
        """True when the two split gaps cover more than half the circle."""
        return 2 * self.split_gap_sum > self.modulus


@dataclass(frozen=True)
class Estimate2:
    """Full output of the robust pipeline, intermediates included.

    Rational fields are exact.  `value1`/`value2` are the rounded estimates
    paired with `quotient1`/`quotient2`.  The regrouped common-remainder
    estimates `rc_est1`/`rc_est2` exist only on the branch taken when the two
    recovered quotients differ; `diff_indices` lists the 1-based moduli where
    their residues disagree.
    """

    cluster_mean1: Fraction
    cluster_mean2: Fraction
    quotient_pairs: tuple[tuple[int, int], ...]
    quotient1: int
    quotient2: int
    diff_indices: tuple[int, ...]
    rc_est1: Fraction | None
    rc_est2: Fraction | None
    value_est1: Fraction
    value_est2: Fraction
    value1: int
    value2: int
    decomposition: ClusterDecomposition
    guarantee_ok: bool

    @property
    def diff_count(self) -> int:
        return len(self.diff_indices)

    def estimates(self) -> tuple[Fraction, Fraction]:
        """Pre-rounding value estimates."""
        return (self.value_est1, self.value_est2)

    def as_pair(self) -> IntegerPair:
        """Rounded integer estimates as an unordered pair."""
        return IntegerPair(self.value1, self.value2)


def sort_common_remainders(
    fam: ResidueFamily,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Sort the 2K remainders-mod-M ascending, with the stable sort order.

    The flat input order is pair-major: (pairs[0][0], pairs[0][1],
    pairs[1][0], ...).  Duplicates are kept.
    """
    modulus = fam.ms.M
    flat = [r % modulus for pair in fam.pairs for r in pair]
    order = tuple(sorted(range(len(flat)), key=lambda i: (flat[i], i)))
    return tuple(flat[i] for i in order), order


def gaps(sorted_remainders: Sequence[int], modulus: int) -> tuple[int, ...]:
    """Adjacent differences of the sorted values; the last gap wraps around.

    The gaps of 2K sorted values in [0, modulus) always sum to the modulus.
    """
    values = list(sorted_remainders)
    if not values:
        raise ValueError("at least one remainder is required")
    out = [b - a for a, b in zip(values, values[1:])]
    out.append(values[0] - values[-1] + modulus)
    return tuple(out)


def split_index(gap_values: Sequence[int]) -> int:
    """1-based index k in 1..K maximizing gaps[k] + gaps[k+K]; ties pick the smallest k."""
    half = len(gap_values) // 2
    if half < 1 or len(gap_values) != 2 * half:
        raise ValueError("an even number of gaps (two per modulus) is required")
    best = max(range(half), key=lambda i: gap_values[i] + gap_values[i + half])
    return best + 1


def form_clusters(
    sorted_remainders: Sequence[int],
    sort_order: Sequence[int],
    split_idx: int,
    modulus: int,
) -> ClusterDecomposition:
    """Split the sorted remainders at the dominant gap pair into two clusters.

    Cluster 1 takes the K values following position `split_idx`; cluster 2
    takes the rest, with the values beyond position `split_idx + K` shifted
    down by the modulus so each cluster is contiguous on the circle.
    """
    values = list(sorted_remainders)
    half = len(values) // 2
    if len(values) != 2 * half or half < 1:
        raise ValueError("an even number of remainders is required")
    if not 1 <= split_idx <= half:
        raise ValueError(f"split index {split_idx} outside 1..{half}")
    cluster1 = tuple(sorted(values[split_idx : split_idx + half]))
    if split_idx == half:
        cluster2 = tuple(sorted(values[:half]))
    else:
        wrapped = [v - modulus for v in values[split_idx + half :]]
        cluster2 = tuple(sorted(wrapped + values[:split_idx]))
    # straddle shift is all-or-none, keyed on a strict half-circle overshoot
    if 2 * (cluster1[-1] - cluster2[0]) > modulus:
        shifted = tuple(v - modulus for v in cluster1)
    else:
        shifted = cluster1
    return ClusterDecomposition(
        modulus=modulus,
        sorted_remainders=tuple(values),
        sort_order=tuple(sort_order),
        gaps=gaps(values, modulus),
        split_index=split_idx,
        cluster1=cluster1,
        cluster2=cluster2,
        cluster1_shifted=shifted,
    )


def decompose(fam: ResidueFamily) -> ClusterDecomposition:
    """Run the sorting, gap, split, and clustering steps on a residue family."""
    values, order = sort_common_remainders(fam)
    k0 = split_index(gaps(values, fam.ms.M))
    return form_clusters(values, order, k0, fam.ms.M)


def cluster_means(dec: ClusterDecomposition) -> tuple[Fraction, Fraction]:
    """Exact means of the (shifted) first cluster and of the second cluster."""
    count = len(dec.cluster1)
    return (
        Fraction(sum(dec.cluster1_shifted), count),
        Fraction(sum(dec.cluster2), count),
    )


def recover_quotients(
    fam: ResidueFamily,
    mean1: Fraction,
    mean2: Fraction,
    dec: ClusterDecomposition,
) -> ResidueFamily:
    """Estimate the quotient residue pairs by cancelling the matched cluster mean.

    Each remainder is matched to the cluster containing its value mod M (the
    first cluster wins a double match), the corresponding mean is subtracted,
    and the result over M is rounded and reduced into [0, m_k).  The output is
    a coprime-moduli family ready for the pair solver.
    """
    modulus = fam.ms.M
    members1 = {v % modulus for v in dec.cluster1}
    members2 = {v % modulus for v in dec.cluster2}
    # round((r - p/q)/M + 1/2) computed in pure integers, exactly
    num1, den1 = mean1.numerator, mean1.denominator
    num2, den2 = mean2.numerator, mean2.denominator
    pairs = []
    for (a, b), mk in zip(fam.pairs, fam.ms.m):
        quotients = []
        for r in (a, b):
            rc = r % modulus
            if rc in members1:
                num, den = num1, den1
            elif rc in members2:
                num, den = num2, den2
            else:
                raise ClusterMembershipError(
                    f"remainder {r} (mod {modulus}: {rc}) matches neither cluster"
                )
            quotients.append(
                ((2 * (den * r - num) + den * modulus) // (2 * den * modulus)) % mk
            )
        pairs.append((quotients[0], quotients[1]))
    return ResidueFamily(fam.ms.coprime_part, tuple(pairs))


def _matching_pool_value(remainder: int, pool: Sequence[int], modulus: int) -> int:
    for candidate in pool:
        if (remainder - candidate) % modulus == 0:
            return candidate
    raise ClusterMembershipError(
        f"remainder {remainder} has no zero-distance match among {pool}"
    )


def robust_reconstruct(fam: ResidueFamily) -> Estimate2:
    """Estimate two integers from erroneous unordered residue pairs.

    Runs the clustering pipeline end to end.  When both recovered quotients
    agree, the two estimates share that quotient and differ by the cluster
    means.  Otherwise each quotient is re-attached to the remainders that
    produced it (their residues differ at every modulus in `diff_indices`),
    the matching shifted common remainders are averaged per quotient, and the
    estimates become M * quotient + average.

    Raises:
        InconsistentResiduesError / AmbiguousResiduesError: propagated from
            the pair solver when the recovered quotient residues admit no (or
            several) pairs inside the dynamic range.
        ClusterMembershipError: a remainder matches neither cluster; cannot
            happen for decompositions produced by this pipeline.
    """
    ms = fam.ms
    modulus = ms.M
    dec = decompose(fam)
    mean1, mean2 = cluster_means(dec)
    qfam = recover_quotients(fam, mean1, mean2, dec)
    qpair = solve_two_coprime(qfam)
    q1, q2 = qpair.n1, qpair.n2
    guarantee_ok = ms.guarantee and dec.split_dominant

    if q1 == q2:
        rc1 = rc2 = None
        diff: tuple[int, ...] = ()
        est1 = modulus * q1 + mean1
        est2 = modulus * q2 + mean2
    else:
        diff = tuple(
            k + 1 for k, mk in enumerate(ms.m) if q1 % mk != q2 % mk
        )
        pool = list(dec.cluster1_shifted) + list(dec.cluster2)
        total1 = 0
        total2 = 0
        for k in diff:
            mk = ms.m[k - 1]
            qa, _ = qfam.pairs[k - 1]
            ra, rb = fam.pairs[k - 1]
            if q1 % mk == qa:
                r_for_q1, r_for_q2 = ra, rb
            else:
                r_for_q1, r_for_q2 = rb, ra
            total1 += _matching_pool_value(r_for_q1, pool, modulus)
            total2 += _matching_pool_value(r_for_q2, pool, modulus)
        rc1 = Fraction(total1, len(diff))
        rc2 = Fraction(total2, len(diff))
        est1 = modulus * q1 + rc1
        est2 = modulus * q2 + rc2

    return Estimate2(
        cluster_mean1=mean1,
        cluster_mean2=mean2,
        quotient_pairs=qfam.pairs,
        quotient1=q1,
        quotient2=q2,
        diff_indices=diff,
        rc_est1=rc1,
        rc_est2=rc2,
        value_est1=Fraction(est1),
        value_est2=Fraction(est2),
        value1=round_half_up(est1),
        value2=round_half_up(est2),
        decomposition=dec,
        guarantee_ok=guarantee_ok,
    )
