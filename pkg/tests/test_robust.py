"""Tests for the robust reconstruction pipeline."""

from fractions import Fraction

import numpy as np
import pytest

from robustcrt import (
    ClusterMembershipError,
    ModulusSet,
    ResidueFamily,
    cluster_means,
    decompose,
    form_clusters,
    gaps,
    recover_quotients,
    robust_reconstruct,
    sort_common_remainders,
    split_index,
)

MS = ModulusSet(100, (3, 5, 7))
NOISY = ResidueFamily(MS, ((108, 209), (92, 399), (397, 507)))


class TestDecomposition:
    def test_sorting(self):
        values, order = sort_common_remainders(NOISY)
        assert values == (7, 8, 9, 92, 97, 99)
        # flat pair-major input was (8, 9, 92, 99, 97, 7)
        assert order == (5, 0, 1, 2, 4, 3)

    def test_gaps(self):
        assert gaps((7, 8, 9, 92, 97, 99), 100) == (1, 1, 83, 5, 2, 8)
        assert sum(gaps((7, 8, 9, 92, 97, 99), 100)) == 100

    def test_gaps_constant_sequence(self):
        assert gaps((42, 42, 42, 42, 42, 42), 100) == (0, 0, 0, 0, 0, 100)

    def test_split_index(self):
        assert split_index((1, 1, 83, 5, 2, 8)) == 3

    def test_split_index_tie_breaks_low(self):
        assert split_index((10, 10, 10, 10, 10, 10)) == 1

    def test_clusters(self):
        dec = decompose(NOISY)
        assert dec.split_index == 3
        assert dec.split_gap_sum == 91
        assert dec.split_dominant
        assert dec.cluster1 == (92, 97, 99)
        assert dec.cluster2 == (7, 8, 9)
        assert dec.cluster1_shifted == (-8, -3, -1)

    def test_cluster_spread_within_twice_noise(self):
        dec = decompose(NOISY)
        tau = 11
        assert dec.cluster1[-1] - dec.cluster1[0] <= 2 * tau
        assert dec.cluster2[-1] - dec.cluster2[0] <= 2 * tau

    def test_no_shift_when_clusters_close(self):
        dec = form_clusters((10, 10, 10, 40, 40, 40), (0, 1, 2, 3, 4, 5), 3, 100)
        assert dec.cluster1 == (40, 40, 40)
        assert dec.cluster1_shifted == (40, 40, 40)

    def test_wrapped_second_cluster(self):
        # split below K shifts the tail values down by the modulus
        values = (1, 2, 3, 50, 51, 98)
        dec = form_clusters(values, tuple(range(6)), split_index(gaps(values, 100)), 100)
        assert dec.split_index == 3
        assert dec.cluster1 == (50, 51, 98)
        assert dec.cluster2 == (1, 2, 3)

    def test_gap_identity_randomized(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            fam = ResidueFamily(
                MS, tuple((int(rng.integers(0, mk)), int(rng.integers(0, mk))) for mk in MS.moduli)
            )
            values, _ = sort_common_remainders(fam)
            assert sum(gaps(values, MS.M)) == MS.M


class TestClusterMeans:
    def test_example_means(self):
        dec = decompose(NOISY)
        assert cluster_means(dec) == (Fraction(-4), Fraction(8))

    def test_unshifted_means(self):
        dec = form_clusters((10, 10, 10, 40, 40, 40), (0, 1, 2, 3, 4, 5), 3, 100)
        assert cluster_means(dec) == (Fraction(40), Fraction(10))


class TestRecoverQuotients:
    def test_example_quotients(self):
        dec = decompose(NOISY)
        mean1, mean2 = cluster_means(dec)
        qfam = recover_quotients(NOISY, mean1, mean2, dec)
        assert qfam.pairs == ((1, 2), (1, 4), (4, 5))
        assert qfam.ms.M == 1

    def test_zero_error_distinct_remainders(self):
        fam = ResidueFamily.from_integers(MS, 2169, 1095)
        dec = decompose(fam)
        mean1, mean2 = cluster_means(dec)
        qfam = recover_quotients(fam, mean1, mean2, dec)
        truth = tuple(
            tuple(sorted((21 % mk, 10 % mk))) for mk in MS.m
        )
        assert tuple(tuple(sorted(p)) for p in qfam.pairs) == truth

    def test_foreign_decomposition_rejected(self):
        other = decompose(ResidueFamily.from_integers(MS, 950, 1350))
        mean1, mean2 = cluster_means(other)
        with pytest.raises(ClusterMembershipError):
            recover_quotients(NOISY, mean1, mean2, other)


class TestRobustReconstruct:
    def test_full_example(self):
        est = robust_reconstruct(NOISY)
        assert (est.cluster_mean1, est.cluster_mean2) == (Fraction(-4), Fraction(8))
        assert est.quotient_pairs == ((1, 2), (1, 4), (4, 5))
        assert (est.quotient1, est.quotient2) == (11, 19)
        assert est.diff_indices == (1, 2, 3)
        assert est.diff_count == 3
        assert (est.rc_est1, est.rc_est2) == (Fraction(-2, 3), Fraction(14, 3))
        assert (est.value_est1, est.value_est2) == (
            Fraction(3298, 3),
            Fraction(5714, 3),
        )
        assert (est.value1, est.value2) == (1099, 1905)
        assert est.guarantee_ok
        # within the remainder error bound of the true pair {1098, 1898}
        assert max(abs(1099 - 1098), abs(1905 - 1898)) <= 11

    def test_zero_error_equal_common_remainders(self):
        fam = ResidueFamily.from_integers(MS, 1098, 1898)
        est = robust_reconstruct(fam)
        assert est.as_pair().values() == (1098, 1898)
        assert (est.value_est1, est.value_est2) == (1098, 1898)

    def test_zero_error_distinct_common_remainders(self):
        fam = ResidueFamily.from_integers(MS, 2169, 1095)
        est = robust_reconstruct(fam)
        assert est.as_pair().values() == (1095, 2169)

    def test_zero_error_equal_integers(self):
        fam = ResidueFamily.from_integers(MS, 321, 321)
        est = robust_reconstruct(fam)
        assert est.as_pair().values() == (321, 321)

    def test_zero_error_exhaustive_small_instance(self):
        ms = ModulusSet(2, (3, 5, 7))
        for b in range(44):
            for a in range(b + 1):
                fam = ResidueFamily.from_integers(ms, a, b)
                assert robust_reconstruct(fam).as_pair().values() == (a, b)

    def test_pair_order_invariance(self):
        want = robust_reconstruct(NOISY)
        for mask in range(8):
            flipped = tuple(
                (b, a) if mask >> k & 1 else (a, b)
                for k, (a, b) in enumerate(NOISY.pairs)
            )
            est = robust_reconstruct(ResidueFamily(MS, flipped))
            assert est.as_pair().values() == want.as_pair().values()
            assert sorted(est.estimates()) == sorted(want.estimates())

    def test_matched_error_bound_randomized(self):
        rng = np.random.default_rng(42)
        for _ in range(400)):
            pass


def _noisy_family(rng, ms, bound, tau):
    n1 = int(rng.integers(0, bound))
    n2 = int(rng.integers(0, bound))
    pairs = tuple(
        (
            int((n1 + rng.integers(-tau, tau + 1)) % mk),
            int((n2 + rng.integers(-tau, tau + 1)) % mk),
        )
        for mk in ms.moduli
    )
    return (n1, n2), ResidueFamily(ms, pairs)


class TestTheoremProperties:
    def test_matched_error_bound_randomized(self):
        rng = np.random.default_rng(42)
        for _ in range(500):
            tau = int(rng.integers(0, 13))
            (n1, n2), fam = _noisy_family(rng, MS, 2000, tau)
            est = robust_reconstruct(fam)
            assert est.guarantee_ok
            (e1, t1), (e2, t2) = zip(
                sorted(est.estimates()), sorted((n1, n2))
            )
            assert abs(e1 - t1) <= tau and abs(e2 - t2) <= tau
            # rounding can add at most half, and the result stays integral
            assert abs(est.value1 - min(t1, t2)) <= tau + Fraction(1, 2)

    def test_unique_dominant_split_randomized(self):
        rng = np.random.default_rng(99)
        for _ in range(500):
            tau = int(rng.integers(0, 13))
            _, fam = _noisy_family(rng, MS, 2200, tau)
            dec = decompose(fam)
            half = len(dec.gaps) // 2
            dominant = [
                k
                for k in range(half)
                if 2 * (dec.gaps[k] + dec.gaps[k + half]) > MS.M
            ]
            assert dominant == [dec.split_index - 1]
            assert dec.cluster1[-1] - dec.cluster1[0] <= 2 * tau
            assert dec.cluster2[-1] - dec.cluster2[0] <= 2 * tau

    def test_every_remainder_matches_a_cluster(self):
        rng = np.random.default_rng(123)
        for _ in range(200):
            tau = int(rng.integers(0, 13))
            _, fam = _noisy_family(rng, MS, 2200, tau)
            dec = decompose(fam)
            members = {v % MS.M for v in dec.cluster1} | {
                v % MS.M for v in dec.cluster2
            }
            for a, b in fam.pairs:
                assert a % MS.M in members and b % MS.M in members

    def test_large_noise_still_completes_when_solvable(self):
        # far beyond the guarantee; the pipeline either answers with the
        # guarantee flag reflecting the gap condition, or raises a solver error
        from robustcrt import ReconstructionError

        rng = np.random.default_rng(7)
        flag_seen = False
        for _ in range(300):
            _, fam = _noisy_family(rng, MS, 2000, 40)
            try:
                est = robust_reconstruct(fam)
            except ReconstructionError:
                continue
            if not est.guarantee_ok:
                flag_seen = True
        assert flag_seen
