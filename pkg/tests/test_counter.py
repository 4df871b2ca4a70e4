"""Exact mean distributions and window counts, pinned to brute force."""

import random
import threading
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morse_entropy import (
    Boundary,
    Kind,
    MeanDistribution,
    ResourceCapError,
    WindowQuery,
    clear_distribution_cache,
    count_window,
    finite_rate,
    mean_distribution,
    preset,
    random_spectrum,
    validate_spectrum,
)
from _oracles import brute_window_count, tuple_mean_counts

CIRCLE = preset("circle")
TORUS = preset("torus")


def test_circle_two_copies_critical_counts():
    # enumeration oracle: (0,0) -> 0, (0,1) and (1,0) -> 1/2, (1,1) -> 1
    dist = mean_distribution(CIRCLE, 2, Kind.CRITICAL)
    assert dist.counts == (1, 2, 1)
    assert dist.grid_denom == 2
    assert dist.total == CIRCLE.p ** 2


def test_single_copy_is_the_site_histogram():
    dist = mean_distribution(TORUS, 1, Kind.CRITICAL)
    assert dist.counts == (1, 2, 1)
    assert mean_distribution(TORUS, 1, Kind.BETTI).counts == (1, 2, 1)


def test_matches_enumeration_on_presets():
    for spec in (CIRCLE, TORUS):
        for kind in Kind:
            for n in range(1, 6):
                dist = mean_distribution(spec, n, kind)
                expected = tuple_mean_counts(spec, n, kind)
                for s, count in enumerate(dist.counts):
                    assert count == expected.get(Fraction(s, dist.grid_denom), 0)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(1, 4), kind=st.sampled_from(Kind))
def test_matches_enumeration_on_random_spectra(seed, n, kind):
    spec = random_spectrum(random.Random(seed))
    dist = mean_distribution(spec, n, kind, cap=1 << 20)
    expected = tuple_mean_counts(spec, n, kind)
    assert dist.total == sum(expected.values())
    for s, count in enumerate(dist.counts):
        assert count == expected.get(Fraction(s, dist.grid_denom), 0)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(1, 6))
def test_mass_identity(seed, n):
    spec = random_spectrum(random.Random(seed))
    crit = mean_distribution(spec, n, Kind.CRITICAL, cap=1 << 20)
    bet = mean_distribution(spec, n, Kind.BETTI, cap=1 << 20)
    assert crit.total == spec.p ** n
    assert bet.total == spec.total_betti ** n
    assert crit.counts[0] >= 1 and crit.counts[-1] >= 1
    assert bet.counts[0] >= 1 and bet.counts[-1] >= 1
    # pointwise domination on the shared grid
    assert all(b <= c for b, c in zip(bet.counts, crit.counts))


def test_window_count_examples():
    dist = mean_distribution(CIRCLE, 2, Kind.CRITICAL)
    assert count_window(dist, WindowQuery(Fraction(1, 2), Fraction(1, 4))) == 2
    # whole space
    assert count_window(dist, WindowQuery(Fraction(1, 2), Fraction(1, 2))) == 4
    # empty window between grid points
    assert count_window(dist, WindowQuery(Fraction(1, 5), Fraction(1, 100))) == 0

    betti = mean_distribution(CIRCLE, 2, Kind.BETTI)
    assert (
        count_window(
            betti, WindowQuery(Fraction(1, 2), Fraction(1, 2), Boundary.CLOSED_OPEN)
        )
        == 3
    )


def test_boundary_conventions_differ_exactly_on_grid_edges():
    dist = mean_distribution(CIRCLE, 2, Kind.CRITICAL)
    # upper edge lands on the grid: closed keeps mean 1/2, half-open drops it
    closed = count_window(dist, WindowQuery(Fraction(1, 4), Fraction(1, 4)))
    half = count_window(
        dist, WindowQuery(Fraction(1, 4), Fraction(1, 4), Boundary.CLOSED_OPEN)
    )
    assert closed == 3
    assert half == 1
    # lower edge is closed under both conventions
    at_zero = count_window(
        dist, WindowQuery(Fraction(0), Fraction(1, 2), Boundary.CLOSED_OPEN)
    )
    assert at_zero == 1


def test_windows_clip_to_the_grid():
    dist = mean_distribution(CIRCLE, 2, Kind.CRITICAL)
    assert count_window(dist, WindowQuery(Fraction(0), Fraction(3, 4))) == 3
    assert count_window(dist, WindowQuery(Fraction(1), Fraction(3, 4))) == 3


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 5_000),
    n=st.integers(1, 4),
    kind=st.sampled_from(Kind),
    c_num=st.integers(0, 24),
    d_num=st.integers(1, 12),
    half=st.booleans(),
)
def test_window_count_matches_brute_force(seed, n, kind, c_num, d_num, half):
    spec = random_spectrum(random.Random(seed))
    c, delta = Fraction(c_num, 24), Fraction(d_num, 24)
    dist = mean_distribution(spec, n, kind, cap=1 << 20)
    boundary = Boundary.CLOSED_OPEN if half else Boundary.CLOSED_CLOSED
    got = count_window(dist, WindowQuery(c, delta, boundary))
    assert got == brute_window_count(spec, n, kind, c, delta, half)


def test_convolution_splits_across_copy_counts():
    # counts for a+b copies = convolution of the a- and b-copy counts
    for spec in (CIRCLE, TORUS):
        for a, b in ((1, 1), (2, 3), (4, 2)):
            left = mean_distribution(spec, a, Kind.CRITICAL).counts
            right = mean_distribution(spec, b, Kind.CRITICAL).counts
            conv = [0] * (len(left) + len(right) - 1)
            for i, x in enumerate(left):
                for j, y in enumerate(right):
                    conv[i + j] += x * y
            assert tuple(conv) == mean_distribution(spec, a + b, Kind.CRITICAL).counts


def test_unit_floor_at_exact_grid_centres():
    for n in (1, 5, 12):
        dist = mean_distribution(TORUS, n, Kind.BETTI)
        for k in range(n + 1):
            query = WindowQuery(
                Fraction(k, n), Fraction(1, 2 * n), Boundary.CLOSED_OPEN
            )
            assert count_window(dist, query) >= 1


def test_finite_rate():
    import math

    assert finite_rate(0, 7) == float("-inf")
    assert finite_rate(1, 3) == 0.0
    assert finite_rate(2 ** 64, 64) == pytest.approx(math.log(2), abs=1e-15)
    with pytest.raises(ValueError):
        finite_rate(-1, 3)
    with pytest.raises(ValueError):
        finite_rate(5, 0)


def test_resource_cap():
    with pytest.raises(ResourceCapError):
        mean_distribution(CIRCLE, 32, Kind.CRITICAL, cap=31)
    # n * denom, not n, is what the cap bounds
    mean_distribution(TORUS, 16, Kind.CRITICAL, cap=32)
    with pytest.raises(ResourceCapError):
        mean_distribution(TORUS, 17, Kind.CRITICAL, cap=32)


def test_cap_rejects_before_computing():
    clear_distribution_cache()
    with pytest.raises(ResourceCapError):
        mean_distribution(CIRCLE, 1 << 30, Kind.CRITICAL)


def test_cache_and_uncached_agree():
    clear_distribution_cache()
    cached = mean_distribution(TORUS, 9, Kind.BETTI)
    fresh = mean_distribution(TORUS, 9, Kind.BETTI, use_cache=False)
    assert cached.counts == fresh.counts


def test_concurrent_queries_agree():
    clear_distribution_cache()
    results = [None] * 6
    barrier = threading.Barrier(6)

    def work(slot):
        barrier.wait()
        results[slot] = mean_distribution(CIRCLE, 64, Kind.CRITICAL).counts

    threads = [threading.Thread(target=work, args=(i,)) for i in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)
    assert sum(results[0]) == 2 ** 64


def test_window_query_validation():
    with pytest.raises(ValueError):
        WindowQuery(Fraction(1, 2), Fraction(0))
    with pytest.raises(ValueError):
        WindowQuery(Fraction(1, 2), Fraction(-1, 4))
    with pytest.raises(ValueError):
        WindowQuery(Fraction(2), Fraction(1, 2))  # entirely above [0, 1]
    with pytest.raises(ValueError):
        WindowQuery(Fraction(-2), Fraction(1, 2))
    with pytest.raises(ValueError):
        WindowQuery(0.5, Fraction(1, 4))  # floats are not exact
    # rational strings are fine
    q = WindowQuery("1/2", "1/4")
    assert q.c == Fraction(1, 2) and q.delta == Fraction(1, 4)


def test_mean_distribution_structure_checks():
    with pytest.raises(ValueError):
        MeanDistribution(n=0, grid_denom=0, counts=(1,), kind=Kind.CRITICAL)
    with pytest.raises(ValueError):
        MeanDistribution(n=2, grid_denom=2, counts=(1, 2), kind=Kind.CRITICAL)
    with pytest.raises(ValueError):
        mean_distribution(CIRCLE, 0, Kind.CRITICAL)


def test_distributions_for_invalid_bypassed_spectra_still_count():
    # validation bypassed on purpose: betti exceeds multiplicity
    from morse_entropy import CriticalSpectrum, SpectrumAtom

    broken = CriticalSpectrum(
        atoms=(
            SpectrumAtom(Fraction(0), 1, 1),
            SpectrumAtom(Fraction(1, 2), 1, 3),
            SpectrumAtom(Fraction(1), 1, 1),
        ),
        denom=2,
    )
    betti = mean_distribution(broken, 1, Kind.BETTI, use_cache=False)
    crit = mean_distribution(broken, 1, Kind.CRITICAL, use_cache=False)
    assert betti.counts == (1, 3, 1)
    assert crit.counts == (1, 1, 1)
