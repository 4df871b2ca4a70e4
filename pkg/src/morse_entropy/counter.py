"""Exact distributions of tuple means over product spectra.

Averaging n independent copies of a spectrum with common denominator D
puts every achievable mean on the grid s / (n*D), s = 0 .. n*D.  The
number of n-tuples of critical points at each grid value is an integer,
obtained by convolving the single-site histogram with itself n times.
Counts stay Python integers throughout; the only float in this module is
the final ``log(count) / n`` of :func:`finite_rate`.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .spectrum import CriticalSpectrum, as_rational

#: Largest sum grid (n * denom) built without an explicit override.
DEFAULT_CAP = 16384


class ResourceCapError(RuntimeError):
    """A requested sum grid exceeds the configured cap."""


class Kind(enum.Enum):
    """Which per-atom weight drives the count."""

    CRITICAL = "critical"   # multiplicity: every critical point
    BETTI = "betti"         # betti_weight: homologically essential ones


class Boundary(enum.Enum):
    """Window endpoint convention.

    Critical-point counts use the closed window; homology counts use the
    half-open one, which is what keeps domination and superadditivity
    exact on rational grids.  Tests flip the flag to measure how much the
    boundary convention matters.
    """

    CLOSED_CLOSED = "closed"
    CLOSED_OPEN = "half-open"


@dataclass(frozen=True)
class MeanDistribution:
    """Counts of n-tuples by mean value, on the grid s / grid_denom."""

    n: int
    grid_denom: int
    counts: Tuple[int, ...]
    kind: Kind
    # Cumulative sums, built lazily on the first window query.
    _prefix: Optional[Tuple[int, ...]] = field(
        init=False, default=None, compare=False, repr=False
    )

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if len(self.counts) != self.grid_denom + 1:
            raise ValueError(
                f"counts length {len(self.counts)} does not match grid 0..{self.grid_denom}"
            )

    @property
    def total(self) -> int:
        """Total weighted tuple count (p**n or B**n for valid spectra)."""
        return sum(self.counts)

    def mean_at(self, s: int) -> Fraction:
        return Fraction(s, self.grid_denom)


@dataclass(frozen=True)
class WindowQuery:
    """A value window [c - delta, c + delta] with an endpoint convention."""

    c: Fraction
    delta: Fraction
    boundary: Boundary = Boundary.CLOSED_CLOSED

    def __post_init__(self):
        object.__setattr__(self, "c", as_rational(self.c))
        object.__setattr__(self, "delta", as_rational(self.delta))
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not (self.c - self.delta < 1 and self.c + self.delta > 0):
            raise ValueError(f"window around {self.c} +- {self.delta} misses [0, 1]")


_chain_lock = threading.Lock()
# (spectrum, kind) -> list of count tuples, entry i holding the n = i + 1
# distribution.  Guarded by the single lock above: readers take it briefly,
# the writer extends the chain in place before releasing.
_chains: Dict[Tuple[CriticalSpectrum, Kind], List[Tuple[int, ...]]] = {}


def clear_distribution_cache() -> None:
    with _chain_lock:
        _chains.clear()


def _site_histogram(spec: CriticalSpectrum, kind: Kind) -> Tuple[int, ...]:
    site = [0] * (spec.denom + 1)
    for atom in spec.atoms:
        offset = atom.value.numerator * (spec.denom // atom.value.denominator)
        weight = atom.multiplicity if kind is Kind.CRITICAL else atom.betti_weight
        site[offset] += weight
    return tuple(site)


def _convolve(counts: Tuple[int, ...], site: Tuple[int, ...]) -> Tuple[int, ...]:
    out = [0] * (len(counts) + len(site) - 1)
    for offset, w in enumerate(site):
        if w == 0:
            continue
        if w == 1:
            for i, a in enumerate(counts):
                out[offset + i] += a
        else:
            for i, a in enumerate(counts):
                out[offset + i] += a * w
    return tuple(out)


def mean_distribution(
    spec: CriticalSpectrum,
    n: int,
    kind: Kind,
    *,
    cap: Optional[int] = None,
    use_cache: bool = True,
) -> MeanDistribution:
    """Exact mean distribution of n-tuples, by repeated convolution.

    Intermediate results are memoised per (spectrum, kind), so asking for
    n after n-1 costs one convolution.  ``cap`` bounds the sum grid
    n * denom (default :data:`DEFAULT_CAP`); exceeding it raises
    :class:`ResourceCapError` before any work is done.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    grid_denom = n * spec.denom
    limit = DEFAULT_CAP if cap is None else cap
    if grid_denom > limit:
        raise ResourceCapError(
            f"sum grid n*denom = {grid_denom} exceeds cap {limit}"
        )

    site = _site_histogram(spec, kind)
    if not use_cache:
        counts = site
        for _ in range(n - 1):
            counts = _convolve(counts, site)
        return MeanDistribution(n=n, grid_denom=grid_denom, counts=counts, kind=kind)

    key = (spec, kind)
    with _chain_lock:
        chain = _chains.setdefault(key, [site])
        while len(chain) < n:
            chain.append(_convolve(chain[-1], site))
        counts = chain[n - 1]
    return MeanDistribution(n=n, grid_denom=grid_denom, counts=counts, kind=kind)


def count_window(dist: MeanDistribution, query: WindowQuery) -> int:
    """Exact number of tuples whose mean falls in the window.

    Window edges are compared as rationals against the grid s / (n*D);
    nothing is rounded.  An empty intersection returns 0.
    """
    grid = dist.grid_denom
    lo = math.ceil((query.c - query.delta) * grid)
    hi_edge = (query.c + query.delta) * grid
    if query.boundary is Boundary.CLOSED_CLOSED:
        hi = math.floor(hi_edge)
    else:
        # strict upper edge: largest s with s < hi_edge
        hi = math.ceil(hi_edge) - 1
    lo = max(lo, 0)
    hi = min(hi, grid)
    if hi < lo:
        return 0
    prefix = dist._prefix
    if prefix is None:
        acc = [0] * (grid + 2)
        running = 0
        for i, a in enumerate(dist.counts):
            running += a
            acc[i + 1] = running
        prefix = tuple(acc)
        object.__setattr__(dist, "_prefix", prefix)
    return prefix[hi + 1] - prefix[lo]


def finite_rate(count: int, n: int) -> float:
    """Per-site log of a count; 0 maps to -inf."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    if count == 0:
        return float("-inf")
    return math.log(count) / n
