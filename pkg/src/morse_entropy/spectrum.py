"""Finite critical-value spectra of a fixed Morse function.

A spectrum records the distinct critical values of one closed factor,
rescaled to [0, 1], together with how many critical points sit at each
value (``multiplicity``) and how many of those contribute a basis class
to the homology of the sublevel filtration (``betti_weight``).  Every
downstream computation (exact tuple counting, growth-rate solvers, law
checks) consumes these atoms, so values are kept as ``Fraction`` and the
two counting fields as plain integers.  Floats are rejected on ingestion:
``Fraction(0.1)`` would silently pick up the binary approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

RawAtom = Tuple[Union[int, str, Fraction], int, int]


class SpectrumError(ValueError):
    """Invalid atom data.  ``violation`` is a stable machine-readable tag."""

    def __init__(self, violation: str, message: str):
        super().__init__(message)
        self.violation = violation


def as_rational(x: Union[int, str, Fraction]) -> Fraction:
    """Convert an exact input ("3/4", 1, Fraction) to Fraction.

    Floats raise ValueError rather than importing their binary expansion.
    """
    if isinstance(x, bool) or isinstance(x, float):
        raise ValueError(f"expected an exact rational, got {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational {x!r}") from exc
    raise ValueError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class SpectrumAtom:
    """One critical value with its point count and homology count."""

    value: Fraction
    multiplicity: int
    betti_weight: int


@dataclass(frozen=True)
class CriticalSpectrum:
    """Sorted atoms plus the least common denominator of their values.

    Instances are meant to come out of :func:`validate_spectrum` or
    :func:`preset`; the dataclass itself does not re-check anything, so
    tests can construct deliberately broken spectra and watch the law
    checks object.
    """

    atoms: Tuple[SpectrumAtom, ...]
    denom: int

    @property
    def p(self) -> int:
        """Total number of critical points of the single factor."""
        return sum(a.multiplicity for a in self.atoms)

    @property
    def total_betti(self) -> int:
        """Total homology dimension contributed by the single factor."""
        return sum(a.betti_weight for a in self.atoms)

    def values(self) -> Tuple[Fraction, ...]:
        return tuple(a.value for a in self.atoms)

    def multiplicities(self) -> Tuple[int, ...]:
        return tuple(a.multiplicity for a in self.atoms)


def _check_count(raw_value: object, what: str, minimum: int, tag: str) -> int:
    if isinstance(raw_value, bool) or not isinstance(raw_value, int):
        raise SpectrumError(tag, f"{what} must be an integer, got {raw_value!r}")
    if raw_value < minimum:
        raise SpectrumError(tag, f"{what} must be >= {minimum}, got {raw_value}")
    return raw_value


def validate_spectrum(raw: Iterable[RawAtom]) -> CriticalSpectrum:
    """Normalise raw ``(value, multiplicity, betti_weight)`` triples.

    Entries sharing a value are merged by summing both counts, then the
    result is sorted and checked: values inside [0, 1] with both ends
    present, multiplicities positive, betti weights within multiplicity
    and nonzero at the extremes.  Validation is idempotent: feeding the
    atoms of a valid spectrum back in reproduces it exactly.
    """
    entries = list(raw)
    if not entries:
        raise SpectrumError("empty_spectrum", "a spectrum needs at least its two extreme values")

    merged: dict = {}
    for entry in entries:
        try:
            value_raw, mult_raw, betti_raw = entry
        except (TypeError, ValueError) as exc:
            raise SpectrumError("malformed_entry", f"expected (value, multiplicity, betti_weight), got {entry!r}") from exc
        try:
            value = as_rational(value_raw)
        except ValueError as exc:
            raise SpectrumError("value_not_rational", str(exc)) from exc
        if not 0 <= value <= 1:
            raise SpectrumError("value_out_of_range", f"critical value {value} outside [0, 1]")
        mult = _check_count(mult_raw, f"multiplicity at value {value}", 1, "multiplicity_invalid")
        betti = _check_count(betti_raw, f"betti_weight at value {value}", 0, "betti_weight_invalid")
        if betti > mult:
            raise SpectrumError(
                "betti_weight_exceeds_multiplicity",
                f"betti_weight {betti} > multiplicity {mult} at value {value}",
            )
        if value in merged:
            old_m, old_b = merged[value]
            merged[value] = (old_m + mult, old_b + betti)
        else:
            merged[value] = (mult, betti)

    atoms = tuple(
        SpectrumAtom(value=v, multiplicity=m, betti_weight=b)
        for v, (m, b) in sorted(merged.items())
    )
    if atoms[0].value != 0:
        raise SpectrumError("missing_minimum", "no atom at value 0")
    if atoms[-1].value != 1:
        raise SpectrumError("missing_maximum", "no atom at value 1")
    for atom in (atoms[0], atoms[-1]):
        if atom.betti_weight < 1:
            raise SpectrumError(
                "extreme_betti_weight_zero",
                f"betti_weight at extreme value {atom.value} must be >= 1",
            )

    denom = math.lcm(*(a.value.denominator for a in atoms))
    return CriticalSpectrum(atoms=atoms, denom=denom)


# Height functions on the model surfaces, rescaled to [0, 1].  The circle
# and the sphere share one minimum and one maximum, each carrying a unit
# of homology; the flat torus adds two middle saddles, both homologically
# essential.
_PRESETS: dict = {
    "circle": ((0, 1, 1), (1, 1, 1)),
    "sphere": ((0, 1, 1), (1, 1, 1)),
    "torus": ((0, 1, 1), (Fraction(1, 2), 2, 2), (1, 1, 1)),
}


def preset_names() -> Tuple[str, ...]:
    return tuple(sorted(_PRESETS))

def preset(name: str) -> CriticalSpectrum:
    """Return a built-in spectrum: ``circle``, ``sphere``, or ``torus``."""
    try:
        raw = _PRESETS[name]
    except KeyError:
        raise SpectrumError("unknown_preset", f"unknown preset {name!r}; have {', '.join(preset_names())}") from None
    return validate_spectrum(raw)


def entry_multiset(spec: CriticalSpectrum) -> Tuple[Tuple[Fraction, int], ...]:
    """Values where homology enters the filtration, with their weights.

    Atoms of betti_weight zero are dropped; the weights sum to the total
    homology dimension of the factor.
    """
    return tuple((a.value, a.betti_weight) for a in spec.atoms if a.betti_weight > 0)
