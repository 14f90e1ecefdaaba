"""Domain-wall post-selection of measurement counts.

Strings whose conserved-quantity eigenvalue differs from the reference
preparation are discarded. Filtering detects any error that changes
the domain-wall count; single bit flips next to existing excitations
can slip through.
"""

from __future__ import annotations

from dataclasses import dataclass

from .invariant import domain_walls, enumerate_sector, invariant_eigenvalue
from .sampling import CountsTable

MIN_KEPT_DEFAULT = 10


@dataclass(frozen=True)
class FilterResult:
    kept: CountsTable
    retained_fraction: float
    kept_shots: int
    total_shots: int

    def insufficient(self, min_kept: int = MIN_KEPT_DEFAULT) -> bool:
        """Too few surviving shots for reliable downstream statistics."""
        return self.kept_shots < min_kept


def filter_counts(counts: CountsTable, reference: str) -> FilterResult:
    """Keep only strings in the reference's invariant sector."""
    if len(reference) != counts.length:
        raise ValueError(
            f"reference length {len(reference)} != counts length {counts.length}"
        )
    target = invariant_eigenvalue(reference)
    kept = {
        key: value
        for key, value in counts.counts.items()
        if invariant_eigenvalue(key) == target
    }
    total = counts.total
    kept_shots = sum(kept.values())
    fraction = kept_shots / total if total else 0.0
    return FilterResult(CountsTable(counts.length, kept), fraction, kept_shots, total)


def retained_series(tables, reference: str) -> list[float]:
    return [filter_counts(t, reference).retained_fraction for t in tables]


@dataclass(frozen=True)
class DetectabilityReport:
    """Fraction of single-bit-flip errors that change the invariant."""

    initial_fraction: float
    sector_fraction: float


def _detected_fraction(string: str) -> float:
    reference = invariant_eigenvalue(string)
    detected = 0
    for site in range(len(string)):
        flipped = (
            string[:site]
            + ("1" if string[site] == "0" else "0")
            + string[site + 1 :]
        )
        if invariant_eigenvalue(flipped) != reference:
            detected += 1
    return detected / len(string)


def detectability(initial: str) -> DetectabilityReport:
    """Detected-flip fractions for the initial string and its whole sector.

    A flip is detected when it changes the domain-wall count. Higher
    fillings leave more flip locations adjacent to existing walls, so
    both fractions decrease as excitations are added.
    """
    sector = enumerate_sector(len(initial), domain_walls(initial))
    sector_mean = sum(_detected_fraction(s) for s in sector) / len(sector)
    return DetectabilityReport(_detected_fraction(initial), sector_mean)
