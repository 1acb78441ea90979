"""Slope panels: construction from filtrations, sup-distance, majorization.

Everything here is exact; slopes are ``Fraction`` and no floats appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class PanelError(ValueError):
    pass


@dataclass(frozen=True)
class SlopePanel:
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        entries = tuple(Fraction(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if any(a < b for a, b in zip(entries, entries[1:])):
            raise PanelError(f"panel entries must be non-increasing: {entries}")

    @classmethod
    def sorted_from(cls, values: Iterable) -> SlopePanel:
        return cls(tuple(sorted((Fraction(v) for v in values), reverse=True)))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def total(self) -> Fraction:
        return sum(self.entries, Fraction(0))

    def to_json(self) -> list[str]:
        return [str(e) for e in self.entries]


@dataclass(frozen=True)
class FiltrationData:
    """Graded pieces ``(rank, slope)`` listed from the first subsheaf onward."""

    pieces: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        pieces = tuple((int(r), Fraction(s)) for r, s in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if any(r <= 0 for r, _ in pieces):
            raise PanelError("filtration ranks must be positive")

    @property
    def rank(self) -> int:
        return sum(r for r, _ in self.pieces)

    @classmethod
    def from_splitting(cls, parts: Sequence[int]) -> FiltrationData:
        """HN filtration of a split bundle on P^1: equal degrees grouped, largest first."""
        pieces: list[list] = []
        for e in sorted(parts, reverse=True):
            if pieces and pieces[-1][1] == e:
                pieces[-1][0] += 1
            else:
                pieces.append([1, e])
        return cls(tuple((r, Fraction(e)) for r, e in pieces))


def panel_from_filtration(f: FiltrationData) -> tuple[tuple[Fraction, ...], SlopePanel]:
    """The filtration-order tuple (slope repeated rank times) and its sorted view."""
    if not f.pieces:
        raise PanelError("empty filtration")
    raw = tuple(s for r, s in f.pieces for _ in range(r))
    return raw, SlopePanel.sorted_from(raw)


def _check_lengths(P: Sequence, Q: Sequence):
    if len(P) != len(Q):
        raise PanelError(f"panel lengths differ: {len(P)} vs {len(Q)}")


def sup_distance(P: Sequence, Q: Sequence) -> Fraction:
    _check_lengths(P, Q)
    return max((abs(Fraction(a) - Fraction(b)) for a, b in zip(P, Q)), default=Fraction(0))


def expected_panel(hn: FiltrationData, d: int) -> SlopePanel:
    """Panel against ``d`` times the line class: every HN slope scaled by d."""
    if d < 1:
        raise PanelError("curve degree must be positive")
    _, panel = panel_from_filtration(hn)
    return SlopePanel(tuple(d * s for s in panel))


def majorization_check(hn_panel: Sequence, other: Sequence) -> bool:
    """Prefix sums of ``hn_panel`` dominate those of ``other``; totals agree.

    ``other`` is read in the order given, so a filtration-order panel can be
    passed without sorting.
    """
    _check_lengths(hn_panel, other)
    a_sum = b_sum = Fraction(0)
    for a, b in zip(hn_panel, other):
        a_sum += Fraction(a)
        b_sum += Fraction(b)
        if a_sum < b_sum:
            return False
    return a_sum == b_sum


def mediant_check(pairs: Iterable[tuple[int, int, int]]) -> bool:
    """Check |sum a' - sum a| / sum b <= max |a'_i - a_i| / b_i for triples (a, a', b)."""
    pairs = list(pairs)
    if not pairs:
        raise PanelError("need at least one triple")
    if any(b <= 0 for _, _, b in pairs):
        raise PanelError("weights b must be positive")
    lhs = Fraction(abs(sum(ap for _, ap, _ in pairs) - sum(a for a, _, _ in pairs)), sum(b for _, _, b in pairs))
    rhs = max(Fraction(abs(ap - a), b) for a, ap, b in pairs)
    return lhs <= rhs
