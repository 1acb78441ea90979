"""Restriction of presentations to rational curves P^1 -> P^2 and exact splitting types."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from . import bounds as _bounds
from .exactalg import (
    Field,
    HomForm,
    parse_field,
    graded_map_rows,
    hom_gcd_many,
    minors,
    parse_scalar,
    rank_of_rows,
    substitute,
)
from .panel import FiltrationData, SlopePanel, expected_panel, majorization_check, sup_distance
from .sheaf import COKERNEL, KERNEL, SheafPresentation, hn_filtration


class BasePointError(ValueError):
    """The three forms have a common zero (or define a constant map)."""


class CertificationError(ValueError):
    """The pulled-back matrix drops rank somewhere on P^1."""


class WindowError(RuntimeError):
    """The h^0 window is inconsistent with a split bundle of the expected rank and degree."""


class InvariantViolation(AssertionError):
    """A runtime property check failed; indicates a bug or a violated hypothesis."""


def is_base_point_free(forms: Sequence[HomForm]) -> bool:
    if all(f.is_zero for f in forms):
        return False
    return hom_gcd_many(forms).degree == 0


@dataclass(frozen=True)
class RationalCurveMap:
    forms: tuple[HomForm, HomForm, HomForm]

    def __post_init__(self):
        forms = tuple(self.forms)
        object.__setattr__(self, "forms", forms)
        if len(forms) != 3 or any(f.num_vars != 2 for f in forms):
            raise ValueError("a curve map is a triple of binary forms")
        degs = {f.degree for f in forms}
        if len(degs) != 1 or degs.pop() < 1:
            raise ValueError("curve forms must share a positive degree")
        if not is_base_point_free(forms):
            raise BasePointError("forms have a common zero on P^1")
        # base-point-free forms of positive degree cannot all be proportional
        # (a common factor of degree d would remain), so no further check is needed

    @property
    def degree(self) -> int:
        return self.forms[0].degree

    @property
    def field(self) -> Field:
        return self.forms[0].field

    @classmethod
    def from_coeffs(cls, field: Field, degree: int, coeffs: Sequence[Sequence]) -> RationalCurveMap:
        return cls(tuple(HomForm.from_coeffs(field, 2, degree, c) for c in coeffs))

    def to_json(self) -> dict:
        return {
            "field": self.field.characteristic,
            "degree": self.degree,
            "forms": [[str(c) for c in f.coeffs] for f in self.forms],
        }


def dumps_curve(s: RationalCurveMap) -> str:
    lines = [f"field {s.field.characteristic}", f"degree {s.degree}"]
    lines += ["form " + " ".join(str(c) for c in f.coeffs) for f in s.forms]
    return "\n".join(lines) + "\n"


def loads_curve(text: str) -> RationalCurveMap:
    field = None
    degree = None
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "field":
            field = parse_field(rest[0])
        elif key == "degree":
            degree = int(rest[0])
        elif key == "form":
            rows.append(rest)
        else:
            raise ValueError(f"unknown line {raw!r}")
    if field is None or degree is None or len(rows) != 3:
        raise ValueError("curve file needs field, degree and three form lines")
    return RationalCurveMap.from_coeffs(field, degree, [[parse_scalar(field, c) for c in r] for r in rows])


@dataclass(frozen=True)
class P1Presentation:
    kind: str
    source: tuple[int, ...]
    target: tuple[int, ...]
    matrix: tuple[tuple[HomForm, ...], ...]
    field: Field

    @property
    def rank(self) -> int:
        if self.kind == KERNEL:
            return len(self.source) - len(self.target)
        return len(self.target) - len(self.source)

    @property
    def degree(self) -> int:
        if self.kind == KERNEL:
            return sum(self.source) - sum(self.target)
        return sum(self.target) - sum(self.source)

    def dual(self) -> P1Presentation:
        kind = COKERNEL if self.kind == KERNEL else KERNEL
        mat = tuple(zip(*self.matrix)) if self.matrix else tuple(() for _ in self.source)
        return P1Presentation(kind, tuple(-b for b in self.target), tuple(-a for a in self.source), mat, self.field)


@dataclass(frozen=True)
class SplittingType:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(e) for e in self.parts)
        object.__setattr__(self, "parts", parts)
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError("splitting type must be non-increasing")

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def panel(self) -> SlopePanel:
        return SlopePanel(tuple(Fraction(e) for e in self.parts))

    def shift(self, k: int) -> SplittingType:
        return SplittingType(tuple(e + k for e in self.parts))


def pullback(pres: SheafPresentation, s: RationalCurveMap) -> P1Presentation:
    if pres.field != s.field:
        raise ValueError(f"presentation over {pres.field} but curve over {s.field}")
    d = s.degree
    mat = tuple(tuple(substitute(f, s.forms) for f in row) for row in pres.matrix)
    return P1Presentation(
        pres.kind,
        tuple(a * d for a in pres.source),
        tuple(b * d for b in pres.target),
        mat,
        pres.field,
    )


def certify_bundle(p1: P1Presentation) -> bool:
    """True iff the gcd of the maximal minors is a nonzero constant.

    The minors are taken in the orientation the kind requires (size = number
    of target rows for a kernel, of source columns for a cokernel), so the
    matrix has full rank at every point of P^1.
    """
    nrows, ncols = len(p1.target), len(p1.source)
    if nrows == 0 or ncols == 0:
        return True
    k = nrows if p1.kind == KERNEL else ncols
    if k > min(nrows, ncols):
        return False
    if k == 1:
        entries = [f for row in p1.matrix for f in row] if p1.kind == KERNEL else [row[0] for row in p1.matrix]
        if all(f.is_zero for f in entries):
            return False
        return hom_gcd_many(entries).degree == 0
    g = None
    for _, _, m in minors(p1.matrix, k):
        if m.is_zero:
            continue
        g = m if g is None else hom_gcd_many((g, m))
        if g.degree == 0:
            return True
    return False


def h0_kernel(p1: P1Presentation, m: int) -> int:
    """dim of the kernel of the induced map on sections after twisting by m."""
    if p1.kind != KERNEL:
        raise ValueError("h0_kernel expects a kernel presentation")
    rows, ncols = graded_map_rows(p1.matrix, p1.field, 2, p1.source, p1.target, m)
    return ncols - rank_of_rows(p1.field, rows, ncols)


def _kernel_splitting(p1: P1Presentation) -> tuple[tuple[int, ...], list[tuple[int, int]]]:
    r = p1.rank
    total = p1.degree
    if r <= 0:
        raise WindowError("non-positive rank")
    top = max(p1.source)
    m = -top - 1
    window = [(m, 0)]
    # every part lies in [total - (r-1)*top, top]
    m_last = (r - 1) * top - total
    parts: list[int] = []
    prev_h = prev_delta = 0
    while len(parts) < r:
        m += 1
        if m > m_last:
            raise WindowError(f"scan passed m={m_last} with only {len(parts)} of {r} parts")
        h = h0_kernel(p1, m)
        window.append((m, h))
        delta = h - prev_h
        new = delta - prev_delta
        if new < 0 or len(parts) + new > r:
            raise WindowError(f"inconsistent h0 window at m={m}: {window}")
        parts.extend([-m] * new)
        prev_h, prev_delta = h, delta
    if sum(parts) != total:
        raise WindowError(f"parts {parts} do not sum to the degree {total}")
    return tuple(parts), window


def splitting_window(p1: P1Presentation) -> tuple[SplittingType, list[tuple[int, int]]]:
    """Splitting type and the scanned ``(m, h(m))`` values of the kernel presentation used.

    For a cokernel the window belongs to the dual kernel presentation.
    """
    if not certify_bundle(p1):
        raise CertificationError("pulled-back matrix is not of constant full rank on P^1")
    if p1.kind == KERNEL:
        parts, window = _kernel_splitting(p1)
        return SplittingType(parts), window
    parts, window = _kernel_splitting(p1.dual())
    return SplittingType(tuple(-e for e in reversed(parts))), window


def splitting_type(p1: P1Presentation) -> SplittingType:
    return splitting_window(p1)[0]


@dataclass(frozen=True)
class JumpReport:
    splitting: SplittingType
    curve_degree: int
    expected: SlopePanel
    mu: Fraction
    expected_codim: Fraction | None
    bounds: dict = dc_field(default_factory=dict)

    @property
    def actual(self) -> SlopePanel:
        return self.splitting.panel()

    def to_json(self) -> dict:
        return {
            "splitting": list(self.splitting.parts),
            "curve_degree": self.curve_degree,
            "actual_panel": self.actual.to_json(),
            "expected_panel": self.expected.to_json(),
            "mu": str(self.mu),
            "expected_codim": None if self.expected_codim is None else str(self.expected_codim),
            "bounds": {k: _bounds.to_jsonable(v) for k, v in self.bounds.items()},
        }


def jump_report(pres: SheafPresentation, s: RationalCurveMap, hn: FiltrationData | None = None,
                k: int | None = None) -> JumpReport:
    """Splitting on ``s``, expected panel from the HN data, defect and codimension bounds.

    ``k`` (freeness constant) enables the Grauert-Mulich style bound.
    """
    if hn is None:
        hn = hn_filtration(pres)
    splitting = splitting_type(pullback(pres, s))
    expected = expected_panel(hn, s.degree)
    actual = splitting.panel()
    if actual.total != expected.total:
        raise InvariantViolation(f"sum rule failed: {actual.entries} vs {expected.entries}")
    if not majorization_check(actual, expected):
        raise InvariantViolation(f"splitting {splitting.parts} does not majorize {expected.entries}")
    mu = sup_distance(actual, expected)
    rank = len(splitting)
    codim = _bounds.expected_codim_rank2(mu) if rank == 2 else None
    verdicts: dict = {}
    if rank >= 2:
        weak, strong = _bounds.tangentgaps_bound(mu, rank, 0, 2)
        verdicts["tangentgaps_weak"] = weak
        verdicts["tangentgaps_strong"] = strong
        if k is not None:
            verdicts["gm_codim"] = _bounds.gm_codim_bound(mu, rank, k)
    if codim is not None:
        verdicts["expected_codim"] = codim
    return JumpReport(splitting, s.degree, expected, mu, codim, verdicts)
