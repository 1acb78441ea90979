"""Sheaves on P^2 presented as kernels or cokernels of maps between sums of line bundles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactalg import (
    QQ,
    Field,
    FieldError,
    GF,
    HomForm,
    PrimeField,
    parse_field,
    form_variables,
    generic_rank,
    graded_map_rows,
    parse_scalar,
    rank_of_rows,
    substitute,
)
from .panel import FiltrationData

KERNEL = "kernel"
COKERNEL = "cokernel"

DEFAULT_FIELD = GF(32003)


class PresentationError(ValueError):
    """Malformed or degree-incompatible presentation."""


@dataclass(frozen=True)
class SheafPresentation:
    """``ker`` or ``coker`` of ``matrix: O(source) -> O(target)`` on P^2.

    ``matrix[i][j]`` is a ternary form of degree ``target[i] - source[j]``
    (the zero form when that is negative).
    """

    kind: str
    source: tuple[int, ...]
    target: tuple[int, ...]
    matrix: tuple[tuple[HomForm, ...], ...]
    field: Field = DEFAULT_FIELD

    def __post_init__(self):
        if self.kind not in (KERNEL, COKERNEL):
            raise PresentationError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "source", tuple(int(a) for a in self.source))
        object.__setattr__(self, "target", tuple(int(b) for b in self.target))
        if len(self.matrix) != len(self.target):
            raise PresentationError("matrix needs one row per target summand")
        fixed = []
        maxdeg = 0
        for i, row in enumerate(self.matrix):
            if len(row) != len(self.source):
                raise PresentationError("matrix needs one column per source summand")
            new_row = []
            for j, f in enumerate(row):
                want = self.target[i] - self.source[j]
                if f.field != self.field or f.num_vars != 3:
                    raise PresentationError(f"entry ({i},{j}) is not a ternary form over {self.field}")
                if f.is_zero:
                    f = HomForm.zero(self.field, 3, want)
                elif f.degree != want:
                    raise PresentationError(f"entry ({i},{j}) has degree {f.degree}, expected {want}")
                maxdeg = max(maxdeg, want if not f.is_zero else 0)
                new_row.append(f)
            fixed.append(tuple(new_row))
        object.__setattr__(self, "matrix", tuple(fixed))
        if isinstance(self.field, PrimeField) and self.field.p <= 2 * maxdeg:
            raise FieldError(
                f"characteristic {self.field.p} must exceed twice the largest entry degree {maxdeg}"
            )
        if self.rank <= 0:
            raise PresentationError(f"presentation has non-positive rank {self.rank}")
        if self.matrix and self.source:
            need = len(self.target) if self.kind == KERNEL else len(self.source)
            if generic_rank(self.matrix) != need:
                word = "surjective" if self.kind == KERNEL else "injective"
                raise PresentationError(f"matrix is not generically {word}")

    @property
    def rank(self) -> int:
        if self.kind == KERNEL:
            return len(self.source) - len(self.target)
        return len(self.target) - len(self.source)

    @property
    def positive_twists(self) -> tuple[int, ...]:
        """Twists of the free sheaf containing (kernel) or surjecting onto (cokernel) the sheaf."""
        return self.source if self.kind == KERNEL else self.target


@dataclass(frozen=True)
class ChernData:
    rank: int
    c1: int
    c2: int

    @property
    def slope(self) -> Fraction:
        return Fraction(self.c1, self.rank)

    @property
    def discriminant(self) -> int:
        if self.rank != 2:
            raise ValueError("discriminant is defined here for rank 2 only")
        return 4 * self.c2 - self.c1**2


def _elementary(twists: Sequence[int]) -> tuple[int, int]:
    c1 = sum(twists)
    c2 = sum(twists[i] * twists[j] for i in range(len(twists)) for j in range(i + 1, len(twists)))
    return c1, c2


def chern(pres: SheafPresentation) -> ChernData:
    """Truncated total Chern class from ``c(big) = c(sheaf) * c(small)``."""
    if pres.kind == KERNEL:
        big, small = pres.source, pres.target
    else:
        big, small = pres.target, pres.source
    a1, a2 = _elementary(big)
    b1, b2 = _elementary(small)
    c1 = a1 - b1
    c2 = a2 - b2 - c1 * b1
    if pres.rank <= 0:
        raise PresentationError("non-positive rank")
    return ChernData(pres.rank, c1, c2)


def h0_twist(pres: SheafPresentation, m: int) -> int:
    """dim H^0(F(m)).

    Kernel kind: kernel of the induced map on sections (left exactness).
    Cokernel kind: cokernel of that map, using H^1(O(k)) = 0 on P^2.
    """
    rows, ncols = graded_map_rows(pres.matrix, pres.field, 3, pres.source, pres.target, m)
    r = rank_of_rows(pres.field, rows, ncols)
    if pres.kind == KERNEL:
        return ncols - r
    return len(rows) - r


def _hoppe_shift(c1: int) -> int:
    # unique k with c1 + 2k in {0, -1}
    return -((c1 + 1) // 2)


def is_stable_rank2(pres: SheafPresentation) -> bool:
    """Hoppe's criterion: the normalized twist has no global sections."""
    if pres.rank != 2:
        raise PresentationError("stability test requires rank 2")
    c1 = chern(pres).c1
    return h0_twist(pres, _hoppe_shift(c1)) == 0


def hn_filtration(pres: SheafPresentation) -> FiltrationData:
    """HN filtration with respect to the line class, for split sums, rank 1 and rank 2.

    Rank 2: the maximal destabilizing subsheaf is O(k) for the largest k with
    H^0(F(-k)) != 0; if no k > c1/2 qualifies the sheaf is semistable.
    """
    ch = chern(pres)
    if not pres.matrix or not pres.source:
        if pres.kind == KERNEL and not pres.target:
            return FiltrationData.from_splitting(pres.source)
        if pres.kind == COKERNEL and not pres.source:
            return FiltrationData.from_splitting(pres.target)
    if ch.rank == 1:
        return FiltrationData(((1, Fraction(ch.c1)),))
    if ch.rank != 2:
        raise PresentationError("HN filtration is only computed for rank <= 2 or split sums; pass it explicitly")
    for k in range(max(pres.positive_twists), ch.c1 // 2, -1):
        if 2 * k > ch.c1 and h0_twist(pres, -k) > 0:
            return FiltrationData(((1, Fraction(k)), (1, Fraction(ch.c1 - k))))
    return FiltrationData(((2, ch.slope),))


def twist(pres: SheafPresentation, k: int) -> SheafPresentation:
    return SheafPresentation(
        pres.kind,
        tuple(a + k for a in pres.source),
        tuple(b + k for b in pres.target),
        pres.matrix,
        pres.field,
    )


def dual(pres: SheafPresentation) -> SheafPresentation:
    """Transpose the matrix, negate twists and swap kind.

    This is the dual sheaf only where the matrix has locally constant rank
    (callers certify that on the curves they use).
    """
    kind = COKERNEL if pres.kind == KERNEL else KERNEL
    mat = tuple(zip(*pres.matrix)) if pres.matrix else tuple(() for _ in pres.source)
    return SheafPresentation(
        kind,
        tuple(-b for b in pres.target),
        tuple(-a for a in pres.source),
        mat,
        pres.field,
    )


def change_coordinates(pres: SheafPresentation, A: Sequence[Sequence]) -> SheafPresentation:
    """Pull back along the linear automorphism ``(x, y, z) -> A (x, y, z)``."""
    x = form_variables(pres.field, 3)
    lin = []
    for row in A:
        f = HomForm.zero(pres.field, 3, 1)
        for c, v in zip(row, x):
            f = f + v.scale(c)
        lin.append(f)
    mat = tuple(tuple(substitute(f, lin) for f in row) for row in pres.matrix)
    return SheafPresentation(pres.kind, pres.source, pres.target, mat, pres.field)


def direct_sum(a: SheafPresentation, b: SheafPresentation) -> SheafPresentation:
    """Block-diagonal sum of two presentations of the same kind."""
    if a.kind != b.kind or a.field != b.field:
        raise PresentationError("direct sum needs presentations of the same kind and field")
    field = a.field
    rows = []
    for i, row in enumerate(a.matrix):
        rows.append(tuple(row) + tuple(HomForm.zero(field, 3, a.target[i] - s) for s in b.source))
    for i, row in enumerate(b.matrix):
        rows.append(tuple(HomForm.zero(field, 3, b.target[i] - s) for s in a.source) + tuple(row))
    return SheafPresentation(a.kind, a.source + b.source, a.target + b.target, tuple(rows), field)


# ---------------------------------------------------------------------------
# constructors


def line_bundle_sum(twists: Sequence[int], field: Field = DEFAULT_FIELD) -> SheafPresentation:
    """O(t_1) + ... + O(t_k), as a kernel with empty target."""
    if not twists:
        raise PresentationError("empty line bundle sum")
    return SheafPresentation(KERNEL, tuple(twists), (), (), field)


def euler_tangent(field: Field = DEFAULT_FIELD) -> SheafPresentation:
    """T_{P^2} = coker(O -> O(1)^3) given by (x, y, z)."""
    x, y, z = form_variables(field, 3)
    return SheafPresentation(COKERNEL, (0,), (1, 1, 1), ((x,), (y,), (z,)), field)


def conic_example_bundle(d: int, field: Field = DEFAULT_FIELD) -> SheafPresentation:
    """ker(O(-d)^2 + O(-2d+1) -> O) given by (x^d, y^d, z^(2d-1))."""
    if d < 1:
        raise PresentationError("d must be positive")
    x, y, z = form_variables(field, 3)
    return SheafPresentation(KERNEL, (-d, -d, -2 * d + 1), (0,), ((x**d, y**d, z ** (2 * d - 1)),), field)


def schwarzenberger(p: int, q: int, field: Field = DEFAULT_FIELD) -> SheafPresentation:
    """coker(O(q-1)^(p-q-1) -> O(q)^(p-q+1)) by the band matrix M[i][i]=x, M[i+1][i]=y, M[i+2][i]=z."""
    if p < q + 2:
        raise PresentationError(f"need p >= q + 2, got p={p}, q={q}")
    n = p - q - 1
    x, y, z = form_variables(field, 3)
    zero = HomForm.zero(field, 3, 1)
    rows = [[zero] * n for _ in range(n + 2)]
    for i in range(n):
        rows[i][i] = x
        rows[i + 1][i] = y
        rows[i + 2][i] = z
    return SheafPresentation(COKERNEL, (q - 1,) * n, (q,) * (n + 2), tuple(map(tuple, rows)), field)


def kernel_of_forms(forms, twists: Sequence[int], target: Sequence[int] = (0,),
                    field: Field | None = None) -> SheafPresentation:
    """Kernel of a map O(twists) -> O(target); ``forms`` is one row or a list of rows."""
    rows = forms
    if rows and isinstance(rows[0], HomForm):
        rows = [rows]
    if field is None:
        field = rows[0][0].field
    return SheafPresentation(KERNEL, tuple(twists), tuple(target), tuple(tuple(r) for r in rows), field)


def named_bundle(name: str, field: Field = DEFAULT_FIELD) -> SheafPresentation:
    """Resolve names like ``tangent``, ``conic:2``, ``schwarzenberger:4,0``, ``split:1,-1``."""
    head, _, arg = name.partition(":")
    head = head.strip().lower()
    args = [int(a) for a in arg.split(",") if a.strip()] if arg else []
    if head in ("tangent", "euler", "euler_tangent"):
        return euler_tangent(field)
    if head in ("cotangent",):
        x, y, z = form_variables(field, 3)
        return kernel_of_forms((x, y, z), (-1, -1, -1), field=field)
    if head in ("conic", "conic_example"):
        return conic_example_bundle(args[0] if args else 1, field)
    if head in ("schwarzenberger", "schw"):
        p, q = args if args else (4, 0)
        return schwarzenberger(p, q, field)
    if head in ("trivial",):
        return line_bundle_sum((0,) * (args[0] if args else 2), field)
    if head in ("split", "sum"):
        return line_bundle_sum(args, field)
    raise PresentationError(f"unknown bundle name {name!r}")


# ---------------------------------------------------------------------------
# text serialization
#
#   kind kernel|cokernel
#   field <p or 0>
#   source <twists>
#   target <twists>
#   entry <i> <j> <coef>:<a>,<b>,<c> ...     (nonzero entries, graded-lex term order)


def dumps(pres: SheafPresentation) -> str:
    lines = [
        f"kind {pres.kind}",
        f"field {pres.field.characteristic}",
        "source " + " ".join(str(a) for a in pres.source),
        "target " + " ".join(str(b) for b in pres.target),
    ]
    for i, row in enumerate(pres.matrix):
        for j, f in enumerate(row):
            if not f.is_zero:
                terms = " ".join(f"{c}:{','.join(map(str, m))}" for m, c in f.terms().items())
                lines.append(f"entry {i} {j} {terms}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> SheafPresentation:
    header: dict[str, list[str]] = {}
    entries = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "entry":
            entries.append(rest)
        elif key in ("kind", "field", "source", "target"):
            header[key] = rest
        else:
            raise PresentationError(f"unknown line {raw!r}")
    try:
        kind = header["kind"][0]
        field = parse_field(header["field"][0]) if "field" in header else DEFAULT_FIELD
        source = tuple(int(a) for a in header.get("source", []))
        target = tuple(int(b) for b in header.get("target", []))
    except (KeyError, IndexError) as exc:
        raise PresentationError(f"missing header field: {exc}") from None
    rows = [[HomForm.zero(field, 3, max(b - a, 0)) for a in source] for b in target]
    for rest in entries:
        i, j = int(rest[0]), int(rest[1])
        terms = {}
        for tok in rest[2:]:
            c, mono = tok.split(":")
            terms[tuple(int(e) for e in mono.split(","))] = parse_scalar(field, c)
        deg = target[i] - source[j]
        rows[i][j] = HomForm.from_terms(field, 3, deg, terms)
    return SheafPresentation(kind, source, target, tuple(map(tuple, rows)), field)


def load(path) -> SheafPresentation:
    with open(path) as fh:
        return loads(fh.read())


__all__ = [
    "KERNEL", "COKERNEL", "QQ", "SheafPresentation", "ChernData", "PresentationError",
    "chern", "h0_twist", "is_stable_rank2", "hn_filtration", "twist", "dual",
    "change_coordinates", "direct_sum", "line_bundle_sum", "euler_tangent",
    "conic_example_bundle", "schwarzenberger", "kernel_of_forms", "named_bundle",
    "dumps", "loads", "load",
]
