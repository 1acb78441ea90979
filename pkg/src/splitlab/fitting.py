"""Fitting ideals from presentation matrices, adjugate syzygies and Laplace witnesses.

Ideal membership is shown constructively: each claimed element comes with an
explicit expression that is re-multiplied and compared, never via Groebner bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .bounds import BoundError
from .exactalg import HomForm, form_det, minors, multiply, submatrix
from .restrict import InvariantViolation


class FittingError(ValueError):
    pass


class SingularSelectionError(FittingError):
    """The chosen r x r block has zero determinant; try another subset."""


FormMatrix = Sequence[Sequence[HomForm]]


def _check_matrix(M: FormMatrix) -> tuple[int, int]:
    if not M or not M[0]:
        raise FittingError("empty matrix")
    ncols = len(M[0])
    if any(len(row) != ncols for row in M):
        raise FittingError("ragged matrix")
    if not all(isinstance(f, HomForm) for row in M for f in row):
        raise FittingError("entries must be forms")
    return len(M), ncols


@dataclass(frozen=True)
class FittingGenerators:
    j: int
    minor_size: int
    minors: tuple[HomForm, ...]
    unit: bool = False

    @property
    def is_zero_ideal(self) -> bool:
        return not self.unit and not self.minors

    def contains_up_to_sign(self, f: HomForm) -> bool:
        return any(g == f or g == -f for g in self.minors)


def fitting_generators(M: FormMatrix, n: int, j: int) -> FittingGenerators:
    """All (n - j)-minors of ``M``, zero minors dropped and duplicates removed.

    Size <= 0 gives the unit ideal (``unit=True``); size larger than the
    matrix gives the zero ideal (no minors).
    """
    nrows, ncols = _check_matrix(M)
    if j < 0 or n < 0:
        raise FittingError("indices must be non-negative")
    size = n - j
    if size <= 0:
        return FittingGenerators(j, size, (), unit=True)
    if size > min(nrows, ncols):
        return FittingGenerators(j, size, ())
    seen: list[HomForm] = []
    for _, _, m in minors(M, size):
        if not m.is_zero and m not in seen:
            seen.append(m)
    return FittingGenerators(j, size, tuple(seen))


def adjugate(A: FormMatrix) -> list[list[HomForm]]:
    """adj(A)[i][j] = (-1)^(i+j) det(A without row j and column i)."""
    r = len(A)
    f0 = A[0][0]
    if r == 1:
        return [[HomForm.constant(f0.field, f0.num_vars)]]
    adj = []
    for i in range(r):
        row = []
        for j in range(r):
            rest_r = [k for k in range(r) if k != j]
            rest_c = [k for k in range(r) if k != i]
            cof = form_det(submatrix(A, rest_r, rest_c))
            row.append(-cof if (i + j) % 2 else cof)
        adj.append(row)
    return adj


@dataclass(frozen=True)
class AdjugateCertificate:
    selected_rows: tuple[int, ...]
    selected_cols: tuple[int, ...]
    detA: HomForm
    kernel_vectors: tuple[tuple[HomForm, ...], ...]

    def kernel_matrix(self) -> list[list[HomForm]]:
        """d x (d - r) matrix whose columns are the kernel vectors."""
        if not self.kernel_vectors:
            return []
        return [list(col) for col in zip(*self.kernel_vectors)]

    def to_text(self) -> str:
        lines = [
            "rows " + " ".join(map(str, self.selected_rows)),
            "cols " + " ".join(map(str, self.selected_cols)),
            "det " + _terms_text(self.detA),
        ]
        for k, v in enumerate(self.kernel_vectors):
            for i, f in enumerate(v):
                if not f.is_zero:
                    lines.append(f"vector {k} {i} {_terms_text(f)}")
        return "\n".join(lines) + "\n"


def _terms_text(f: HomForm) -> str:
    return " ".join(f"{c}:{','.join(map(str, m))}" for m, c in f.terms().items())


def _uniform_degree(N: FormMatrix) -> int:
    degs = {f.degree for row in N for f in row if not f.is_zero}
    if len(degs) != 1:
        raise FittingError(f"entries must share one degree, found {sorted(degs)}")
    return degs.pop()


def matvec(N: FormMatrix, v: Sequence[HomForm]) -> list[HomForm]:
    out = []
    for row in N:
        total = None
        for a, b in zip(row, v):
            t = multiply(a, b)
            total = t if total is None else total + t
        out.append(total)
    return out


def adjugate_kernel(N: FormMatrix, r: int, rows: Sequence[int] | None = None,
                    cols: Sequence[int] | None = None) -> AdjugateCertificate:
    """Syzygies of ``N`` from adj(A) for a nonsingular r x r block A.

    For each column c outside the block, the vector with det(A) at c and
    ``-(adj(A) N[rows, c])_k`` at the k-th block column is killed by N
    whenever N has rank r.  Unspecified rows/columns are searched in
    lexicographic order.
    """
    nrows, d = _check_matrix(N)
    delta = _uniform_degree(N)
    if not 1 <= r <= min(nrows, d):
        raise FittingError(f"rank {r} out of range for a {nrows}x{d} matrix")
    row_choices = [tuple(rows)] if rows is not None else list(combinations(range(nrows), r))
    found = None
    for rsel in row_choices:
        col_choices = [tuple(cols)] if cols is not None else combinations(range(d), r)
        for csel in col_choices:
            A = submatrix(N, rsel, csel)
            dA = form_det(A)
            if not dA.is_zero:
                found = (rsel, csel, A, dA)
                break
        if found:
            break
    if found is None:
        raise SingularSelectionError("no nonsingular r x r block for the given selection")
    rsel, csel, A, dA = found
    field, nv = dA.field, dA.num_vars
    adj = adjugate(A)
    vectors = []
    for c in range(d):
        if c in csel:
            continue
        col = [N[i][c] for i in rsel]
        Bc = matvec(adj, col)
        v = [HomForm.zero(field, nv, r * delta) for _ in range(d)]
        v[c] = dA
        for k, ck in enumerate(csel):
            v[ck] = -Bc[k]
        if not all(x.is_zero for x in matvec(N, v)):
            raise InvariantViolation("adjugate vector is not a syzygy; is the rank of N larger than r?")
        vectors.append(tuple(v))
    return AdjugateCertificate(tuple(rsel), tuple(csel), dA, tuple(vectors))


def verify_certificate(N: FormMatrix, cert: AdjugateCertificate) -> bool:
    """Re-check N v = 0, det(A), and the entry degree r * delta."""
    delta = _uniform_degree(N)
    r = len(cert.selected_rows)
    if form_det(submatrix(N, cert.selected_rows, cert.selected_cols)) != cert.detA:
        return False
    for v in cert.kernel_vectors:
        if not all(x.is_zero for x in matvec(N, v)):
            return False
        if any(not x.is_zero and x.degree != r * delta for x in v):
            return False
    return True


@dataclass(frozen=True)
class LaplaceWitness:
    """det(M[rows, cols]) = sum of coef * det(M[sub_rows, sub_cols])."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    terms: tuple[tuple[HomForm, tuple[int, ...], tuple[int, ...]], ...]


def laplace_witness(M: FormMatrix, rows: Sequence[int], cols: Sequence[int]) -> LaplaceWitness:
    """Expansion of a (k+1)-minor along its first row in terms of k-minors."""
    rows, cols = tuple(rows), tuple(cols)
    if len(rows) != len(cols) or len(rows) < 2:
        raise FittingError("need a square selection of size at least 2")
    r0, rest = rows[0], rows[1:]
    terms = []
    for k, c in enumerate(cols):
        coef = M[r0][c]
        if k % 2:
            coef = -coef
        terms.append((coef, rest, cols[:k] + cols[k + 1:]))
    return LaplaceWitness(rows, cols, tuple(terms))


def verify_laplace_witness(M: FormMatrix, w: LaplaceWitness) -> bool:
    lhs = form_det(submatrix(M, w.rows, w.cols))
    total = None
    for coef, sr, sc in w.terms:
        t = multiply(coef, form_det(submatrix(M, sr, sc)))
        total = t if total is None else total + t
    return total == lhs


def fit_divisor_degree(d: int, r: int, c1Q: int, L: int) -> int:
    """(d - r) r (c1Q - r L): degree of the divisor cut out inside Fit_r."""
    if r < 1 or d <= r:
        raise BoundError("need d > r >= 1")
    return (d - r) * r * (c1Q - r * L)


def lct_lower_bound(upsilon, d: int, r: int, deg_beta: int) -> Fraction:
    """1 / (upsilon (d - r) r deg_beta); upsilon has no default on purpose."""
    upsilon = Fraction(upsilon)
    if upsilon <= 0 or d <= 0 or r <= 0 or deg_beta <= 0:
        raise BoundError("inputs must be positive")
    if d <= r:
        raise BoundError("need more generators than the rank")
    return 1 / (upsilon * (d - r) * r * deg_beta)
