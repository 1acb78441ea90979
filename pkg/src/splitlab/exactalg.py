"""Exact arithmetic: prime fields, rationals, dense matrices and homogeneous forms.

Elements of ``GF(p)`` are plain ints in ``range(p)``; elements of ``QQ`` are
``fractions.Fraction``.  Every routine works on either, using ``field.reduce``
after ring operations.

Monomial order is graded lexicographic with x > y > z (three variables) and
s > t (two variables).  A binary form of degree d therefore stores the
coefficient of ``s^(d-i) t^i`` at index i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np


class FieldError(ValueError):
    """Bad field configuration (non-prime modulus, mismatched fields)."""


class DegenerateInputError(ValueError):
    """Input outside the domain of an operation (e.g. gcd(0, 0))."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


# products of two reduced elements must fit in int64 for the numpy kernel
_NUMPY_MAX_P = 2**31


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not _is_prime(self.p) or self.p == 2:
            raise FieldError(f"field order must be an odd prime, got {self.p}")

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x: int) -> int:
        return x % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def random(self, rng) -> int:
        return rng.randrange(self.p)

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class RationalField:
    @property
    def characteristic(self) -> int:
        return 0

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def reduce(self, x) -> Fraction:
        return x

    def inv(self, a) -> Fraction:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def random(self, rng, bound: int = 9) -> Fraction:
        return Fraction(rng.randint(-bound, bound))

    def __str__(self):
        return "QQ"


Field = PrimeField | RationalField

QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(spec: int | str) -> Field:
    """``0``/``"QQ"`` gives the rationals, a prime gives ``GF(p)``."""
    if spec in (0, "0", "QQ", "Q"):
        return QQ
    return GF(int(spec))


def format_scalar(c) -> str:
    return str(c)


def parse_scalar(field: Field, text: str):
    return field(Fraction(text)) if "/" in text else field(int(text))


# ---------------------------------------------------------------------------
# dense matrices


def _rref_modp(rows: list[list[int]], ncols: int, p: int) -> list[int]:
    """In-place reduced row echelon form over GF(p); returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = pow(prow[c], -1, p)
        if inv != 1:
            prow = rows[r] = [v * inv % p for v in prow]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return pivots


def _rref_numpy(arr: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = arr.astype(np.int64) % p
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _rref_generic(rows: list[list], ncols: int, field: Field) -> list[int]:
    pivots = []
    r = 0
    nrows = len(rows)
    red = field.reduce
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [red(v * inv) for v in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [red(a - f * b) for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return pivots


def rref(field: Field, rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns of a scalar matrix."""
    if isinstance(field, PrimeField):
        p = field.p
        if len(rows) * ncols > 1600 and p < _NUMPY_MAX_P:
            a, piv = _rref_numpy(np.array(rows, dtype=np.int64).reshape(len(rows), ncols), p)
            return a.tolist(), piv
        work = [[v % p for v in row] for row in rows]
        return work, _rref_modp(work, ncols, p)
    work = [list(row) for row in rows]
    return work, _rref_generic(work, ncols, field)


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over an exact field; ``entries`` is a tuple of row tuples."""

    field: Field
    nrows: int
    ncols: int
    entries: tuple

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Iterable], ncols: int | None = None) -> Matrix:
        data = tuple(tuple(field(v) for v in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(data[0])
        if any(len(row) != ncols for row in data):
            raise ValueError("ragged rows")
        return cls(field, len(data), ncols, data)

    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        return cls.from_rows(field, [[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> Matrix:
        return cls.from_rows(field, [[0] * ncols for _ in range(nrows)], ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> Matrix:
        if self.nrows == 0:
            return Matrix(self.field, self.ncols, 0, tuple(() for _ in range(self.ncols)))
        return Matrix(self.field, self.ncols, self.nrows, tuple(zip(*self.entries)))

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        red = self.field.reduce
        cols = [other.column(j) for j in range(other.ncols)]
        data = tuple(
            tuple(red(sum(a * b for a, b in zip(row, col))) for col in cols) for row in self.entries
        )
        return Matrix(self.field, self.nrows, other.ncols, data)

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)

    def rank(self) -> int:
        return rank(self)

    def kernel_basis(self) -> Matrix:
        return kernel_basis(self)


def rank(M: Matrix) -> int:
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return len(rref(M.field, M.entries, M.ncols)[1])


def rank_of_rows(field: Field, rows: Sequence[Sequence], ncols: int) -> int:
    """Rank of a raw row list; skips building a ``Matrix``."""
    if not rows or ncols == 0:
        return 0
    return len(rref(field, rows, ncols)[1])


def kernel_basis(M: Matrix) -> Matrix:
    """Columns spanning the right kernel, one per free column of the RREF."""
    n = M.ncols
    if M.nrows == 0:
        R, pivots = [], []
    else:
        R, pivots = rref(M.field, M.entries, n)
    free = [c for c in range(n) if c not in set(pivots)]
    red = M.field.reduce
    basis = []
    for f in free:
        v = [M.field(0)] * n
        v[f] = M.field(1)
        for k, pc in enumerate(pivots):
            v[pc] = red(-R[k][f])
        basis.append(v)
    data = tuple(tuple(basis[k][i] for k in range(len(basis))) for i in range(n))
    return Matrix(M.field, n, len(basis), data)


def det(M: Matrix):
    if M.nrows != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    field = M.field
    rows = [list(r) for r in M.entries]
    n = M.nrows
    red = field.reduce
    result = field(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return field(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            result = red(-result)
        result = red(result * rows[c][c])
        inv = field.inv(rows[c][c])
        for i in range(c + 1, n):
            f = red(rows[i][c] * inv)
            if f != 0:
                rows[i] = [red(a - f * b) for a, b in zip(rows[i], rows[c])]
    return result


# ---------------------------------------------------------------------------
# homogeneous forms


def basis_size(num_vars: int, degree: int) -> int:
    if degree < 0:
        return 0
    if num_vars == 2:
        return degree + 1
    if num_vars == 3:
        return (degree + 1) * (degree + 2) // 2
    raise ValueError("only 2 or 3 variables are supported")


@lru_cache(maxsize=None)
def hom_basis(num_vars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Monomial exponent tuples of the given degree, in graded lex order."""
    if degree < 0:
        return ()
    if num_vars == 2:
        return tuple((degree - i, i) for i in range(degree + 1))
    if num_vars == 3:
        return tuple(
            (a, b, degree - a - b) for a in range(degree, -1, -1) for b in range(degree - a, -1, -1)
        )
    raise ValueError("only 2 or 3 variables are supported")


@lru_cache(maxsize=None)
def _monomial_index(num_vars: int, degree: int) -> dict:
    return {m: i for i, m in enumerate(hom_basis(num_vars, degree))}


_VAR_NAMES = {2: "st", 3: "xyz"}


@dataclass(frozen=True, eq=False)
class HomForm:
    """Homogeneous polynomial in 2 or 3 variables with a dense coefficient vector.

    The zero form keeps its degree but compares equal to zero of any degree.
    Negative degrees are allowed for zero forms only (entries of presentation
    matrices between line bundles with a negative twist difference).
    """

    field: Field
    num_vars: int
    degree: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != basis_size(self.num_vars, self.degree):
            raise ValueError(
                f"coefficient vector of length {len(self.coeffs)} does not match "
                f"degree {self.degree} in {self.num_vars} variables"
            )

    # construction -----------------------------------------------------------
    @classmethod
    def zero(cls, field: Field, num_vars: int, degree: int) -> HomForm:
        return cls(field, num_vars, degree, (field(0),) * basis_size(num_vars, degree))

    @classmethod
    def constant(cls, field: Field, num_vars: int, c=1) -> HomForm:
        return cls(field, num_vars, 0, (field(c),))

    @classmethod
    def from_coeffs(cls, field: Field, num_vars: int, degree: int, coeffs: Iterable) -> HomForm:
        return cls(field, num_vars, degree, tuple(field(c) for c in coeffs))

    @classmethod
    def from_terms(cls, field: Field, num_vars: int, degree: int, terms: dict) -> HomForm:
        idx = _monomial_index(num_vars, degree)
        vec = [field(0)] * basis_size(num_vars, degree)
        for mono, c in terms.items():
            if sum(mono) != degree or len(mono) != num_vars:
                raise ValueError(f"monomial {mono} is not of degree {degree}")
            vec[idx[tuple(mono)]] = field.reduce(vec[idx[tuple(mono)]] + field(c))
        return cls(field, num_vars, degree, tuple(vec))

    @classmethod
    def monomial(cls, field: Field, exps: Sequence[int], c=1) -> HomForm:
        return cls.from_terms(field, len(exps), sum(exps), {tuple(exps): c})

    @classmethod
    def random(cls, field: Field, num_vars: int, degree: int, rng) -> HomForm:
        return cls(field, num_vars, degree, tuple(field.random(rng) for _ in range(basis_size(num_vars, degree))))

    # basic queries ----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not any(c != 0 for c in self.coeffs)

    def terms(self) -> dict:
        return {m: c for m, c in zip(hom_basis(self.num_vars, self.degree), self.coeffs) if c != 0}

    def leading_coefficient(self):
        return next((c for c in self.coeffs if c != 0), self.field(0))

    def monic(self) -> HomForm:
        lc = self.leading_coefficient()
        if lc == 0:
            return self
        return self.scale(self.field.inv(lc))

    def __eq__(self, other):
        if not isinstance(other, HomForm):
            if isinstance(other, (int, Fraction)) and other == 0:
                return self.is_zero
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return (self.num_vars, self.degree, self.coeffs) == (other.num_vars, other.degree, other.coeffs)

    def __hash__(self):
        if self.is_zero:
            return hash(0)
        return hash((self.num_vars, self.degree, self.coeffs))

    def __repr__(self):
        if self.is_zero:
            return f"0[deg {self.degree}]"
        names = _VAR_NAMES[self.num_vars]
        parts = []
        for mono, c in self.terms().items():
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    # arithmetic -------------------------------------------------------------
    def _check_compatible(self, other: HomForm):
        if self.field != other.field or self.num_vars != other.num_vars:
            raise FieldError("forms over different rings")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        self._check_compatible(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degrees {self.degree} and {other.degree}")
        red = self.field.reduce
        return HomForm(self.field, self.num_vars, self.degree, tuple(red(a + b) for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        red = self.field.reduce
        return HomForm(self.field, self.num_vars, self.degree, tuple(red(-a) for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> HomForm:
        c = self.field(c)
        red = self.field.reduce
        return HomForm(self.field, self.num_vars, self.degree, tuple(red(c * a) for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, HomForm):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> HomForm:
        result = HomForm.constant(self.field, self.num_vars)
        for _ in range(n):
            result = multiply(result, self)
        return result

    def __call__(self, *point):
        return evaluate(self, point)


def coefficient_vector(f: HomForm) -> tuple:
    return f.coeffs


def form_variables(field: Field, num_vars: int) -> tuple[HomForm, ...]:
    return tuple(HomForm.monomial(field, tuple(int(i == j) for j in range(num_vars))) for i in range(num_vars))


def multiply(f: HomForm, g: HomForm) -> HomForm:
    f._check_compatible(g)
    field, nv = f.field, f.num_vars
    deg = f.degree + g.degree
    if f.is_zero or g.is_zero:
        return HomForm.zero(field, nv, deg) if deg >= 0 else HomForm(field, nv, deg, ())
    if nv == 2:
        if isinstance(field, PrimeField):
            p = field.p
            out = [0] * (deg + 1)
            for i, a in enumerate(f.coeffs):
                if a:
                    for j, b in enumerate(g.coeffs):
                        out[i + j] += a * b
            return HomForm(field, 2, deg, tuple(v % p for v in out))
        out = [Fraction(0)] * (deg + 1)
        for i, a in enumerate(f.coeffs):
            if a:
                for j, b in enumerate(g.coeffs):
                    out[i + j] += a * b
        return HomForm(field, 2, deg, tuple(out))
    idx = _monomial_index(nv, deg)
    out = [field(0)] * basis_size(nv, deg)
    gt = list(g.terms().items())
    for m1, a in f.terms().items():
        for m2, b in gt:
            k = idx[(m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])]
            out[k] = out[k] + a * b
    red = field.reduce
    return HomForm(field, nv, deg, tuple(red(v) for v in out))


def evaluate(f: HomForm, point: Sequence):
    field = f.field
    pt = [field(v) for v in point]
    if len(pt) != f.num_vars:
        raise ValueError("point has the wrong number of coordinates")
    red = field.reduce
    total = field(0)
    for mono, c in f.terms().items():
        term = c
        for v, e in zip(pt, mono):
            if e:
                term = red(term * v**e)
        total = red(total + term)
    return total


def substitute(f: HomForm, forms: Sequence[HomForm]) -> HomForm:
    """Compose ``f`` with a tuple of forms of a common degree (pullback along a map)."""
    if len(forms) != f.num_vars:
        raise ValueError(f"need {f.num_vars} forms to substitute, got {len(forms)}")
    degs = {g.degree for g in forms}
    if len(degs) != 1:
        raise ValueError(f"substituted forms must share a degree, got {sorted(degs)}")
    d = degs.pop()
    field = f.field
    nv = forms[0].num_vars
    for g in forms:
        if g.field != field or g.num_vars != nv:
            raise FieldError("substituted forms over different rings")
    out_deg = f.degree * d
    if f.is_zero:
        return HomForm.zero(field, nv, out_deg) if out_deg >= 0 else HomForm(field, nv, out_deg, ())
    n = f.degree
    powers = []
    for g in forms:
        pw = [HomForm.constant(field, nv)]
        for _ in range(n):
            pw.append(multiply(pw[-1], g))
        powers.append(pw)
    result = HomForm.zero(field, nv, out_deg)
    for mono, c in f.terms().items():
        term = None
        for k, e in enumerate(mono):
            if e:
                term = powers[k][e] if term is None else multiply(term, powers[k][e])
        if term is None:
            term = HomForm.constant(field, nv)
        result = result + term.scale(c)
    return result


def multiplication_matrix(g: HomForm, src_degree: int) -> list[list]:
    """Matrix of ``h -> g*h`` from forms of ``src_degree`` to ``src_degree + deg g``.

    Rows index the target monomial basis, columns the source basis.
    """
    field, nv = g.field, g.num_vars
    tdeg = src_degree + g.degree
    nsrc, ntgt = basis_size(nv, src_degree), basis_size(nv, tdeg)
    zero = field(0)
    M = [[zero] * nsrc for _ in range(ntgt)]
    if nsrc == 0 or ntgt == 0 or g.is_zero:
        return M
    if nv == 2:
        for j in range(nsrc):
            for i, c in enumerate(g.coeffs):
                if c != 0:
                    M[i + j][j] = c
        return M
    idx = _monomial_index(nv, tdeg)
    gt = list(g.terms().items())
    for j, u in enumerate(hom_basis(nv, src_degree)):
        for m, c in gt:
            M[idx[(u[0] + m[0], u[1] + m[1], u[2] + m[2])]][j] = c
    return M


def graded_map_rows(matrix: Sequence[Sequence[HomForm]], field: Field, num_vars: int,
                    source: Sequence[int], target: Sequence[int], m: int) -> tuple[list[list], int]:
    """Scalar matrix of ``sum_j H^0(O(source_j + m)) -> sum_i H^0(O(target_i + m))``.

    ``matrix[i][j]`` maps summand j to summand i.  Returns the row list and the
    column count (which may be zero).
    """
    col_sizes = [basis_size(num_vars, a + m) for a in source]
    row_sizes = [basis_size(num_vars, b + m) for b in target]
    ncols = sum(col_sizes)
    zero = field(0)
    rows: list[list] = []
    for i, b in enumerate(target):
        block_rows = [[zero] * ncols for _ in range(row_sizes[i])]
        off = 0
        for j, a in enumerate(source):
            g = matrix[i][j]
            if col_sizes[j] and row_sizes[i] and not g.is_zero:
                block = multiplication_matrix(g, a + m)
                for r in range(row_sizes[i]):
                    br = block[r]
                    row = block_rows[r]
                    for c in range(col_sizes[j]):
                        if br[c] != 0:
                            row[off + c] = br[c]
            off += col_sizes[j]
        rows.extend(block_rows)
    return rows, ncols


# ---------------------------------------------------------------------------
# binary-form gcd


def _poly_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: list, b: list, field: Field) -> tuple[list, list]:
    """Univariate division, coefficient lists ordered low to high degree."""
    red = field.reduce
    a = list(a)
    q = [field(0)] * max(len(a) - len(b) + 1, 1)
    inv = field.inv(b[-1])
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = red(a[-1] * inv)
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = red(a[shift + i] - c * bc)
        _poly_trim(a)
    return q, a


def _poly_gcd(a: list, b: list, field: Field) -> list:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        _, r = _poly_divmod(a, b, field)
        a, b = b, r
    if not a:
        return a
    inv = field.inv(a[-1])
    return [field.reduce(c * inv) for c in a]


def _split_binary(f: HomForm) -> tuple[int, int, list]:
    """Write f = s^vs t^vt h with s, t not dividing h; return (vs, vt, h in s at t=1)."""
    c = f.coeffs
    vt = next(i for i, v in enumerate(c) if v != 0)
    vs = next(i for i, v in enumerate(reversed(c)) if v != 0)
    core = c[vt:len(c) - vs]
    # coefficient of s^(deg - i) at index i; low-to-high in s is the reverse
    return vs, vt, list(reversed(core))


def hom_gcd(f: HomForm, g: HomForm) -> HomForm:
    """Monic gcd of two binary forms (leading coefficient in s > t order is 1)."""
    if f.num_vars != 2 or g.num_vars != 2:
        raise ValueError("hom_gcd is defined for binary forms")
    f._check_compatible(g)
    if f.is_zero and g.is_zero:
        raise DegenerateInputError("gcd of two zero forms")
    if f.is_zero:
        return g.monic()
    if g.is_zero:
        return f.monic()
    fs, ft, fh = _split_binary(f)
    gs, gt, gh = _split_binary(g)
    u = _poly_gcd(fh, gh, f.field)
    k = len(u) - 1
    # re-homogenize: s^j t^(k-j) sits at index k - j
    core = HomForm(f.field, 2, k, tuple(u[k - i] for i in range(k + 1)))
    vs, vt = min(fs, gs), min(ft, gt)
    mono = HomForm.monomial(f.field, (vs, vt))
    return multiply(core, mono).monic()


def hom_gcd_many(forms: Iterable[HomForm]) -> HomForm:
    result = None
    for f in forms:
        if result is None:
            result = f if not f.is_zero else None
            continue
        if f.is_zero:
            continue
        result = hom_gcd(result, f)
        if result.degree == 0:
            return result
    if result is None:
        raise DegenerateInputError("gcd of zero forms")
    return result.monic()


# ---------------------------------------------------------------------------
# matrices of forms


def form_det(rows: Sequence[Sequence[HomForm]]) -> HomForm:
    """Determinant of a square matrix of forms by memoized Laplace expansion."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty determinant; use a unit form explicitly")
    memo: dict = {}

    def rec(r: int, cols: tuple[int, ...]) -> HomForm:
        if r == n - 1:
            return rows[r][cols[0]]
        key = (r, cols)
        if key in memo:
            return memo[key]
        total = None
        for k, c in enumerate(cols):
            entry = rows[r][c]
            if entry.is_zero:
                continue
            sub = rec(r + 1, cols[:k] + cols[k + 1:])
            if sub.is_zero:
                continue
            term = multiply(entry, sub)
            if k % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            total = _zero_det(rows, r, cols)
        memo[key] = total
        return total

    return rec(0, tuple(range(n)))


def _zero_det(rows, r, cols) -> HomForm:
    f = rows[r][cols[0]]
    deg = sum(max(rows[i][c].degree, 0) for i, c in zip(range(r, len(rows)), cols))
    return HomForm.zero(f.field, f.num_vars, deg)


def submatrix(rows: Sequence[Sequence], ridx: Sequence[int], cidx: Sequence[int]) -> list[list]:
    return [[rows[i][j] for j in cidx] for i in ridx]


def minors(rows: Sequence[Sequence[HomForm]], k: int):
    """Yield ``(row_subset, col_subset, det)`` for every k-by-k minor, lexicographically."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    for ridx in combinations(range(nrows), k):
        for cidx in combinations(range(ncols), k):
            yield ridx, cidx, form_det(submatrix(rows, ridx, cidx))


def form_matmul(A: Sequence[Sequence[HomForm]], B: Sequence[Sequence[HomForm]]) -> list[list[HomForm]]:
    out = []
    for row in A:
        out_row = []
        for j in range(len(B[0])):
            total = None
            for a, brow in zip(row, B):
                t = multiply(a, brow[j])
                total = t if total is None else total + t
            out_row.append(total)
        out.append(out_row)
    return out


def evaluate_matrix(rows: Sequence[Sequence[HomForm]], point: Sequence) -> Matrix:
    field = rows[0][0].field
    return Matrix.from_rows(field, [[evaluate(f, point) for f in row] for row in rows], len(rows[0]))


def generic_rank(rows: Sequence[Sequence[HomForm]], trials: int = 4, seed: int = 0) -> int:
    """Rank over the function field, via evaluation at pseudo-random points.

    A strict lower bound can only occur if every sampled point lies on the
    degeneracy locus; with several points over a large field this is negligible.
    """
    import random

    if not rows or not rows[0]:
        return 0
    f0 = rows[0][0]
    field, nv = f0.field, f0.num_vars
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        pt = [field.random(rng) for _ in range(nv)]
        best = max(best, rank(evaluate_matrix(rows, pt)))
        if best == min(len(rows), len(rows[0])):
            break
    return best
