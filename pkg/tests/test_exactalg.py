import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from splitlab.exactalg import (
    GF,
    QQ,
    DegenerateInputError,
    FieldError,
    HomForm,
    Matrix,
    det,
    evaluate,
    form_det,
    form_variables,
    hom_basis,
    hom_gcd,
    kernel_basis,
    multiply,
    parse_field,
    rank,
    substitute,
)

from oracles import bareiss_rank, eval_binary, eval_ternary, have_common_zero, leibniz_det, sylvester_resultant

F101 = GF(101)


def rand_matrix(rng, F, m, n):
    return Matrix.from_rows(F, [[F.random(rng) for _ in range(n)] for _ in range(m)], n)


def low_rank_matrix(rng, F, m, n, r):
    A = rand_matrix(rng, F, m, r)
    B = rand_matrix(rng, F, r, n)
    return A @ B


# fields ------------------------------------------------------------------------


def test_prime_field_rejects_composites_and_two():
    for bad in (1, 4, 9, 2, 100):
        with pytest.raises(FieldError):
            GF(bad)


def test_field_arithmetic_inverse():
    F = GF(7)
    for a in range(1, 7):
        assert a * F.inv(a) % 7 == 1
    with pytest.raises((FieldError, ZeroDivisionError)):
        F.inv(0)


def test_parse_field_names():
    assert parse_field(0) is QQ or parse_field(0) == QQ
    assert parse_field("QQ") == QQ
    assert parse_field(101) == F101


def test_fraction_coerces_into_prime_field():
    assert F101(Fraction(1, 2)) * 2 % 101 == 1


# rank and kernels --------------------------------------------------------------


def test_rank_trivial_cases():
    assert rank(Matrix.identity(F101, 2)) == 2
    assert rank(Matrix.from_rows(F101, [[1, 1]], 2)) == 1


def test_rank_matches_bareiss_oracle_on_random_square_matrices():
    rng = random.Random(11)
    for trial in range(1000):
        r = rng.choice([10, 10, 10, 7, 4])
        M = low_rank_matrix(rng, F101, 10, 10, r) if trial % 3 else rand_matrix(rng, F101, 10, 10)
        assert rank(M) == bareiss_rank([list(row) for row in M.entries], 101)


def test_rank_large_matrix_uses_same_answer_as_oracle():
    # big enough to take the vectorized path
    rng = random.Random(5)
    M = low_rank_matrix(rng, GF(32003), 50, 45, 31)
    assert rank(M) == 31 == bareiss_rank([list(r) for r in M.entries], 32003)


def test_kernel_trivial_cases():
    K = kernel_basis(Matrix.from_rows(F101, [[1, 1]], 2))
    assert K.ncols == 1
    v = K.column(0)
    assert (v[0] + v[1]) % 101 == 0 and v != (0, 0)
    assert kernel_basis(Matrix.identity(F101, 3)).ncols == 0


def test_kernel_random_8x12():
    rng = random.Random(3)
    for _ in range(100):
        M = low_rank_matrix(rng, F101, 8, 12, rng.randint(1, 8))
        K = kernel_basis(M)
        assert all(x == 0 for row in (M @ K).entries for x in row)
        assert rank(K) == 12 - rank(M) == K.ncols


def test_rank_over_rationals():
    M = Matrix.from_rows(QQ, [[Fraction(1, 2), 1], [1, 2]], 2)
    assert rank(M) == 1
    assert det(M) == 0


def test_det_matches_leibniz():
    rng = random.Random(8)
    for _ in range(200):
        n = rng.randint(1, 5)
        M = rand_matrix(rng, F101, n, n)
        assert det(M) % 101 == leibniz_det([list(r) for r in M.entries], 101)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32))
def test_rank_nullity(m, n, seed):
    rng = random.Random(seed)
    M = low_rank_matrix(rng, F101, m, n, rng.randint(1, min(m, n)))
    assert rank(M) + kernel_basis(M).ncols == n


# forms -------------------------------------------------------------------------


def test_monomial_order_is_graded_lex():
    assert hom_basis(3, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    assert hom_basis(2, 3) == ((3, 0), (2, 1), (1, 2), (0, 3))


def test_gcd_examples():
    s, t = form_variables(F101, 2)
    assert hom_gcd(s * s * t, s * t * t) == s * t
    one = HomForm.constant(F101, 2)
    assert hom_gcd(s**3 + t**3, one) == one


def test_gcd_of_zero_forms_is_an_error():
    z = HomForm.zero(F101, 2, 2)
    with pytest.raises(DegenerateInputError):
        hom_gcd(z, z)


def test_gcd_random_degree6_agrees_with_resultant():
    rng = random.Random(21)
    for _ in range(300):
        f = HomForm.random(F101, 2, 6, rng)
        g = HomForm.random(F101, 2, 6, rng)
        if rng.random() < 0.3:
            h = HomForm.random(F101, 2, rng.randint(1, 3), rng)
            f = multiply(HomForm.random(F101, 2, 6 - h.degree, rng), h)
            g = multiply(HomForm.random(F101, 2, 6 - h.degree, rng), h)
        if f.is_zero or g.is_zero:
            continue
        coprime = hom_gcd(f, g).degree == 0
        assert coprime == (sylvester_resultant(list(f.coeffs), list(g.coeffs), 101) != 0)


def _divides(g, f):
    # exact division test by solving multiply(q, g) == f over coefficient space
    if f.is_zero:
        return True
    qdeg = f.degree - g.degree
    if qdeg < 0:
        return False
    cols = []
    for mono in hom_basis(2, qdeg):
        cols.append(multiply(HomForm.monomial(g.field, mono), g).coeffs)
    A = Matrix.from_rows(g.field, [list(r) for r in zip(*cols)], len(cols))
    aug = Matrix.from_rows(g.field, [list(r) + [c] for r, c in zip(zip(*cols), f.coeffs)], len(cols) + 1)
    return rank(A) == rank(aug)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32))
def test_gcd_divides_both(seed):
    rng = random.Random(seed)
    h = HomForm.random(F101, 2, rng.randint(0, 3), rng)
    f = multiply(HomForm.random(F101, 2, rng.randint(0, 3), rng), h)
    g = multiply(HomForm.random(F101, 2, rng.randint(0, 3), rng), h)
    if f.is_zero and g.is_zero:
        return
    d = hom_gcd(f, g)
    assert _divides(d, f) and _divides(d, g)


def test_substitute_examples():
    x, y, z = form_variables(F101, 3)
    s, t = form_variables(F101, 2)
    zero = HomForm.zero(F101, 2, 1)
    assert substitute(x, (s, t, zero)) == s
    assert substitute(x * z - y * y, (s * s, s * t, t * t)).is_zero


def test_substitute_agrees_with_pointwise_evaluation():
    rng = random.Random(4)
    for _ in range(50):
        f = HomForm.random(F101, 3, 3, rng)
        triple = tuple(HomForm.random(F101, 2, 2, rng) for _ in range(3))
        g = substitute(f, triple)
        for _ in range(20):
            a, b = rng.randrange(101), rng.randrange(101)
            point = [eval_binary(list(h.coeffs), a, b, 101) for h in triple]
            assert eval_binary(list(g.coeffs), a, b, 101) == eval_ternary(f.terms(), point, 101)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 3), st.integers(0, 3), st.integers(1, 3))
def test_substitute_is_multiplicative(seed, df, dg, d):
    rng = random.Random(seed)
    f = HomForm.random(F101, 3, df, rng)
    g = HomForm.random(F101, 3, dg, rng)
    triple = tuple(HomForm.random(F101, 2, d, rng) for _ in range(3))
    assert substitute(f * g, triple) == multiply(substitute(f, triple), substitute(g, triple))
    assert substitute(f + f, triple) == substitute(f, triple) + substitute(f, triple)


def test_evaluate_matches_oracle():
    rng = random.Random(9)
    for _ in range(100):
        f = HomForm.random(F101, 3, rng.randint(0, 4), rng)
        pt = [rng.randrange(101) for _ in range(3)]
        assert evaluate(f, pt) == eval_ternary(f.terms(), pt, 101)


def test_form_det_matches_pointwise_det():
    rng = random.Random(2)
    for _ in range(30):
        n = rng.randint(1, 4)
        M = [[HomForm.random(F101, 3, 1, rng) for _ in range(n)] for _ in range(n)]
        D = form_det(M)
        pt = [rng.randrange(101) for _ in range(3)]
        vals = [[evaluate(f, pt) for f in row] for row in M]
        assert evaluate(D, pt) == leibniz_det(vals, 101)


def test_common_zero_oracle_agrees_with_library_gcd():
    from splitlab.exactalg import hom_gcd_many

    rng = random.Random(17)
    seen_bad = 0
    for _ in range(200):
        d = rng.randint(1, 3)
        forms = [HomForm.random(F101, 2, d, rng) for _ in range(3)]
        if rng.random() < 0.3:
            lin = HomForm.random(F101, 2, 1, rng)
            forms = [multiply(HomForm.random(F101, 2, d - 1, rng), lin) for _ in range(3)]
        if all(f.is_zero for f in forms):
            continue
        shared = hom_gcd_many(forms).degree > 0
        seen_bad += shared
        assert shared == have_common_zero([list(f.coeffs) for f in forms], 101)
    assert seen_bad > 10
