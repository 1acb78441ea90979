import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from splitlab.bounds import BoundError
from splitlab.exactalg import GF, HomForm, form_det, form_variables, minors
from splitlab.fitting import (
    FittingError,
    SingularSelectionError,
    adjugate_kernel,
    fit_divisor_degree,
    fitting_generators,
    laplace_witness,
    lct_lower_bound,
    matvec,
    verify_certificate,
    verify_laplace_witness,
)

F = GF(101)
x, y, z = form_variables(F, 3)


def rand_linear_matrix(rng, m, n, deg=1):
    return [[HomForm.random(F, 3, deg, rng) for _ in range(n)] for _ in range(m)]


def test_fitting_of_symmetric_2x2():
    M = [[x, y], [y, z]]
    fit0 = fitting_generators(M, 2, 0)
    assert fit0.minors == (x * z - y * y,)
    fit1 = fitting_generators(M, 2, 1)
    assert set(fit1.minors) == {x, y, z} and len(fit1.minors) == 3


def test_fitting_conventions():
    M = [[x, y], [y, z]]
    assert fitting_generators(M, 2, 2).unit
    assert fitting_generators(M, 3, 0).is_zero_ideal
    with pytest.raises(FittingError):
        fitting_generators([[x], [x, y]], 2, 0)


def test_adjugate_worked_example():
    N = [[x, y, HomForm.zero(F, 3, 1)], [HomForm.zero(F, 3, 1), x, y]]
    cert = adjugate_kernel(N, 2, rows=(0, 1), cols=(0, 1))
    assert cert.detA == x * x
    (v,) = cert.kernel_vectors
    assert v == (y * y, -(x * y), x * x)
    assert all(e.is_zero for e in matvec(N, v))


def test_adjugate_square_matrix_has_no_vectors():
    cert = adjugate_kernel([[x, y], [z, x]], 2)
    assert cert.kernel_vectors == ()


def test_adjugate_singular_selection():
    N = [[x, x, y], [y, y, z]]
    with pytest.raises(SingularSelectionError):
        adjugate_kernel(N, 2, rows=(0, 1), cols=(0, 1))
    cert = adjugate_kernel(N, 2)  # lexicographic search moves past the singular block
    assert cert.selected_cols == (0, 2)


def test_adjugate_requires_uniform_degree():
    with pytest.raises(FittingError):
        adjugate_kernel([[x, y * y, z]], 1)


def test_random_2x4_certificates():
    rng = random.Random(0)
    for _ in range(100):
        N = rand_linear_matrix(rng, 2, 4)
        cert = adjugate_kernel(N, 2)
        assert len(cert.kernel_vectors) == 2
        assert verify_certificate(N, cert)
        for v in cert.kernel_vectors:
            assert all(e.is_zero for e in matvec(N, v))
            assert all(e.is_zero or e.degree == 2 for e in v)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 3), st.integers(0, 2), st.integers(1, 2))
def test_det_is_an_r_minor(seed, r, extra, deg):
    rng = random.Random(seed)
    d = r + extra
    N = rand_linear_matrix(rng, r, d, deg)
    cert = adjugate_kernel(N, r)
    gens = fitting_generators(N, d, d - r)  # the r x r minors
    assert gens.contains_up_to_sign(cert.detA)
    # degree bookkeeping: (d - r) r deg == (d - r) deg(det A)
    if d > r:
        assert fit_divisor_degree(d, r, deg, 0) == (d - r) * cert.detA.degree


def test_laplace_witness_3x4():
    rng = random.Random(1)
    for _ in range(30):
        M = rand_linear_matrix(rng, 3, 4)
        two_minors = fitting_generators(M, 3, 1)
        for ridx, cidx, m in minors(M, 3):
            w = laplace_witness(M, ridx, cidx)
            assert verify_laplace_witness(M, w)
            for coef, sr, sc in w.terms:
                sub = form_det([[M[i][j] for j in sc] for i in sr])
                assert sub.is_zero or two_minors.contains_up_to_sign(sub)


def test_laplace_witness_detects_tampering():
    M = [[x, y, z], [y, z, x], [z, x, y]]
    w = laplace_witness(M, (0, 1, 2), (0, 1, 2))
    coef, sr, sc = w.terms[0]
    bad = type(w)(w.rows, w.cols, ((coef + x, sr, sc),) + w.terms[1:])
    assert not verify_laplace_witness(M, bad)


def test_fit_divisor_degree():
    assert fit_divisor_degree(3, 2, 2, 0) == 4
    assert fit_divisor_degree(4, 2, 6, 3) == 0
    assert fit_divisor_degree(5, 1, 3, 0) == 12
    with pytest.raises(BoundError):
        fit_divisor_degree(2, 2, 1, 0)


def test_lct_bound():
    assert lct_lower_bound(1, 3, 2, 2) == Fr(1, 4)
    assert lct_lower_bound(2, 5, 1, 3) == Fr(1, 24)
    base = lct_lower_bound(1, 4, 1, 5)
    for c in (2, Fr(1, 3), 7):
        assert lct_lower_bound(c, 4, 1, 5) == base / c
    with pytest.raises(BoundError):
        lct_lower_bound(0, 3, 2, 2)


def test_certificate_text():
    N = [[x, y, z]]
    cert = adjugate_kernel(N, 1)
    text = cert.to_text()
    assert text.startswith("rows 0\ncols 0\n")
    assert text.count("vector") == 4  # two vectors, two nonzero entries each
