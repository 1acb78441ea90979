import math
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from splitlab.bounds import (
    BlowupModel,
    BoundError,
    BoundInputs,
    all_bounds,
    blowup_model_check,
    disconnected_dim_bound,
    exact_sqrt,
    expected_codim_rank2,
    genfinite_dim_bound,
    gm_codim_bound,
    goodbounds_verdict,
    mixed_codim_bound,
    moduli_dim_bounds,
    p2_relcanonical_bound,
    sample_blowup_models,
    tangentgaps_bound,
    zeta_prime,
)


def test_tangent_bundle_sharp_constant():
    b = p2_relcanonical_bound(2, 3, 3)
    assert b.value == Fr(1, 2) and isinstance(b.value, Fr)
    assert zeta_prime(3, 3) == Fr(1, 2)


@pytest.mark.parametrize("d", range(2, 12))
def test_tangent_bound_closed_form(d):
    # for c1 = c2 = 3 the radicand is 1 - 3 / (4 (d^2 - 3d + 3))
    assert p2_relcanonical_bound(d, 3, 3).radicand == 1 - Fr(3, 4 * (d * d - 3 * d + 3))


def test_relcanonical_examples():
    assert p2_relcanonical_bound(1, 0, 0).value == 1
    v = p2_relcanonical_bound(1, 0, 1).value
    assert abs(v - math.sqrt(0.5)) < 1e-12
    assert zeta_prime(0, 0) == 1
    assert abs(zeta_prime(0, 1) - math.sqrt(0.5)) < 1e-12


def test_relcanonical_errors():
    with pytest.raises(BoundError):
        p2_relcanonical_bound(2, 3, 2)  # Bogomolov fails
    with pytest.raises(BoundError):
        p2_relcanonical_bound(1, 3, 3)  # dQ below the slope


def chern_data():
    return st.tuples(st.integers(-8, 8), st.integers(0, 40)).filter(lambda ef: 4 * ef[1] - ef[0] ** 2 >= 0)


@settings(max_examples=400, deadline=None)
@given(chern_data(), st.integers(1, 10))
def test_two_closed_forms_agree(ef, step):
    e, f = ef
    dQ = e // 2 + step
    b = p2_relcanonical_bound(dQ, e, f)
    assert math.isclose(float(b.value), float(b.ratio_form), rel_tol=1e-12)
    # squared ratio form equals the radicand exactly
    x = Fr(dQ) - Fr(e, 2)
    assert x * x / (dQ * dQ - dQ * e + f) == b.radicand


@settings(max_examples=300, deadline=None)
@given(chern_data(), st.integers(1, 10))
def test_monotone_in_quotient_degree_and_zeta_is_minimum(ef, step):
    e, f = ef
    dQ = e // 2 + step
    lo, hi = p2_relcanonical_bound(dQ, e, f), p2_relcanonical_bound(dQ + 1, e, f)
    if 4 * f - e * e > 0:
        assert lo.radicand < hi.radicand
    else:
        assert lo.radicand == hi.radicand == 1
    assert zeta_prime(e, f) <= lo.value


def test_exact_sqrt():
    assert exact_sqrt(Fr(9, 4)) == Fr(3, 2)
    assert isinstance(exact_sqrt(Fr(2)), float)
    with pytest.raises(BoundError):
        exact_sqrt(Fr(-1))


def test_expected_codim_values():
    assert expected_codim_rank2(0) == 0
    assert expected_codim_rank2(Fr(1, 2)) == 0
    assert expected_codim_rank2(1) == 1
    assert expected_codim_rank2(Fr(5, 2)) == 4


def test_expected_codim_piecewise_linear():
    mus = [Fr(k, 4) for k in range(0, 41)]
    vals = [expected_codim_rank2(m) for m in mus]
    assert vals == sorted(vals)
    for m, v in zip(mus, vals):
        assert v == (0 if m <= Fr(1, 2) else 2 * m - 1)


def test_gm_codim_examples():
    assert gm_codim_bound(3, 2, 2) == 2
    assert gm_codim_bound(3, 2, 3) == 3
    for mu in (0, 1, Fr(7, 2)):
        assert gm_codim_bound(mu, 2, 2) == Fr(mu) - 1
    with pytest.raises(BoundError):
        gm_codim_bound(1, 2, 1)


def test_tangentgaps_examples():
    for mu in (0, Fr(1, 2), 3):
        weak, strong = tangentgaps_bound(mu, 2, 0, 2)
        assert weak == Fr(mu) / 2 - 1
        assert strong == 2 * Fr(mu) / 3 - Fr(2, 3)
    w, s = tangentgaps_bound(0, 2, 0, 2)
    assert w < 0 and s < 0


def test_strong_beats_weak_on_random_inputs():
    rng = random.Random(0)
    for _ in range(10_000):
        mu = Fr(rng.randint(0, 200), rng.randint(1, 6))
        w, s = tangentgaps_bound(mu, rng.randint(2, 6), rng.randint(0, 5), rng.randint(1, 5))
        assert s >= w


def test_moduli_dim_bounds():
    assert moduli_dim_bounds(6, 0, 2) == (5, 5)
    assert moduli_dim_bounds(10, 1, 3) == (10, 12)
    rng = random.Random(1)
    for _ in range(1000):
        lo, hi = moduli_dim_bounds(rng.randint(0, 50), rng.randint(0, 10), rng.randint(1, 6))
        assert lo <= hi


def test_goodbounds_cases():
    assert goodbounds_verdict(1, BoundInputs(mu=2, k=2)) == 1
    assert goodbounds_verdict(2, BoundInputs(e=3, f=3, d=10)) == 5
    assert goodbounds_verdict(3, BoundInputs(d=7, g=1)) == 6
    with pytest.raises(BoundError):
        goodbounds_verdict(4, BoundInputs())
    with pytest.raises(BoundError):
        goodbounds_verdict(1, BoundInputs(mu=2))


def test_dimension_bounds():
    assert mixed_codim_bound(6, 0, 10, Fr(1, 2)) == 3
    assert disconnected_dim_bound(Fr(2, 3), 9, 0) == 6
    d, g = 7, 1
    assert genfinite_dim_bound(3 * d + g - 1, g) == 15


def test_all_bounds_collects_everything_applicable():
    out = all_bounds(BoundInputs(dQ=2, e=3, f=3))
    assert out["p2_relcanonical"] == Fr(1, 2) and out["zeta_prime"] == Fr(1, 2)
    out = all_bounds(BoundInputs(e=3, f=3, d=10, mu=6, k=2, dimM=29, a_value=Fr(2, 3)))
    for key in ("goodbounds_case1", "goodbounds_case2", "goodbounds_case3", "mixed_codim", "gm_codim",
                "tangentgaps_weak", "tangentgaps_strong", "genfinite_dim", "disconnected_dim"):
        assert key in out
    assert out["mixed_codim"] == 3


def test_blowup_model_example():
    assert blowup_model_check(BlowupModel((1,), (1,), 2, 3, 3))
    # sharp: a = 1/2 is exactly the bound
    assert blowup_model_check(BlowupModel((Fr(1, 2),), (1,), 2, 3, 3))


def test_blowup_model_scaling():
    base = BlowupModel((Fr(1, 2), Fr(2)), (1, 1), 2, 3, 4)
    assert blowup_model_check(base)
    for c in (2, 3, Fr(7, 2)):
        assert blowup_model_check(BlowupModel(tuple(c * a for a in base.a), base.b, 2, 3, 4))


def test_blowup_model_rejects_infeasible():
    with pytest.raises(BoundError):
        blowup_model_check(BlowupModel((1,), (2,), 2, 3, 3))  # sum b^2 mismatch
    with pytest.raises(BoundError):
        blowup_model_check(BlowupModel((Fr(1, 4),), (1,), 2, 3, 3))  # sum a b < dQ - e/2


def test_blowup_models_from_sampler():
    for m in sample_blowup_models(random.Random(5), 2000):
        assert blowup_model_check(m)
