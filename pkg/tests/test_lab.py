import math
from fractions import Fraction as Fr

import pytest

from splitlab.exactalg import GF
from splitlab.lab import (
    ConfigError,
    DegenerateSetupError,
    ExperimentConfig,
    all_lines,
    enumerate_lines,
    line_map,
    sample_jump_distribution,
    tangent_conic_analysis,
    verify_conic_example,
    verify_schwarzenberger,
    wilson_interval,
)
from splitlab.exactalg import form_variables
from splitlab.sheaf import conic_example_bundle, kernel_of_forms, named_bundle


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(field_order=100)
    with pytest.raises(ConfigError):
        ExperimentConfig(trials=0)
    with pytest.raises(ConfigError):
        ExperimentConfig(curve_degree=0)
    with pytest.raises(ConfigError):
        sample_jump_distribution(ExperimentConfig("no-such-bundle", 1, 101, 5))


def test_tangent_on_lines_always_half():
    hist = sample_jump_distribution(ExperimentConfig("tangent", 1, 101, 300, 3), workers=1)
    assert hist.counts == {Fr(1, 2): hist.certified}
    assert hist.certified + hist.rejected == 300


def test_trivial_bundle_has_no_defect():
    hist = sample_jump_distribution(ExperimentConfig("trivial", 2, 101, 200, 1), workers=1)
    assert set(hist.counts) == {Fr(0)}


def test_small_field_rejections_are_counted():
    hist = sample_jump_distribution(ExperimentConfig("tangent", 2, 3, 400, 0), workers=1)
    assert hist.rejected_base_pointed > 0
    assert hist.certified + hist.rejected == 400
    for e in hist.estimates:
        assert 0 <= e["freq"] <= 1


def test_determinism_and_parallel_invariance():
    cfg = ExperimentConfig("tangent", 2, 101, 400, 42, (Fr(1), Fr(2)))
    a = sample_jump_distribution(cfg, workers=1)
    b = sample_jump_distribution(cfg, workers=1)
    c = sample_jump_distribution(cfg, workers=2)
    assert a.to_json() == b.to_json() == c.to_json()
    other = sample_jump_distribution(ExperimentConfig("tangent", 2, 101, 400, 43, (Fr(1), Fr(2))), workers=1)
    assert other.to_json()["config"]["seed"] == 43


def test_lab_threads_env(monkeypatch):
    from splitlab.lab import worker_count

    monkeypatch.setenv("LAB_THREADS", "3")
    assert worker_count() == 3


def test_degenerate_setup_raises():
    # (xz, yz) drops rank along the whole line z = 0, which every curve meets
    x, y, z = form_variables(GF(101), 3)
    pres = kernel_of_forms((x * z, y * z), (-2, -2), (0,))
    with pytest.raises(DegenerateSetupError) as info:
        sample_jump_distribution(ExperimentConfig(pres, 1, 101, 50, 0), workers=1)
    h = info.value.histogram
    assert h.rejected_uncertified == 50 - h.rejected_base_pointed


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0 and 0 < hi < 0.05
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert wilson_interval(0, 0) == (0.0, 1.0)


def test_estimates_follow_transform():
    hist = sample_jump_distribution(ExperimentConfig("tangent", 2, 101, 2000, 7), workers=1)
    (e,) = hist.estimates
    assert math.isclose(e["chat"], -math.log(e["freq"]) / math.log(101))
    assert e["ci_lo"] <= e["chat"] <= e["ci_hi"]


def test_all_lines_count():
    for q in (3, 5, 7):
        lines = all_lines(q)
        assert len(lines) == len(set(lines)) == q * q + q + 1


def test_line_map_lies_on_line():
    for line in all_lines(5):
        s = line_map(line, 5)
        total = None
        for c, f in zip(line, s.forms):
            term = f.scale(c)
            total = term if total is None else total + term
        assert total.is_zero


def test_schwarzenberger_lines():
    table = enumerate_lines("schwarzenberger:4,0", 7)
    assert len(table.records) == 57
    assert not table.uncertified
    jumping = table.jumping_lines
    assert len(jumping) == 8
    assert {r.splitting for r in jumping} == {(3, 0)}
    analysis = tangent_conic_analysis([r.line for r in jumping], 7)
    assert analysis["unique_conic"] and analysis["smooth"] and analysis["matches"]


def test_tangency_oracle_rejects_wrong_sets():
    table = enumerate_lines("schwarzenberger:4,0", 7)
    jumping = [r.line for r in table.jumping_lines]
    some_other = next(r.line for r in table.records if not r.jumping)
    assert not tangent_conic_analysis(jumping[:-1] + [some_other], 7)["matches"]


def test_homogeneous_and_split_bundles_have_no_jumping_lines():
    assert enumerate_lines("tangent", 7).jumping_lines == []
    assert enumerate_lines("split:2,-1", 5).jumping_lines == []


def test_uncertified_lines_are_flagged_not_dropped():
    F = GF(5)
    x, y, z = form_variables(F, 3)
    pres = kernel_of_forms((x, y), (0, 0), (1,))
    table = enumerate_lines(pres, 5)
    assert len(table.records) == 31
    # exactly the 6 lines through [0:0:1] (those with c = 0)
    assert len(table.uncertified) == 6
    assert all(r.line[2] == 0 for r in table.uncertified)


def test_verify_schwarzenberger_report():
    rep = verify_schwarzenberger()
    assert rep["jumping_count"] == 8 and rep["tangency"]["matches"]
    assert rep["generic_splittings"] == [(2, 1)]


def test_conic_example_through_point_is_worse():
    for d in (2, 3):
        rep = verify_conic_example(d, 101, 40, seed=1)
        assert rep["through_point"]["mean_mu"] > rep["general"]["mean_mu"]
        # every through-point conic has the same splitting
        assert rep["through_point"]["histogram"] == {str(d - 1): 40}


def test_conic_example_general_conics_mostly_balanced():
    rep = verify_conic_example(2, 101, 100, seed=2)
    assert rep["general"]["histogram"].get("0", 0) >= 90


def test_conic_example_degree_one_has_no_gap():
    # for d = 1 the presentation is the cotangent bundle's, which is homogeneous,
    # so every smooth conic restricts the same way
    assert conic_example_bundle(1) == named_bundle("cotangent")
    rep = verify_conic_example(1, 101, 40, seed=3)
    assert rep["gap"] == 0
    assert rep["general"]["histogram"] == rep["through_point"]["histogram"] == {"0": 40}
