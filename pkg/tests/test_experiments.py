"""Experiment harness: datasets, comparisons, shape checks, serialization."""
import json

import numpy as np
import pytest

from chaninfo.ace import AceConfig, ace_fit
from chaninfo.errors import DegenerateInputError, InvalidParameterError
from chaninfo.experiments import (
    PAPER_TARGETS,
    ExperimentConfig,
    build_dataset,
    compare_curve_sets,
    compare_decompositions,
    dataset_from_table,
    dumps_canonical,
    read_table_csv,
    report_dict,
    run_experiment,
    shape_checks,
    write_dataset_csv,
    write_json,
)
from chaninfo.measures import MeasureKind


@pytest.fixture(scope="module")
def small_report():
    return run_experiment(ExperimentConfig(channel="bsc", n=2000, seed=3))


def test_config_validation():
    with pytest.raises(InvalidParameterError):
        ExperimentConfig(channel="qam")
    with pytest.raises(InvalidParameterError):
        ExperimentConfig(channel="bsc", n=500)
    with pytest.raises(InvalidParameterError):
        ExperimentConfig(channel="bsc", measures=())
    with pytest.raises(InvalidParameterError):
        ExperimentConfig(
            channel="msc", measures=(MeasureKind.SHANNON_PAPER_BSC,)
        )
    with pytest.raises(InvalidParameterError):
        ExperimentConfig(channel="msc", m=1)
    with pytest.raises(InvalidParameterError):
        ExperimentConfig(
            channel="bsc", measures=(MeasureKind.SHANNON_MI, MeasureKind.SHANNON_MI)
        )


def test_config_defaults_and_names():
    bsc = ExperimentConfig(channel="bsc")
    assert bsc.resolved_n == 20000
    assert bsc.predictor_names == ("lambda", "epsilon")
    assert not bsc.m_inferred
    msc = ExperimentConfig(channel="msc")
    assert msc.resolved_n == 60000
    assert msc.resolved_m == 4
    assert msc.m_inferred
    assert msc.predictor_names == ("lambda", "lambda2", "lambda3", "epsilon")
    assert not ExperimentConfig(channel="msc", m=3).m_inferred


def test_build_dataset_shapes_and_determinism():
    cfg = ExperimentConfig(channel="bsc", n=1500, seed=9)
    d1 = build_dataset(cfg, MeasureKind.SHANNON_MI)
    d2 = build_dataset(cfg, MeasureKind.SHANNON_MI)
    assert d1.predictors.shape == (1500, 2)
    assert d1.column_names == ("lambda", "epsilon", "y_shannon_mi")
    np.testing.assert_array_equal(d1.predictors, d2.predictors)
    np.testing.assert_array_equal(d1.response, d2.response)
    assert np.all(np.isfinite(d1.response))
    assert np.all(d1.response >= 0.0)


def test_build_dataset_shares_draws_across_measures():
    cfg = ExperimentConfig(channel="bsc", n=1500, seed=9)
    d1 = build_dataset(cfg, MeasureKind.SHANNON_MI)
    d2 = build_dataset(cfg, MeasureKind.CHERNOFF_MI)
    np.testing.assert_array_equal(d1.predictors, d2.predictors)
    assert not np.array_equal(d1.response, d2.response)


def test_build_dataset_msc_has_four_predictors():
    cfg = ExperimentConfig(channel="msc", n=1200, seed=2)
    d = build_dataset(cfg, MeasureKind.CHERNOFF_MI)
    assert d.predictors.shape == (1200, 4)
    assert d.column_names == (
        "lambda",
        "lambda2",
        "lambda3",
        "epsilon",
        "y_chernoff_mi",
    )
    # First three columns plus the implied remainder stay on the simplex.
    rest = 1.0 - d.predictors[:, :3].sum(axis=1)
    assert np.all(rest > 0.0)


def test_batch_responses_match_scalar_evaluator():
    from chaninfo.channels import BscParams
    from chaninfo.measures import evaluate_measure

    cfg = ExperimentConfig(channel="bsc", n=1000, seed=6)
    for kind in MeasureKind:
        d = build_dataset(cfg, kind)
        for i in (0, 17, 500):
            params = BscParams(d.predictors[i, 0], d.predictors[i, 1])
            want = evaluate_measure(kind, params).value
            # Batch and scalar routes share the objective but not the
            # summation order, so agreement is near-ulp, not bitwise.
            assert d.response[i] == pytest.approx(want, abs=1e-9)


def test_compare_self_is_exact(small_report):
    fit = small_report.runs[0].fit
    rep = compare_decompositions(fit, fit)
    assert rep.theta_monotone_fraction == 1.0
    for rec in rep.curves:
        assert rec.rms_difference == 0.0
        assert rec.curve_correlation == pytest.approx(1.0, abs=1e-12)
        assert rec.sign_aligned


def test_compare_detects_sign_flip(small_report):
    fit = small_report.runs[0].fit
    flipped = {
        name: type(c)(c.knots, -c.values) for name, c in fit.named_curves().items()
    }
    rep = compare_curve_sets(fit.named_curves(), flipped)
    for rec in rep.curves:
        assert not rec.sign_aligned
        assert rec.curve_correlation == pytest.approx(1.0, abs=1e-12)
        assert rec.rms_difference <= 1e-12


def test_compare_rejects_mismatched_names(small_report):
    fit = small_report.runs[0].fit
    curves = fit.named_curves()
    renamed = {("phi_x" if k == "phi_lambda" else k): v for k, v in curves.items()}
    with pytest.raises(InvalidParameterError):
        compare_curve_sets(curves, renamed)
    no_theta = {k: v for k, v in curves.items() if k != "theta"}
    with pytest.raises(InvalidParameterError):
        compare_curve_sets(no_theta, no_theta)


def test_shape_checks_fields(small_report):
    shape = shape_checks(small_report.runs[0].fit, "bsc")
    assert set(shape) == {
        "phi2_asymmetry",
        "phi2_asymmetry_raw",
        "phi1_decreasing_fraction",
        "theta_increasing_fraction",
    }
    assert 0.0 <= shape["phi2_asymmetry"] <= shape["phi2_asymmetry_raw"]
    assert 0.0 <= shape["phi1_decreasing_fraction"] <= 1.0
    with pytest.raises(InvalidParameterError):
        shape_checks(small_report.runs[0].fit, "awgn")


def test_shape_checks_msc_fields():
    cfg = ExperimentConfig(channel="msc", n=5000, seed=4)
    d = build_dataset(cfg, MeasureKind.SHANNON_MI)
    fit = ace_fit(d, AceConfig())
    shape = shape_checks(fit, "msc")
    assert set(shape) == {
        "phi4_argmin",
        "phi_flatness_below_0_7",
        "theta_increasing_fraction",
    }
    assert set(shape["phi_flatness_below_0_7"]) == {"lambda", "lambda2", "lambda3"}
    assert 0.0 < shape["phi4_argmin"] < 1.0
    assert float(d.response.min()) <= 0.01


def test_run_experiment_report_contents(small_report):
    rep = small_report
    assert rep.rng_algorithm.startswith("numpy.random.Philox")
    assert rep.paper_targets == PAPER_TARGETS["bsc"]
    assert len(rep.runs) == 2 and len(rep.comparisons) == 1
    assert rep.wall_clock_seconds > 0.0
    comp = rep.comparisons[0]
    o = comp.orderings
    counts = o["shannon_minus_chernoff"]
    assert counts["negative"] + counts["zero"] + counts["positive"] == 2000
    assert isinstance(o["shannon_always_smaller"], bool)
    assert o["reference_point"]["lambda"] == 0.5
    assert o["measures"] == ["shannon_mi", "chernoff_mi"]
    names = [rec.curve_name for rec in comp.curves]
    assert names == ["phi_epsilon", "phi_lambda"]


def test_msc_orderings_have_no_reference_point():
    rep = run_experiment(
        ExperimentConfig(
            channel="msc", n=1200, seed=5, measures=(MeasureKind.SHANNON_MI, MeasureKind.CHERNOFF_MI)
        )
    )
    assert "reference_point" not in rep.comparisons[0].orderings


def test_comparison_pair_ordered_shannon_first():
    rep = run_experiment(
        ExperimentConfig(
            channel="bsc",
            n=1500,
            seed=8,
            measures=(MeasureKind.CHERNOFF_MI, MeasureKind.SHANNON_MI),
        )
    )
    assert rep.comparisons[0].orderings["measures"] == ["shannon_mi", "chernoff_mi"]


def test_report_dict_serializes_deterministically(small_report):
    d1 = report_dict(small_report)
    d2 = report_dict(small_report)
    assert dumps_canonical(d1) == dumps_canonical(d2)
    assert "wall_clock_seconds" not in dumps_canonical(d1)
    assert d1["config"]["n"] == 2000
    assert d1["results"][0]["measure"] == "shannon_mi"
    assert d1["paper_targets"] == {"shannon": 0.9994, "chernoff": 0.9991}


def test_two_runs_serialize_identically():
    a = run_experiment(ExperimentConfig(channel="bsc", n=2000, seed=3))
    b = run_experiment(ExperimentConfig(channel="bsc", n=2000, seed=3))
    assert dumps_canonical(report_dict(a)) == dumps_canonical(report_dict(b))


def test_canonical_json_forms():
    assert dumps_canonical({"a": True, "b": 3, "c": "x"}) == (
        '{\n  "a": true,\n  "b": 3,\n  "c": "x"\n}'
    )
    assert dumps_canonical([1.5, None]) == "[\n  1.5,\n  null\n]"
    assert dumps_canonical({}) == "{}"
    assert dumps_canonical(0.1) == "0.10000000000000001"
    assert dumps_canonical(np.float64(2.0)) == "2"
    assert dumps_canonical(np.bool_(True)) == "true"
    with pytest.raises(InvalidParameterError):
        dumps_canonical(float("nan"))
    with pytest.raises(InvalidParameterError):
        dumps_canonical({1: "x"})
    with pytest.raises(InvalidParameterError):
        dumps_canonical(object())
    # Round-trip through the stdlib parser preserves every float.
    blob = {"v": [0.1, 1e-300, 3.141592653589793]}
    assert json.loads(dumps_canonical(blob)) == blob


def test_dataset_csv_round_trip(tmp_path, small_report):
    d = small_report.runs[0].dataset
    path = tmp_path / "d.csv"
    write_dataset_csv(d, path)
    first = path.read_text().splitlines()[0]
    assert first == "lambda,epsilon,y_shannon_mi"
    names, table = read_table_csv(path)
    assert names == ["lambda", "epsilon", "y_shannon_mi"]
    np.testing.assert_array_equal(table[:, :2], d.predictors)
    np.testing.assert_array_equal(table[:, 2], d.response)
    back = dataset_from_table(names, table, "y_shannon_mi", ["lambda", "epsilon"])
    np.testing.assert_array_equal(back.response, d.response)
    with pytest.raises(InvalidParameterError):
        dataset_from_table(names, table, "y_shannon_mi", ["lambda", "sigma"])


def test_write_json_trailing_newline(tmp_path):
    path = tmp_path / "x.json"
    write_json({"k": 1}, path)
    text = path.read_text()
    assert text.endswith("\n") and not text.endswith("\n\n")
    assert json.loads(text) == {"k": 1}


def test_msc_rejects_paper_variant_kinds():
    with pytest.raises(InvalidParameterError):
        build_dataset(
            ExperimentConfig(channel="msc", n=1200), MeasureKind.SHANNON_PAPER_BSC
        )
