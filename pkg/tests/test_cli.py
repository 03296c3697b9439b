"""Command-line interface: flags, exit codes, file outputs."""
import json

import numpy as np
import pytest

from chaninfo.cli import main
from chaninfo.experiments import read_table_csv


@pytest.fixture(scope="module")
def bsc_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("sim") / "bsc.csv"
    code = main(
        [
            "simulate",
            "--channel",
            "bsc",
            "--n",
            "20000",
            "--seed",
            "1",
            "--measure",
            "shannon_mi",
            "--measure",
            "chernoff_mi",
            "--out",
            str(path),
        ]
    )
    assert code == 0
    return path


def test_simulate_output_shape(bsc_csv):
    names, table = read_table_csv(bsc_csv)
    assert names == ["lambda", "epsilon", "y_shannon_mi", "y_chernoff_mi"]
    assert table.shape == (20000, 4)
    assert np.all(np.isfinite(table))


def test_simulate_msc_six_columns(tmp_path):
    path = tmp_path / "msc.csv"
    code = main(
        ["simulate", "--channel", "msc", "--m", "4", "--n", "1200", "--out", str(path)]
    )
    assert code == 0
    names, table = read_table_csv(path)
    assert len(names) == 6
    assert table.shape == (1200, 6)


def test_simulate_deterministic(tmp_path, bsc_csv):
    path = tmp_path / "again.csv"
    main(
        [
            "simulate", "--channel", "bsc", "--n", "20000", "--seed", "1",
            "--measure", "shannon_mi", "--measure", "chernoff_mi",
            "--out", str(path),
        ]
    )
    assert path.read_bytes() == bsc_csv.read_bytes()


def test_simulate_missing_out_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--channel", "bsc"])
    assert exc.value.code == 2


def test_simulate_msc_paper_variant_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(
            [
                "simulate", "--channel", "msc", "--paper-variant",
                "--out", str(tmp_path / "x.csv"),
            ]
        )
    assert exc.value.code == 2


def test_simulate_paper_variant_maps_kinds(tmp_path):
    path = tmp_path / "v.csv"
    code = main(
        [
            "simulate", "--channel", "bsc", "--n", "1000", "--paper-variant",
            "--out", str(path),
        ]
    )
    assert code == 0
    names, _ = read_table_csv(path)
    assert names == [
        "lambda",
        "epsilon",
        "y_shannon_paper_bsc",
        "y_chernoff_paper_bsc",
    ]


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--channel", "bsc", "--out", "x.csv", "--frobnicate"])
    assert exc.value.code == 2


def test_decompose_and_compare_flow(tmp_path, bsc_csv):
    csh, ssh = tmp_path / "c_sh.csv", tmp_path / "s_sh.json"
    code = main(
        [
            "decompose", "--in", str(bsc_csv), "--response", "y_shannon_mi",
            "--curves-out", str(csh), "--summary-out", str(ssh),
        ]
    )
    assert code == 0
    summary = json.loads(ssh.read_text())
    assert set(summary) == {"correlation", "e2", "outer_iterations"}
    assert summary["correlation"] >= 0.995

    cch, sch = tmp_path / "c_ch.csv", tmp_path / "s_ch.json"
    assert (
        main(
            [
                "decompose", "--in", str(bsc_csv), "--response", "y_chernoff_mi",
                "--curves-out", str(cch), "--summary-out", str(sch),
            ]
        )
        == 0
    )

    out = tmp_path / "cmp.json"
    assert code == 0
    assert main(["compare", str(csh), str(cch), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    for rec in rep["curves"]:
        assert rec["curve_correlation"] >= 0.98
        assert rec["rms_difference"] <= 0.1


def test_compare_with_itself_zero(tmp_path, bsc_csv, capsys):
    c, s = tmp_path / "c.csv", tmp_path / "s.json"
    main(
        [
            "decompose", "--in", str(bsc_csv), "--response", "y_shannon_mi",
            "--curves-out", str(c), "--summary-out", str(s),
        ]
    )
    assert main(["compare", str(c), str(c)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert all(rec["rms_difference"] == 0.0 for rec in rep["curves"])
    assert rep["theta_monotone_fraction"] == 1


def test_compare_mismatched_sets_is_usage_error(tmp_path, bsc_csv):
    c1, s1 = tmp_path / "c1.csv", tmp_path / "s1.json"
    main(
        [
            "decompose", "--in", str(bsc_csv), "--response", "y_shannon_mi",
            "--curves-out", str(c1), "--summary-out", str(s1),
        ]
    )
    c2, s2 = tmp_path / "c2.csv", tmp_path / "s2.json"
    main(
        [
            "decompose", "--in", str(bsc_csv), "--response", "y_shannon_mi",
            "--predictors", "lambda",
            "--curves-out", str(c2), "--summary-out", str(s2),
        ]
    )
    with pytest.raises(SystemExit) as exc:
        main(["compare", str(c1), str(c2)])
    assert exc.value.code == 2


def test_decompose_unknown_column_is_usage_error(bsc_csv, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(
            [
                "decompose", "--in", str(bsc_csv), "--response", "y_missing",
                "--curves-out", str(tmp_path / "c.csv"),
                "--summary-out", str(tmp_path / "s.json"),
            ]
        )
    assert exc.value.code == 2


def test_decompose_constant_response_is_runtime_error(tmp_path, capsys):
    path = tmp_path / "const.csv"
    rows = "\n".join(f"0.{i % 9 + 1},0.5,1" for i in range(100))
    path.write_text("x,z,y\n" + rows + "\n")
    code = main(
        [
            "decompose", "--in", str(path), "--response", "y",
            "--curves-out", str(tmp_path / "c.csv"),
            "--summary-out", str(tmp_path / "s.json"),
        ]
    )
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_decompose_e2_decreases_with_bins(bsc_csv, tmp_path):
    # Coarser smoothers leave more structure unexplained.
    e2 = {}
    for bins in (5, 20, 100):
        c, s = tmp_path / f"c{bins}.csv", tmp_path / f"s{bins}.json"
        assert (
            main(
                [
                    "decompose", "--in", str(bsc_csv), "--response", "y_shannon_mi",
                    "--bins", str(bins),
                    "--curves-out", str(c), "--summary-out", str(s),
                ]
            )
            == 0
        )
        e2[bins] = json.loads(s.read_text())["e2"]
    assert e2[5] > e2[20] > e2[100]


def test_eval_measure_stdout_payload(capsys):
    assert (
        main(
            [
                "eval-measure", "--measure", "chernoff_mi",
                "--lambda", "0.5", "--epsilon", "0.1",
            ]
        )
        == 0
    )
    payload = json.loads(capsys.readouterr().out)
    assert payload["log_base"] == "nats"
    assert payload["value"] == pytest.approx(0.1123774463528366, abs=1e-10)
    assert payload["alpha_star"] == pytest.approx(0.458431, abs=1e-4)


def test_eval_measure_bits_and_trivial_zero(capsys):
    assert (
        main(
            [
                "eval-measure", "--measure", "shannon_mi",
                "--lambda", "0.5", "--epsilon", "0.5", "--bits",
            ]
        )
        == 0
    )
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == 0
    assert payload["log_base"] == "bits"
    assert "alpha_star" not in payload


def test_eval_measure_msc(capsys):
    assert (
        main(
            [
                "eval-measure", "--measure", "shannon_mi", "--channel", "msc",
                "--lambdas", "0.25,0.25,0.25,0.25", "--epsilon", "0.75",
            ]
        )
        == 0
    )
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == 0


def test_eval_measure_missing_params_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["eval-measure", "--measure", "shannon_mi", "--channel", "msc",
              "--epsilon", "0.3"])
    assert exc.value.code == 2


def test_eval_measure_invalid_value_is_runtime_error(capsys):
    code = main(
        ["eval-measure", "--measure", "shannon_mi", "--lambda", "1.5",
         "--epsilon", "0.1"]
    )
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_run_paper_bsc_outputs(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["run-paper", "--experiment", "bsc", "--outdir", str(out)])
    assert code == 0
    exp = out / "bsc"
    for name in (
        "dataset_shannon_mi.csv",
        "dataset_chernoff_mi.csv",
        "curves_shannon_mi.csv",
        "curves_chernoff_mi.csv",
        "report.json",
        "summary.txt",
    ):
        assert (exp / name).is_file()
    summary = (exp / "summary.txt").read_text()
    assert "FAIL" not in summary
    assert "PASS correlation[shannon_mi]" in summary
    assert "wall_clock_seconds" in summary
    assert summary.strip().endswith("overall: PASS")
    report = (exp / "report.json").read_text()
    assert "wall_clock_seconds" not in report
    assert "paper_targets" in report
    assert "PASS" in capsys.readouterr().out


def test_run_paper_msc_variant_is_usage_error(tmp_path):
    for exp in ("msc", "all"):
        with pytest.raises(SystemExit) as exc:
            main(
                [
                    "run-paper", "--experiment", exp, "--paper-variant",
                    "--outdir", str(tmp_path / "x"),
                ]
            )
        assert exc.value.code == 2
