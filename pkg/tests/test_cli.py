import csv
import json

import pytest

from powapprox.cli import main
from powapprox.numeric import make_context
from powapprox.sweep import numerator_degree, parse_range, run_sweep


def test_parse_range():
    assert parse_range("4..7") == [4, 5, 6, 7]
    assert parse_range("4..10:3") == [4, 7, 10]
    assert parse_range("2, 4,6") == [2, 4, 6]
    for bad in ("7..4", "a..b", "1,x", "-1"):
        with pytest.raises(ValueError):
            parse_range(bad)


def test_numerator_degree():
    assert numerator_degree("auto", 5, "1/2") == 6
    assert numerator_degree("n", 5, "1/2") == 5
    assert numerator_degree("n+2", 5, "1/2") == 7
    assert numerator_degree("3", 5, "1/2") == 3
    with pytest.raises(ValueError):
        numerator_degree("n-9", 5, "1/2")


def test_run_sweep_with_workers():
    seq = run_sweep("1/2", [2, 3, 4], 96, cache=None)
    par = run_sweep("1/2", [2, 3, 4], 96, workers=2)
    assert [r.n for r in par] == [2, 3, 4]
    for a, b in zip(seq, par):
        assert abs(a.E - b.E) <= 1e-20 * a.E


def test_approx_json(tmp_path, capsys):
    assert main(["approx", "--alpha", "0.5", "--n", "3", "--prec", "96", "--diagnostics"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["m"] == 4 and data["diagnostics"]["optimal"]


def test_sweep_csv_and_cache(tmp_path):
    out = tmp_path / "s.csv"
    argv = ["sweep", "--alpha", "1/2", "--n", "2..4", "--prec", "96", "--format", "csv",
            "--out", str(out), "--cache", str(tmp_path / "c")]
    assert main(argv) == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["n"] for r in rows] == ["2", "3", "4"]
    assert rows[0]["lower_bound"] == "" and rows[0]["upper_bound"] == ""
    first = out.read_text()
    assert main(argv) == 0
    assert out.read_text() == first


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("prec = 80\nformat = csv\n")
    assert main(["approx", "--alpha", "1/3", "--n", "2", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("alpha,n,m,precision_bits") and ",80," in out
    # flags still win
    assert main(["approx", "--alpha", "1/3", "--n", "2", "--config", str(cfg), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["precision_bits"] == 80


def test_invalid_inputs_exit_2(tmp_path, capsys):
    assert main(["bounds", "--name", "Newman", "--n", "3"]) == 2
    assert main(["sweep", "--alpha", "1/2", "--n", "9..4"]) == 2
    assert main(["approx", "--alpha", "-1", "--n", "2"]) == 2
    assert main(["approx", "--alpha", "1/2", "--n", "2", "--config", str(tmp_path / "missing")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["approx", "--alpha", "1/2", "--n", "2", "--prec", "16"])
    assert exc.value.code == 2


def test_bounds_and_potential(tmp_path, capsys):
    assert main(["bounds", "--name", "Newman", "--n", "4..6", "--format", "csv"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 4
    out = tmp_path / "p.csv"
    assert main(["potential", "--ladder", "1e2,1e3", "--nodes", "60", "--format", "csv",
                 "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 2 and float(rows[1]["b"]) > float(rows[0]["b"])


def test_transforms_command(capsys):
    assert main(["transforms", "--alpha", "1/2", "--n", "3,4", "--samples", "12"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert all(r["nonvanishing"] for r in data["reports"])


def test_plot_option(tmp_path):
    pytest.importorskip("matplotlib")
    out = tmp_path / "b.csv"
    assert main(["bounds", "--name", "Newman", "--n", "4..6", "--format", "csv", "--out", str(out)]) == 0
    out = tmp_path / "s.json"
    assert main(["sweep", "--alpha", "1/2", "--n", "2..4", "--prec", "96", "--out", str(out), "--plot"]) == 0
    assert out.with_suffix(".png").stat().st_size > 0


def test_csv_values_parse_back_exactly(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "--alpha", "1/3", "--n", "3", "--prec", "200", "--format", "csv", "--out", str(out)]) == 0
    row = next(csv.DictReader(out.open()))
    ctx = make_context(200)
    assert ctx.mpf(row["E"]) == run_sweep("1/3", [3], 200)[0].E
