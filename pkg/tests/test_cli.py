import json

import pandas as pd
import pytest

from src.ui.cli import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, main


@pytest.fixture
def run(tmp_path):
    def _run(*args: str) -> int:
        return main(["--config-dir", str(tmp_path / "home"), *args])
    return _run


def test_forward_writes_table(run, tmp_path):
    out = tmp_path / "out"
    assert run("forward", "--out", str(out)) == EXIT_PASS
    frame = pd.read_csv(out / "forward.csv")
    assert list(frame.columns) == ["t", "g", "h"]
    assert len(frame) == 200
    assert (frame["g"] >= 0).all()


def test_forward_is_reproducible(run, tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    run("forward", "--n", "4", "--t-grid", "0.1:1.9:40", "--out", str(first))
    run("forward", "--n", "4", "--t-grid", "0.1:1.9:40", "--out", str(second))
    assert (first / "forward.csv").read_bytes() == (second / "forward.csv").read_bytes()


def test_range_check_in_range(run, tmp_path):
    out = tmp_path / "out"
    code = run("range-check", "--s-grid", "0.2,0.5,0.8", "--k-max", "3", "--out", str(out))
    assert code == EXIT_PASS
    payload = json.loads((out / "range-check.json").read_text(encoding="utf-8"))
    assert [item["name"] for item in payload] == ["radial-range", "vanishing"]
    assert payload[0]["config"]["s_grid"] == "0.2,0.5,0.8"
    assert (out / "range-check.csv").exists()


def test_range_check_out_of_range(run, tmp_path):
    code = run("range-check", "--profile", "data-bump:lo=0.2,hi=0.6", "--s-grid", "0.3,0.6",
               "--k-max", "3", "--out", str(tmp_path / "out"))
    assert code == EXIT_FAIL


def test_range_check_threshold_reaches_every_report(run, tmp_path):
    out = tmp_path / "out"
    code = run("range-check", "--profile", "data-bump:lo=0.2,hi=0.6", "--m", "1",
               "--s-grid", "0.3,0.6", "--k-max", "2", "--threshold", "10", "--out", str(out))
    assert code == EXIT_PASS
    payload = json.loads((out / "range-check.json").read_text(encoding="utf-8"))
    assert [item["name"] for item in payload] == ["general-range", "support-violation", "vanishing"]
    assert payload[1]["threshold"] == 10.0
    assert payload[2]["threshold"] == 10.0


def test_range_check_from_csv(run, tmp_path):
    csv = tmp_path / "g.csv"
    t = [0.2 + 0.02 * i for i in range(21)]
    rows = ["t,value"] + [f"{x},{(x - 0.2) * (0.6 - x)}" for x in t]
    csv.write_text("\n".join(rows) + "\n")
    code = run("range-check", "--csv", str(csv), "--s-grid", "0.3", "--k-max", "2",
               "--out", str(tmp_path / "out"))
    assert code == EXIT_FAIL


def test_range_check_empty_csv(run, tmp_path):
    csv = tmp_path / "empty.csv"
    csv.write_text("")
    assert run("range-check", "--csv", str(csv), "--out", str(tmp_path / "out")) == EXIT_ERROR


def test_identities_only_elliptic(run, tmp_path):
    out = tmp_path / "out"
    assert run("identities", "--only", "elliptic", "--excel", "--out", str(out)) == EXIT_PASS
    payload = json.loads((out / "identities.json").read_text(encoding="utf-8"))
    assert len(payload) == 1
    assert payload[0]["name"] == "elliptic"
    assert (out / "identities.xlsx").exists()


def test_identities_tight_threshold_fails(run, tmp_path):
    out = tmp_path / "out"
    code = run("identities", "--only", "elliptic", "--threshold", "1e-15", "--out", str(out))
    assert code == EXIT_FAIL
    payload = json.loads((out / "identities.json").read_text(encoding="utf-8"))
    assert payload[0]["threshold"] == 1e-15
    assert payload[0]["verdict"] == "fail"


def test_identities_full_suite(run, tmp_path):
    out = tmp_path / "out"
    assert run("identities", "--out", str(out)) == EXIT_PASS
    payload = json.loads((out / "identities.json").read_text(encoding="utf-8"))
    assert [item["name"] for item in payload] == [
        "elliptic", "quartic", "cross-product", "nicholson", "combinatorial", "ode"]
    assert all(item["verdict"] == "pass" for item in payload)
    assert all(item["config"]["seed"] == 20240601 for item in payload)


def test_identities_unknown_name(run, tmp_path):
    assert run("identities", "--only", "nope", "--out", str(tmp_path / "out")) == EXIT_ERROR


def test_bessel_tables(run, tmp_path):
    out = tmp_path / "out"
    assert run("bessel", "--n", "4", "--m", "1", "--k-max", "5", "--out", str(out)) == EXIT_PASS
    zeros = pd.read_csv(out / "bessel-2-zeros.csv")
    assert len(zeros) == 5
    assert zeros["zero"].iloc[0] == pytest.approx(5.135622301840683, rel=1e-12)
    table = pd.read_csv(out / "bessel-2.csv")
    assert list(table.columns) == ["x", "j", "y"]


@pytest.mark.parametrize("args", [
    ("forward", "--n", "3"),
    ("forward", "--profile", "cone"),
    ("forward", "--profile", "data-bump"),
    ("nope",),
])
def test_user_errors_exit_two(run, tmp_path, args):
    assert run(*args, *(("--out", str(tmp_path / "out")) if args[0] != "nope" else ())) == EXIT_ERROR


def test_missing_config_file(tmp_path):
    code = main(["--config-dir", str(tmp_path), "--config", str(tmp_path / "missing.env"),
                 "forward", "--out", str(tmp_path / "out")])
    assert code == EXIT_ERROR
