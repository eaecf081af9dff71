import math

import pytest

from src.core.reports import FAIL, PASS, ResidualReport


def test_verdict_uses_max_abs():
    report = ResidualReport("demo", [{"s": 0.1}, {"s": 0.2}], [1e-9, -3e-7], threshold=1e-6)
    assert report.max_abs == pytest.approx(3e-7)
    assert report.passed
    assert report.verdict == PASS
    assert report.with_threshold(1e-7).verdict == FAIL


def test_empty_report_passes():
    report = ResidualReport("empty", [], [], threshold=0.0)
    assert report.max_abs == 0.0
    assert report.passed
    assert list(report.to_dataframe().columns) == ["residual"]


def test_nan_residual_fails():
    report = ResidualReport("nan", [{"k": 1}, {"k": 2}], [0.0, math.nan], threshold=1.0)
    assert report.max_abs == math.inf
    assert not report.passed


def test_length_mismatch_raises():
    with pytest.raises(ValueError):
        ResidualReport("bad", [{"k": 1}], [0.0, 1.0], threshold=1.0)


def test_to_dict_and_dataframe():
    report = ResidualReport("demo", [{"s": 0.1, "m": 1}], [2e-3], threshold=1e-6,
                            config={"n": 2}, notes=["note"])
    data = report.to_dict()
    assert data["verdict"] == FAIL
    assert data["config"] == {"n": 2}
    assert data["notes"] == ["note"]
    frame = report.to_dataframe()
    assert list(frame.columns) == ["s", "m", "residual"]
    assert frame["residual"].iloc[0] == pytest.approx(2e-3)


def test_with_threshold_copies():
    report = ResidualReport("demo", [{"s": 0.1}], [1.0], threshold=2.0, config={"a": 1})
    copy = report.with_threshold(0.5)
    copy.config["a"] = 2
    assert report.config == {"a": 1}
    assert report.threshold == 2.0
