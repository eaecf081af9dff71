import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List

import pandas as pd

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"


@dataclass
class ResidualReport:
    """
    格子上の残差と判定

    verdict は max_abs <= threshold のとき pass。NaN を含む場合は fail。
    """

    name: str
    params: List[Dict[str, Any]]
    residuals: List[float]
    threshold: float
    config: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        if len(self.params) != len(self.residuals):
            raise ValueError(
                f"格子点と残差の数が一致しません: {len(self.params)} != {len(self.residuals)}")
        self.residuals = [float(r) for r in self.residuals]

    @property
    def max_abs(self) -> float:
        if not self.residuals:
            return 0.0
        if any(math.isnan(r) for r in self.residuals):
            return math.inf
        return max(abs(r) for r in self.residuals)

    @property
    def passed(self) -> bool:
        return self.max_abs <= self.threshold

    @property
    def verdict(self) -> str:
        return PASS if self.passed else FAIL

    def with_threshold(self, threshold: float) -> "ResidualReport":
        return ResidualReport(self.name, list(self.params), list(self.residuals), threshold,
                              dict(self.config), list(self.notes))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "params": self.params,
            "residuals": self.residuals,
            "max_abs": self.max_abs,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "config": self.config,
            "notes": self.notes,
        }

    def to_dataframe(self) -> pd.DataFrame:
        """格子パラメータ列と residual 列からなる表"""
        frame = pd.DataFrame(self.params)
        frame["residual"] = self.residuals
        return frame


def log_report(report: ResidualReport) -> None:
    logger.info(f"{report.name}: 最大残差 {report.max_abs:.3e} / 閾値 {report.threshold:.1e} "
                f"-> {report.verdict}")
