import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd

from src.core.profiles import DataProfile, ProfileError
from src.core.reports import ResidualReport

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


class DataConverter:
    """レポートとプロファイルの入出力"""

    @staticmethod
    def reports_to_dataframe(reports: Sequence[ResidualReport]) -> pd.DataFrame:
        """
        複数のレポートを1つの表に縦結合

        Args:
            reports: レポート列

        Returns:
            pd.DataFrame: report 列付きの表
        """
        frames = []
        for report in reports:
            frame = report.to_dataframe()
            frame.insert(0, "report", report.name)
            frames.append(frame)
        if not frames:
            return pd.DataFrame()
        return pd.concat(frames, ignore_index=True)

    @staticmethod
    def save_to_csv(dataframe: pd.DataFrame, file_path: Path, encoding: str = "utf-8") -> bool:
        """
        DataFrameをCSVファイルに保存

        Args:
            dataframe: 保存するDataFrame
            file_path: 保存先パス
            encoding: 文字エンコーディング

        Returns:
            bool: 保存が成功した場合True
        """
        try:
            file_path.parent.mkdir(parents=True, exist_ok=True)
            dataframe.to_csv(file_path, index=False, encoding=encoding, float_format=FLOAT_FORMAT)
            logger.info(f"CSVファイルを保存しました: {file_path}")
            return True
        except Exception as e:
            logger.error(f"CSVファイル保存エラー: {e}")
            return False

    @staticmethod
    def save_to_excel(sheets: Dict[str, pd.DataFrame], file_path: Path) -> bool:
        """
        シート名ごとのDataFrameをExcelファイルに保存

        Args:
            sheets: シート名とDataFrame
            file_path: 保存先パス

        Returns:
            bool: 保存が成功した場合True
        """
        try:
            file_path.parent.mkdir(parents=True, exist_ok=True)
            with pd.ExcelWriter(file_path, engine='openpyxl') as writer:
                for name, dataframe in sheets.items():
                    dataframe.to_excel(writer, index=False, sheet_name=name[:31])
            logger.info(f"Excelファイルを保存しました: {file_path}")
            return True
        except Exception as e:
            logger.error(f"Excelファイル保存エラー: {e}")
            return False

    @staticmethod
    def save_report_json(reports: Sequence[ResidualReport], file_path: Path) -> bool:
        """レポート列を JSON で保存"""
        try:
            file_path.parent.mkdir(parents=True, exist_ok=True)
            payload = [report.to_dict() for report in reports]
            file_path.write_text(json.dumps(payload, ensure_ascii=False, indent=2, default=str),
                                 encoding="utf-8")
            logger.info(f"JSONファイルを保存しました: {file_path}")
            return True
        except Exception as e:
            logger.error(f"JSONファイル保存エラー: {e}")
            return False

    @staticmethod
    def read_profile_csv(file_path: Path) -> DataProfile:
        """
        `t,value` 形式の標本CSVを読み込み DataProfile にする

        Raises:
            ProfileError: 空、列不足、有限でない値、単調でない格子
        """
        try:
            frame = pd.read_csv(file_path)
        except pd.errors.EmptyDataError as e:
            raise ProfileError(f"CSVファイルが空です: {file_path}") from e
        missing = {"t", "value"} - set(frame.columns)
        if missing:
            raise ProfileError(f"CSVファイルに列がありません: {sorted(missing)}")
        if frame.empty:
            raise ProfileError(f"CSVファイルにデータ行がありません: {file_path}")
        t = pd.to_numeric(frame["t"], errors="coerce").to_numpy(dtype=float)
        values = pd.to_numeric(frame["value"], errors="coerce").to_numpy(dtype=float)
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(values))):
            raise ProfileError(f"CSVファイルに数値でない値があります: {file_path}")
        if np.any(np.diff(t) <= 0):
            raise ProfileError(f"t 列は狭義単調増加である必要があります: {file_path}")
        logger.info(f"標本プロファイルを読み込みました: {file_path} ({t.size} 点)")
        return DataProfile.sampled(t, values, name=Path(file_path).stem)

    @staticmethod
    def generate_summary(reports: Sequence[ResidualReport]) -> Dict[str, Any]:
        """
        レポート列の要約情報を生成

        Args:
            reports: 要約するレポート

        Returns:
            Dict[str, Any]: 合否の件数とレポートごとの最大残差
        """
        passed: List[str] = [r.name for r in reports if r.passed]
        failed: List[str] = [r.name for r in reports if not r.passed]
        return {
            "reports": len(reports),
            "passed": len(passed),
            "failed": len(failed),
            "failed_names": failed,
            "max_abs": {r.name: r.max_abs for r in reports},
        }
