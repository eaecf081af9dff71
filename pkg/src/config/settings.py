import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from dotenv import dotenv_values

from src.core.range_conditions import chebyshev_grid

DEFAULT_SEED = 20240601


class ConfigError(ValueError):
    """設定値の誤り"""


def parse_grid(text: str) -> List[float]:
    """
    格子指定を数値列に変換

    "a:b:count"（両端を含む等間隔）、"chebyshev:count:a:b"（(a, b) 内の昇順
    チェビシェフ点）、"0.5,1,2"（列挙）の3形式を受け付ける。

    Args:
        text: 格子指定

    Returns:
        List[float]: 格子点
    """
    text = text.strip()
    if not text:
        raise ConfigError("格子指定が空です")
    try:
        if text.startswith("chebyshev:"):
            _, count, lo, hi = text.split(":")
            grid = chebyshev_grid(int(count), float(lo), float(hi))
        elif ":" in text:
            lo, hi, count = text.split(":")
            grid = np.linspace(float(lo), float(hi), int(count))
        else:
            grid = np.array([float(item) for item in text.split(",") if item.strip()])
    except ValueError as e:
        raise ConfigError(f"格子指定を解釈できません: {text}") from e
    if grid.size == 0:
        raise ConfigError(f"格子が空です: {text}")
    return [float(x) for x in grid]


@dataclass
class SuiteConfig:
    """コマンド実行時の設定（すべてのレポートに埋め込まれる）"""

    n: int = 2
    m: int = 0
    profile: str = "bump:rho=0.8"
    csv: Optional[str] = None
    t_grid: str = "0.01:1.99:200"
    s_grid: str = "chebyshev:20:0.02:0.98"
    lambda_grid: str = "0.5,1,2,5,10,20"
    k_max: int = 10
    only: Tuple[str, ...] = ()
    threshold: Optional[float] = None
    seed: int = DEFAULT_SEED
    out: str = "smtrange-out"
    workers: int = 1
    excel: bool = False

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ConfigError(f"次元 n は2以上の偶数である必要があります: {self.n}")
        if self.m < 0:
            raise ConfigError(f"次数 m は非負である必要があります: {self.m}")
        if self.k_max < 1:
            raise ConfigError(f"k_max は1以上である必要があります: {self.k_max}")
        if self.workers < 1:
            raise ConfigError(f"workers は1以上である必要があります: {self.workers}")
        if self.threshold is not None and self.threshold < 0:
            raise ConfigError(f"閾値は非負である必要があります: {self.threshold}")
        s_values = parse_grid(self.s_grid)
        if any(not 0 < s < 1 for s in s_values):
            raise ConfigError(f"s 格子は (0, 1) に含まれる必要があります: {self.s_grid}")
        if any(lam <= 0 for lam in parse_grid(self.lambda_grid)):
            raise ConfigError(f"λ 格子は正である必要があります: {self.lambda_grid}")

    @property
    def s_values(self) -> List[float]:
        return parse_grid(self.s_grid)

    @property
    def t_values(self) -> List[float]:
        return parse_grid(self.t_grid)

    @property
    def lambda_values(self) -> List[float]:
        return parse_grid(self.lambda_grid)

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["only"] = list(self.only)
        return data


class Settings:
    """アプリケーション設定管理クラス"""

    CONFIG_FILE_NAME = "smtrange.env"
    LOG_FILE_NAME = "smtrange.log"

    DEFAULT_CONFIG: Dict[str, str] = {
        "LOG_LEVEL": "INFO",
        "N": "2",
        "M": "0",
        "PROFILE": "bump:rho=0.8",
        "T_GRID": "0.01:1.99:200",
        "S_GRID": "chebyshev:20:0.02:0.98",
        "LAMBDA_GRID": "0.5,1,2,5,10,20",
        "K_MAX": "10",
        "SEED": str(DEFAULT_SEED),
        "OUT": "smtrange-out",
        "WORKERS": "1",
    }

    def __init__(self, config_dir: Optional[Path] = None, config_file: Optional[Path] = None):
        self.app_name = "smtrange"
        self.version = "1.0.0"
        self.config_dir = Path(config_dir) if config_dir else Path.home() / ".smtrange"
        self.config_file = Path(config_file) if config_file else self.config_dir / self.CONFIG_FILE_NAME

        # ディレクトリを作成
        self.config_dir.mkdir(parents=True, exist_ok=True)

        # 設定の読み込み
        self.config = self._load_config()

        # ログ設定
        self._setup_logging()

    def _load_config(self) -> Dict[str, str]:
        """設定ファイルの読み込み（既定値に上書きでマージ）"""
        config = dict(self.DEFAULT_CONFIG)
        if not self.config_file.exists():
            return config
        try:
            values = dotenv_values(self.config_file)
        except Exception as e:
            raise ConfigError(f"設定ファイル読み込みエラー: {e}") from e
        for key, value in values.items():
            if value is not None:
                config[key.upper()] = value
        return config

    def _setup_logging(self):
        """ログ設定"""
        log_dir = self.config_dir / "logs"
        log_dir.mkdir(exist_ok=True)

        log_file = log_dir / self.LOG_FILE_NAME
        level = getattr(logging, self.get("LOG_LEVEL", "INFO").upper(), logging.INFO)

        logging.basicConfig(
            level=level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=[
                logging.FileHandler(log_file, encoding='utf-8'),
                logging.StreamHandler()
            ]
        )

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        return self.config.get(key.upper(), default)

    def get_int(self, key: str, default: int = 0) -> int:
        value = self.get(key)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError as e:
            raise ConfigError(f"{key} は整数である必要があります: {value}") from e

    def get_float(self, key: str, default: Optional[float] = None) -> Optional[float]:
        value = self.get(key)
        if value is None or value == "":
            return default
        try:
            return float(value)
        except ValueError as e:
            raise ConfigError(f"{key} は数値である必要があります: {value}") from e

    def get_list(self, key: str, default: Optional[List[str]] = None) -> List[str]:
        value = self.get(key)
        if not value:
            return list(default or [])
        return [item.strip() for item in value.split(",") if item.strip()]

    def build_suite_config(self, overrides: Optional[Dict[str, Any]] = None) -> SuiteConfig:
        """
        設定ファイルの値とコマンドラインの上書きから SuiteConfig を作る

        Args:
            overrides: None でない値が設定ファイルより優先される

        Returns:
            SuiteConfig: 検証済みの設定
        """
        values: Dict[str, Any] = {
            "n": self.get_int("N", 2),
            "m": self.get_int("M", 0),
            "profile": self.get("PROFILE"),
            "csv": self.get("CSV") or None,
            "t_grid": self.get("T_GRID"),
            "s_grid": self.get("S_GRID"),
            "lambda_grid": self.get("LAMBDA_GRID"),
            "k_max": self.get_int("K_MAX", 10),
            "only": tuple(self.get_list("ONLY")),
            "threshold": self.get_float("THRESHOLD"),
            "seed": self.get_int("SEED", DEFAULT_SEED),
            "out": self.get("OUT"),
            "workers": self.get_int("WORKERS", 1),
            "excel": (self.get("EXCEL", "false") or "").lower() in ("1", "true", "yes"),
        }
        for key, value in (overrides or {}).items():
            if value is not None:
                values[key] = tuple(value) if key == "only" else value
        return SuiteConfig(**values)
