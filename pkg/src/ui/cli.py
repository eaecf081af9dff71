import argparse
import logging
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Sequence

import numpy as np
import pandas as pd

from src.config.settings import ConfigError, Settings, SuiteConfig
from src.core import identities
from src.core.profiles import DataProfile, ProfileError, ProfileSpec, RadialProfile
from src.core.quadrature import QuadratureConfigError
from src.core.range_conditions import (
    DEFAULT_THRESHOLD, SUPPORT_THRESHOLD, VANISHING_THRESHOLD, general_range_report, vanishing_report,
)
from src.core.reports import ResidualReport, log_report
from src.core.specfun import BesselDomainError, bessel_zeros, normalized_j, normalized_y
from src.core.transform import Dimension, forward_coeff, forward_profile
from src.utils.data_converter import DataConverter

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

USER_ERRORS = (ConfigError, ProfileError, QuadratureConfigError, BesselDomainError,
               ValueError, OSError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smtrange", description="球面平均変換の値域条件と関連恒等式の数値検証")
    parser.add_argument("--config", type=Path, help="設定ファイル（KEY=VALUE 形式）")
    parser.add_argument("--config-dir", type=Path, help="設定・ログのディレクトリ")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="偶数次元 n")
    common.add_argument("--m", type=int, help="球面調和関数の次数 m")
    common.add_argument("--profile", help="プロファイル指定 kind:key=value,...")
    common.add_argument("--csv", help="t,value 形式の標本データ")
    common.add_argument("--t-grid", dest="t_grid", help="t 格子")
    common.add_argument("--s-grid", dest="s_grid", help="s 格子")
    common.add_argument("--lambda-grid", dest="lambda_grid", help="λ 格子")
    common.add_argument("--k-max", dest="k_max", type=int, help="零点の個数")
    common.add_argument("--only", action="append", help="実行する恒等式（複数指定可）")
    common.add_argument("--threshold", type=float, help="判定閾値の上書き")
    common.add_argument("--seed", type=int, help="乱数シード")
    common.add_argument("--out", help="出力ディレクトリ")
    common.add_argument("--workers", type=int, help="格子点の並列数")
    common.add_argument("--excel", action="store_true", default=None, help="Excel も出力する")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("forward", parents=[common], help="前進変換 g(t), h(t) を CSV に出力")
    sub.add_parser("range-check", parents=[common], help="値域条件と零点条件を検証")
    sub.add_parser("identities", parents=[common], help="恒等式の検証スイート")
    sub.add_parser("bessel", parents=[common], help="j_α, y_α と零点の表")
    return parser


@contextmanager
def _executor(workers: int) -> Iterator[Optional[ThreadPoolExecutor]]:
    if workers <= 1:
        yield None
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield pool


def _radial_profile(config: SuiteConfig) -> RadialProfile:
    spec = ProfileSpec.parse(config.profile)
    if not spec.is_radial:
        raise ConfigError(f"動径プロファイルを指定してください: {config.profile}")
    return spec.build_radial()


def _data_profile(config: SuiteConfig, dim: Dimension) -> DataProfile:
    """CSV、データ用バンプ、または動径プロファイルの前進変換から g を作る"""
    if config.csv:
        return DataConverter.read_profile_csv(Path(config.csv))
    spec = ProfileSpec.parse(config.profile)
    if spec.is_radial:
        return forward_profile(spec.build_radial(), dim, config.m)
    return spec.build_data()


def _write_reports(reports: List[ResidualReport], config: SuiteConfig, stem: str) -> bool:
    for report in reports:
        report.config = config.to_dict()
    out = config.out_dir
    ok = DataConverter.save_report_json(reports, out / f"{stem}.json")
    frame = DataConverter.reports_to_dataframe(reports)
    ok = DataConverter.save_to_csv(frame, out / f"{stem}.csv") and ok
    if config.excel:
        sheets = {report.name: report.to_dataframe() for report in reports}
        ok = DataConverter.save_to_excel(sheets, out / f"{stem}.xlsx") and ok
    return ok


def _verdict(reports: Sequence[ResidualReport]) -> int:
    summary = DataConverter.generate_summary(reports)
    logger.info(f"判定: {summary['passed']}/{summary['reports']} 件合格")
    return EXIT_PASS if summary["failed"] == 0 else EXIT_FAIL


def cmd_forward(config: SuiteConfig) -> int:
    """t 格子上の g(t) と h(t) = t^{n-2} g(t) を CSV に書く"""
    dim = Dimension(config.n)
    profile = _radial_profile(config)
    t = np.asarray(config.t_values)
    g = forward_coeff(profile, dim, config.m, t)
    frame = pd.DataFrame({"t": t, "g": g, "h": t ** (dim.n - 2) * g})
    if not DataConverter.save_to_csv(frame, config.out_dir / "forward.csv"):
        return EXIT_ERROR
    return EXIT_PASS


def cmd_range_check(config: SuiteConfig) -> int:
    """対称性条件と零点条件を検証する（--threshold はすべてのレポートの閾値を置き換える）"""
    dim = Dimension(config.n)
    g = _data_profile(config, dim)
    override = config.threshold
    with _executor(config.workers) as pool:
        reports = general_range_report(
            g, dim, config.m, config.s_values,
            DEFAULT_THRESHOLD if override is None else override, executor=pool,
            support_threshold=SUPPORT_THRESHOLD if override is None else override)
        reports.append(vanishing_report(
            g, dim, config.m, config.k_max,
            VANISHING_THRESHOLD if override is None else override, executor=pool))
    if not _write_reports(reports, config, "range-check"):
        return EXIT_ERROR
    return _verdict(reports)


def _identity_builders(config: SuiteConfig) -> Dict[str, Callable[[], ResidualReport]]:
    dim = Dimension(config.n)

    def cross_product() -> ResidualReport:
        h = forward_profile(_radial_profile(config), dim, config.m).to_h(dim.n)
        return identities.cross_product_report(h, dim, config.lambda_values, config.m)

    return {
        "elliptic": identities.elliptic_report,
        "quartic": lambda: identities.quartic_report(seed=config.seed),
        "cross-product": cross_product,
        "nicholson": identities.nicholson_report,
        "combinatorial": identities.combinatorial_report,
        "ode": identities.ode_report,
    }


def cmd_identities(config: SuiteConfig) -> int:
    builders = _identity_builders(config)
    selected = list(config.only) or list(identities.IDENTITY_NAMES)
    unknown = [name for name in selected if name not in builders]
    if unknown:
        raise ConfigError(f"未知の恒等式です: {unknown}")

    with _executor(config.workers) as pool:
        if pool is None:
            reports = [builders[name]() for name in selected]
        else:
            reports = list(pool.map(lambda name: builders[name](), selected))
    if config.threshold is not None:
        reports = [report.with_threshold(config.threshold) for report in reports]
    for report in reports:
        log_report(report)
    if not _write_reports(reports, config, "identities"):
        return EXIT_ERROR
    return _verdict(reports)


def cmd_bessel(config: SuiteConfig) -> int:
    """次数 α = n/2 - 1 + m の j_α, y_α と零点の表"""
    alpha = Dimension(config.n).alpha + config.m
    x = np.asarray([v for v in config.t_values if v > 0])
    table = pd.DataFrame({"x": x, "j": normalized_j(alpha, x), "y": normalized_y(alpha, x)})
    zeros = pd.DataFrame({"k": np.arange(1, config.k_max + 1),
                          "zero": bessel_zeros(alpha, config.k_max)})
    ok = DataConverter.save_to_csv(table, config.out_dir / f"bessel-{alpha}.csv")
    ok = DataConverter.save_to_csv(zeros, config.out_dir / f"bessel-{alpha}-zeros.csv") and ok
    return EXIT_PASS if ok else EXIT_ERROR


COMMANDS = {
    "forward": cmd_forward,
    "range-check": cmd_range_check,
    "identities": cmd_identities,
    "bessel": cmd_bessel,
}

OVERRIDE_KEYS = ("n", "m", "profile", "csv", "t_grid", "s_grid", "lambda_grid", "k_max",
                 "only", "threshold", "seed", "out", "workers", "excel")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    コマンドラインの入口

    Returns:
        int: 0 = すべて合格, 1 = 不合格あり, 2 = 入力・入出力エラー
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PASS if e.code == 0 else EXIT_ERROR

    try:
        settings = Settings(config_dir=args.config_dir, config_file=args.config)
        if args.config is not None and not args.config.exists():
            raise ConfigError(f"設定ファイルが見つかりません: {args.config}")
        overrides = {key: getattr(args, key, None) for key in OVERRIDE_KEYS}
        config = settings.build_suite_config(overrides)
        logger.info(f"{settings.app_name} {args.command} を開始します (seed={config.seed})")
        return COMMANDS[args.command](config)
    except USER_ERRORS as e:
        logger.error(f"{args.command} 実行エラー: {e}")
        return EXIT_ERROR
