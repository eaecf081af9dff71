import logging
import math
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np

from src.core.profiles import DataProfile, ProfileSource
from src.core.quadrature import (
    NO_WEIGHT, QuadratureSpec, SingularWeight, integrate_batch,
)
from src.core.reports import ResidualReport, log_report
from src.core.specfun import bessel_zeros
from src.core.transform import Dimension, fourier_bessel, l1_norm

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 1e-6
SUPPORT_EPSILON = 0.05
SUPPORT_THRESHOLD = 1e-8
VANISHING_THRESHOLD = 1e-6


def chebyshev_grid(count: int, lo: float, hi: float) -> np.ndarray:
    """第1種チェビシェフ点を (lo, hi) に写した昇順の格子"""
    if count < 1 or not lo < hi:
        raise ValueError(f"不正なチェビシェフ格子です: count={count}, ({lo}, {hi})")
    k = np.arange(1, count + 1)
    return lo + (hi - lo) * (1.0 - np.cos((2 * k - 1) * math.pi / (2 * count))) / 2.0


DEFAULT_S_GRID = tuple(chebyshev_grid(20, 0.02, 0.98))


@dataclass(frozen=True)
class RangeQuery:
    dim: Dimension
    m: int = 0
    s_grid: Sequence[float] = DEFAULT_S_GRID
    tolerance: float = DEFAULT_THRESHOLD

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"次数は非負である必要があります: {self.m}")
        if not self.s_grid:
            raise ValueError("s 格子が空です")
        if any(not 0 < s < 1 for s in self.s_grid):
            raise ValueError("s 格子の点は (0, 1) に含まれる必要があります")


def _check_s(s: float) -> None:
    if not 0 < s < 1:
        raise ValueError(f"s は (0, 1) に含まれる必要があります: {s}")


def symmetry_residual(h: DataProfile, order: int, s: float,
                      spec: Optional[QuadratureSpec] = None) -> float:
    """
    対称性条件の左辺と右辺の差

    ∫_0^{1-s} t^{1-2a} h(t) {[(1+t)²-s²][(1-t)²-s²]}^{a-1/2} dt から
    (1+s, 2) 上の同じ積分を引く（a = order）。端点 1∓s の特異性は重みで扱う。

    Args:
        h: (0, 2] に台をもつデータ
        order: 指数の次数 a
        s: (0, 1) の点
        spec: 求積設定

    Returns:
        float: 残差
    """
    _check_s(s)
    beta = order - 0.5
    lo, hi = h.support
    left_hi = 1.0 - s
    right_lo = 1.0 + s

    def left(t):
        return (t ** (1 - 2 * order) * h.eval(t) * ((1.0 + t) ** 2 - s * s) ** beta
                * np.maximum(1.0 - t + s, 0.0) ** beta)

    def right(t):
        return (t ** (1 - 2 * order) * h.eval(t) * ((1.0 + t) ** 2 - s * s) ** beta
                * np.maximum(t - 1.0 + s, 0.0) ** beta)

    lhs = integrate_batch(left, [lo], [left_hi], SingularWeight(exp_right=beta), spec).values[0]
    rhs = integrate_batch(right, [right_lo], [min(hi, 2.0)], SingularWeight(exp_left=beta),
                          spec).values[0]
    return float(lhs - rhs)


def radial_range_residual(h: DataProfile, dim: Dimension, s: float,
                          spec: Optional[QuadratureSpec] = None) -> float:
    return symmetry_residual(h, dim.alpha, s, spec)


def _cauchy_values(h: DataProfile, m: int, t: np.ndarray,
                   spec: Optional[QuadratureSpec]) -> np.ndarray:
    # D^{-m}h(t) = ∫_lo^t τ h(τ) (t²-τ²)^{m-1} / (2^{m-1}(m-1)!) dτ
    lo, hi = h.support
    norm = 2.0 ** (m - 1) * math.factorial(m - 1)

    def kernel(tau, t_row):
        return tau * h.eval(tau) * (t_row ** 2 - tau ** 2) ** (m - 1) / norm

    upper = np.minimum(t, hi)
    return integrate_batch(kernel, np.full(t.shape, lo), upper, NO_WEIGHT, spec, args=(t,)).values


@dataclass
class DInverseResult:
    phi: DataProfile
    support_violation: float


def d_inverse(h: DataProfile, m: int, spec: Optional[QuadratureSpec] = None,
              epsilon: float = SUPPORT_EPSILON) -> DInverseResult:
    """
    D^m φ = h を満たす φ = D^{-m} h と台条件の破れ

    破れは j < m について [2-ε, 2) 上の |D^j φ| = |D^{-(m-j)} h| の最大値。
    """
    if m < 1:
        raise ValueError(f"m は正である必要があります: {m}")

    def phi(t):
        arr = np.asarray(t, dtype=float)
        return _cauchy_values(h, m, arr.ravel(), spec).reshape(arr.shape)

    near_end = np.linspace(2.0 - epsilon, 2.0 - 1e-9, 11)
    violation = max(float(np.max(np.abs(_cauchy_values(h, m - j, near_end, spec))))
                    for j in range(m))
    if violation > SUPPORT_THRESHOLD:
        logger.debug(f"φ の台が (0, 2) に収まりません: 破れ {violation:.3e}")
    source = ProfileSource("derived", f"D^-{m}[{h.source.name}]", h.source.params)
    return DInverseResult(DataProfile(phi, (h.support[0], 2.0), source), violation)


def general_range_residual(g_ml: DataProfile, dim: Dimension, m: int, s: float,
                           spec: Optional[QuadratureSpec] = None) -> float:
    """h = t^{n-2} g から φ = D^{-m} h を作り、次数 m+α の対称性残差を返す"""
    h = g_ml.to_h(dim.n)
    if m == 0:
        return radial_range_residual(h, dim, s, spec)
    return symmetry_residual(d_inverse(h, m, spec).phi, m + dim.alpha, s, spec)


def vanishing_condition_residual(g_ml: DataProfile, dim: Dimension, m: int, k: int,
                                 spec: Optional[QuadratureSpec] = None) -> float:
    """j_{m+α} の k 番目の零点でのフーリエ・ベッセル変換の絶対値"""
    if k < 1:
        raise ValueError(f"零点の番号は1以上である必要があります: {k}")
    lam = bessel_zeros(m + dim.alpha, k)[k - 1]
    return abs(fourier_bessel(g_ml, dim, m, lam, spec))


def _ordered_map(fn: Callable[[Any], float], items: Iterable, executor: Optional[Executor]) -> List[float]:
    if executor is None:
        return [fn(item) for item in items]
    return list(executor.map(fn, items))


def scaled_threshold(h: DataProfile, base: float, spec: Optional[QuadratureSpec] = None) -> float:
    """閾値を h の L¹ ノルムでスケールする（ノルム 0 なら base のまま）"""
    norm = l1_norm(h, spec)
    return base * norm if norm > 0 else base


def radial_range_report(h: DataProfile, dim: Dimension, s_grid: Sequence[float] = DEFAULT_S_GRID,
                        threshold: float = DEFAULT_THRESHOLD,
                        spec: Optional[QuadratureSpec] = None,
                        executor: Optional[Executor] = None,
                        config: Optional[Dict[str, Any]] = None) -> ResidualReport:
    residuals = _ordered_map(lambda s: radial_range_residual(h, dim, s, spec), s_grid, executor)
    report = ResidualReport("radial-range", [{"s": float(s)} for s in s_grid], residuals,
                            scaled_threshold(h, threshold, spec), dict(config or {}))
    log_report(report)
    return report


def general_range_report(g_ml: DataProfile, dim: Dimension, m: int,
                         s_grid: Sequence[float] = DEFAULT_S_GRID,
                         threshold: float = DEFAULT_THRESHOLD,
                         spec: Optional[QuadratureSpec] = None,
                         executor: Optional[Executor] = None,
                         config: Optional[Dict[str, Any]] = None,
                         support_threshold: float = SUPPORT_THRESHOLD) -> List[ResidualReport]:
    """
    一般の m に対する対称性残差と φ の台条件のレポート

    m = 0 のときは radial_range_report と同じ。threshold は L¹ ノルムでスケールされ、
    support_threshold は台条件の破れにそのまま使う。
    """
    h = g_ml.to_h(dim.n)
    if m == 0:
        return [radial_range_report(h, dim, s_grid, threshold, spec, executor, config)]
    inverse = d_inverse(h, m, spec)
    order = m + dim.alpha
    residuals = _ordered_map(lambda s: symmetry_residual(inverse.phi, order, s, spec),
                             s_grid, executor)
    params = [{"s": float(s), "m": m} for s in s_grid]
    report = ResidualReport("general-range", params, residuals,
                            scaled_threshold(h, threshold, spec), dict(config or {}))
    support = ResidualReport("support-violation", [{"m": m, "epsilon": SUPPORT_EPSILON}],
                             [inverse.support_violation], support_threshold, dict(config or {}))
    for item in (report, support):
        log_report(item)
    return [report, support]


def vanishing_report(g_ml: DataProfile, dim: Dimension, m: int, k_max: int = 10,
                     threshold: float = VANISHING_THRESHOLD,
                     spec: Optional[QuadratureSpec] = None,
                     executor: Optional[Executor] = None,
                     config: Optional[Dict[str, Any]] = None) -> ResidualReport:
    ks = list(range(1, k_max + 1))
    residuals = _ordered_map(lambda k: vanishing_condition_residual(g_ml, dim, m, k, spec),
                             ks, executor)
    report = ResidualReport("vanishing", [{"k": k, "m": m} for k in ks], residuals, threshold,
                            dict(config or {}))
    log_report(report)
    return report
