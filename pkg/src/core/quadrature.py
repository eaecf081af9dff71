import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg, special

logger = logging.getLogger(__name__)

METHODS = ("gauss-legendre", "gauss-jacobi", "tanh-sinh")
# 1チャンクあたりの評価点数の上限
_MAX_POINTS = 2 ** 21
_TANH_SINH_TMAX = 4.5


class QuadratureConfigError(ValueError):
    """求積設定の誤り"""


@dataclass(frozen=True)
class QuadratureSpec:
    """求積の設定（方式・節点数・許容誤差・細分回数）"""

    method: str = "gauss-jacobi"
    nodes: int = 64
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_refinements: int = 6

    def __post_init__(self):
        if self.method not in METHODS:
            raise QuadratureConfigError(f"未知の求積方式です: {self.method}")
        if self.nodes < 4:
            raise QuadratureConfigError(f"節点数は4以上である必要があります: {self.nodes}")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise QuadratureConfigError("許容誤差は正である必要があります")
        if self.max_refinements < 1:
            raise QuadratureConfigError("細分回数は1以上である必要があります")

    def with_options(self, **changes) -> "QuadratureSpec":
        return replace(self, **changes)


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class SingularWeight:
    """端点特異性 (t-a)^{exp_left} (b-t)^{exp_right}"""

    exp_left: float = 0.0
    exp_right: float = 0.0

    def __post_init__(self):
        if self.exp_left <= -1 or self.exp_right <= -1:
            raise QuadratureConfigError(
                f"端点の指数は -1 より大きい必要があります: {self.exp_left}, {self.exp_right}")

    @property
    def is_trivial(self) -> bool:
        return self.exp_left == 0 and self.exp_right == 0


NO_WEIGHT = SingularWeight()


@dataclass
class QuadratureResult:
    """積分値と誤差推定（value, err_estimate としてアンパック可能）"""

    value: float
    err_estimate: float
    converged: bool = True
    nodes: int = 0

    def __iter__(self):
        yield self.value
        yield self.err_estimate


@dataclass
class BatchResult:
    values: np.ndarray
    errors: np.ndarray
    converged: np.ndarray

    @property
    def all_converged(self) -> bool:
        return bool(np.all(self.converged))


def _readonly(*arrays: np.ndarray) -> Tuple[np.ndarray, ...]:
    for arr in arrays:
        arr.setflags(write=False)
    return arrays


def eval_jacobi(a: float, b: float, n: int, x: np.ndarray) -> np.ndarray:
    """三項漸化式によるヤコビ多項式 P_n^{(a,b)}(x)"""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 0.5 * (a - b + (a + b + 2.0) * x)
    apb = a + b
    for k in range(2, n + 1):
        a1 = 2.0 * k * (k + apb) * (2.0 * k + apb - 2.0)
        a2 = (2.0 * k + apb - 1.0) * (a * a - b * b)
        a3 = (2.0 * k + apb - 2.0) * (2.0 * k + apb - 1.0) * (2.0 * k + apb)
        a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + apb)
        prev, cur = cur, ((a2 + a3 * x) * cur - a4 * prev) / a1
    return cur


def _jacobi_matrix(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    k = np.arange(n, dtype=float)
    apb = a + b
    diag = np.empty(n)
    diag[0] = (b - a) / (apb + 2.0)
    if n > 1:
        kk = k[1:]
        diag[1:] = (b * b - a * a) / ((2.0 * kk + apb) * (2.0 * kk + apb + 2.0))
    kk = np.arange(1, n, dtype=float)
    beta = np.empty(n - 1)
    if n > 1:
        beta[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + apb) ** 2 * (3.0 + apb))
        rest = kk[1:]
        beta[1:] = (4.0 * rest * (rest + a) * (rest + b) * (rest + apb)
                    / ((2.0 * rest + apb) ** 2 * (2.0 * rest + apb + 1.0) * (2.0 * rest + apb - 1.0)))
    return diag, np.sqrt(beta)


@lru_cache(maxsize=128)
def gauss_jacobi_rule(n: int, a: float = 0.0, b: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    重み (1-x)^a (1+x)^b に対する n 点ガウス・ヤコビ則

    節点はヤコビ行列の固有値（Golub-Welsch）、重みは
    Γ(n+a+1)Γ(n+b+1) / (Γ(n+a+b+1) n!) · 2^{a+b+1} / ((1-x²) P_n'(x)²) で求める。

    Args:
        n: 節点数
        a: (1-x) 側の指数
        b: (1+x) 側の指数

    Returns:
        Tuple[np.ndarray, np.ndarray]: 読み取り専用の節点と重み
    """
    if n < 1:
        raise QuadratureConfigError(f"節点数は1以上である必要があります: {n}")
    if a <= -1 or b <= -1:
        raise QuadratureConfigError(f"ヤコビ重みの指数は -1 より大きい必要があります: {a}, {b}")
    diag, offdiag = _jacobi_matrix(n, a, b)
    if n == 1:
        nodes = diag.copy()
    else:
        nodes = linalg.eigvalsh_tridiagonal(diag, offdiag)
    scale = 0.5 * (n + a + b + 1.0)
    # ニュートン法で1回だけ磨く
    deriv = scale * eval_jacobi(a + 1.0, b + 1.0, n - 1, nodes)
    nodes = np.clip(nodes - eval_jacobi(a, b, n, nodes) / deriv, -1.0, 1.0)
    deriv = scale * eval_jacobi(a + 1.0, b + 1.0, n - 1, nodes)
    log_const = (special.gammaln(n + a + 1.0) + special.gammaln(n + b + 1.0)
                 - special.gammaln(n + a + b + 1.0) - special.gammaln(n + 1.0)
                 + (a + b + 1.0) * math.log(2.0))
    weights = np.exp(log_const) / ((1.0 - nodes) * (1.0 + nodes) * deriv ** 2)
    return _readonly(nodes, weights)


def gauss_legendre_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return gauss_jacobi_rule(n, 0.0, 0.0)


@lru_cache(maxsize=32)
def tanh_sinh_rule(level: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    刻み h = 2^{-level} の tanh-sinh 則

    Returns:
        節点 x、重み、端点までの距離 1+x と 1-x（桁落ちしない形）
    """
    h = 2.0 ** (-level)
    count = int(math.ceil(_TANH_SINH_TMAX / h))
    k = np.arange(-count, count + 1, dtype=float) * h
    u = 0.5 * math.pi * np.sinh(k)
    nodes = np.tanh(u)
    weights = h * 0.5 * math.pi * np.cosh(k) / np.cosh(u) ** 2
    one_plus = 2.0 / (1.0 + np.exp(-2.0 * u))
    one_minus = 2.0 / (1.0 + np.exp(2.0 * u))
    return _readonly(nodes, weights, one_plus, one_minus)


def _tanh_sinh_level(nodes: int) -> int:
    level = 1
    while 2 * math.ceil(_TANH_SINH_TMAX * 2 ** level) + 1 < nodes:
        level += 1
    return level


def _apply_rule(f: Callable, lo: np.ndarray, hi: np.ndarray, args: Sequence[np.ndarray],
                weight: SingularWeight, method: str, size: int) -> np.ndarray:
    half = 0.5 * (hi - lo)
    out = np.zeros(lo.size)
    if method == "tanh-sinh":
        x, w, one_plus, one_minus = tanh_sinh_rule(size)
        t = np.where(x[None, :] < 0,
                     lo[:, None] + half[:, None] * one_plus[None, :],
                     hi[:, None] - half[:, None] * one_minus[None, :])
        w_row = w * one_plus ** weight.exp_left * one_minus ** weight.exp_right
        scale = half ** (1.0 + weight.exp_left + weight.exp_right)
    else:
        x, w_row = gauss_jacobi_rule(size, weight.exp_right, weight.exp_left)
        t = 0.5 * (hi + lo)[:, None] + half[:, None] * x[None, :]
        scale = half ** (1.0 + weight.exp_left + weight.exp_right)
    rows = max(1, _MAX_POINTS // w_row.size)
    for start in range(0, lo.size, rows):
        stop = min(start + rows, lo.size)
        chunk_args = [np.asarray(arg)[start:stop, None] for arg in args]
        values = np.asarray(f(t[start:stop], *chunk_args), dtype=float)
        out[start:stop] = scale[start:stop] * (values @ w_row)
    return out


def _refine(f, lo, hi, args, weight, method, first_size, spec) -> BatchResult:
    values = _apply_rule(f, lo, hi, args, weight, method, first_size)
    errors = np.full(lo.size, np.inf)
    converged = np.zeros(lo.size, dtype=bool)
    active = np.arange(lo.size)
    size = first_size
    for _ in range(spec.max_refinements):
        size = size + 1 if method == "tanh-sinh" else 2 * size
        sub_args = [np.asarray(arg)[active] for arg in args]
        new = _apply_rule(f, lo[active], hi[active], sub_args, weight, method, size)
        err = np.abs(new - values[active])
        values[active] = new
        errors[active] = err
        ok = err <= np.maximum(spec.abs_tol, spec.rel_tol * np.abs(new))
        converged[active[ok]] = True
        active = active[~ok]
        if active.size == 0:
            break
    return BatchResult(values, errors, converged)


def integrate_batch(f: Callable, lo, hi, weight: SingularWeight = NO_WEIGHT,
                    spec: Optional[QuadratureSpec] = None, args: Sequence = ()) -> BatchResult:
    """
    区間ごとに独立な積分をまとめて計算

    f(t, *args) は shape (M, N) の節点配列と shape (M, 1) の行パラメータを受け取り、
    同じ shape の値を返すこと。重み (t-lo)^{exp_left}(hi-t)^{exp_right} は f に含めない。
    lo >= hi の行は 0 とする。

    Args:
        f: ベクトル化された被積分関数（滑らかな部分）
        lo: 下端の配列
        hi: 上端の配列
        weight: 端点特異性
        spec: 求積設定
        args: 行ごとのパラメータ配列

    Returns:
        BatchResult: 値、誤差推定、収束フラグ
    """
    spec = spec or DEFAULT_SPEC
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    lo, hi = np.broadcast_arrays(lo, hi)
    lo, hi = lo.copy(), hi.copy()
    args = [np.broadcast_to(np.asarray(arg, dtype=float), lo.shape) for arg in args]
    values = np.zeros(lo.size)
    errors = np.zeros(lo.size)
    converged = np.ones(lo.size, dtype=bool)
    live = np.flatnonzero(hi > lo)
    if live.size == 0:
        return BatchResult(values, errors, converged)

    method = spec.method
    first = _tanh_sinh_level(spec.nodes) if method == "tanh-sinh" else spec.nodes
    live_args = [arg[live] for arg in args]
    result = _refine(f, lo[live], hi[live], live_args, weight, method, first, spec)

    if not result.all_converged and method != "tanh-sinh":
        stuck = np.flatnonzero(~result.converged)
        logger.debug(f"ガウス則が {stuck.size} 件で未収束のため tanh-sinh 則を試します")
        retry = _refine(f, lo[live][stuck], hi[live][stuck], [arg[stuck] for arg in live_args],
                        weight, "tanh-sinh", _tanh_sinh_level(spec.nodes), spec)
        better = retry.errors < result.errors[stuck]
        result.values[stuck[better]] = retry.values[better]
        result.errors[stuck[better]] = retry.errors[better]
        result.converged[stuck] = retry.converged | result.converged[stuck]

    values[live] = result.values
    errors[live] = result.errors
    converged[live] = result.converged
    if not np.all(converged):
        logger.warning(
            f"求積が収束しませんでした: 未収束 {int(np.sum(~converged))} 件, "
            f"最大誤差推定 {float(np.max(errors[~converged])):.3e}")
    return BatchResult(values, errors, converged)


def _scalar_call(f: Callable) -> Callable:
    def wrapped(t: np.ndarray) -> np.ndarray:
        return np.asarray(f(t.ravel()), dtype=float).reshape(t.shape)
    return wrapped


def integrate_singular(f_smooth: Callable, a: float, b: float, w: SingularWeight,
                       spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """
    端点特異性付き積分 ∫_a^b (t-a)^{p} (b-t)^{q} f_smooth(t) dt

    Args:
        f_smooth: 配列を受け取る滑らかな関数
        a: 下端
        b: 上端
        w: 特異性の指数
        spec: 求積設定

    Returns:
        QuadratureResult: 積分値と誤差推定
    """
    if not a < b:
        raise QuadratureConfigError(f"積分区間が不正です: [{a}, {b}]")
    spec = spec or DEFAULT_SPEC
    if spec.method == "gauss-legendre" and not w.is_trivial:
        spec = spec.with_options(method="gauss-jacobi")
    batch = integrate_batch(_scalar_call(f_smooth), [a], [b], w, spec)
    return QuadratureResult(float(batch.values[0]), float(batch.errors[0]),
                            bool(batch.converged[0]), spec.nodes)


def integrate(f: Callable, a: float, b: float,
              spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """滑らかな関数の積分 ∫_a^b f(t) dt"""
    return integrate_singular(f, a, b, NO_WEIGHT, spec)
