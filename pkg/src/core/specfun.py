import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterator, List, Sequence, Tuple, Union

import numpy as np
import sympy
from scipy import optimize, special

logger = logging.getLogger(__name__)

# J_α の級数展開とミラー法の切り替え点
SERIES_LIMIT = 12.0
# Y_0, Y_1 の対数級数とノイマン級数の切り替え点
Y_SERIES_LIMIT = 8.0
_SERIES_TERMS = 60
_RESCALE_LIMIT = 1e250


class BesselDomainError(ValueError):
    """ベッセル関数の定義域外の引数"""


@dataclass(frozen=True)
class Order:
    """整数次数 α（偶数次元 n では α = n/2 - 1）"""

    alpha: int

    def __post_init__(self):
        if int(self.alpha) != self.alpha or self.alpha < 0:
            raise ValueError(f"次数は非負整数である必要があります: {self.alpha}")
        object.__setattr__(self, "alpha", int(self.alpha))

    @classmethod
    def from_dimension(cls, n: int) -> "Order":
        if n < 2 or n % 2:
            raise ValueError(f"次元は2以上の偶数である必要があります: {n}")
        return cls(n // 2 - 1)

    def shifted(self, m: int) -> "Order":
        return Order(self.alpha + m)


@dataclass(frozen=True)
class BellIndex:
    """部分ベル多項式 B_{k,j} の添字"""

    k: int
    j: int

    def __post_init__(self):
        if self.k < 1 or not 1 <= self.j <= self.k:
            raise ValueError(f"不正なベル多項式の添字です: k={self.k}, j={self.j}")

    @property
    def arg_count(self) -> int:
        return self.k - self.j + 1


OrderLike = Union[Order, int]


def as_order(alpha: OrderLike) -> int:
    if isinstance(alpha, Order):
        return alpha.alpha
    return Order(alpha).alpha


def _as_array(x) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr).astype(float, copy=True), arr.ndim == 0


def _restore(values: np.ndarray, scalar: bool):
    return float(values[0]) if scalar else values


def _normalized_series(alpha: int, x: np.ndarray) -> np.ndarray:
    """j_α の昇冪級数 α! Σ (-1)^k (x/2)^{2k} / (k!(k+α)!)"""
    q = -(x / 2.0) ** 2
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + alpha))
        total = total + term
    return total


def _miller_table(x: np.ndarray, kmax: int) -> np.ndarray:
    """
    ミラーの後退漸化式で J_0..J_N を計算

    正規化には J_0 + 2 Σ J_{2k} = 1 を用いる。

    Args:
        x: 正の引数配列
        kmax: 必要な最大次数

    Returns:
        np.ndarray: shape (N+1, len(x)) の表（N >= kmax）
    """
    scale = max(float(np.max(x)), float(kmax))
    start = int(scale + 20 + math.sqrt(40.0 * scale))
    start += start % 2
    table = np.zeros((start + 1, x.size))
    f_next = np.zeros_like(x)
    f = np.full_like(x, 1e-30)
    table[start] = f
    norm = 2.0 * f
    for k in range(start, 0, -1):
        f_prev = (2.0 * k / x) * f - f_next
        f_next, f = f, f_prev
        table[k - 1] = f
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm = norm + 2.0 * f
        big = np.abs(f) > _RESCALE_LIMIT
        if big.any():
            factor = np.where(big, 1.0 / _RESCALE_LIMIT, 1.0)
            f, f_next, norm = f * factor, f_next * factor, norm * factor
            table[k - 1:] *= factor
    norm = norm + f
    return table / norm


def bessel_j(alpha: OrderLike, x):
    """
    第一種ベッセル関数 J_α(x)

    Args:
        alpha: 非負整数次数
        x: 非負の実数（スカラーまたは配列）

    Returns:
        float | np.ndarray: J_α(x)
    """
    a = as_order(alpha)
    arr, scalar = _as_array(x)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise BesselDomainError(f"J_{a} の引数は非負である必要があります")
    out = np.empty_like(arr)
    small = arr <= SERIES_LIMIT
    if small.any():
        xs = arr[small]
        out[small] = _normalized_series(a, xs) * (xs / 2.0) ** a / math.factorial(a)
    if (~small).any():
        out[~small] = _miller_table(arr[~small], a)[a]
    return _restore(out, scalar)


def _y01_series(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    j0 = _normalized_series(0, x)
    j1 = _normalized_series(1, x) * (x / 2.0)
    log_term = np.log(x / 2.0) + np.euler_gamma
    q = -(x / 2.0) ** 2
    # Y_0: Σ_{k>=1} (-1)^{k+1} H_k (x²/4)^k / (k!)²
    term0 = np.ones_like(x)
    sum0 = np.zeros_like(x)
    # Y_1: Σ_{k>=0} (ψ(k+1)+ψ(k+2)) (-x²/4)^k / (k!(k+1)!)
    term1 = np.ones_like(x)
    sum1 = np.full_like(x, 1.0 - 2.0 * np.euler_gamma)
    harmonic = 0.0
    for k in range(1, _SERIES_TERMS):
        harmonic += 1.0 / k
        term0 = term0 * q / (k * k)
        sum0 = sum0 - harmonic * term0
        term1 = term1 * q / (k * (k + 1))
        sum1 = sum1 + (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * np.euler_gamma) * term1
    y0 = (2.0 / np.pi) * (log_term * j0 + sum0)
    y1 = (-2.0 / (np.pi * x) + (2.0 / np.pi) * np.log(x / 2.0) * j1
          - (x / (2.0 * np.pi)) * sum1)
    return y0, y1


def _y01_neumann(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    table = _miller_table(x, 2)
    log_term = np.log(x / 2.0) + np.euler_gamma
    top = (table.shape[0] - 2) // 2
    even_sum = np.zeros_like(x)
    odd_sum = np.zeros_like(x)
    for k in range(1, top + 1):
        sign = -1.0 if k % 2 else 1.0
        even_sum = even_sum + sign * table[2 * k] / k
        odd_sum = odd_sum + sign * (table[2 * k - 1] - table[2 * k + 1]) / k
    y0 = (2.0 / np.pi) * log_term * table[0] - (4.0 / np.pi) * even_sum
    y1 = (-(2.0 / (np.pi * x)) * table[0] + (2.0 / np.pi) * log_term * table[1]
          + (2.0 / np.pi) * odd_sum)
    return y0, y1


def bessel_y(alpha: OrderLike, x):
    """
    第二種ベッセル関数 Y_α(x)

    Y_0, Y_1 を求めてから上昇漸化式で高次へ進める（Y に対しては安定）。

    Args:
        alpha: 非負整数次数
        x: 正の実数（スカラーまたは配列）

    Returns:
        float | np.ndarray: Y_α(x)
    """
    a = as_order(alpha)
    arr, scalar = _as_array(x)
    if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
        raise BesselDomainError(f"Y_{a} の引数は正である必要があります")
    y0 = np.empty_like(arr)
    y1 = np.empty_like(arr)
    small = arr <= Y_SERIES_LIMIT
    if small.any():
        y0[small], y1[small] = _y01_series(arr[small])
    if (~small).any():
        y0[~small], y1[~small] = _y01_neumann(arr[~small])
    if a == 0:
        return _restore(y0, scalar)
    prev, cur = y0, y1
    for k in range(1, a):
        prev, cur = cur, (2.0 * k / arr) * cur - prev
    return _restore(cur, scalar)


def normalized_j(alpha: OrderLike, x):
    """正規化ベッセル関数 j_α(x) = 2^α α! J_α(x) / x^α（j_α(0) = 1）"""
    a = as_order(alpha)
    arr, scalar = _as_array(x)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise BesselDomainError(f"j_{a} の引数は非負である必要があります")
    out = np.empty_like(arr)
    small = arr <= SERIES_LIMIT
    if small.any():
        out[small] = _normalized_series(a, arr[small])
    if (~small).any():
        xs = arr[~small]
        out[~small] = _miller_table(xs, a)[a] * (2.0 ** a) * math.factorial(a) / xs ** a
    return _restore(out, scalar)


def normalized_y(alpha: OrderLike, x):
    """正規化ベッセル関数 y_α(x) = 2^α α! Y_α(x) / x^α"""
    a = as_order(alpha)
    arr, scalar = _as_array(x)
    values = np.atleast_1d(bessel_y(a, arr))
    return _restore(values * (2.0 ** a) * math.factorial(a) / arr ** a, scalar)


def _derivation_factor(alpha: int, k: int) -> float:
    if k < 0:
        raise ValueError(f"微分回数は非負である必要があります: {k}")
    return (-1.0) ** k * math.factorial(alpha) / (2.0 ** k * math.factorial(alpha + k))


def d_power_j(alpha: OrderLike, k: int, x):
    """
    D = (1/x) d/dx の k 回作用 D^k j_α(x)

    微分公式 D^k j_α = (-1)^k Γ(α+1) / (2^k Γ(k+α+1)) · j_{α+k} による。
    """
    a = as_order(alpha)
    factor = _derivation_factor(a, k)
    return factor * normalized_j(a + k, x)


def d_power_y(alpha: OrderLike, k: int, x):
    """y_α に対する同じ微分公式"""
    a = as_order(alpha)
    factor = _derivation_factor(a, k)
    return factor * normalized_y(a + k, x)


def _mcmahon(alpha: int, k: int) -> float:
    beta = (k + alpha / 2.0 - 0.25) * math.pi
    mu = 4.0 * alpha * alpha
    eight_beta = 8.0 * beta
    return (beta - (mu - 1.0) / eight_beta
            - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * eight_beta ** 3))


def _bracket_next_zero(alpha: int, lower: float, step: float = 0.25) -> Tuple[float, float]:
    left = lower
    f_left = bessel_j(alpha, left)
    for _ in range(4000):
        right = left + step
        f_right = bessel_j(alpha, right)
        if f_left == 0.0:
            return left, left
        if np.sign(f_left) != np.sign(f_right):
            return left, right
        left, f_left = right, f_right
    raise RuntimeError(f"J_{alpha} の零点の括り出しに失敗しました (下限 {lower})")


def _newton_in_bracket(alpha: int, guess: float, left: float, right: float) -> float:
    x = guess if left < guess < right else 0.5 * (left + right)
    for _ in range(50):
        value = bessel_j(alpha, x)
        slope = (alpha / x) * value - bessel_j(alpha + 1, x)
        if slope == 0.0:
            break
        step = value / slope
        x_new = x - step
        if not left <= x_new <= right:
            break
        x = x_new
        if abs(step) <= 4e-16 * abs(x):
            return x
    logger.debug(f"ニュートン法が括弧内で収束しませんでした。二分法に切り替えます: J_{alpha}")
    return optimize.brentq(lambda t: bessel_j(alpha, t), left, right, xtol=1e-15, rtol=1e-15)


def bessel_zeros(alpha: OrderLike, count: int) -> List[float]:
    """
    J_α の正の零点を小さい順に count 個求める

    McMahon の漸近近似を初期値とし、符号変化で括った区間内でニュートン法、
    区間を外れた場合は二分法系の brentq で確定する。

    Args:
        alpha: 非負整数次数
        count: 求める零点の個数

    Returns:
        List[float]: 狭義単調増加の零点列
    """
    a = as_order(alpha)
    if count < 1:
        raise ValueError(f"零点の個数は1以上である必要があります: {count}")
    zeros: List[float] = []
    lower = max(float(a), 0.1)
    for k in range(1, count + 1):
        left, right = _bracket_next_zero(a, lower)
        root = left if left == right else _newton_in_bracket(a, _mcmahon(a, k), left, right)
        zeros.append(root)
        lower = root + 1.0
    return zeros


def gegenbauer_normalized(alpha: float, m: int, x):
    """
    正規化ゲーゲンバウアー多項式 C_m^α(x) / C_m^α(1)

    α = 0 ではチェビシェフ極限 T_m(x) を返す。

    Args:
        alpha: 非負の実数パラメータ
        m: 次数
        x: [-1, 1] の値（スカラーまたは配列）

    Returns:
        float | np.ndarray: 正規化値
    """
    if alpha < 0 or m < 0:
        raise ValueError(f"不正なゲーゲンバウアー多項式のパラメータです: α={alpha}, m={m}")
    arr, scalar = _as_array(x)
    if np.any(np.abs(arr) > 1.0 + 1e-12):
        raise ValueError("ゲーゲンバウアー多項式の引数は [-1, 1] に限ります")
    arr = np.clip(arr, -1.0, 1.0)
    if m == 0:
        return _restore(np.ones_like(arr), scalar)
    if alpha == 0:
        prev, cur = np.ones_like(arr), arr.copy()
        for _ in range(1, m):
            prev, cur = cur, 2.0 * arr * cur - prev
        return _restore(cur, scalar)
    prev, cur = np.ones_like(arr), 2.0 * alpha * arr
    for k in range(1, m):
        prev, cur = cur, (2.0 * arr * (k + alpha) * cur - (k + 2.0 * alpha - 1.0) * prev) / (k + 1)
    at_one = special.poch(2.0 * alpha, m) / math.factorial(m)
    return _restore(cur / at_one, scalar)


@dataclass(frozen=True)
class PolyEval:
    """ゲーゲンバウアー／チェビシェフ極限の評価器"""

    alpha: float
    m: int

    @property
    def family(self) -> str:
        return "chebyshev-limit" if self.alpha == 0 else "gegenbauer"

    def __call__(self, x):
        return gegenbauer_normalized(self.alpha, self.m, x)


def gegenbauer_rodrigues(alpha, m: int) -> sympy.Expr:
    """ロドリゲスの公式による C_m^α(x)（sympy 式）"""
    x = sympy.Symbol("x")
    a = sympy.nsimplify(alpha)
    half = sympy.Rational(1, 2)
    const = ((-1) ** m * sympy.gamma(a + half) * sympy.gamma(m + 2 * a)
             / (2 ** m * sympy.factorial(m) * sympy.gamma(2 * a) * sympy.gamma(m + a + half)))
    body = sympy.diff((1 - x ** 2) ** (m + a - half), x, m)
    return sympy.simplify(const * (1 - x ** 2) ** (half - a) * body)


def _bell_sequences(k: int, j: int) -> Iterator[Tuple[int, ...]]:
    width = k - j + 1

    def walk(r: int, rest_j: int, rest_k: int, prefix: Tuple[int, ...]):
        if r > width:
            if rest_j == 0 and rest_k == 0:
                yield prefix
            return
        for i in range(min(rest_j, rest_k // r) + 1):
            yield from walk(r + 1, rest_j - i, rest_k - r * i, prefix + (i,))

    yield from walk(1, j, k, ())


def bell_partial(idx: BellIndex, args: Sequence):
    """
    部分ベル多項式 B_{k,j}(x_1, ..., x_{k-j+1})

    i_1+...+i_{k-j+1} = j, i_1+2i_2+... = k を満たす列を直接列挙する。
    有理数を渡せば厳密に計算される。

    Args:
        idx: 添字 (k, j)
        args: 長さ k-j+1 の引数列

    Returns:
        引数と同じ数体系の値
    """
    if len(args) != idx.arg_count:
        raise ValueError(f"B_{{{idx.k},{idx.j}}} の引数は {idx.arg_count} 個必要です: {len(args)} 個")
    total = 0
    for seq in _bell_sequences(idx.k, idx.j):
        denom = 1
        for r, i in enumerate(seq, start=1):
            denom *= math.factorial(i) * math.factorial(r) ** i
        term = math.factorial(idx.k) // denom
        for r, i in enumerate(seq, start=1):
            if i:
                term = term * args[r - 1] ** i
        total = total + term
    return total


def faa_di_bruno_generic(k: int, F_derivs: Callable[[int], object], G_derivs: Sequence):
    """D^k F(G) = Σ_j F^{(j)}(G) B_{k,j}(DG, ..., D^{k-j+1}G)"""
    if len(G_derivs) < k:
        raise ValueError(f"G の微分が {k} 個必要です: {len(G_derivs)} 個")
    total = 0
    for j in range(1, k + 1):
        idx = BellIndex(k, j)
        total = total + F_derivs(j) * bell_partial(idx, list(G_derivs[:idx.arg_count]))
    return total


def faa_di_bruno_special(k: int, F_derivs: Callable[[int], object], DG, D2G):
    """
    D^j G = 0 (j >= 3) のときのファー・ディ・ブルーノの公式

    Σ_{j>=k/2}^{k} k! / ((2j-k)!(k-j)! 2^{k-j}) F^{(j)} (DG)^{2j-k} (D²G)^{k-j}
    """
    if k < 1:
        raise ValueError(f"k は1以上である必要があります: {k}")
    total = 0
    for j in range((k + 1) // 2, k + 1):
        coeff = math.factorial(k) // (
            math.factorial(2 * j - k) * math.factorial(k - j) * 2 ** (k - j))
        total = total + coeff * F_derivs(j) * DG ** (2 * j - k) * D2G ** (k - j)
    return total


def _central_weights(order: int) -> Tuple[np.ndarray, np.ndarray]:
    half = (order + 1) // 2 + 1
    offsets = np.arange(-half, half + 1, dtype=float)
    powers = np.vander(offsets, increasing=True).T
    rhs = np.zeros(offsets.size)
    rhs[order] = math.factorial(order)
    return offsets, np.linalg.solve(powers, rhs)


def central_difference(f: Callable, x: float, order: int, step: float) -> float:
    """4次精度の中心差分による f^{(order)}(x)"""
    offsets, weights = _central_weights(order)
    values = np.asarray(f(x + offsets * step), dtype=float)
    return float(np.dot(weights, values) / step ** order)


def d_operator_fd(f: Callable, x: float, k: int, step: float) -> float:
    """
    D = (1/x) d/dx の k 回作用を数値的に評価

    変数 v = x²/2 に対して D = d/dv となることを使い、v について中心差分を取る。
    """
    if k == 0:
        return float(f(np.asarray([x]))[0])
    v0 = 0.5 * x * x

    def in_v(v):
        return np.asarray(f(np.sqrt(2.0 * np.asarray(v, dtype=float))), dtype=float)

    return central_difference(in_v, v0, k, step)
