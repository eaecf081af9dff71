import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from src.core.profiles import DataProfile, ProfileSource, RadialProfile
from src.core.quadrature import (
    DEFAULT_SPEC, NO_WEIGHT, QuadratureSpec, SingularWeight, integrate_batch, integrate_singular,
)
from src.core.specfun import Order, bessel_zeros, gegenbauer_normalized, normalized_j

logger = logging.getLogger(__name__)

MC_CHUNK = 200_000
MIN_SAMPLES = 1000


@dataclass(frozen=True)
class Dimension:
    """偶数次元 n（次数 α = n/2 - 1）"""

    n: int

    def __post_init__(self):
        Order.from_dimension(self.n)

    @property
    def alpha(self) -> int:
        return self.n // 2 - 1

    @property
    def order(self) -> Order:
        return Order(self.alpha)

    @staticmethod
    def omega(k: int) -> float:
        """S^{k-1} ⊂ ℝ^k の表面積 2π^{k/2}/Γ(k/2)"""
        if k < 1:
            raise ValueError(f"球面の次元が不正です: {k}")
        return 2.0 * math.pi ** (k / 2.0) / math.gamma(k / 2.0)

    def forward_constant(self) -> float:
        """球面平均の正規化定数 c(n) = ω_{n-1} / (ω_n 2^{n-3})"""
        return self.omega(self.n - 1) / (self.omega(self.n) * 2.0 ** (self.n - 3))


def spherical_harmonic_count(n: int, m: int) -> int:
    """次数 m の球面調和関数の次元 d_m"""
    if m < 0:
        raise ValueError(f"次数は非負である必要があります: {m}")
    if m == 0:
        return 1
    return (2 * m + n - 2) * math.factorial(n + m - 3) // (math.factorial(m) * math.factorial(n - 2))


@dataclass(frozen=True)
class SphericalIndex:
    m: int
    l: int
    n: int

    def __post_init__(self):
        if not 1 <= self.l <= self.d_m:
            raise ValueError(f"添字 l は 1..{self.d_m} の範囲である必要があります: {self.l}")

    @property
    def d_m(self) -> int:
        return spherical_harmonic_count(self.n, self.m)


def _check_radius(t: np.ndarray) -> None:
    if np.any(t <= 0) or np.any(t >= 2) or not np.all(np.isfinite(t)):
        raise ValueError("半径 t は (0, 2) に含まれる必要があります")


def _forward_kernel(f: RadialProfile, dim: Dimension, m: int, t: np.ndarray,
                    spec: QuadratureSpec) -> np.ndarray:
    # v = u² - d² (d = |1-t|) と置換すると下端の特異性は v^β の重みに吸収される
    beta = dim.alpha - 0.5
    d = np.abs(1.0 - t)
    upper = f.support_radius ** 2 - d ** 2
    gegenbauer_alpha = dim.alpha

    def smooth(v, d_row, t_row):
        u = np.sqrt(d_row ** 2 + v)
        values = f.eval(u) * np.maximum((1.0 + t_row) ** 2 - u ** 2, 0.0) ** beta
        if m:
            x = np.clip((1.0 + u ** 2 - t_row ** 2) / (2.0 * u), -1.0, 1.0)
            values = values * gegenbauer_normalized(gegenbauer_alpha, m, x)
        return 0.5 * values

    batch = integrate_batch(smooth, np.zeros_like(t), upper, SingularWeight(exp_left=beta),
                            spec, args=(d, t))
    return dim.forward_constant() * batch.values


def forward_radial(f: RadialProfile, dim: Dimension, t, spec: Optional[QuadratureSpec] = None):
    """
    動径関数の球面平均変換 h(t) = t^{n-2} (Rf)(p, t)

    Args:
        f: 動径プロファイル
        dim: 次元
        t: 半径（スカラーまたは配列、(0, 2) 内）
        spec: 求積設定

    Returns:
        float | np.ndarray: h(t)
    """
    g = forward_coeff(f, dim, 0, t, spec)
    if np.ndim(t) == 0:
        return g * float(t) ** (dim.n - 2)
    return g * np.asarray(t, dtype=float) ** (dim.n - 2)


def forward_coeff(f_ml: RadialProfile, dim: Dimension, m: int, t,
                  spec: Optional[QuadratureSpec] = None):
    """
    (m, l) 係数 g_{m,l}(t) をゲーゲンバウアー核で計算

    m = 0 のとき forward_radial / t^{n-2} と一致する。
    """
    if m < 0:
        raise ValueError(f"次数は非負である必要があります: {m}")
    spec = spec or DEFAULT_SPEC
    arr = np.asarray(t, dtype=float)
    flat = np.atleast_1d(arr).ravel()
    _check_radius(flat)
    values = _forward_kernel(f_ml, dim, m, flat, spec) / flat ** (dim.n - 2)
    if arr.ndim == 0:
        return float(values[0])
    return values.reshape(arr.shape)


def forward_profile(f: RadialProfile, dim: Dimension, m: int = 0,
                    spec: Optional[QuadratureSpec] = None) -> DataProfile:
    """forward_coeff を (1-ρ, 1+ρ) に台をもつ DataProfile として包む"""
    rho = f.support_radius
    source = ProfileSource("derived", f"R[{f.source.name}]",
                           f.source.params + (("n", dim.n), ("m", m)))
    return DataProfile(lambda t: forward_coeff(f, dim, m, t, spec), (1.0 - rho, 1.0 + rho), source)


def _unit_directions(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    g = rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _chunked_mean(sampler: Callable[[int], np.ndarray], samples: int) -> Tuple[float, float]:
    total = 0.0
    total_sq = 0.0
    remaining = samples
    while remaining > 0:
        size = min(MC_CHUNK, remaining)
        values = np.asarray(sampler(size), dtype=float)
        total += float(values.sum())
        total_sq += float(np.dot(values, values))
        remaining -= size
    mean = total / samples
    variance = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return mean, math.sqrt(variance / samples)


def monte_carlo_sphere_mean(f: Callable[[np.ndarray], np.ndarray], dim: Dimension,
                            p: Sequence[float], t: float, samples: int,
                            seed: int) -> Tuple[float, float]:
    """
    球面平均 (1/ω_n)∫ f(p + tθ) dS(θ) のモンテカルロ推定

    方向は正規分布ベクトルを正規化して一様にサンプルする。

    Args:
        f: 点列 (N, n) を受け取る関数
        dim: 次元
        p: 単位球面上の中心
        t: 半径
        samples: サンプル数（1000以上）
        seed: 乱数シード

    Returns:
        Tuple[float, float]: 推定値と標準誤差
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"サンプル数は {MIN_SAMPLES} 以上である必要があります: {samples}")
    center = np.asarray(p, dtype=float)
    if center.shape != (dim.n,):
        raise ValueError(f"中心の次元が一致しません: {center.shape}")
    rng = np.random.default_rng(seed)
    return _chunked_mean(lambda size: f(center + t * _unit_directions(rng, size, dim.n)), samples)


def monte_carlo_circular_coefficient(f_radial: RadialProfile, m: int, t: float, samples: int,
                                     seed: int) -> Tuple[float, float]:
    """
    f(x) = f_m(|x|) cos(m arg x) の円周平均変換 Rf の m 次フーリエ係数

    中心角 ψ と方向角を同時にサンプルし、2 f(x) cos(mψ)（m = 0 では f(x)）を平均する。
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"サンプル数は {MIN_SAMPLES} 以上である必要があります: {samples}")
    rng = np.random.default_rng(seed)
    weight = 2.0 if m else 1.0

    def sampler(size: int) -> np.ndarray:
        psi = rng.uniform(0.0, 2.0 * math.pi, size)
        phi = rng.uniform(0.0, 2.0 * math.pi, size)
        x = np.cos(psi) + t * np.cos(phi)
        y = np.sin(psi) + t * np.sin(phi)
        value = f_radial.eval(np.hypot(x, y)) * np.cos(m * np.arctan2(y, x))
        return weight * value * np.cos(m * psi)

    return _chunked_mean(sampler, samples)


def funk_hecke_constant(h: Callable[[np.ndarray], np.ndarray], dim: Dimension, m: int,
                        spec: Optional[QuadratureSpec] = None) -> float:
    """ω_{n-1} ∫_{-1}^{1} h(x) Ĉ_m(x) (1-x²)^{(n-3)/2} dx"""
    beta = dim.alpha - 0.5
    result = integrate_singular(
        lambda x: h(x) * gegenbauer_normalized(dim.alpha, m, np.clip(x, -1.0, 1.0)),
        -1.0, 1.0, SingularWeight(beta, beta), spec)
    return Dimension.omega(dim.n - 1) * result.value


@lru_cache(maxsize=256)
def _zeros_below(alpha: int, limit: float) -> Tuple[float, ...]:
    count = int(limit / math.pi) + 2
    return tuple(z for z in bessel_zeros(alpha, count) if z < limit)


def fourier_bessel(g_ml: DataProfile, dim: Dimension, m: int, lam: float,
                   spec: Optional[QuadratureSpec] = None) -> float:
    """
    フーリエ・ベッセル変換 ∫ g(t) j_{n/2-1}(λt) t^{n-1} dt

    核は次数 m によらず j_{n/2-1}。m は検証のみで、零点の族
    j_{m+n/2-1} の選択は呼び出し側が行う。
    台の区間を j_α(λt) の零点で分割し、各区間を同時に積分する。
    """
    if m < 0:
        raise ValueError(f"次数 m は非負である必要があります: {m}")
    if lam <= 0:
        raise ValueError(f"λ は正である必要があります: {lam}")
    lo, hi = g_ml.support
    cuts = [z / lam for z in _zeros_below(dim.alpha, lam * hi) if z / lam > lo]
    edges = np.asarray([lo] + cuts + [hi])

    def integrand(t):
        return g_ml.eval(t) * normalized_j(dim.alpha, lam * t) * t ** (dim.n - 1)

    batch = integrate_batch(integrand, edges[:-1], edges[1:], NO_WEIGHT, spec)
    return float(batch.values.sum())


def l1_norm(profile: DataProfile, spec: Optional[QuadratureSpec] = None) -> float:
    lo, hi = profile.support
    batch = integrate_batch(lambda t: np.abs(profile.eval(t)), [lo], [hi], NO_WEIGHT, spec)
    return float(batch.values[0])

