import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy.interpolate import CubicSpline

logger = logging.getLogger(__name__)

T = sympy.Symbol("t", positive=True)


class ProfileError(ValueError):
    """プロファイル定義の誤り"""


@dataclass(frozen=True)
class ProfileSource:
    """プロファイルの出自（カタログ・標本・派生）"""

    kind: str
    name: str
    params: Tuple[Tuple[str, Any], ...] = ()

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "name": self.name, "params": dict(self.params)}


def _bump_expr(center, half_width, amplitude) -> sympy.Expr:
    y = (T - center) / half_width
    return amplitude * sympy.exp(-1 / (1 - y ** 2))


def _lambdify(expr: sympy.Expr) -> Callable[[np.ndarray], np.ndarray]:
    func = sympy.lambdify(T, expr, modules="numpy")

    def evaluate(t: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            values = np.asarray(func(t), dtype=float) * np.ones_like(t)
        return np.where(np.isfinite(values), values, 0.0)

    return evaluate


def _spline(grid: Sequence[float], values: Sequence[float]) -> Tuple[np.ndarray, CubicSpline]:
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or grid.size != values.size:
        raise ProfileError("標本は同じ長さの2点以上の1次元配列である必要があります")
    if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
        raise ProfileError("標本に有限でない値が含まれています")
    if np.any(np.diff(grid) <= 0):
        raise ProfileError("標本の格子は狭義単調増加である必要があります")
    return grid, CubicSpline(grid, values, bc_type="clamped")


class RadialProfile:
    """単位球内にコンパクト台をもつ動径関数 f(r)"""

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], support_radius: float,
                 source: ProfileSource, inner_radius: float = 0.0,
                 expr: Optional[sympy.Expr] = None):
        if not 0 < support_radius < 1:
            raise ProfileError(f"台の半径は (0, 1) に含まれる必要があります: {support_radius}")
        if not 0 <= inner_radius < support_radius:
            raise ProfileError(f"内半径が不正です: {inner_radius}")
        self._func = func
        self.support_radius = float(support_radius)
        self.inner_radius = float(inner_radius)
        self.source = source
        self.expr = expr

    def eval(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        inside = (r >= self.inner_radius) & (r < self.support_radius)
        out = np.zeros(r.shape)
        if np.any(inside):
            out[inside] = self._func(r[inside])
        return out

    __call__ = eval

    def scaled(self, factor: float) -> "RadialProfile":
        source = ProfileSource("derived", f"{factor}*{self.source.name}", self.source.params)
        expr = None if self.expr is None else factor * self.expr
        return RadialProfile(lambda r: factor * self._func(r), self.support_radius, source,
                             self.inner_radius, expr)

    def as_field(self) -> Callable[[np.ndarray], np.ndarray]:
        """ℝⁿ 上の点列 (N, n) に対する f(|x|)"""
        return lambda points: self.eval(np.linalg.norm(points, axis=-1))

    def describe(self) -> Dict[str, Any]:
        info = self.source.describe()
        info["support_radius"] = self.support_radius
        return info

    @classmethod
    def bump(cls, rho: float, amplitude: float = 1.0) -> "RadialProfile":
        """exp(-1/(1-(r/ρ)²)) 型の動径バンプ"""
        expr = _bump_expr(0, sympy.nsimplify(rho), sympy.nsimplify(amplitude))
        source = ProfileSource("catalog", "bump", (("rho", rho), ("amplitude", amplitude)))
        return cls(_lambdify(expr), rho, source, expr=expr)

    @classmethod
    def shell(cls, center: float, width: float, amplitude: float = 1.0) -> "RadialProfile":
        """原点から離れた球殻状のバンプ（台は (center-width, center+width)）"""
        if center - width < 0:
            raise ProfileError(f"球殻の内側が負になります: center={center}, width={width}")
        expr = _bump_expr(sympy.nsimplify(center), sympy.nsimplify(width),
                          sympy.nsimplify(amplitude))
        source = ProfileSource("catalog", "shell",
                               (("center", center), ("width", width), ("amplitude", amplitude)))
        return cls(_lambdify(expr), center + width, source, inner_radius=center - width, expr=expr)

    @classmethod
    def zero(cls) -> "RadialProfile":
        source = ProfileSource("catalog", "zero")
        return cls(lambda r: np.zeros_like(r), 0.5, source, expr=sympy.Integer(0))

    @classmethod
    def sampled(cls, grid: Sequence[float], values: Sequence[float],
                name: str = "sampled") -> "RadialProfile":
        """クランプ三次スプラインで補間した標本プロファイル（範囲外は0）"""
        grid, spline = _spline(grid, values)
        if grid[0] < 0:
            raise ProfileError("動径標本の格子は非負である必要があります")
        source = ProfileSource("sampled", name, (("points", int(grid.size)),))
        return cls(spline, float(grid[-1]), source, inner_radius=float(grid[0]))


class DataProfile:
    """
    (0, 2) 上のコンパクト台をもつデータ関数

    g, g_{m,l}, h(t) = t^{n-2} g(t), φ_{m,l} の役割を担う。
    """

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], support: Tuple[float, float],
                 source: ProfileSource, expr: Optional[sympy.Expr] = None):
        lo, hi = float(support[0]), float(support[1])
        if not 0 < lo < hi <= 2:
            raise ProfileError(f"台は (0, 2] の部分区間である必要があります: ({lo}, {hi})")
        self._func = func
        self.support = (lo, hi)
        self.source = source
        self.expr = expr

    def eval(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        lo, hi = self.support
        inside = (t > lo) & (t < hi)
        out = np.zeros(t.shape)
        if np.any(inside):
            out[inside] = self._func(t[inside])
        return out

    __call__ = eval

    def describe(self) -> Dict[str, Any]:
        info = self.source.describe()
        info["support"] = list(self.support)
        return info

    def _derived(self, name: str, func, expr) -> "DataProfile":
        return DataProfile(func, self.support,
                           ProfileSource("derived", name, self.source.params), expr)

    def power_scaled(self, power: int, name: str) -> "DataProfile":
        """t^power を掛けたプロファイル"""
        expr = None if self.expr is None else T ** power * self.expr
        return self._derived(name, lambda t: t ** power * self._func(t), expr)

    def to_h(self, n: int) -> "DataProfile":
        """h(t) = t^{n-2} g(t)"""
        return self.power_scaled(n - 2, f"h[{self.source.name}]")

    def to_g(self, n: int) -> "DataProfile":
        return self.power_scaled(2 - n, f"g[{self.source.name}]")

    def scaled(self, factor: float) -> "DataProfile":
        expr = None if self.expr is None else factor * self.expr
        return self._derived(f"{factor}*{self.source.name}", lambda t: factor * self._func(t), expr)

    def plus(self, other: "DataProfile") -> "DataProfile":
        """和（台は両者を覆う区間）"""
        lo = min(self.support[0], other.support[0])
        hi = max(self.support[1], other.support[1])
        expr = None
        source = ProfileSource("derived", f"{self.source.name}+{other.source.name}")
        return DataProfile(lambda t: self.eval(t) + other.eval(t), (lo, hi), source, expr)

    def d_power(self, j: int) -> "DataProfile":
        """
        D = (1/t) d/dt の j 回作用を閉じた式から解析的に計算

        Args:
            j: 作用回数

        Returns:
            DataProfile: D^j を施したプロファイル（同じ台）
        """
        if self.expr is None:
            raise ProfileError(f"閉じた式をもたないプロファイルは解析的に微分できません: {self.source.name}")
        expr = self.expr
        for _ in range(j):
            expr = sympy.diff(expr, T) / T
        expr = sympy.simplify(expr)
        return self._derived(f"D^{j}[{self.source.name}]", _lambdify(expr), expr)

    @classmethod
    def bump(cls, lo: float, hi: float, amplitude: float = 1.0) -> "DataProfile":
        """(lo, hi) に台をもつ平行移動バンプ"""
        if not 0 < lo < hi <= 2:
            raise ProfileError(f"バンプの台は (0, 2] の部分区間である必要があります: ({lo}, {hi})")
        center = (sympy.nsimplify(lo) + sympy.nsimplify(hi)) / 2
        half = (sympy.nsimplify(hi) - sympy.nsimplify(lo)) / 2
        expr = _bump_expr(center, half, sympy.nsimplify(amplitude))
        source = ProfileSource("catalog", "data-bump",
                               (("lo", lo), ("hi", hi), ("amplitude", amplitude)))
        return cls(_lambdify(expr), (lo, hi), source, expr)

    @classmethod
    def zero(cls, support: Tuple[float, float] = (0.5, 1.5)) -> "DataProfile":
        return cls(lambda t: np.zeros_like(t), support, ProfileSource("catalog", "zero"),
                   sympy.Integer(0))

    @classmethod
    def sampled(cls, grid: Sequence[float], values: Sequence[float],
                name: str = "sampled") -> "DataProfile":
        grid, spline = _spline(grid, values)
        source = ProfileSource("sampled", name, (("points", int(grid.size)),))
        return cls(spline, (float(grid[0]), float(grid[-1])), source)


def _parse_params(text: str) -> Dict[str, float]:
    params: Dict[str, float] = {}
    if not text:
        return params
    for item in text.split(","):
        if "=" not in item:
            raise ProfileError(f"パラメータは key=value 形式で指定してください: {item}")
        key, value = item.split("=", 1)
        try:
            params[key.strip()] = float(value)
        except ValueError as e:
            raise ProfileError(f"パラメータの値が数値ではありません: {item}") from e
    return params


@dataclass(frozen=True)
class ProfileSpec:
    """`kind:key=value,...` 形式のプロファイル指定"""

    kind: str
    params: Dict[str, float] = field(default_factory=dict)

    RADIAL_KINDS = ("bump", "shell", "zero")
    DATA_KINDS = ("data-bump",)

    @classmethod
    def parse(cls, text: str) -> "ProfileSpec":
        kind, _, rest = text.strip().partition(":")
        kind = kind.strip()
        if kind not in cls.RADIAL_KINDS + cls.DATA_KINDS:
            raise ProfileError(f"未知のプロファイル種別です: {kind}")
        return cls(kind, _parse_params(rest))

    @property
    def is_radial(self) -> bool:
        return self.kind in self.RADIAL_KINDS

    def build_radial(self) -> RadialProfile:
        p = dict(self.params)
        try:
            if self.kind == "bump":
                return RadialProfile.bump(p.pop("rho", 0.8), p.pop("amplitude", 1.0))
            if self.kind == "shell":
                return RadialProfile.shell(p.pop("center", 0.5), p.pop("width", 0.3),
                                           p.pop("amplitude", 1.0))
            if self.kind == "zero":
                return RadialProfile.zero()
        finally:
            if p:
                logger.warning(f"未使用のプロファイルパラメータがあります: {sorted(p)}")
        raise ProfileError(f"動径プロファイルではありません: {self.kind}")

    def build_data(self) -> DataProfile:
        if self.kind != "data-bump":
            raise ProfileError(f"データプロファイルではありません: {self.kind}")
        p = self.params
        return DataProfile.bump(p.get("lo", 0.2), p.get("hi", 0.6), p.get("amplitude", 1.0))
