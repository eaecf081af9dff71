import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from src.core.combinatorics import (
    binomial_sums_check, combinatorial_identity_check, correction_coefficients,
    correction_polynomial_ode_check, ds_f_coefficients, index_pairs,
)
from src.core.profiles import DataProfile
from src.core.quadrature import (
    NO_WEIGHT, QuadratureSpec, SingularWeight, integrate, integrate_batch,
)
from src.core.reports import ResidualReport
from src.core.specfun import (
    BesselDomainError, as_order, bessel_j, bessel_y, central_difference, normalized_j, normalized_y,
)
from src.core.transform import Dimension

logger = logging.getLogger(__name__)

DERIVATIVE_TOLERANCE = 1e-9
PRECISE_SPEC = QuadratureSpec(method="gauss-legendre", nodes=64, rel_tol=1e-14, abs_tol=1e-15)


class RootCertificationError(ValueError):
    """四次方程式の実根を確定できない"""


# ---------------------------------------------------------------- elliptic

@dataclass(frozen=True)
class EllipticParams:
    """a=(1+u)², b=(1+s)², c=(1-s)², d=(1-u)²（0 < s < u < 1）"""

    s: float
    u: float

    def __post_init__(self):
        if not 0 < self.s < self.u < 1:
            raise ValueError(f"0 < s < u < 1 である必要があります: s={self.s}, u={self.u}")

    @property
    def a(self) -> float:
        return (1.0 + self.u) ** 2

    @property
    def b(self) -> float:
        return (1.0 + self.s) ** 2

    @property
    def c(self) -> float:
        return (1.0 - self.s) ** 2

    @property
    def d(self) -> float:
        return (1.0 - self.u) ** 2

    @property
    def roots(self) -> Tuple[float, float, float, float]:
        return self.a, self.b, self.c, self.d

    def P(self, t):
        a, b, c, d = self.roots
        return (a - t) * (t - b) * (t - c) * (t - d)


def _elliptic_sides(a: float, b: float, c: float, d: float, beta: float,
                    spec: Optional[QuadratureSpec]) -> Tuple[float, float]:
    weight = SingularWeight(beta, beta)
    power = -beta - 0.5

    def lower(t):
        return ((a - t) * (b - t)) ** beta * t ** power

    def upper(t):
        return ((t - c) * (t - d)) ** beta * t ** power

    i1 = integrate_batch(lower, [d], [c], weight, spec).values[0]
    i2 = integrate_batch(upper, [b], [a], weight, spec).values[0]
    return float(i1), float(i2)


def elliptic_identity_sides(p: EllipticParams, beta: float,
                            spec: Optional[QuadratureSpec] = None) -> Tuple[float, float]:
    if beta <= -1:
        raise ValueError(f"β は -1 より大きい必要があります: {beta}")
    return _elliptic_sides(*p.roots, beta, spec)


def elliptic_identity_residual(p: EllipticParams, beta: float,
                               spec: Optional[QuadratureSpec] = None) -> float:
    """
    ∫_b^a P^β t^{-β-1/2} dt - ∫_d^c |P|^β t^{-β-1/2} dt

    Args:
        p: 端点パラメータ
        beta: -1 より大きい指数
        spec: 求積設定

    Returns:
        float: I₂ - I₁
    """
    i1, i2 = elliptic_identity_sides(p, beta, spec)
    return i2 - i1


def elliptic_period_residual(a: float, b: float, c: float, d: float,
                             spec: Optional[QuadratureSpec] = None) -> float:
    """任意の a > b > c > d に対する β = -1/2 の二つの周期の差"""
    if not a > b > c > d:
        raise ValueError(f"a > b > c > d である必要があります: {(a, b, c, d)}")
    i1, i2 = _elliptic_sides(a, b, c, d, -0.5, spec)
    return i2 - i1


# ---------------------------------------------------------------- quartic

@dataclass
class QuarticGeometry:
    s: float
    u: float
    r: Tuple[float, float, float, float]
    gamma: float
    derivative_residuals: Tuple[float, ...] = field(default_factory=tuple)

    @property
    def ordering_ok(self) -> bool:
        p = EllipticParams(self.s, self.u)
        r1, r2, r3, r4 = self.r
        tol = 1e-12
        return (r1 < 0 < p.d <= r2 + tol and r2 <= p.c + tol and p.c <= r3 + tol
                and r3 <= p.b + tol and p.b <= r4 + tol and r4 <= p.a + tol)


def _quartic_poly(p: EllipticParams) -> Polynomial:
    a, b, c, d = p.roots
    return -Polynomial.fromroots([a, b, c, d])


def quartic_critical_points(s: float, u: float) -> QuarticGeometry:
    """
    y(t) = P(t)/t の臨界点 r₁ < r₂ < r₃ < r₄ の閉じた形

    y'(r) = (r P'(r) - P(r)) / r² が数値的に 0 であることも確かめる。

    Args:
        s: 内側の半径
        u: 外側の半径（s < u）

    Returns:
        QuarticGeometry: 臨界点と共通の最大値 γ = 4(u² - s²)²
    """
    p = EllipticParams(s, u)
    s2, u2 = s * s, u * u
    mid = s2 + u2 + 2.0
    v = mid ** 2 + 12.0 * (1.0 - u2) * (1.0 - s2)
    w = 8.0 * (u2 + s2) + (u2 - s2) ** 2
    r = (mid / 6.0 - math.sqrt(v) / 6.0, mid / 2.0 - math.sqrt(w) / 2.0,
         mid / 6.0 + math.sqrt(v) / 6.0, mid / 2.0 + math.sqrt(w) / 2.0)
    P = _quartic_poly(p)
    dP = P.deriv()
    residuals = tuple(float(abs((x * dP(x) - P(x)) / (x * x))) for x in r)
    if max(residuals) > DERIVATIVE_TOLERANCE:
        logger.warning(f"臨界点で y' が 0 になりません: s={s}, u={u}, 最大 {max(residuals):.3e}")
    return QuarticGeometry(s, u, r, 4.0 * (u2 - s2) ** 2, residuals)


def quartic_coefficients(s: float, u: float, q: float = 0.0) -> np.ndarray:
    """Q(t) = -P(t) + q t = t⁴ + a₃t³ + a₂t² + a₁t + a₀ の係数 [a₀, a₁, a₂, a₃]"""
    p = EllipticParams(s, u)
    coef = Polynomial.fromroots(p.roots).coef.copy()
    coef[1] += q
    return coef[:4]


def quartic_coefficient_identity(s: float, u: float) -> float:
    """a₃² - 4a₂ + 8√a₀（q に依らず 0）"""
    a0, _, a2, a3 = quartic_coefficients(s, u)
    return float(a3 * a3 - 4.0 * a2 + 8.0 * math.sqrt(a0))


def _companion_roots(coef: np.ndarray) -> np.ndarray:
    # 最高次係数 1 の多項式のコンパニオン行列
    size = coef.size
    companion = np.zeros((size, size))
    companion[1:, :-1] = np.eye(size - 1)
    companion[:, -1] = -coef
    return np.linalg.eigvals(companion)


def _certify(s: float, u: float, q: float) -> None:
    gamma = 4.0 * (u * u - s * s) ** 2
    if not 0 < q < gamma:
        raise ValueError(f"q は (0, γ) に含まれる必要があります: q={q}, γ={gamma}")


def quartic_roots(s: float, u: float, q: float) -> Tuple[float, float, float, float]:
    """
    P(t) = q t の4つの実根を降順で返す

    コンパニオン行列の固有値にニュートン法を2回施す。実根を確定できない場合は
    RootCertificationError。
    """
    _certify(s, u, q)
    p = EllipticParams(s, u)
    coef = quartic_coefficients(s, u, q)
    roots = _companion_roots(coef)
    scale = max(1.0, float(np.max(np.abs(roots))))
    if np.max(np.abs(roots.imag)) > 1e-7 * scale:
        raise RootCertificationError(f"複素根が現れました: s={s}, u={u}, q={q}, 根={roots}")
    Q = Polynomial(np.append(coef, 1.0))
    dQ = Q.deriv()
    polished = np.sort(roots.real)[::-1]
    for _ in range(2):
        slope = dQ(polished)
        safe = slope != 0
        polished = np.where(safe, polished - Q(polished) / np.where(safe, slope, 1.0), polished)
    if polished[-1] < p.d - 1e-12 or polished[0] > p.a + 1e-12:
        raise RootCertificationError(f"根が [d, a] の外にあります: {polished}")
    t1, t2, t3, t4 = (float(x) for x in np.sort(polished)[::-1])
    return t1, t2, t3, t4


def resolvent_roots(s: float, u: float, q: float) -> Tuple[float, float, float, float]:
    """分解三次方程式を経由した根（quartic_roots の照合用、降順）"""
    _certify(s, u, q)
    a0, a1, a2, a3 = quartic_coefficients(s, u, q)
    cubic = np.roots([1.0, -a2, a1 * a3 - 4.0 * a0, -(a1 * a1 + a0 * a3 * a3 - 4.0 * a0 * a2)])
    u1 = float(np.max(cubic[np.abs(cubic.imag) <= 1e-9 * max(1.0, np.max(np.abs(cubic)))].real))
    R = np.emath.sqrt(a3 * a3 / 4.0 + u1 - a2)
    if abs(R) > 1e-12:
        S = (a3 * u1 / 2.0 - a1) / (2.0 * R)
    else:
        S = np.emath.sqrt(u1 * u1 / 4.0 - a0)
    d_tilde = np.emath.sqrt(a3 * a3 / 4.0 - a3 * R + R * R - 2.0 * u1 + 4.0 * S)
    e = np.emath.sqrt(a3 * a3 / 4.0 + a3 * R + R * R - 2.0 * u1 - 4.0 * S)
    roots = np.array([-a3 / 4.0 + R / 2.0 + d_tilde / 2.0, -a3 / 4.0 + R / 2.0 - d_tilde / 2.0,
                      -a3 / 4.0 - R / 2.0 + e / 2.0, -a3 / 4.0 - R / 2.0 - e / 2.0])
    t1, t2, t3, t4 = (float(x) for x in np.sort(roots.real)[::-1])
    return t1, t2, t3, t4


def quartic_root_relation_residual(s: float, u: float, q: float) -> float:
    """√t₁ + √t₄ - √t₂ - √t₃"""
    t1, t2, t3, t4 = quartic_roots(s, u, q)
    return math.sqrt(t1) + math.sqrt(t4) - math.sqrt(t2) - math.sqrt(t3)


# ---------------------------------------------------------------- cross product

def _oscillation_panels(lo: float, hi: float, lam: float) -> np.ndarray:
    count = int(math.ceil((hi - lo) * lam / math.pi)) + 1
    return np.linspace(lo, hi, count + 1)


def cross_product_residual(h: DataProfile, dim: Dimension, lam: float, m: int = 0,
                           spec: Optional[QuadratureSpec] = None) -> float:
    """
    y_{α+m}(λ) ∫ t h j_α(λt) dt - j_{α+m}(λ) ∫ t h y_α(λt) dt

    m = 0 が動径の場合、m >= 1 は h = t^{n-2} g_m に対する一般の場合。
    """
    if lam <= 0:
        raise ValueError(f"λ は正である必要があります: {lam}")
    alpha = dim.alpha
    lo, hi = h.support
    edges = _oscillation_panels(lo, hi, lam)

    def with_j(t):
        return t * h.eval(t) * normalized_j(alpha, lam * t)

    def with_y(t):
        return t * h.eval(t) * normalized_y(alpha, lam * t)

    int_j = integrate_batch(with_j, edges[:-1], edges[1:], NO_WEIGHT, spec).values.sum()
    int_y = integrate_batch(with_y, edges[:-1], edges[1:], NO_WEIGHT, spec).values.sum()
    return float(normalized_y(alpha + m, lam) * int_j - normalized_j(alpha + m, lam) * int_y)


def general_cross_product_residual(h_m: DataProfile, dim: Dimension, m: int, lam: float,
                                   spec: Optional[QuadratureSpec] = None) -> float:
    return cross_product_residual(h_m, dim, lam, m, spec)


def small_argument_cross_limit(alpha: int, r: float, w: float) -> float:
    """
    小さい w での J_α(w)Y_α(rw) - Y_α(w)J_α(rw) と極限値との差

    極限は α = 0 で (2/π) ln r、α >= 1 で (r^α - r^{-α})/(πα)。
    """
    a = as_order(alpha)
    if r <= 0 or w <= 0:
        raise BesselDomainError(f"r, w は正である必要があります: r={r}, w={w}")
    value = bessel_j(a, w) * bessel_y(a, r * w) - bessel_y(a, w) * bessel_j(a, r * w)
    limit = 2.0 / math.pi * math.log(r) if a == 0 else (r ** a - r ** -a) / (math.pi * a)
    return float(value - limit)


# ---------------------------------------------------------------- Nicholson

@dataclass(frozen=True)
class NicholsonInput:
    alpha: int
    z: float
    w: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_order(self.alpha))
        if self.z <= 0 or self.w <= 0:
            raise ValueError(f"z, w は正である必要があります: z={self.z}, w={self.w}")
        if self.z == self.w:
            raise ValueError(f"z = w は扱えません: {self.z}")

    @property
    def coefficients(self) -> List[int]:
        return correction_coefficients(self.alpha)

    @property
    def upper(self) -> float:
        return math.log(self.z) - math.log(self.w)

    def swapped(self) -> "NicholsonInput":
        return NicholsonInput(self.alpha, self.w, self.z)


def nicholson_source(alpha: int, z: float, w: float, v):
    """
    s²/2 = v の関数として見た f

    f = α sgn(z-w)/2^{2α-2} · ((z²-w²)² - 4v(z²+w²) + 4v²)^{(2α-1)/2} / (z^{2α} w^{2α})
    """
    v = np.asarray(v, dtype=float)
    A = z * z - w * w
    radicand = A * A - 4.0 * v * (z * z + w * w) + 4.0 * v * v
    sign = 1.0 if z > w else -1.0
    return (alpha * sign / 2.0 ** (2 * alpha - 2) * radicand ** ((2 * alpha - 1) / 2.0)
            / (z ** (2 * alpha) * w ** (2 * alpha)))


def ds_f_closed_form(alpha: int, j: int, z: float, w: float) -> float:
    """
    D_s^j f(0) の閉じた形

    Args:
        alpha: 次数
        j: 0..α-1
        z: 0 でない実数
        w: 0 でない実数

    Returns:
        float: D_s^j f(0)
    """
    a = as_order(alpha)
    if z == 0 or w == 0:
        raise ValueError("z, w は 0 以外である必要があります")
    A = z * z - w * w
    total = 0.0
    for r, k_r in ds_f_coefficients(a, j).items():
        total += float(k_r) * (2.0 * w * w) ** r * A ** (2 * a - j - r - 1)
    return a / 2.0 ** (2 * a - 2) * total / (z ** (2 * a) * w ** (2 * a))


def ds_f_finite_difference(alpha: int, j: int, z: float, w: float, step: float = 1e-3) -> float:
    """v = s²/2 についての中心差分による D_s^j f(0)"""
    return central_difference(lambda v: nicholson_source(alpha, z, w, v), 0.0, j, step)


def nicholson_integral(alpha: int, z: float, w: float,
                       spec: Optional[QuadratureSpec] = None) -> float:
    """∫_0^{ln z - ln w} j_α(√(z²+w²-2zw cosh ζ)) sinh^{2α}ζ dζ"""
    a = as_order(alpha)
    upper = math.log(z) - math.log(w)
    if upper == 0:
        return 0.0
    spec = spec or PRECISE_SPEC

    def integrand(zeta):
        radicand = np.maximum(z * z + w * w - 2.0 * z * w * np.cosh(zeta), 0.0)
        return normalized_j(a, np.sqrt(radicand)) * np.sinh(zeta) ** (2 * a)

    # 被積分関数は ζ について偶関数
    value = integrate(integrand, 0.0, abs(upper), spec).value
    return math.copysign(value, upper)


def nicholson_lhs(inp: NicholsonInput, spec: Optional[QuadratureSpec] = None) -> float:
    """積分から補正項 Σ a_j D_s^j f(0) を引いたもの（α = 0 では補正なし）"""
    correction = sum(a_j * ds_f_closed_form(inp.alpha, j, inp.z, inp.w)
                     for j, a_j in enumerate(inp.coefficients))
    return nicholson_integral(inp.alpha, inp.z, inp.w, spec) - correction


def nicholson_cross(alpha: int, z: float, w: float) -> float:
    """j_α(w) y_α(z) - y_α(w) j_α(z)"""
    return float(normalized_j(alpha, w) * normalized_y(alpha, z)
                 - normalized_y(alpha, w) * normalized_j(alpha, z))


@dataclass
class NicholsonEstimate:
    alpha: int
    estimate: float
    spread: float
    ratios: List[float]
    pairs: List[Tuple[float, float]]
    excluded: List[Tuple[float, float]]


DENOMINATOR_FLOOR = 1e-4


def nicholson_constant(alpha: int, grid: Sequence[Tuple[float, float]],
                       spec: Optional[QuadratureSpec] = None) -> NicholsonEstimate:
    """
    格子上の比 nicholson_lhs / (j_α(w)y_α(z) - y_α(w)j_α(z)) から定数 C(α) を推定

    分母が他の点に比べて極端に小さい組は除外して警告する。
    """
    a = as_order(alpha)
    pairs = [(float(z), float(w)) for z, w in grid]
    if not pairs:
        raise ValueError("(z, w) の格子が空です")
    denominators = np.array([nicholson_cross(a, z, w) for z, w in pairs])
    floor = DENOMINATOR_FLOOR * float(np.median(np.abs(denominators)))
    kept, excluded, ratios = [], [], []
    for (z, w), denom in zip(pairs, denominators):
        if abs(denom) < floor:
            excluded.append((z, w))
            continue
        kept.append((z, w))
        ratios.append(nicholson_lhs(NicholsonInput(a, z, w), spec) / denom)
    if excluded:
        logger.warning(f"分母が 0 に近いため除外しました: α={a}, {excluded}")
    if not ratios:
        raise ValueError("有効な (z, w) の組がありません")
    estimate = float(np.median(ratios))
    spread = float(np.max(np.abs(np.asarray(ratios) - estimate)) / abs(estimate))
    return NicholsonEstimate(a, estimate, spread, ratios, kept, excluded)


def nonhomogeneous_ode_residual(alpha: int, w: float, z_grid: Sequence[float],
                                step: float = 5e-3,
                                spec: Optional[QuadratureSpec] = None) -> float:
    """
    積分部分 ỹ(z) が満たす非斉次 ODE の残差の最大値

    z ỹ'' + (2α+1) ỹ' + z ỹ - α/(2^{2α-2} w^{2α}) ((z²-w²)/z)^{2α-1}
    を4次精度の中心差分で評価する。
    """
    a = as_order(alpha)
    worst = 0.0
    for z in z_grid:
        if abs(z - w) < 4 * step:
            raise ValueError(f"z は w から離れている必要があります: z={z}, w={w}")

        def y_tilde(points):
            return np.array([nicholson_integral(a, float(x), w, spec) for x in np.atleast_1d(points)])

        value = y_tilde([z])[0]
        d1 = central_difference(y_tilde, z, 1, step)
        d2 = central_difference(y_tilde, z, 2, step)
        rhs = 0.0 if a == 0 else (a / (2.0 ** (2 * a - 2) * w ** (2 * a))
                                  * ((z * z - w * w) / z) ** (2 * a - 1))
        worst = max(worst, abs(z * d2 + (2 * a + 1) * d1 + z * value - rhs))
    return worst


# ---------------------------------------------------------------- reports

ELLIPTIC_BETAS = (-0.5, 0.0, 0.5, 1.0, 1.5, 2.5, 3.5)
LAMBDA_GRID = (0.5, 1.0, 2.0, 5.0, 10.0, 20.0)
NICHOLSON_Z = (1.3, 1.9, 2.6, 3.4, 4.1)
NICHOLSON_W = (0.7, 1.1, 1.6, 2.2, 3.0)

THRESHOLDS = {
    "elliptic": 1e-8,
    "quartic": 1e-9,
    "cross-product": 1e-7,
    "nicholson": 1e-6,
    "combinatorial": 0.0,
    "ode": 1e-4,
}
IDENTITY_NAMES = tuple(THRESHOLDS)


def elliptic_report(threshold: float = THRESHOLDS["elliptic"], points: int = 10,
                    betas: Sequence[float] = ELLIPTIC_BETAS,
                    spec: Optional[QuadratureSpec] = None) -> ResidualReport:
    values = np.linspace(0.05, 0.95, points)
    params, residuals = [], []
    for s in values:
        for u in values[values > s]:
            p = EllipticParams(float(s), float(u))
            for beta in betas:
                params.append({"s": p.s, "u": p.u, "beta": beta})
                residuals.append(elliptic_identity_residual(p, beta, spec))
    return ResidualReport("elliptic", params, residuals, threshold)


def random_quartic_triples(count: int, seed: int) -> List[Tuple[float, float, float]]:
    """0 < s < u < 1（u - s >= 0.05）と q ∈ (0.02γ, 0.98γ) の乱択"""
    rng = np.random.default_rng(seed)
    triples = []
    for _ in range(count):
        s = rng.uniform(0.02, 0.9)
        u = rng.uniform(s + 0.05, 0.98)
        gamma = 4.0 * (u * u - s * s) ** 2
        triples.append((float(s), float(u), float(gamma * rng.uniform(0.02, 0.98))))
    return triples


def quartic_report(threshold: float = THRESHOLDS["quartic"], count: int = 100,
                   seed: int = 20240601) -> ResidualReport:
    params, residuals = [], []
    for s, u, q in random_quartic_triples(count, seed):
        params.append({"kind": "relation", "s": s, "u": u, "q": q})
        try:
            residuals.append(quartic_root_relation_residual(s, u, q))
        except RootCertificationError as e:
            logger.warning(f"根の確定に失敗しました: {e}")
            residuals.append(math.nan)
        geometry = quartic_critical_points(s, u)
        params.append({"kind": "critical-point", "s": s, "u": u, "q": None})
        residuals.append(max(geometry.derivative_residuals) if geometry.ordering_ok else math.nan)
        params.append({"kind": "coefficient", "s": s, "u": u, "q": None})
        residuals.append(quartic_coefficient_identity(s, u))
    return ResidualReport("quartic", params, residuals, threshold)


def cross_product_report(h: DataProfile, dim: Dimension,
                         lambdas: Sequence[float] = LAMBDA_GRID, m: int = 0,
                         threshold: float = THRESHOLDS["cross-product"],
                         spec: Optional[QuadratureSpec] = None) -> ResidualReport:
    residuals = [cross_product_residual(h, dim, lam, m, spec) for lam in lambdas]
    return ResidualReport("cross-product", [{"lambda": float(lam), "m": m} for lam in lambdas],
                          residuals, threshold)


def nicholson_report(alphas: Sequence[int] = (0, 1, 2, 3),
                     threshold: float = THRESHOLDS["nicholson"],
                     spec: Optional[QuadratureSpec] = None) -> ResidualReport:
    """比のばらつき、反対称性、α = 0 での C = π/2 を一つのレポートにまとめる"""
    grid = [(z, w) for z in NICHOLSON_Z for w in NICHOLSON_W]
    params, residuals, notes = [], [], []
    for alpha in alphas:
        estimate = nicholson_constant(alpha, grid, spec)
        params.append({"kind": "spread", "alpha": alpha})
        residuals.append(estimate.spread)
        notes.append(f"C({alpha}) ≈ {estimate.estimate:.12g}")
        for z, w in grid[::6]:
            forward = nicholson_lhs(NicholsonInput(alpha, z, w), spec)
            backward = nicholson_lhs(NicholsonInput(alpha, w, z), spec)
            params.append({"kind": "antisymmetry", "alpha": alpha, "z": z, "w": w})
            residuals.append(forward + backward)
        if alpha == 0:
            params.append({"kind": "pi-over-two", "alpha": 0})
            residuals.append(estimate.estimate - math.pi / 2.0)
    return ResidualReport("nicholson", params, residuals, threshold, notes=notes)


def combinatorial_report(alpha_max: int = 10, ode_alpha_max: int = 4,
                         threshold: float = THRESHOLDS["combinatorial"]) -> ResidualReport:
    params, residuals = [], []
    for alpha in range(1, alpha_max + 1):
        mismatches = int(not combinatorial_identity_check(alpha))
        mismatches += sum(not binomial_sums_check(alpha, m, p) for m, p in index_pairs(alpha))
        if alpha <= ode_alpha_max:
            mismatches += int(not correction_polynomial_ode_check(alpha))
        params.append({"alpha": alpha})
        residuals.append(float(mismatches))
    return ResidualReport("combinatorial", params, residuals, threshold)


def ode_report(alphas: Sequence[int] = (0, 1, 2), w: float = 1.0,
               z_grid: Sequence[float] = (1.5, 2.0, 2.5, 3.0),
               threshold: float = THRESHOLDS["ode"],
               spec: Optional[QuadratureSpec] = None) -> ResidualReport:
    residuals = [nonhomogeneous_ode_residual(alpha, w, z_grid, spec=spec) for alpha in alphas]
    return ResidualReport("ode", [{"alpha": alpha, "w": w} for alpha in alphas], residuals,
                          threshold)
