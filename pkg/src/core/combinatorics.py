"""
補正項と付録の組合せ恒等式の厳密検証

すべて sympy の有理数演算で行い、負の整数の階乗の逆数は 0 とする。
"""
import logging
from typing import Dict, List, Tuple

import sympy
from sympy import Integer, Rational

logger = logging.getLogger(__name__)

A, B = sympy.symbols("A B")
Z, W = sympy.symbols("z w", positive=True)


def inverse_factorial(k: int) -> Rational:
    """1/k!（k < 0 では 0）"""
    if k < 0:
        return Integer(0)
    return Rational(1, sympy.factorial(k))


def binom(n: int, k: int) -> Integer:
    """二項係数（k が範囲外なら 0）"""
    if n < 0:
        raise ValueError(f"二項係数の上の添字は非負である必要があります: {n}")
    if k < 0 or k > n:
        return Integer(0)
    return sympy.binomial(n, k)


def correction_coefficients(alpha: int) -> List[int]:
    """a_0 = 1, a_j = 2(α - j) a_{j-1}（j < α）"""
    coeffs: List[int] = []
    for j in range(alpha):
        coeffs.append(1 if j == 0 else 2 * (alpha - j) * coeffs[-1])
    return coeffs


def _c_tilde(alpha: int, j: int, q: int, r: int) -> Rational:
    if 2 * q - j < 0 or j - q < 0:
        return Integer(0)
    return (binom(2 * q - j, r) * (-1) ** j * sympy.factorial(2 * alpha)
            * sympy.factorial(alpha - q) * sympy.factorial(j)
            / (sympy.factorial(2 * alpha - 2 * q) * sympy.factorial(alpha))
            * inverse_factorial(2 * q - j) * inverse_factorial(j - q))


def ds_f_coefficients(alpha: int, j: int) -> Dict[int, Rational]:
    """
    D_s^j f(0) の閉じた形の係数

    D_s^j f(0) = α/2^{2α-2} Σ_r K_r (2w²)^r (z²-w²)^{2α-j-r-1} / (z^{2α} w^{2α})
    における r ごとの K_r（q について和を取ったもの）を返す。
    """
    if not 0 <= j <= alpha - 1:
        raise ValueError(f"j は 0..α-1 の範囲である必要があります: α={alpha}, j={j}")
    coeffs: Dict[int, Rational] = {}
    for q in range((j + 1) // 2, j + 1):
        for r in range(0, 2 * q - j + 1):
            coeffs[r] = coeffs.get(r, Integer(0)) + _c_tilde(alpha, j, q, r)
    return coeffs


def correction_polynomial(alpha: int, z=Z, w=W) -> sympy.Expr:
    """補正項 Σ a_j D_s^j f(0)（z, w の有理関数）"""
    total = Integer(0)
    lead = Rational(alpha, 2 ** (2 * alpha - 2)) if alpha else Integer(0)
    for a_j, j in zip(correction_coefficients(alpha), range(alpha)):
        for r, k_r in ds_f_coefficients(alpha, j).items():
            total += a_j * k_r * (2 * w ** 2) ** r * (z ** 2 - w ** 2) ** (2 * alpha - j - r - 1)
    return lead * total / (z ** (2 * alpha) * w ** (2 * alpha))


def correction_polynomial_ode_check(alpha: int) -> bool:
    """
    補正項が非斉次 ODE z y'' + (2α+1) y' + z y = α/(2^{2α-2} w^{2α}) ((z²-w²)/z)^{2α-1}
    を厳密に満たすか
    """
    if alpha < 1:
        raise ValueError(f"α は1以上である必要があります: {alpha}")
    y = correction_polynomial(alpha)
    lhs = Z * sympy.diff(y, Z, 2) + (2 * alpha + 1) * sympy.diff(y, Z) + Z * y
    rhs = (Rational(alpha, 2 ** (2 * alpha - 2)) / W ** (2 * alpha)
           * ((Z ** 2 - W ** 2) / Z) ** (2 * alpha - 1))
    return sympy.cancel(lhs - rhs) == 0


def appendix_lemma_sides(alpha: int) -> Tuple[sympy.Expr, sympy.Expr]:
    """付録の補題の左辺と右辺（A, B の多項式）"""
    if alpha < 1:
        raise ValueError(f"α は1以上である必要があります: {alpha}")
    sign = (-1) ** (alpha - 1)
    lhs = Integer(0)
    for q in range(alpha):
        coeff = (sympy.factorial(2 * alpha) * sympy.factorial(alpha - q)
                 / sympy.factorial(2 * alpha - 2 * q)
                 * inverse_factorial(2 * q - alpha + 1) * inverse_factorial(alpha - 1 - q))
        if coeff != 0:
            lhs += coeff * A ** (2 * alpha - 2 * q - 1) * B ** (2 * q - alpha + 1)
    lhs = Rational(sign, alpha) * lhs
    rhs = (Rational(sign, 4) * sympy.factorial(alpha - 1) * binom(2 * alpha, alpha)
           * ((A + B) ** alpha - (B - A) ** alpha))
    return sympy.expand(lhs), sympy.expand(rhs)


def combinatorial_identity_check(alpha: int) -> bool:
    """
    付録の補題と、A = z² - w², B = z² + w² を代入した形の一致

    Args:
        alpha: 1以上の整数

    Returns:
        bool: 両方が多項式として一致すれば True
    """
    lhs, rhs = appendix_lemma_sides(alpha)
    if sympy.expand(lhs - rhs) != 0:
        logger.warning(f"付録の補題が一致しません: α={alpha}")
        return False
    substituted = lhs.subs({A: Z ** 2 - W ** 2, B: Z ** 2 + W ** 2}, simultaneous=True)
    closed = (Rational((-1) ** (alpha - 1), 4) * sympy.factorial(alpha - 1) * 2 ** alpha
              * binom(2 * alpha, alpha) * (Z ** (2 * alpha) - W ** (2 * alpha)))
    if sympy.expand(substituted - closed) != 0:
        logger.warning(f"代入後の閉じた形が一致しません: α={alpha}")
        return False
    return True


def index_pairs(alpha: int) -> List[Tuple[int, int]]:
    """1 <= m <= 2α-1, ceil(m/2) <= p <= min(m, α) の (m, p)"""
    return [(m, p) for m in range(1, 2 * alpha)
            for p in range((m + 1) // 2, min(m, alpha) + 1)]


def _sum_c(alpha: int, m: int, p: int) -> Integer:
    return sum((binom(alpha - q, p - q) * binom(2 * alpha - m, 2 * q - m)
                for q in range(0, p + 1)), Integer(0))


def _sum_d(alpha: int, m: int, p: int) -> Integer:
    return sum((binom(alpha - q, p - q) * binom(2 * alpha - m + 1, 2 * q - m)
                for q in range(0, p + 1)), Integer(0))


def _s_raw(alpha: int, m: int, p: int) -> Rational:
    a = correction_coefficients(alpha) + [0]
    total = Integer(0)
    for q in range(0, p + 1):
        total += a[p] * _c_tilde(alpha, p, q, m - p) * 2 ** (m - p)
    for q in range(1, p + 1):
        total += (4 * a[p - 1] * _c_tilde(alpha, p - 1, q - 1, m - p) * 2 ** (m - p)
                  * (alpha - m) * (2 * alpha - m))
        if m - p - 1 >= 0:
            total += (4 * a[p - 1] * _c_tilde(alpha, p - 1, q - 1, m - p - 1) * 2 ** (m - p - 1)
                      * (2 * alpha - m) * (2 * alpha - m + 1))
    return total


def binomial_sums_check(alpha: int, m: int, p: int) -> bool:
    """
    和 C, D の閉じた形と、係数 S(m, p) の消去（生の形と整理した形の両方）

    Args:
        alpha: 1以上の整数
        m: 1..2α-1
        p: ceil(m/2)..min(m, α)

    Returns:
        bool: すべて厳密に成り立てば True
    """
    if (m, p) not in index_pairs(alpha):
        raise ValueError(f"(m, p) が添字の範囲外です: α={alpha}, m={m}, p={p}")
    c_sum = _sum_c(alpha, m, p)
    d_sum = _sum_d(alpha, m, p)
    c_closed = (Integer(2) ** (2 * p - m) * binom(alpha + p - m - 1, 2 * p - m)
                + Rational(2) ** (2 * p - m - 1) * binom(alpha + p - m - 1, 2 * p - m - 1))
    d_closed = Integer(2) ** (2 * p - m) * binom(alpha + p - m, 2 * p - m)
    s_reduced = (c_sum * (2 * p * (alpha - p) + 2 * (alpha - m) * (2 * alpha - m))
                 - d_sum * (2 * alpha - m) * (2 * alpha - m - p))
    checks = {
        "C": c_sum == c_closed,
        "D": d_sum == d_closed,
        "S": s_reduced == 0,
        "S-raw": _s_raw(alpha, m, p) == 0,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        logger.warning(f"二項和の検証に失敗しました: α={alpha}, m={m}, p={p}, {failed}")
    return not failed


def count_mismatches(alpha_max: int) -> Dict[str, int]:
    """α = 1..alpha_max のすべての検証を行い、失敗数を数える"""
    lemma = sum(not combinatorial_identity_check(a) for a in range(1, alpha_max + 1))
    sums = sum(not binomial_sums_check(a, m, p)
               for a in range(1, alpha_max + 1) for m, p in index_pairs(a))
    ode = sum(not correction_polynomial_ode_check(a) for a in range(1, min(alpha_max, 4) + 1))
    return {"lemma": lemma, "sums": sums, "ode": ode}
