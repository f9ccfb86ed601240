#!/usr/bin/env python3
"""
特殊函数与分布函数
正则化不完全 Beta 函数与不完全 Gamma 函数，用于 Student-t 与卡方分布的 CDF

连分式部分采用修正 Lentz 算法，参考 "Numerical Recipes in C" 第 6 章。
"""

import math
import sys

from ..errors import StatsDomainError

MAX_ITER = 10000
EPS = 1.0e-15
TINY = sys.float_info.min / sys.float_info.epsilon


def log_gamma(x: float) -> float:
    """ln Γ(x)"""
    return math.lgamma(x)


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """不完全 Beta 函数的连分式"""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < TINY:
        d = TINY
    d = 1.0 / d
    h = d

    for m in range(1, MAX_ITER + 1):
        m2 = 2 * m
        # 偶数步
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        h *= d * c
        # 奇数步
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h

    raise StatsDomainError(f"不完全 Beta 连分式未收敛: a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b)"""
    if a <= 0 or b <= 0:
        raise StatsDomainError(f"Beta 参数必须为正: a={a}, b={b}")
    if math.isnan(x):
        raise StatsDomainError("x 不能为 NaN")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0

    log_front = (
        log_gamma(a + b) - log_gamma(a) - log_gamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def _gamma_series(a: float, x: float) -> float:
    """P(a, x) 的级数展开，适用于 x < a + 1"""
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            return total * math.exp(-x + a * math.log(x) - log_gamma(a))
    raise StatsDomainError(f"不完全 Gamma 级数未收敛: a={a}, x={x}")


def _gamma_continued_fraction(a: float, x: float) -> float:
    """Q(a, x) 的连分式，适用于 x >= a + 1"""
    b = x + 1.0 - a
    c = 1.0 / TINY
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < TINY:
            d = TINY
        c = b + an / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return math.exp(-x + a * math.log(x) - log_gamma(a)) * h
    raise StatsDomainError(f"不完全 Gamma 连分式未收敛: a={a}, x={x}")


def regularized_lower_gamma(a: float, x: float) -> float:
    """P(a, x)"""
    if a <= 0:
        raise StatsDomainError(f"Gamma 参数必须为正: a={a}")
    if math.isnan(x) or x < 0:
        raise StatsDomainError(f"x 必须非负: {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_continued_fraction(a, x)


def regularized_upper_gamma(a: float, x: float) -> float:
    """Q(a, x) = 1 - P(a, x)，尾部直接计算以保留精度"""
    if a <= 0:
        raise StatsDomainError(f"Gamma 参数必须为正: a={a}")
    if math.isnan(x) or x < 0:
        raise StatsDomainError(f"x 必须非负: {x}")
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_continued_fraction(a, x)


def _check_dof(dof: float) -> None:
    if math.isnan(dof) or dof <= 0:
        raise StatsDomainError(f"自由度必须为正: {dof}")


def student_t_cdf(x: float, dof: float) -> float:
    """Student-t 分布函数"""
    _check_dof(dof)
    if math.isnan(x):
        raise StatsDomainError("x 不能为 NaN")
    if x == 0.0:
        return 0.5
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    tail = 0.5 * regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + x * x))
    return 1.0 - tail if x > 0 else tail


def student_t_sf(x: float, dof: float) -> float:
    """Student-t 上尾概率"""
    return student_t_cdf(-x, dof)


def student_t_two_tailed(t: float, dof: float) -> float:
    """双尾 p 值"""
    _check_dof(dof)
    if math.isinf(t):
        return 0.0
    p = regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t))
    return min(1.0, max(0.0, p))


def chi_square_cdf(x: float, dof: float) -> float:
    """卡方分布函数"""
    _check_dof(dof)
    if math.isnan(x):
        raise StatsDomainError("x 不能为 NaN")
    if x <= 0.0:
        return 0.0
    return regularized_lower_gamma(dof / 2.0, x / 2.0)


def chi_square_sf(x: float, dof: float) -> float:
    """卡方上尾概率"""
    _check_dof(dof)
    if math.isnan(x):
        raise StatsDomainError("x 不能为 NaN")
    if x <= 0.0:
        return 1.0
    return regularized_upper_gamma(dof / 2.0, x / 2.0)
