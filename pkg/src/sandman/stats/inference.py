#!/usr/bin/env python3
"""
统计检验
描述统计、Welch 双样本 t 检验、卡方独立性检验与 Pearson 相关
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..errors import DegenerateTable, EmptySample, InsufficientData, UndefinedCorrelation
from .special import chi_square_sf, student_t_two_tailed

ALPHA = 0.05


@dataclass(frozen=True)
class SampleStats:
    """均值、样本标准差 (n-1) 与样本量"""

    mean: float
    std_dev: float
    n: int

    def to_dict(self) -> Dict[str, Any]:
        return {"mean": self.mean, "std_dev": self.std_dev, "n": self.n}


@dataclass(frozen=True)
class StatResult:
    """检验统计量、自由度、p 值与显著性"""

    statistic: float
    dof: float
    p_value: float
    significant: bool

    @classmethod
    def build(cls, statistic: float, dof: float, p_value: float, alpha: float = ALPHA) -> "StatResult":
        p = min(1.0, max(0.0, p_value))
        return cls(statistic=statistic, dof=dof, p_value=p, significant=p <= alpha)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "statistic": self.statistic,
            "dof": self.dof,
            "p_value": self.p_value,
            "significant": self.significant,
        }


@dataclass(frozen=True)
class CorrelationResult:
    """Pearson 相关系数"""

    rho: float
    n: int
    p_value: float

    def to_dict(self) -> Dict[str, Any]:
        return {"rho": self.rho, "n": self.n, "p_value": self.p_value}


@dataclass(frozen=True)
class ContingencyTable:
    """r×c 非负计数表"""

    counts: Tuple[Tuple[int, ...], ...]
    row_labels: Tuple[str, ...] = ()
    col_labels: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.counts) < 2 or any(len(row) < 2 for row in self.counts):
            raise InsufficientData("列联表至少需要 2 行 2 列")
        width = len(self.counts[0])
        if any(len(row) != width for row in self.counts):
            raise InsufficientData("列联表各行长度不一致")
        if any(c < 0 for row in self.counts for c in row):
            raise ValueError("列联表计数不能为负")

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.counts), len(self.counts[0])


def _as_array(samples: Sequence[float]) -> np.ndarray:
    return np.asarray(list(samples), dtype=float)


def describe(samples: Sequence[float]) -> SampleStats:
    """均值与样本标准差，n=1 时标准差为 0"""
    data = _as_array(samples)
    n = int(data.size)
    if n == 0:
        raise EmptySample("描述统计需要至少一个样本")
    # 全部相等时直接取值，避免浮点累加产生的非零标准差
    if np.all(data == data[0]):
        return SampleStats(mean=float(data[0]), std_dev=0.0, n=n)
    std = float(np.std(data, ddof=1)) if n > 1 else 0.0
    return SampleStats(mean=float(np.mean(data)), std_dev=std, n=n)


def welch_t_test(
    a: Sequence[float],
    b: Sequence[float],
    pooled: bool = False,
    alpha: float = ALPHA,
) -> StatResult:
    """双样本 t 检验，默认 Welch (不等方差)，pooled=True 时为合并方差"""
    xa, xb = _as_array(a), _as_array(b)
    na, nb = int(xa.size), int(xb.size)
    if na < 2 or nb < 2:
        raise InsufficientData(f"t 检验每组至少需要 2 个样本 (实际 {na}, {nb})")

    sa, sb = describe(xa), describe(xb)
    va, vb = sa.std_dev ** 2, sb.std_dev ** 2
    diff = sa.mean - sb.mean

    if va == 0.0 and vb == 0.0:
        dof = float(na + nb - 2)
        if diff == 0.0:
            return StatResult.build(0.0, dof, 1.0, alpha)
        # 两组均无方差但均值不同
        return StatResult.build(math.copysign(math.inf, diff), dof, 0.0, alpha)

    if pooled:
        dof = float(na + nb - 2)
        sp2 = ((na - 1) * va + (nb - 1) * vb) / dof
        se = math.sqrt(sp2 * (1.0 / na + 1.0 / nb))
    else:
        ga, gb = va / na, vb / nb
        se = math.sqrt(ga + gb)
        dof = (ga + gb) ** 2 / (ga ** 2 / (na - 1) + gb ** 2 / (nb - 1))

    t = diff / se
    return StatResult.build(t, dof, student_t_two_tailed(t, dof), alpha)


def chi_square_independence(table: ContingencyTable, alpha: float = ALPHA) -> StatResult:
    """卡方独立性检验，统计量用有理数精确求和"""
    counts = [[int(c) for c in row] for row in table.counts]
    row_totals = [sum(row) for row in counts]
    col_totals = [sum(col) for col in zip(*counts)]
    total = sum(row_totals)
    if total == 0 or 0 in row_totals or 0 in col_totals:
        raise DegenerateTable("存在全零的行或列，期望频数为零")

    # (o - e)^2 / e, e = R*C/T  =>  (o*T - R*C)^2 / (T*R*C)
    chi2 = Fraction(0)
    for i, row in enumerate(counts):
        for j, obs in enumerate(row):
            rc = row_totals[i] * col_totals[j]
            chi2 += Fraction((obs * total - rc) ** 2, total * rc)

    r, c = table.shape
    dof = float((r - 1) * (c - 1))
    statistic = float(chi2)
    return StatResult.build(statistic, dof, chi_square_sf(statistic, dof), alpha)


def occurrence_table(
    condition_counts: Sequence[int],
    control_counts: Sequence[int],
    labels: Tuple[str, str] = ("condition", "control"),
) -> Optional[ContingencyTable]:
    """按每份日程中的出现次数 {0, 1, >=2} 分类构造 2×k 表

    去掉两组都为零的类别；剩余不足 2 类时两组分布相同，返回 None。
    """
    categories = ("0", "1", ">=2")

    def bucket(values: Sequence[int]) -> Tuple[int, int, int]:
        zero = sum(1 for v in values if v == 0)
        one = sum(1 for v in values if v == 1)
        return zero, one, len(values) - zero - one

    rows = [bucket(condition_counts), bucket(control_counts)]
    keep = [j for j in range(3) if rows[0][j] + rows[1][j] > 0]
    if len(keep) < 2:
        return None
    return ContingencyTable(
        counts=tuple(tuple(row[j] for j in keep) for row in rows),
        row_labels=labels,
        col_labels=tuple(categories[j] for j in keep),
    )


def pearson_correlation(xs: Sequence[float], ys: Sequence[float]) -> CorrelationResult:
    """Pearson 积矩相关系数，p 值由 t 变换得到"""
    x, y = _as_array(xs), _as_array(ys)
    if x.size != y.size:
        raise InsufficientData(f"序列长度不一致: {x.size} != {y.size}")
    n = int(x.size)
    if n < 3:
        raise InsufficientData(f"相关分析至少需要 3 对样本 (实际 {n})")

    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(np.dot(dx, dx)), float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelation("常量序列的相关系数无定义")

    rho = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    rho = max(-1.0, min(1.0, rho))
    if abs(rho) == 1.0:
        return CorrelationResult(rho=rho, n=n, p_value=0.0)
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return CorrelationResult(rho=rho, n=n, p_value=student_t_two_tailed(t, n - 2))
