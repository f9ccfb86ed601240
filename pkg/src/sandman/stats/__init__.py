"""
统计模块
描述统计、假设检验、相关分析、期望日程与自实现的分布函数
"""

from .inference import (
    ALPHA,
    ContingencyTable,
    CorrelationResult,
    SampleStats,
    StatResult,
    chi_square_independence,
    describe,
    occurrence_table,
    pearson_correlation,
    welch_t_test,
)
from .sequences import END_OF_DAY, ExpectedSchedule, ExpectedSlot, expected_schedule
from .special import (
    chi_square_cdf,
    chi_square_sf,
    log_gamma,
    regularized_incomplete_beta,
    regularized_lower_gamma,
    regularized_upper_gamma,
    student_t_cdf,
    student_t_sf,
    student_t_two_tailed,
)

__all__ = [
    'ALPHA', 'ContingencyTable', 'CorrelationResult', 'SampleStats', 'StatResult',
    'chi_square_independence', 'describe', 'occurrence_table', 'pearson_correlation',
    'welch_t_test', 'END_OF_DAY', 'ExpectedSchedule', 'ExpectedSlot',
    'expected_schedule', 'chi_square_cdf', 'chi_square_sf', 'log_gamma',
    'regularized_incomplete_beta', 'regularized_lower_gamma',
    'regularized_upper_gamma', 'student_t_cdf', 'student_t_sf', 'student_t_two_tailed',
]
