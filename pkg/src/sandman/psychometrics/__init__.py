"""
心理测量模块
MPI 人格量表题库、施测、计分与诱导效果比较
"""

from .inventory import (
    DEFAULT_RETRY_BUDGET,
    DEFAULT_RUNS,
    MpiAnswerSheet,
    MpiChoice,
    TraitScore,
    TraitScoreReport,
    administer_mpi,
    build_item_prompt,
    compare_traits,
    cronbach_alpha,
    parse_choice,
    score_choice,
    score_sheets,
)
from .items import Keying, MpiItem, MpiItemBank, load_item_bank
from .study import MpiConditionResult, MpiStudy, run_mpi_study

__all__ = [
    'DEFAULT_RETRY_BUDGET', 'DEFAULT_RUNS', 'MpiAnswerSheet', 'MpiChoice',
    'TraitScore', 'TraitScoreReport', 'administer_mpi', 'build_item_prompt',
    'compare_traits', 'cronbach_alpha', 'parse_choice', 'score_choice', 'score_sheets',
    'Keying', 'MpiItem', 'MpiItemBank', 'load_item_bank',
    'MpiConditionResult', 'MpiStudy', 'run_mpi_study',
]
