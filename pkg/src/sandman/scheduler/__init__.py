"""
排程模块
任务目录、引导提示词、日程解析与样本生成
"""

from .catalog import TaskCatalog, TaskCategory, TaskDef, load_catalog
from .parser import parse_schedule
from .prompts import (
    BASELINE_LABEL,
    RAND_LABEL,
    SYS_LABEL,
    SYS_RAND_LABEL,
    TASK_LIST_HEADER,
    GenerationCondition,
    baseline_conditions,
    build_bootstrap_prompt,
    persona_conditions,
    presented_order,
    randomise_task_order,
)
from .sampling import SampleOutcome, SampleSet, generate_one, generate_samples, sample_seed
from .schedule import (
    MINUTES_PER_DAY,
    RejectReason,
    RejectRecord,
    Schedule,
    ScheduleEntry,
    format_hhmm,
    load_schedule,
    render_schedule_lines,
    rule_based_plan,
    serialise_schedule,
)

__all__ = [
    'TaskCatalog', 'TaskCategory', 'TaskDef', 'load_catalog', 'parse_schedule',
    'BASELINE_LABEL', 'RAND_LABEL', 'SYS_LABEL', 'SYS_RAND_LABEL', 'TASK_LIST_HEADER',
    'GenerationCondition', 'baseline_conditions', 'build_bootstrap_prompt',
    'persona_conditions', 'presented_order', 'randomise_task_order',
    'SampleOutcome', 'SampleSet', 'generate_one', 'generate_samples', 'sample_seed',
    'MINUTES_PER_DAY', 'RejectReason', 'RejectRecord', 'Schedule', 'ScheduleEntry',
    'format_hhmm', 'load_schedule', 'render_schedule_lines', 'rule_based_plan',
    'serialise_schedule',
]
