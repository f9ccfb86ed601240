"""
实验模块
实验计划、运行记录存储、批量执行与结果分析
"""

from .analysis import (
    FREQUENCY_BASES,
    MPI_RESULTS,
    TABLES,
    ExperimentAnalyzer,
    MetricCell,
    MpiRow,
    PositionCell,
    ReportTables,
    analyze,
    load_mpi_rows,
    load_tables,
    mpi_rows,
)
from .plan import DEFAULT_SAMPLES, PRESETS, ExperimentPlan, load_plan, preset_path
from .runner import PROVENANCE, run_experiment
from .store import SCHEMA_VERSION, RunRecord, RunStore, label_slug

__all__ = [
    'FREQUENCY_BASES', 'MPI_RESULTS', 'TABLES', 'ExperimentAnalyzer', 'MetricCell',
    'MpiRow', 'PositionCell', 'ReportTables', 'analyze', 'load_mpi_rows', 'load_tables',
    'mpi_rows', 'DEFAULT_SAMPLES', 'PRESETS', 'ExperimentPlan', 'load_plan', 'preset_path',
    'PROVENANCE', 'run_experiment', 'SCHEMA_VERSION', 'RunRecord', 'RunStore', 'label_slug',
]
