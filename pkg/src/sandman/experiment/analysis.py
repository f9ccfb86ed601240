#!/usr/bin/env python3
"""
实验分析器
由运行记录计算时长、频次、位置、期望日程、干预对比与量表结果表
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..errors import ControlMissing, DegenerateTable, InsufficientData, UndefinedCorrelation
from ..persona import OceanFactor
from ..scheduler import BASELINE_LABEL, RAND_LABEL, SYS_LABEL, SYS_RAND_LABEL, Schedule
from ..stats import (
    ALPHA,
    CorrelationResult,
    ExpectedSchedule,
    ExpectedSlot,
    SampleStats,
    StatResult,
    chi_square_independence,
    describe,
    expected_schedule,
    occurrence_table,
    pearson_correlation,
    welch_t_test,
)
from .store import RunRecord, RunStore

logger = logging.getLogger(__name__)

INTERVENTION_LABELS = (BASELINE_LABEL, SYS_LABEL, RAND_LABEL, SYS_RAND_LABEL)
FREQUENCY_BASES = ("accepted", "requested")
MPI_RESULTS = "mpi.json"
TABLES = "tables.json"

NOTE_EMPTY = "n=0"
NOTE_CONTROL = "control"
NOTE_INSUFFICIENT = "insufficient"
NOTE_IDENTICAL = "identical"


@dataclass(frozen=True)
class MetricCell:
    """一个 任务×条件 单元：描述统计与对照检验"""

    stats: Optional[SampleStats]
    test: Optional[StatResult] = None
    note: str = ""

    @property
    def n(self) -> int:
        return self.stats.n if self.stats else 0

    @property
    def significant(self) -> bool:
        return self.test is not None and self.test.significant

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stats": self.stats.to_dict() if self.stats else None,
            "test": self.test.to_dict() if self.test else None,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "MetricCell":
        return cls(
            stats=SampleStats(**raw["stats"]) if raw.get("stats") else None,
            test=StatResult(**raw["test"]) if raw.get("test") else None,
            note=raw.get("note", ""),
        )


@dataclass(frozen=True)
class PositionCell:
    """任务首次出现的槽位，以及与提示词中呈现位置的相关"""

    stats: Optional[SampleStats]
    correlation: Optional[CorrelationResult] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stats": self.stats.to_dict() if self.stats else None,
            "correlation": self.correlation.to_dict() if self.correlation else None,
        }

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "PositionCell":
        return cls(
            stats=SampleStats(**raw["stats"]) if raw.get("stats") else None,
            correlation=CorrelationResult(**raw["correlation"]) if raw.get("correlation") else None,
        )


@dataclass(frozen=True)
class MpiRow:
    """量表结果的一行：一个诱导条件在五个因素上的得分"""

    label: str
    means: Dict[str, float]
    std_devs: Dict[str, float]
    p_values: Dict[str, Optional[float]] = field(default_factory=dict)
    significant: Dict[str, bool] = field(default_factory=dict)
    target: Optional[str] = None
    alphas: Dict[str, Optional[float]] = field(default_factory=dict)

    @property
    def is_control(self) -> bool:
        return not self.p_values

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "means": self.means,
            "std_devs": self.std_devs,
            "p_values": self.p_values,
            "significant": self.significant,
            "target": self.target,
            "alphas": self.alphas,
        }

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "MpiRow":
        return cls(
            label=raw["label"],
            means=dict(raw["means"]),
            std_devs=dict(raw["std_devs"]),
            p_values=dict(raw.get("p_values", {})),
            significant=dict(raw.get("significant", {})),
            target=raw.get("target"),
            alphas=dict(raw.get("alphas", {})),
        )


CellTable = Dict[str, Dict[str, MetricCell]]


def _cells_to_dict(table: Optional[CellTable]) -> Optional[Dict[str, Any]]:
    if table is None:
        return None
    return {cond: {task: cell.to_dict() for task, cell in row.items()} for cond, row in table.items()}


def _cells_from_dict(raw: Optional[Dict[str, Any]]) -> Optional[CellTable]:
    if raw is None:
        return None
    return {cond: {task: MetricCell.from_dict(c) for task, c in row.items()} for cond, row in raw.items()}


@dataclass
class ReportTables:
    """全部结果表，数值保持全精度，只在渲染时取整"""

    control: str
    conditions: List[str]
    tasks: List[str]
    abbreviations: Dict[str, str]
    requested: Dict[str, int]
    accepted: Dict[str, int]
    rejects: Dict[str, Dict[str, int]]
    durations: CellTable
    frequencies: CellTable
    expected: Dict[str, Optional[ExpectedSchedule]]
    positions: Optional[Dict[str, Dict[str, PositionCell]]] = None
    interventions: Optional[CellTable] = None
    mpi: Optional[List[MpiRow]] = None
    alpha: float = ALPHA
    pooled: bool = False
    frequency_basis: str = "accepted"

    def significant_cells(self) -> List[Tuple[str, str, str]]:
        """(表名, 条件, 任务) 形式列出所有显著单元"""
        found = []
        for name, table in (
            ("durations", self.durations),
            ("frequencies", self.frequencies),
            ("interventions", self.interventions or {}),
        ):
            for cond, row in table.items():
                for task, cell in row.items():
                    if cell.significant:
                        found.append((name, cond, task))
        return found

    def to_dict(self) -> Dict[str, Any]:
        return {
            "control": self.control,
            "conditions": self.conditions,
            "tasks": self.tasks,
            "abbreviations": self.abbreviations,
            "requested": self.requested,
            "accepted": self.accepted,
            "rejects": self.rejects,
            "durations": _cells_to_dict(self.durations),
            "frequencies": _cells_to_dict(self.frequencies),
            "expected": {
                cond: [slot.to_dict() for slot in sched.slots] if sched else None
                for cond, sched in self.expected.items()
            },
            "positions": (
                {cond: {task: c.to_dict() for task, c in row.items()} for cond, row in self.positions.items()}
                if self.positions is not None
                else None
            ),
            "interventions": _cells_to_dict(self.interventions),
            "mpi": [row.to_dict() for row in self.mpi] if self.mpi is not None else None,
            "alpha": self.alpha,
            "pooled": self.pooled,
            "frequency_basis": self.frequency_basis,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "ReportTables":
        positions = raw.get("positions")
        return cls(
            control=raw["control"],
            conditions=list(raw["conditions"]),
            tasks=list(raw["tasks"]),
            abbreviations=dict(raw["abbreviations"]),
            requested=dict(raw["requested"]),
            accepted=dict(raw["accepted"]),
            rejects={k: dict(v) for k, v in raw["rejects"].items()},
            durations=_cells_from_dict(raw["durations"]) or {},
            frequencies=_cells_from_dict(raw["frequencies"]) or {},
            expected={
                cond: ExpectedSchedule(slots=tuple(ExpectedSlot(**s) for s in slots)) if slots else None
                for cond, slots in raw["expected"].items()
            },
            positions=(
                {cond: {task: PositionCell.from_dict(c) for task, c in row.items()} for cond, row in positions.items()}
                if positions is not None
                else None
            ),
            interventions=_cells_from_dict(raw.get("interventions")),
            mpi=[MpiRow.from_dict(r) for r in raw["mpi"]] if raw.get("mpi") is not None else None,
            alpha=float(raw.get("alpha", ALPHA)),
            pooled=bool(raw.get("pooled", False)),
            frequency_basis=str(raw.get("frequency_basis", "accepted")),
        )


def load_tables(path: Path) -> "ReportTables":
    with open(path, "r", encoding="utf-8") as f:
        return ReportTables.from_dict(json.load(f))


def load_mpi_rows(path: Path) -> List[MpiRow]:
    with open(path, "r", encoding="utf-8") as f:
        return [MpiRow.from_dict(r) for r in json.load(f)["rows"]]


class ExperimentAnalyzer:
    """实验分析器"""

    def __init__(
        self,
        store: RunStore,
        control: str,
        alpha: float = ALPHA,
        pooled: bool = False,
        frequency_basis: str = "accepted",
    ):
        if frequency_basis not in FREQUENCY_BASES:
            raise ValueError(f"未知的频次口径: {frequency_basis}")
        self.store = store
        self.control = control
        self.alpha = alpha
        self.pooled = pooled
        self.frequency_basis = frequency_basis
        self.tasks = store.catalog.names()
        self._accepted: Dict[str, List[Tuple[RunRecord, Schedule]]] = {}
        self._requested: Dict[str, int] = {}

    def _load(self) -> None:
        for label in self.store.labels():
            records = self.store.records(label)
            self._requested[label] = len(records)
            self._accepted[label] = [(r, self.store.load_schedule(label, r)) for r in records if r.accepted]

    def analyze(self) -> ReportTables:
        """计算全部结果表"""
        labels = self.store.labels()
        if self.control not in labels:
            raise ControlMissing(f"存储中没有对照条件 {self.control}，已有: {', '.join(labels)}")
        self._load()
        if len(self._accepted[self.control]) < 2:
            raise ControlMissing(f"对照条件 {self.control} 的合格日程少于 2 份")

        tables = ReportTables(
            control=self.control,
            conditions=labels,
            tasks=self.tasks,
            abbreviations={name: self.store.catalog.abbreviation(name) for name in self.tasks},
            requested=dict(self._requested),
            accepted={label: len(self._accepted[label]) for label in labels},
            rejects={label: self._reject_counts(label) for label in labels},
            durations=self._duration_table(labels, self.control),
            frequencies=self._frequency_table(labels),
            expected={label: self._expected(label) for label in labels},
            positions=self._position_table(labels),
            interventions=self._intervention_table(labels),
            mpi=self._mpi_rows(),
            alpha=self.alpha,
            pooled=self.pooled,
            frequency_basis=self.frequency_basis,
        )
        logger.info("分析完成: %d 个条件，%d 个显著单元", len(labels), len(tables.significant_cells()))
        return tables

    def _reject_counts(self, label: str) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for record in self.store.rejects(label):
            assert record.reject_reason is not None
            key = record.reject_reason.value
            counts[key] = counts.get(key, 0) + 1
        counts["total"] = sum(counts.values())
        return counts

    def _durations(self, label: str, task: str) -> List[int]:
        return [
            entry.duration_min
            for _, schedule in self._accepted[label]
            for entry in schedule.entries
            if entry.task == task
        ]

    def _duration_cell(self, values: Sequence[float], control_values: Sequence[float], is_control: bool) -> MetricCell:
        if not values:
            return MetricCell(stats=None, note=NOTE_EMPTY)
        stats = describe(values)
        if is_control:
            return MetricCell(stats=stats, note=NOTE_CONTROL)
        try:
            return MetricCell(stats=stats, test=welch_t_test(values, control_values, pooled=self.pooled, alpha=self.alpha))
        except InsufficientData:
            return MetricCell(stats=stats, note=NOTE_INSUFFICIENT)

    def _duration_table(self, labels: Sequence[str], control: str) -> CellTable:
        table: CellTable = {}
        for label in labels:
            row = {}
            for task in self.tasks:
                row[task] = self._duration_cell(
                    self._durations(label, task),
                    self._durations(control, task),
                    is_control=label == control,
                )
            table[label] = row
        return table

    def _counts(self, label: str, task: str) -> List[int]:
        counts = [schedule.task_names().count(task) for _, schedule in self._accepted[label]]
        if self.frequency_basis == "requested":
            counts.extend([0] * (self._requested[label] - len(counts)))
        return counts

    def _frequency_table(self, labels: Sequence[str]) -> CellTable:
        table: CellTable = {}
        for label in labels:
            row = {}
            for task in self.tasks:
                counts = self._counts(label, task)
                if not counts:
                    row[task] = MetricCell(stats=None, note=NOTE_EMPTY)
                    continue
                stats = describe(counts)
                if label == self.control:
                    row[task] = MetricCell(stats=stats, note=NOTE_CONTROL)
                    continue
                contingency = occurrence_table(counts, self._counts(self.control, task), (label, self.control))
                if contingency is None:
                    row[task] = MetricCell(stats=stats, note=NOTE_IDENTICAL)
                    continue
                try:
                    row[task] = MetricCell(stats=stats, test=chi_square_independence(contingency, alpha=self.alpha))
                except (DegenerateTable, InsufficientData):
                    row[task] = MetricCell(stats=stats, note=NOTE_INSUFFICIENT)
            table[label] = row
        return table

    def _expected(self, label: str) -> Optional[ExpectedSchedule]:
        sequences = [schedule.task_names() for _, schedule in self._accepted[label]]
        if not sequences:
            return None
        return expected_schedule(sequences, self.tasks)

    def _position_table(self, labels: Sequence[str]) -> Optional[Dict[str, Dict[str, PositionCell]]]:
        """有随机化条件时，计算任务首次出现槽位与呈现位置的相关"""
        if not any(self.store.condition(label).get("randomise_order") for label in labels):
            return None
        table: Dict[str, Dict[str, PositionCell]] = {}
        for label in labels:
            row = {}
            for task in self.tasks:
                presented: List[int] = []
                slots: List[int] = []
                for record, schedule in self._accepted[label]:
                    names = schedule.task_names()
                    if task in names and task in record.task_order:
                        presented.append(record.task_order.index(task) + 1)
                        slots.append(names.index(task) + 1)
                if not slots:
                    row[task] = PositionCell(stats=None)
                    continue
                try:
                    correlation: Optional[CorrelationResult] = pearson_correlation(presented, slots)
                except (InsufficientData, UndefinedCorrelation):
                    correlation = None
                row[task] = PositionCell(stats=describe(slots), correlation=correlation)
            table[label] = row
        return table

    def _intervention_table(self, labels: Sequence[str]) -> Optional[CellTable]:
        """Baseline 与各干预条件的时长对比"""
        present = [label for label in INTERVENTION_LABELS if label in labels]
        if BASELINE_LABEL not in present or len(present) < 2:
            return None
        if len(self._accepted[BASELINE_LABEL]) < 2:
            logger.warning("Baseline 合格日程不足 2 份，跳过干预对比表")
            return None
        return self._duration_table(present, BASELINE_LABEL)

    def _mpi_rows(self) -> Optional[List[MpiRow]]:
        path = self.store.root / MPI_RESULTS
        if not path.exists():
            return None
        return load_mpi_rows(path)


def analyze(
    store: RunStore,
    control_label: Optional[str] = None,
    alpha: float = ALPHA,
    pooled: bool = False,
    frequency_basis: str = "accepted",
) -> ReportTables:
    """分析存储，对照条件默认取计划中的 control"""
    control = control_label or store.plan.get("control")
    if not control:
        raise ControlMissing("未指定对照条件")
    return ExperimentAnalyzer(store, control, alpha=alpha, pooled=pooled, frequency_basis=frequency_basis).analyze()


def mpi_rows(study: Any, bank: Any = None) -> List[MpiRow]:
    """由量表研究结果生成表格行，对照行排在最后"""
    from ..psychometrics import cronbach_alpha

    def alphas(report: Any) -> Dict[str, Optional[float]]:
        if bank is None:
            return {}
        return {f.letter: a for f, a in cronbach_alpha(report, bank).items()}

    rows = []
    for result in study.conditions:
        rows.append(
            MpiRow(
                label=result.label,
                means={f.letter: result.report[f].mean for f in OceanFactor},
                std_devs={f.letter: result.report[f].std_dev for f in OceanFactor},
                p_values={f.letter: result.comparisons[f].p_value for f in OceanFactor},
                significant={f.letter: result.comparisons[f].significant for f in OceanFactor},
                target=result.persona.factor.letter if result.persona.factor else None,
                alphas=alphas(result.report),
            )
        )
    control = study.control
    rows.append(
        MpiRow(
            label=control.label,
            means={f.letter: control[f].mean for f in OceanFactor},
            std_devs={f.letter: control[f].std_dev for f in OceanFactor},
            alphas=alphas(control),
        )
    )
    return rows
