#!/usr/bin/env python3
"""
Markdown 报告生成器
任务为行、条件为列，显著单元加粗
"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence

from ..experiment import MetricCell, MpiRow, ReportTables
from ..persona import OceanFactor
from ..scheduler import RejectReason
from .formatting import (
    DEFAULT_DIGITS,
    DURATION_DIGITS,
    MISSING,
    TIE_MARK,
    markdown_emphasis,
    mean_sd,
    metric_text,
    mpi_mean_text,
    rho_text,
    slot_text,
)

CellTable = Dict[str, Dict[str, MetricCell]]


def markdown_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = [
        "| " + " | ".join(headers) + " |",
        "|" + "|".join("---" for _ in headers) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines)


class MarkdownReportGenerator:
    """Markdown 报告生成器"""

    def generate_report(self, tables: ReportTables, output_path: Path) -> Path:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(self.render(tables), encoding="utf-8")
        return output_path

    def render(self, tables: ReportTables) -> str:
        sections = [
            "# SANDMAN 日程实验报告",
            f"对照条件: {tables.control}；显著性水平 p ≤ {tables.alpha}；"
            f"t 检验: {'合并方差' if tables.pooled else 'Welch'}；频次口径: {tables.frequency_basis}",
            self._format_summary(tables),
            "## 任务时长 (分钟)\n\n均值 (标准差)，加粗表示与对照差异显著。\n\n"
            + self._format_metric_table(tables, tables.durations, tables.conditions, DURATION_DIGITS, reject_row=True),
            "## 任务频次\n\n每份日程中的出现次数，加粗表示卡方检验显著。\n\n"
            + self._format_metric_table(tables, tables.frequencies, tables.conditions, DEFAULT_DIGITS),
            "## 期望日程\n\n逐槽位众数任务，" + TIE_MARK + " 表示并列。\n\n" + self._format_expected(tables),
        ]
        if tables.positions is not None:
            sections.append("## 任务位置\n\n首次出现槽位的均值 (标准差) 与呈现位置的相关系数 ρ。\n\n" + self._format_positions(tables))
        if tables.interventions is not None:
            labels = list(tables.interventions)
            sections.append(
                "## 干预对比 (时长，分钟)\n\n与 Baseline 比较。\n\n"
                + self._format_metric_table(tables, tables.interventions, labels, DURATION_DIGITS, reject_row=True)
            )
        if tables.mpi is not None:
            sections.append(self.render_mpi(tables.mpi))
        return "\n\n".join(sections) + "\n"

    def render_mpi(self, rows: Sequence[MpiRow]) -> str:
        """单因素人格分析表：诱导条件为行，OCEAN 为列，对照行在最后"""
        letters = [f.letter for f in OceanFactor]
        body = []
        for row in rows:
            cells = [
                markdown_emphasis(mpi_mean_text(row, letter), row.significant.get(letter, False))
                for letter in letters
            ]
            body.append([row.label] + cells)
        return (
            "## 人格量表 (MPI)\n\n各因素平均得分，加粗表示与对照差异显著，* 标记诱导目标因素。\n\n"
            + markdown_table(["Condition"] + letters, body)
        )

    def _format_summary(self, tables: ReportTables) -> str:
        reasons = [r.value for r in RejectReason]
        rows = []
        for label in tables.conditions:
            rejects = tables.rejects.get(label, {})
            rows.append(
                [label, str(tables.requested.get(label, 0)), str(tables.accepted.get(label, 0))]
                + [str(rejects.get(reason, 0)) for reason in reasons]
            )
        return "## 样本概况\n\n" + markdown_table(["Condition", "Requested", "Accepted"] + reasons, rows)

    def _format_metric_table(
        self,
        tables: ReportTables,
        cells: CellTable,
        labels: List[str],
        digits: int,
        reject_row: bool = False,
    ) -> str:
        rows = []
        for task in tables.tasks:
            row = [task]
            for label in labels:
                cell: Optional[MetricCell] = cells.get(label, {}).get(task)
                row.append(markdown_emphasis(metric_text(cell, digits), cell is not None and cell.significant))
            rows.append(row)
        if reject_row:
            rows.append(["Reject"] + [str(tables.rejects.get(label, {}).get("total", 0)) for label in labels])
        return markdown_table(["Task"] + labels, rows)

    def _format_expected(self, tables: ReportTables) -> str:
        width = max((len(s.slots) for s in tables.expected.values() if s is not None), default=0)
        rows = []
        for i in range(width):
            row = [str(i + 1)]
            for label in tables.conditions:
                schedule = tables.expected.get(label)
                if schedule is None or i >= len(schedule.slots):
                    row.append(MISSING)
                else:
                    row.append(slot_text(schedule.slots[i], tables.abbreviations))
            rows.append(row)
        key = ", ".join(f"{name} ({abbr})" for name, abbr in tables.abbreviations.items())
        return markdown_table(["Slot"] + tables.conditions, rows) + f"\n\n缩写: {key}"

    def _format_positions(self, tables: ReportTables) -> str:
        assert tables.positions is not None
        labels = list(tables.positions)
        headers = ["Task"]
        for label in labels:
            headers += [f"{label} μ (σ)", f"{label} ρ"]
        rows = []
        for task in tables.tasks:
            row = [task]
            for label in labels:
                cell = tables.positions[label].get(task)
                if cell is None or cell.stats is None:
                    row += [MISSING, MISSING]
                else:
                    row += [mean_sd(cell.stats), rho_text(cell.correlation)]
            rows.append(row)
        return markdown_table(headers, rows)
