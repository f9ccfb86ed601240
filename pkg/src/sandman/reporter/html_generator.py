#!/usr/bin/env python3
"""
HTML报告生成器
生成单文件的实验结果页面，内容与 Markdown 报告一致
"""

import html
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from ..experiment import MetricCell, MpiRow, ReportTables
from ..persona import OceanFactor
from .formatting import (
    DEFAULT_DIGITS,
    DURATION_DIGITS,
    MISSING,
    mean_sd,
    metric_text,
    mpi_mean_text,
    rho_text,
    slot_text,
)


class HTMLReportGenerator:
    """HTML报告生成器"""

    def generate_report(self, tables: ReportTables, output_path: Path) -> Path:
        """生成HTML报告"""
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", encoding="utf-8") as f:
            f.write(self._generate_html_content(tables))
        return output_path

    def _generate_html_content(self, tables: ReportTables) -> str:
        sections = [
            self._section("任务时长 (分钟)", self._format_metric_table(tables, tables.durations, tables.conditions, DURATION_DIGITS)),
            self._section("任务频次", self._format_metric_table(tables, tables.frequencies, tables.conditions, DEFAULT_DIGITS)),
            self._section("期望日程", self._format_expected(tables)),
        ]
        if tables.positions is not None:
            sections.append(self._section("任务位置", self._format_positions(tables)))
        if tables.interventions is not None:
            sections.append(
                self._section(
                    "干预对比 (时长，分钟)",
                    self._format_metric_table(tables, tables.interventions, list(tables.interventions), DURATION_DIGITS),
                )
            )
        if tables.mpi is not None:
            sections.append(self._section("人格量表 (MPI)", self._format_mpi(tables.mpi)))

        template_vars = {
            "title": "SANDMAN 日程实验报告",
            "control": html.escape(tables.control),
            "condition_count": len(tables.conditions),
            "accepted_total": sum(tables.accepted.values()),
            "requested_total": sum(tables.requested.values()),
            "alpha": tables.alpha,
            "summary_html": self._format_summary(tables),
            "sections_html": "\n".join(sections),
        }
        return self._get_page_template().format(**template_vars)

    def _section(self, title: str, body: str) -> str:
        return f'<div class="card"><h2>{html.escape(title)}</h2>{body}</div>'

    def _cell(self, text: str, significant: bool = False) -> str:
        css = ' class="sig"' if significant else ""
        return f"<td{css}>{html.escape(text)}</td>"

    def _table(self, headers: Sequence[str], rows: Sequence[str]) -> str:
        head = "".join(f"<th>{html.escape(h)}</th>" for h in headers)
        return f'<table><thead><tr>{head}</tr></thead><tbody>{"".join(rows)}</tbody></table>'

    def _format_summary(self, tables: ReportTables) -> str:
        rows = []
        for label in tables.conditions:
            rows.append(
                "<tr>"
                + self._cell(label)
                + self._cell(str(tables.requested.get(label, 0)))
                + self._cell(str(tables.accepted.get(label, 0)))
                + self._cell(str(tables.rejects.get(label, {}).get("total", 0)))
                + "</tr>"
            )
        return self._table(["条件", "请求", "合格", "拒收"], rows)

    def _format_metric_table(
        self,
        tables: ReportTables,
        cells: Dict[str, Dict[str, MetricCell]],
        labels: List[str],
        digits: int,
    ) -> str:
        rows = []
        for task in tables.tasks:
            row = self._cell(task)
            for label in labels:
                cell: Optional[MetricCell] = cells.get(label, {}).get(task)
                row += self._cell(metric_text(cell, digits), cell is not None and cell.significant)
            rows.append(f"<tr>{row}</tr>")
        return self._table(["Task"] + labels, rows)

    def _format_expected(self, tables: ReportTables) -> str:
        width = max((len(s.slots) for s in tables.expected.values() if s is not None), default=0)
        rows = []
        for i in range(width):
            row = self._cell(str(i + 1))
            for label in tables.conditions:
                schedule = tables.expected.get(label)
                if schedule is None or i >= len(schedule.slots):
                    row += self._cell(MISSING)
                else:
                    row += self._cell(slot_text(schedule.slots[i], tables.abbreviations))
            rows.append(f"<tr>{row}</tr>")
        return self._table(["Slot"] + tables.conditions, rows)

    def _format_positions(self, tables: ReportTables) -> str:
        assert tables.positions is not None
        labels = list(tables.positions)
        headers = ["Task"]
        for label in labels:
            headers += [f"{label} μ (σ)", f"{label} ρ"]
        rows = []
        for task in tables.tasks:
            row = self._cell(task)
            for label in labels:
                cell = tables.positions[label].get(task)
                if cell is None or cell.stats is None:
                    row += self._cell(MISSING) + self._cell(MISSING)
                else:
                    row += self._cell(mean_sd(cell.stats)) + self._cell(rho_text(cell.correlation))
            rows.append(f"<tr>{row}</tr>")
        return self._table(headers, rows)

    def _format_mpi(self, mpi: Sequence[MpiRow]) -> str:
        letters = [f.letter for f in OceanFactor]
        rows = []
        for record in mpi:
            row = self._cell(record.label)
            for letter in letters:
                row += self._cell(mpi_mean_text(record, letter), record.significant.get(letter, False))
            rows.append(f"<tr>{row}</tr>")
        return self._table(["Condition"] + letters, rows)

    def _get_page_template(self) -> str:
        return '''<!DOCTYPE html>
<html lang="zh-CN">
<head>
    <meta charset="UTF-8">
    <meta name="viewport" content="width=device-width, initial-scale=1.0">
    <title>{title}</title>
    <style>
        :root {{
            --primary-color: #00ff88;
            --secondary-color: #0099ff;
            --bg-primary: #0a0a0a;
            --bg-secondary: #1a1a1a;
            --text-primary: #ffffff;
            --text-secondary: #cccccc;
            --border-color: #333333;
            --sig-color: rgba(0, 255, 136, 0.18);
        }}

        * {{
            margin: 0;
            padding: 0;
            box-sizing: border-box;
        }}

        body {{
            font-family: 'Roboto', sans-serif;
            background: var(--bg-primary);
            color: var(--text-primary);
            min-height: 100vh;
        }}

        .header {{
            background: var(--bg-secondary);
            border-bottom: 2px solid var(--primary-color);
            padding: 20px 40px;
            display: flex;
            justify-content: space-between;
            align-items: center;
        }}

        .header h1 {{
            font-size: 28px;
            color: var(--primary-color);
            letter-spacing: 1px;
        }}

        .header-meta {{
            display: flex;
            gap: 20px;
            font-size: 14px;
            color: var(--text-secondary);
        }}

        .header-meta span {{
            padding: 6px 14px;
            border-radius: 16px;
            border: 1px solid var(--border-color);
        }}

        .container {{
            max-width: 1920px;
            margin: 0 auto;
            padding: 30px 40px;
        }}

        .card {{
            background: var(--bg-secondary);
            border: 1px solid var(--border-color);
            border-radius: 12px;
            padding: 20px;
            margin-bottom: 24px;
            overflow-x: auto;
        }}

        .card h2 {{
            font-size: 18px;
            color: var(--secondary-color);
            margin-bottom: 14px;
        }}

        table {{
            border-collapse: collapse;
            font-size: 13px;
        }}

        th, td {{
            border: 1px solid var(--border-color);
            padding: 6px 10px;
            text-align: right;
            white-space: nowrap;
        }}

        th:first-child, td:first-child {{
            text-align: left;
        }}

        td.sig {{
            background: var(--sig-color);
            font-weight: 700;
        }}
    </style>
</head>
<body>
    <div class="header">
        <h1>{title}</h1>
        <div class="header-meta">
            <span>对照: {control}</span>
            <span>条件数: {condition_count}</span>
            <span>合格/请求: {accepted_total}/{requested_total}</span>
            <span>p ≤ {alpha}</span>
        </div>
    </div>
    <div class="container">
        <div class="card"><h2>样本概况</h2>{summary_html}</div>
        {sections_html}
    </div>
</body>
</html>
'''
