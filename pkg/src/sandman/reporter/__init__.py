"""
报告生成器模块
将结果表渲染为 Markdown、CSV 或 HTML 文件
"""

from pathlib import Path
from typing import Sequence

from ..experiment import MpiRow, ReportTables
from .csv_export import CSV_COLUMNS, mpi_csv_rows, render_csv, significant_from_csv, table_rows, write_csv
from .formatting import mean_sd, metric_text, mpi_mean_text, slot_text
from .html_generator import HTMLReportGenerator
from .markdown_generator import MarkdownReportGenerator, markdown_table

REPORT_FORMATS = ("markdown", "csv", "html")
REPORT_FILES = {"markdown": "report.md", "csv": "report.csv", "html": "report.html"}
MPI_REPORT_FILES = {"markdown": "mpi_report.md", "csv": "mpi_report.csv"}


def render_report(tables: ReportTables, fmt: str, out: Path) -> Path:
    """把结果表写到 out 目录下的报告文件"""
    if fmt not in REPORT_FORMATS:
        raise ValueError(f"未知的报告格式: {fmt}")
    target = out / REPORT_FILES[fmt]
    if fmt == "markdown":
        return MarkdownReportGenerator().generate_report(tables, target)
    if fmt == "csv":
        return write_csv(table_rows(tables), target)
    return HTMLReportGenerator().generate_report(tables, target)


def render_mpi_report(rows: Sequence[MpiRow], fmt: str, out: Path) -> Path:
    """单因素人格分析表，只支持 markdown 与 csv"""
    if fmt not in MPI_REPORT_FILES:
        raise ValueError(f"人格量表报告不支持格式: {fmt}")
    target = out / MPI_REPORT_FILES[fmt]
    target.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        return write_csv(mpi_csv_rows(rows), target)
    target.write_text(MarkdownReportGenerator().render_mpi(rows) + "\n", encoding="utf-8")
    return target


__all__ = [
    'REPORT_FORMATS', 'REPORT_FILES', 'MPI_REPORT_FILES', 'render_report', 'render_mpi_report',
    'CSV_COLUMNS', 'mpi_csv_rows', 'render_csv', 'significant_from_csv', 'table_rows', 'write_csv',
    'mean_sd', 'metric_text', 'mpi_mean_text', 'slot_text',
    'HTMLReportGenerator', 'MarkdownReportGenerator', 'markdown_table',
]
