"""
CSV 导出
长表格式，保留全精度数值与 p 值
"""

import csv
import io
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..experiment import MetricCell, MpiRow, ReportTables

CSV_COLUMNS = (
    "table", "condition", "task", "slot", "n", "mean", "std_dev",
    "statistic", "dof", "p_value", "significant", "note",
)


def _value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _metric_rows(name: str, table: Dict[str, Dict[str, MetricCell]]) -> List[Dict[str, Any]]:
    rows = []
    for condition, cells in table.items():
        for task, cell in cells.items():
            row: Dict[str, Any] = {"table": name, "condition": condition, "task": task, "note": cell.note}
            if cell.stats is not None:
                row.update(n=cell.stats.n, mean=cell.stats.mean, std_dev=cell.stats.std_dev)
            else:
                row["n"] = 0
            if cell.test is not None:
                row.update(
                    statistic=cell.test.statistic,
                    dof=cell.test.dof,
                    p_value=cell.test.p_value,
                    significant=cell.test.significant,
                )
            rows.append(row)
    return rows


def mpi_csv_rows(rows: Sequence[MpiRow]) -> List[Dict[str, Any]]:
    out = []
    for row in rows:
        for letter, mean in row.means.items():
            out.append({
                "table": "mpi",
                "condition": row.label,
                "task": letter,
                "mean": mean,
                "std_dev": row.std_devs.get(letter),
                "p_value": row.p_values.get(letter),
                "significant": row.significant.get(letter) if not row.is_control else None,
                "note": "target" if row.target == letter else ("control" if row.is_control else ""),
            })
    return out


def table_rows(tables: ReportTables) -> List[Dict[str, Any]]:
    """全部结果表展开为行"""
    rows: List[Dict[str, Any]] = []
    for label in tables.conditions:
        rows.append({"table": "samples", "condition": label, "task": "requested", "n": tables.requested.get(label, 0)})
        rows.append({"table": "samples", "condition": label, "task": "accepted", "n": tables.accepted.get(label, 0)})
        for reason, count in sorted(tables.rejects.get(label, {}).items()):
            rows.append({"table": "rejects", "condition": label, "task": reason, "n": count})
    rows += _metric_rows("durations", tables.durations)
    rows += _metric_rows("frequencies", tables.frequencies)
    for label, schedule in tables.expected.items():
        if schedule is None:
            continue
        for slot in schedule.slots:
            rows.append({
                "table": "expected",
                "condition": label,
                "task": slot.task,
                "slot": slot.index,
                "n": slot.frequency,
                "note": "tie" if slot.tie else "",
            })
    if tables.positions is not None:
        for label, cells in tables.positions.items():
            for task, cell in cells.items():
                row: Dict[str, Any] = {"table": "positions", "condition": label, "task": task}
                if cell.stats is not None:
                    row.update(n=cell.stats.n, mean=cell.stats.mean, std_dev=cell.stats.std_dev)
                if cell.correlation is not None:
                    row.update(statistic=cell.correlation.rho, p_value=cell.correlation.p_value, note="rho")
                rows.append(row)
    if tables.interventions is not None:
        rows += _metric_rows("interventions", tables.interventions)
    if tables.mpi is not None:
        rows += mpi_csv_rows(tables.mpi)
    return rows


def render_csv(rows: Sequence[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_value(row.get(column)) for column in CSV_COLUMNS])
    return buffer.getvalue()


def write_csv(rows: Sequence[Dict[str, Any]], output_path: Path) -> Path:
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(render_csv(rows), encoding="utf-8")
    return output_path


def significant_from_csv(text: str, tables: Optional[Sequence[str]] = None) -> List[tuple]:
    """从 CSV 读回显著单元 (表名, 条件, 任务)"""
    found = []
    for row in csv.DictReader(io.StringIO(text)):
        if row["significant"] != "true":
            continue
        if tables is not None and row["table"] not in tables:
            continue
        found.append((row["table"], row["condition"], row["task"]))
    return found
