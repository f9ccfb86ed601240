"""报告渲染测试"""

import csv
import io

import pytest

from sandman.experiment import MetricCell, MpiRow, PositionCell, ReportTables
from sandman.reporter import (
    MarkdownReportGenerator,
    HTMLReportGenerator,
    markdown_table,
    mean_sd,
    mpi_mean_text,
    render_csv,
    render_mpi_report,
    render_report,
    significant_from_csv,
    slot_text,
    table_rows,
)
from sandman.stats import CorrelationResult, ExpectedSchedule, ExpectedSlot, SampleStats, StatResult

SIG = StatResult(statistic=11.2, dof=912.4, p_value=1e-20, significant=True)
NOT_SIG = StatResult(statistic=0.4, dof=880.0, p_value=0.69, significant=False)

CONTROL_ROW = MpiRow(
    label="Neutral",
    means={"O": 3.3312, "C": 3.5487, "E": 3.6501, "A": 3.3906, "N": 3.0411},
    std_devs={"O": 0.8, "C": 0.7, "E": 0.9, "A": 0.6, "N": 1.0},
)
TARGET_ROW = MpiRow(
    label="C+",
    means={"O": 3.40, "C": 4.1234, "E": 3.70, "A": 3.50, "N": 2.60},
    std_devs={"O": 0.8, "C": 0.5, "E": 0.9, "A": 0.6, "N": 1.0},
    p_values={"O": 0.5, "C": 1e-9, "E": 0.6, "A": 0.2, "N": 0.001},
    significant={"O": False, "C": True, "E": False, "A": False, "N": True},
    target="C",
)


def make_tables(**overrides):
    expected = ExpectedSchedule(
        slots=(
            ExpectedSlot(1, "Work", 300, False),
            ExpectedSlot(2, "Lunch", 200, True),
            ExpectedSlot(3, "End", 410, False),
        )
    )
    fields = dict(
        control="Neutral",
        conditions=["Neutral", "C+"],
        tasks=["Work", "Lunch"],
        abbreviations={"Work": "Wrk.", "Lunch": "Lun."},
        requested={"Neutral": 500, "C+": 500},
        accepted={"Neutral": 480, "C+": 470},
        rejects={"Neutral": {"Overlap": 20, "total": 20}, "C+": {"UnknownTask": 30, "total": 30}},
        durations={
            "Neutral": {
                "Work": MetricCell(SampleStats(64.31, 19.26, 480), note="control"),
                "Lunch": MetricCell(SampleStats(50.0, 10.0, 450), note="control"),
            },
            "C+": {
                "Work": MetricCell(SampleStats(85.12, 18.98, 470), SIG),
                "Lunch": MetricCell(None, note="n=0"),
            },
        },
        frequencies={
            "Neutral": {
                "Work": MetricCell(SampleStats(1.5, 0.5, 480), note="control"),
                "Lunch": MetricCell(SampleStats(0.9, 0.3, 480), note="control"),
            },
            "C+": {
                "Work": MetricCell(SampleStats(1.52, 0.49, 470), NOT_SIG),
                "Lunch": MetricCell(SampleStats(0.0, 0.0, 470), SIG),
            },
        },
        expected={"Neutral": expected, "C+": None},
        mpi=[TARGET_ROW, CONTROL_ROW],
    )
    fields.update(overrides)
    return ReportTables(**fields)


class TestFormatting:
    def test_mean_sd(self):
        assert mean_sd(SampleStats(85.12, 18.98, 10), 1) == "85.1 (19.0)"
        assert mean_sd(SampleStats(0.5, 0.25, 10)) == "0.50 (0.25)"

    def test_slot_text(self):
        abbreviations = {"Lunch": "Lun."}
        assert slot_text(ExpectedSlot(1, "Lunch", 3, False), abbreviations) == "Lun."
        assert slot_text(ExpectedSlot(1, "Lunch", 3, True), abbreviations) == "Lun.†"
        assert slot_text(ExpectedSlot(2, "End", 3, False), abbreviations) == "End."

    def test_mpi_target_mark(self):
        assert mpi_mean_text(TARGET_ROW, "C") == "4.12*"
        assert mpi_mean_text(TARGET_ROW, "N") == "2.60"
        assert mpi_mean_text(CONTROL_ROW, "C") == "3.55"

    def test_markdown_table(self):
        assert markdown_table(["a", "b"], [["1", "2"]]) == "| a | b |\n|---|---|\n| 1 | 2 |"


class TestMarkdown:
    def test_significant_duration_bold(self):
        text = MarkdownReportGenerator().render(make_tables())
        assert "| Work | 64.3 (19.3) | **85.1 (19.0)** |" in text
        assert "| Lunch | 50.0 (10.0) | n=0 |" in text
        assert "| Reject | 20 | 30 |" in text

    def test_frequency_table(self):
        text = MarkdownReportGenerator().render(make_tables())
        assert "| Work | 1.50 (0.50) | 1.52 (0.49) |" in text
        assert "| Lunch | 0.90 (0.30) | **0.00 (0.00)** |" in text

    def test_summary_and_expected(self):
        text = MarkdownReportGenerator().render(make_tables())
        assert "| Neutral | 500 | 480 | 0 | 20 | 0 | 0 | 0 |" in text
        assert "| 2 | Lun.† | - |" in text
        assert "| 3 | End. | - |" in text
        assert "Work (Wrk.)" in text

    def test_mpi_table(self):
        text = MarkdownReportGenerator().render_mpi([TARGET_ROW, CONTROL_ROW])
        assert "| Condition | O | C | E | A | N |" in text
        assert "| Neutral | 3.33 | 3.55 | 3.65 | 3.39 | 3.04 |" in text
        assert "| C+ | 3.40 | **4.12*** | 3.70 | 3.50 | **2.60** |" in text

    def test_optional_sections(self):
        text = MarkdownReportGenerator().render(make_tables(mpi=None))
        assert "人格量表" not in text
        assert "任务位置" not in text
        positions = {
            "C+": {
                "Work": PositionCell(SampleStats(3.2, 1.1, 400), CorrelationResult(0.42, 400, 1e-5)),
                "Lunch": PositionCell(None),
            }
        }
        text = MarkdownReportGenerator().render(make_tables(positions=positions))
        assert "| Task | C+ μ (σ) | C+ ρ |" in text
        assert "| Work | 3.20 (1.10) | 0.42 |" in text
        assert "| Lunch | - | - |" in text

    def test_bold_cells_match_significant_cells(self):
        tables = make_tables()
        text = MarkdownReportGenerator().render(tables)
        assert text.count("**") // 2 == len(tables.significant_cells()) + 2


class TestCsv:
    def test_columns_and_values(self):
        text = render_csv(table_rows(make_tables()))
        rows = list(csv.DictReader(io.StringIO(text)))
        work = next(r for r in rows if r["table"] == "durations" and r["condition"] == "C+" and r["task"] == "Work")
        assert float(work["mean"]) == 85.12
        assert float(work["p_value"]) == 1e-20
        assert work["significant"] == "true"
        empty = next(r for r in rows if r["table"] == "durations" and r["task"] == "Lunch" and r["condition"] == "C+")
        assert empty["n"] == "0"
        assert empty["mean"] == ""
        assert empty["note"] == "n=0"

    def test_significant_cells_round_trip(self):
        tables = make_tables()
        text = render_csv(table_rows(tables))
        found = significant_from_csv(text, tables=("durations", "frequencies", "interventions"))
        assert sorted(found) == sorted(tables.significant_cells())

    def test_mpi_rows(self):
        text = render_csv(table_rows(make_tables()))
        mpi = [r for r in csv.DictReader(io.StringIO(text)) if r["table"] == "mpi"]
        assert len(mpi) == 10
        target = next(r for r in mpi if r["condition"] == "C+" and r["task"] == "C")
        assert target["note"] == "target"
        control = next(r for r in mpi if r["condition"] == "Neutral" and r["task"] == "O")
        assert control["note"] == "control"
        assert control["significant"] == ""


class TestRenderReport:
    @pytest.mark.parametrize("fmt, name", [("markdown", "report.md"), ("csv", "report.csv"), ("html", "report.html")])
    def test_formats(self, tmp_path, fmt, name):
        path = render_report(make_tables(), fmt, tmp_path)
        assert path == tmp_path / name
        assert path.read_text(encoding="utf-8")

    def test_deterministic(self, tmp_path):
        first = render_report(make_tables(), "html", tmp_path / "a").read_bytes()
        second = render_report(make_tables(), "html", tmp_path / "b").read_bytes()
        assert first == second

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            render_report(make_tables(), "pdf", tmp_path)

    def test_html_marks_significant(self, tmp_path):
        text = HTMLReportGenerator().generate_report(make_tables(), tmp_path / "r.html").read_text(encoding="utf-8")
        assert '<td class="sig">85.1 (19.0)</td>' in text
        assert "<td>n=0</td>" in text
        assert "对照: Neutral" in text

    def test_mpi_report(self, tmp_path):
        path = render_mpi_report([TARGET_ROW, CONTROL_ROW], "markdown", tmp_path)
        assert path.name == "mpi_report.md"
        assert "| Neutral | 3.33 | 3.55 | 3.65 | 3.39 | 3.04 |" in path.read_text(encoding="utf-8")
        with pytest.raises(ValueError):
            render_mpi_report([CONTROL_ROW], "html", tmp_path)
