"""单元格格式化：取整只发生在这里"""

from typing import Dict, Optional

from ..experiment import MetricCell, MpiRow
from ..stats import END_OF_DAY, CorrelationResult, ExpectedSlot, SampleStats

DURATION_DIGITS = 1
DEFAULT_DIGITS = 2
EMPTY_MARK = "n=0"
MISSING = "-"
END_ABBREVIATION = "End."
TIE_MARK = "†"
TARGET_MARK = "*"


def mean_sd(stats: SampleStats, digits: int = DEFAULT_DIGITS) -> str:
    """形如 "85.1 (19.0)" 的均值与标准差"""
    return f"{stats.mean:.{digits}f} ({stats.std_dev:.{digits}f})"


def metric_text(cell: Optional[MetricCell], digits: int = DEFAULT_DIGITS) -> str:
    if cell is None:
        return MISSING
    if cell.stats is None:
        return EMPTY_MARK
    return mean_sd(cell.stats, digits)


def rho_text(correlation: Optional[CorrelationResult]) -> str:
    return MISSING if correlation is None else f"{correlation.rho:.2f}"


def slot_text(slot: ExpectedSlot, abbreviations: Dict[str, str]) -> str:
    """期望日程槽位用任务缩写表示，并列时加标记"""
    if slot.task == END_OF_DAY:
        text = END_ABBREVIATION
    else:
        text = abbreviations.get(slot.task, slot.task)
    return text + TIE_MARK if slot.tie else text


def mpi_mean_text(row: MpiRow, letter: str) -> str:
    """量表均值，显著偏离对照的目标因素加星号"""
    text = f"{row.means[letter]:.{DEFAULT_DIGITS}f}"
    if row.target == letter and row.significant.get(letter, False):
        text += TARGET_MARK
    return text


def markdown_emphasis(text: str, significant: bool) -> str:
    return f"**{text}**" if significant else text
