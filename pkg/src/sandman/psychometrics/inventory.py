#!/usr/bin/env python3
"""
人格量表施测
逐题向模型提问、解析选项、计分并汇总为 OCEAN 得分
"""

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import DEFAULT_MODEL, DEFAULT_TEMPERATURE
from ..errors import UnparseableAnswer
from ..llm_gateway import ChatProvider, ChatRequest
from ..persona import OceanFactor, PersonaPrompt
from ..seeding import derive_seed
from ..stats import StatResult, describe, welch_t_test
from .items import Keying, MpiItem, MpiItemBank

logger = logging.getLogger(__name__)

DEFAULT_RUNS = 5
DEFAULT_RETRY_BUDGET = 2


class MpiChoice(Enum):
    A = "Very Accurate"
    B = "Moderately Accurate"
    C = "Neither Accurate Nor Inaccurate"
    D = "Moderately Inaccurate"
    E = "Very Inaccurate"

    @property
    def option_line(self) -> str:
        return f"({self.name}). {self.value}"


_PAREN_RE = re.compile(r"\(\s*([A-Ea-e])\s*\)")
_ANSWER_RE = re.compile(r"answer\s*(?:is)?\s*[:：]?\s*\(?\s*([A-Ea-e])\b", re.IGNORECASE)
_LEADING_RE = re.compile(r"^\s*(?:([A-E])(?:[.)\]:,]|\s|$)|([a-e])(?:[.)\]:,]|$))")
_STANDALONE_RE = re.compile(r"\b([A-E])\b")


def score_choice(item: MpiItem, choice: MpiChoice) -> int:
    """正向计分 A=5 … E=1，反向计分相反"""
    position = list(MpiChoice).index(choice)
    if item.keying is Keying.POSITIVE:
        return 5 - position
    return 1 + position


def parse_choice(raw: str) -> MpiChoice:
    """从模型回答中提取选项字母

    "(A)"、"Answer: A"、行首字母、独立的大写字母中取位置最靠前的一个；
    行首小写字母后必须紧跟标点，避免把冠词 "a" 当作选项。都没有时再匹配选项文字。
    """
    text = raw or ""
    found: List[Tuple[int, str]] = []
    for pattern in (_PAREN_RE, _ANSWER_RE, _LEADING_RE, _STANDALONE_RE):
        match = pattern.search(text)
        if match:
            group = next(g for g in range(1, (match.re.groups or 0) + 1) if match.group(g))
            found.append((match.start(group), match.group(group)))
    if found:
        return MpiChoice[min(found)[1].upper()]

    lowered = text.lower()
    # 较长的标签优先
    for choice in sorted(MpiChoice, key=lambda c: -len(c.value)):
        if choice.value.lower() in lowered:
            return choice
    raise UnparseableAnswer(f"无法从回答中识别选项: {text[:80]!r}")


def _statement_clause(statement: str) -> str:
    body = statement.strip().rstrip(".")
    return "You " + body[:1].lower() + body[1:] + "."


def build_item_prompt(
    persona: PersonaPrompt,
    item: MpiItem,
    temperature: float = DEFAULT_TEMPERATURE,
    model_id: str = DEFAULT_MODEL,
    seed: Optional[int] = None,
) -> ChatRequest:
    """单题请求：人格句、陈述、五个选项"""
    parts = []
    if not persona.is_neutral and persona.text:
        parts.append(persona.text + ".")
    parts.append(
        f'Given a statement of you: "{_statement_clause(item.statement)}"\n'
        "Please choose from the following options to identify how accurately "
        "this statement describes you, based on your own self-perception.\n"
        "Options:\n" + "\n".join(c.option_line for c in MpiChoice)
    )
    parts.append("Answer:")
    return ChatRequest(
        user_message="\n\n".join(parts),
        temperature=temperature,
        model_id=model_id,
        seed=seed,
    )


@dataclass(frozen=True)
class MpiAnswerSheet:
    """一轮作答；answers 与 invalid 合起来覆盖整个题库"""

    run_index: int
    answers: Dict[str, MpiChoice]
    invalid: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "run_index": self.run_index,
            "answers": {k: v.name for k, v in sorted(self.answers.items())},
            "invalid": list(self.invalid),
        }


@dataclass(frozen=True)
class TraitScore:
    """单因素得分，保留逐次作答的原始分"""

    factor: OceanFactor
    mean: float
    std_dev: float
    n: int
    scores: Tuple[int, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "factor": self.factor.letter,
            "mean": self.mean,
            "std_dev": self.std_dev,
            "n": self.n,
        }


@dataclass
class TraitScoreReport:
    """一个人格条件下的量表结果"""

    label: str
    scores: Dict[OceanFactor, TraitScore]
    sheets: List[MpiAnswerSheet] = field(default_factory=list)

    @property
    def excluded(self) -> int:
        return sum(len(s.invalid) for s in self.sheets)

    def __getitem__(self, factor: OceanFactor) -> TraitScore:
        return self.scores[factor]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "excluded": self.excluded,
            "scores": {f.letter: self.scores[f].to_dict() for f in OceanFactor},
        }


def score_sheets(label: str, bank: MpiItemBank, sheets: Sequence[MpiAnswerSheet]) -> TraitScoreReport:
    """汇总各轮作答，按因素计算均值与标准差"""
    raw: Dict[OceanFactor, List[int]] = {f: [] for f in OceanFactor}
    for sheet in sheets:
        for item in bank:
            choice = sheet.answers.get(item.id)
            if choice is not None:
                raw[item.factor].append(score_choice(item, choice))

    scores = {}
    for factor, values in raw.items():
        if values:
            summary = describe(values)
            scores[factor] = TraitScore(factor, summary.mean, summary.std_dev, summary.n, tuple(values))
        else:
            scores[factor] = TraitScore(factor, float("nan"), 0.0, 0)
    return TraitScoreReport(label=label, scores=scores, sheets=list(sheets))


def _ask(
    provider: ChatProvider,
    persona: PersonaPrompt,
    item: MpiItem,
    run_index: int,
    retry_budget: int,
    seed: int,
    temperature: float,
    model_id: str,
) -> Optional[MpiChoice]:
    for attempt in range(retry_budget + 1):
        request = build_item_prompt(
            persona,
            item,
            temperature=temperature,
            model_id=model_id,
            seed=derive_seed(seed, persona.label, run_index, item.id, attempt),
        )
        response = provider.complete(request)
        try:
            return parse_choice(response.text)
        except UnparseableAnswer as e:
            logger.debug("题目 %s 第 %d 次回答无法解析: %s", item.id, attempt + 1, e)
    logger.warning("题目 %s 在第 %d 轮重试后仍无法解析，已排除", item.id, run_index + 1)
    return None


def administer_mpi(
    provider: ChatProvider,
    persona: PersonaPrompt,
    bank: MpiItemBank,
    runs: int = DEFAULT_RUNS,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
    shuffle: bool = False,
    seed: int = 0,
    temperature: float = DEFAULT_TEMPERATURE,
    model_id: str = DEFAULT_MODEL,
) -> TraitScoreReport:
    """对一个人格条件施测 runs 轮

    提供方错误直接抛出，本次结果丢弃；无法解析的题目重试后排除并计数。
    """
    if runs < 1:
        raise ValueError(f"施测轮数至少为 1: {runs}")

    sheets = []
    for run_index in range(runs):
        items = list(bank)
        if shuffle:
            rng = np.random.default_rng(derive_seed(seed, persona.label, "order", run_index))
            items = [items[i] for i in rng.permutation(len(items))]

        def ask(item: MpiItem) -> Optional[MpiChoice]:
            return _ask(provider, persona, item, run_index, retry_budget, seed, temperature, model_id)

        with ThreadPoolExecutor(max_workers=provider.max_in_flight) as executor:
            choices = list(executor.map(ask, items))

        answers = {item.id: c for item, c in zip(items, choices) if c is not None}
        invalid = tuple(item.id for item, c in zip(items, choices) if c is None)
        sheets.append(MpiAnswerSheet(run_index=run_index, answers=answers, invalid=invalid))
        logger.debug("%s 第 %d 轮完成，排除 %d 题", persona.label, run_index + 1, len(invalid))

    report = score_sheets(persona.label, bank, sheets)
    if report.excluded:
        logger.warning("%s: 共排除 %d 个无法解析的回答", persona.label, report.excluded)
    return report


def cronbach_alpha(report: TraitScoreReport, bank: MpiItemBank) -> Dict[OceanFactor, Optional[float]]:
    """各因素的内部一致性系数

    以每轮作答为一个受试者、每题为一列；只用该因素全部题目都有效的轮次。
    轮次不足 2、题目不足 2 或总分无方差时为 None。
    """
    result: Dict[OceanFactor, Optional[float]] = {}
    for factor, items in bank.by_factor().items():
        rows = []
        for sheet in report.sheets:
            if all(item.id in sheet.answers for item in items):
                rows.append([score_choice(item, sheet.answers[item.id]) for item in items])
        k = len(items)
        if len(rows) < 2 or k < 2:
            result[factor] = None
            continue
        matrix = np.asarray(rows, dtype=float)
        total_var = float(np.var(matrix.sum(axis=1), ddof=1))
        if total_var == 0.0:
            result[factor] = None
            continue
        item_var = float(np.var(matrix, axis=0, ddof=1).sum())
        result[factor] = k / (k - 1) * (1.0 - item_var / total_var)
    return result


def compare_traits(
    experimental: TraitScoreReport,
    control: TraitScoreReport,
    pooled: bool = False,
) -> Dict[OceanFactor, StatResult]:
    """逐因素对原始得分做双样本 t 检验"""
    return {
        factor: welch_t_test(
            experimental[factor].scores,
            control[factor].scores,
            pooled=pooled,
        )
        for factor in OceanFactor
    }
