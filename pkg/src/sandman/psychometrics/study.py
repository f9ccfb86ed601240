#!/usr/bin/env python3
"""
单因素人格诱导研究
对照组施测一次，每个诱导条件施测后逐因素与对照比较
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from ..config import DEFAULT_MODEL, DEFAULT_TEMPERATURE
from ..llm_gateway import ChatProvider
from ..persona import (
    NEUTRAL_PERSONA,
    Lexicon,
    OceanFactor,
    PersonaPrompt,
    TraitDirection,
    build_persona_prompt,
)
from ..stats import StatResult
from .inventory import (
    DEFAULT_RETRY_BUDGET,
    DEFAULT_RUNS,
    TraitScoreReport,
    administer_mpi,
    compare_traits,
)
from .items import MpiItemBank

logger = logging.getLogger(__name__)


@dataclass
class MpiConditionResult:
    """一个诱导条件的得分与对照比较"""

    persona: PersonaPrompt
    report: TraitScoreReport
    comparisons: Dict[OceanFactor, StatResult]

    @property
    def label(self) -> str:
        return self.persona.label

    @property
    def target_significant(self) -> bool:
        """目标因素是否显著偏离对照"""
        return self.persona.factor is not None and self.comparisons[self.persona.factor].significant

    @property
    def bleed_through(self) -> List[OceanFactor]:
        """非目标因素中显著偏离对照的因素"""
        return [
            f for f in OceanFactor
            if f is not self.persona.factor and self.comparisons[f].significant
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "report": self.report.to_dict(),
            "comparisons": {f.letter: r.to_dict() for f, r in self.comparisons.items()},
            "target_significant": self.target_significant,
            "bleed_through": [f.letter for f in self.bleed_through],
        }


@dataclass
class MpiStudy:
    control: TraitScoreReport
    conditions: List[MpiConditionResult] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "control": self.control.to_dict(),
            "conditions": [c.to_dict() for c in self.conditions],
        }


def run_mpi_study(
    provider: ChatProvider,
    lexicon: Lexicon,
    bank: MpiItemBank,
    runs: int = DEFAULT_RUNS,
    factors: Optional[Sequence[OceanFactor]] = None,
    directions: Sequence[TraitDirection] = (TraitDirection.POSITIVE, TraitDirection.NEGATIVE),
    retry_budget: int = DEFAULT_RETRY_BUDGET,
    shuffle: bool = False,
    seed: int = 0,
    pooled: bool = False,
    temperature: float = DEFAULT_TEMPERATURE,
    model_id: str = DEFAULT_MODEL,
    control: Optional[TraitScoreReport] = None,
) -> MpiStudy:
    """施测对照组 (未提供时) 和每个 因素×方向 条件，全部与同一对照组比较"""
    options = dict(
        runs=runs,
        retry_budget=retry_budget,
        shuffle=shuffle,
        seed=seed,
        temperature=temperature,
        model_id=model_id,
    )
    if control is None:
        logger.info("施测对照组 (Neutral)")
        control = administer_mpi(provider, NEUTRAL_PERSONA, bank, **options)

    study = MpiStudy(control=control)
    for factor in factors or list(OceanFactor):
        for direction in directions:
            if direction is TraitDirection.NEUTRAL:
                continue
            persona = build_persona_prompt(lexicon[factor], direction)
            logger.info("施测条件 %s", persona.label)
            report = administer_mpi(provider, persona, bank, **options)
            comparisons = compare_traits(report, control, pooled=pooled)
            result = MpiConditionResult(persona=persona, report=report, comparisons=comparisons)
            if not result.target_significant:
                logger.warning("条件 %s 的目标因素未显著偏离对照", persona.label)
            study.conditions.append(result)
    return study
