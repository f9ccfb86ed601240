"""特质词库加载"""

import logging
from pathlib import Path
from typing import Dict, List, Optional

from ..config import data_path, load_toml
from ..errors import ConfigError
from .traits import (
    NEUTRAL_PERSONA,
    OceanFactor,
    PersonaPrompt,
    TraitDirection,
    TraitSpec,
    build_persona_prompt,
    parse_condition_label,
)

logger = logging.getLogger(__name__)

Lexicon = Dict[OceanFactor, TraitSpec]


def load_lexicon(path: Optional[Path] = None) -> Lexicon:
    """读取特质词库，五个因素必须齐全"""
    path = path or data_path("traits.toml")
    raw = load_toml(path)
    records = raw.get("trait", [])
    if not isinstance(records, list):
        raise ConfigError(f"{path}: trait 必须是表数组")

    lexicon: Lexicon = {}
    for record in records:
        try:
            factor = OceanFactor.parse(record["factor"])
            spec = TraitSpec(
                factor=factor,
                naive_title_pos=record["title_pos"],
                naive_title_neg=record["title_neg"],
                words_pos=tuple(record["words_pos"]),
                words_neg=tuple(record["words_neg"]),
                article_pos=record.get("article_pos"),
                article_neg=record.get("article_neg"),
            )
        except KeyError as e:
            raise ConfigError(f"{path}: 特质记录缺少字段 {e}") from e
        if factor in lexicon:
            raise ConfigError(f"{path}: 因素 {factor.title} 重复定义")
        lexicon[factor] = spec

    missing = [f.title for f in OceanFactor if f not in lexicon]
    if missing:
        raise ConfigError(f"{path}: 缺少因素 {', '.join(missing)}")

    logger.debug("已加载特质词库 %s", path)
    return lexicon


def persona_for_label(lexicon: Lexicon, label: str) -> PersonaPrompt:
    """由条件标签得到人格提示词"""
    factor, direction = parse_condition_label(label)
    if factor is None:
        return NEUTRAL_PERSONA
    return build_persona_prompt(lexicon[factor], direction)


def all_conditions(lexicon: Lexicon) -> List[PersonaPrompt]:
    """对照组加十个单因素条件，按 O,C,E,A,N 与正负向排列"""
    prompts = [NEUTRAL_PERSONA]
    for factor in OceanFactor:
        for direction in (TraitDirection.POSITIVE, TraitDirection.NEGATIVE):
            prompts.append(build_persona_prompt(lexicon[factor], direction))
    return prompts
