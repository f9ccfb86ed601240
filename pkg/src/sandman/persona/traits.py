#!/usr/bin/env python3
"""
人格特质定义
定义 OCEAN 五因素、特质方向、特质描述，并渲染人格注入提示词
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from ..errors import ConfigError

PROMPT_TEMPLATE = "Imagine you are {article} {title} person characterised by being {words}"
NEUTRAL_LABEL = "Neutral"


class OceanFactor(Enum):
    """大五人格因素，定义顺序即报告顺序 O,C,E,A,N"""

    OPENNESS = "O"
    CONSCIENTIOUSNESS = "C"
    EXTRAVERSION = "E"
    AGREEABLENESS = "A"
    NEUROTICISM = "N"

    @property
    def letter(self) -> str:
        return self.value

    @property
    def title(self) -> str:
        return self.name.capitalize()

    @classmethod
    def parse(cls, text: str) -> "OceanFactor":
        """接受字母或全称，不区分大小写"""
        key = text.strip().upper()
        for factor in cls:
            if key in (factor.value, factor.name):
                return factor
        raise ConfigError(f"未知的人格因素: {text}")


class TraitDirection(Enum):
    """特质方向，Neutral 为对照组"""

    POSITIVE = "pos"
    NEGATIVE = "neg"
    NEUTRAL = "neutral"

    @property
    def sign(self) -> str:
        return {"pos": "+", "neg": "-", "neutral": ""}[self.value]

    @classmethod
    def parse(cls, text: str) -> "TraitDirection":
        key = text.strip().lower()
        aliases = {
            "pos": cls.POSITIVE, "positive": cls.POSITIVE, "+": cls.POSITIVE,
            "neg": cls.NEGATIVE, "negative": cls.NEGATIVE, "-": cls.NEGATIVE,
            "neutral": cls.NEUTRAL, "none": cls.NEUTRAL,
        }
        if key not in aliases:
            raise ConfigError(f"未知的特质方向: {text}")
        return aliases[key]


def _check_words(factor: OceanFactor, kind: str, words: Tuple[str, ...]) -> None:
    if not words:
        raise ConfigError(f"{factor.title} 的 {kind} 描述词为空")
    if any(not w.strip() for w in words):
        raise ConfigError(f"{factor.title} 的 {kind} 描述词含空字符串")
    if len(set(words)) != len(words):
        raise ConfigError(f"{factor.title} 的 {kind} 描述词重复")


@dataclass(frozen=True)
class TraitSpec:
    """单一因素的正负向标题与描述词"""

    factor: OceanFactor
    naive_title_pos: str
    naive_title_neg: str
    words_pos: Tuple[str, ...]
    words_neg: Tuple[str, ...]
    article_pos: Optional[str] = None
    article_neg: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.naive_title_pos.strip() or not self.naive_title_neg.strip():
            raise ConfigError(f"{self.factor.title} 的特质标题为空")
        _check_words(self.factor, "正向", self.words_pos)
        _check_words(self.factor, "负向", self.words_neg)
        for article in (self.article_pos, self.article_neg):
            if article is not None and article not in ("a", "an"):
                raise ConfigError(f"冠词只能是 a 或 an: {article}")


@dataclass(frozen=True)
class PersonaPrompt:
    """渲染后的人格提示词，Neutral 时 text 为空"""

    text: str
    factor: Optional[OceanFactor]
    direction: TraitDirection

    @property
    def is_neutral(self) -> bool:
        return self.direction is TraitDirection.NEUTRAL

    @property
    def label(self) -> str:
        return condition_label(self.factor, self.direction)


NEUTRAL_PERSONA = PersonaPrompt(text="", factor=None, direction=TraitDirection.NEUTRAL)


def indefinite_article(word: str) -> str:
    """元音字母开头用 an，否则用 a"""
    return "an" if word[:1].lower() in "aeiou" else "a"


def build_persona_prompt(spec: TraitSpec, direction: TraitDirection) -> PersonaPrompt:
    """按 "Imagine you are a/an X person characterised by being Y" 渲染提示词"""
    if direction is TraitDirection.NEUTRAL:
        return PersonaPrompt(text="", factor=spec.factor, direction=direction)

    if direction is TraitDirection.POSITIVE:
        title, words, article = spec.naive_title_pos, spec.words_pos, spec.article_pos
    else:
        title, words, article = spec.naive_title_neg, spec.words_neg, spec.article_neg

    text = PROMPT_TEMPLATE.format(
        article=article or indefinite_article(title),
        title=title,
        words=", ".join(words),
    )
    return PersonaPrompt(text=text, factor=spec.factor, direction=direction)


def condition_label(factor: Optional[OceanFactor], direction: TraitDirection) -> str:
    """条件标签，如 "C+"、"N-"，对照组为 "Neutral" """
    if direction is TraitDirection.NEUTRAL or factor is None:
        return NEUTRAL_LABEL
    return f"{factor.letter}{direction.sign}"


def parse_condition_label(label: str) -> Tuple[Optional[OceanFactor], TraitDirection]:
    """condition_label 的逆运算"""
    text = label.strip()
    if text.lower() == NEUTRAL_LABEL.lower():
        return None, TraitDirection.NEUTRAL
    if len(text) == 2 and text[1] in "+-":
        return OceanFactor.parse(text[0]), TraitDirection.parse(text[1])
    raise ConfigError(f"无法识别的条件标签: {label}")
