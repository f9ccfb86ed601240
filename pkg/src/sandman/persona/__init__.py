"""
人格模块
OCEAN 特质定义与人格注入提示词
"""

from .lexicon import Lexicon, all_conditions, load_lexicon, persona_for_label
from .traits import (
    NEUTRAL_LABEL,
    NEUTRAL_PERSONA,
    OceanFactor,
    PersonaPrompt,
    TraitDirection,
    TraitSpec,
    build_persona_prompt,
    condition_label,
    indefinite_article,
    parse_condition_label,
)

__all__ = [
    'Lexicon', 'all_conditions', 'load_lexicon', 'persona_for_label',
    'NEUTRAL_LABEL', 'NEUTRAL_PERSONA', 'OceanFactor', 'PersonaPrompt',
    'TraitDirection', 'TraitSpec', 'build_persona_prompt', 'condition_label',
    'indefinite_article', 'parse_condition_label',
]
