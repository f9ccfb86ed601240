#!/usr/bin/env python3
"""
实验计划
从 TOML 读取条件列表、每条件样本数、主种子、提供方与输出目录

计划文件格式：
  [experiment]
  name = "persona"
  samples = 500
  seed = 0
  provider = "mock"           # real | mock | scripted，可被命令行覆盖
  out = "out/persona"
  control = "Neutral"
  preset = "persona"          # 可选：persona | interventions
  use_system_message = false  # 作用于 preset 展开的条件
  randomise_order = false

  [[condition]]               # 可选：追加自定义条件
  label = "C+ Sys"
  persona = "C+"
  use_system_message = true
  randomise_order = false
"""

import hashlib
import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..config import DEFAULT_SYSTEM_MESSAGE, PROVIDER_KINDS, data_path, load_toml
from ..errors import ConfigError
from ..persona import NEUTRAL_LABEL, Lexicon, persona_for_label
from ..scheduler import BASELINE_LABEL, GenerationCondition, baseline_conditions, persona_conditions

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 500
PRESETS = ("persona", "interventions")


@dataclass(frozen=True)
class ExperimentPlan:
    name: str
    conditions: Tuple[GenerationCondition, ...]
    samples_per_condition: int = DEFAULT_SAMPLES
    seed: int = 0
    provider: str = "mock"
    out: Path = Path("out")
    control: str = NEUTRAL_LABEL

    def __post_init__(self) -> None:
        if not self.conditions:
            raise ConfigError("实验计划至少需要一个条件")
        if self.samples_per_condition < 1:
            raise ConfigError(f"每个条件的样本数至少为 1: {self.samples_per_condition}")
        labels = self.labels()
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            raise ConfigError(f"条件标签重复: {', '.join(duplicates)}")
        if self.provider not in PROVIDER_KINDS:
            raise ConfigError(f"未知的提供方类型: {self.provider}")

    def labels(self) -> List[str]:
        return [c.label for c in self.conditions]

    def condition(self, label: str) -> GenerationCondition:
        for condition in self.conditions:
            if condition.label == label:
                return condition
        raise KeyError(label)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "samples_per_condition": self.samples_per_condition,
            "seed": self.seed,
            "provider": self.provider,
            "control": self.control,
            "conditions": [c.to_dict() for c in self.conditions],
        }

    def digest(self) -> str:
        """决定样本内容的字段摘要，不含样本数与输出目录"""
        identity = self.to_dict()
        identity.pop("samples_per_condition")
        identity.pop("provider")
        canonical = json.dumps(identity, sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def with_overrides(
        self,
        samples: Optional[int] = None,
        seed: Optional[int] = None,
        provider: Optional[str] = None,
        out: Optional[Path] = None,
    ) -> "ExperimentPlan":
        changes: Dict[str, Any] = {}
        if samples is not None:
            changes["samples_per_condition"] = samples
        if seed is not None:
            changes["seed"] = seed
        if provider is not None:
            changes["provider"] = provider
        if out is not None:
            changes["out"] = out
        return replace(self, **changes)


def preset_path(name: str) -> Path:
    return data_path(f"plans/{name}.toml")


def load_plan(
    path: Path,
    lexicon: Lexicon,
    system_message: str = DEFAULT_SYSTEM_MESSAGE,
) -> ExperimentPlan:
    """读取计划文件；只给出预设名时使用包内预设"""
    if not path.exists() and str(path) in PRESETS:
        path = preset_path(str(path))
    raw = load_toml(path)
    exp = raw.get("experiment", {})

    conditions: List[GenerationCondition] = []
    preset = exp.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"{path}: 未知的预设 {preset}，可选 {', '.join(PRESETS)}")
        if preset == "persona":
            conditions.extend(
                persona_conditions(
                    lexicon,
                    use_system_message=bool(exp.get("use_system_message", False)),
                    randomise_order=bool(exp.get("randomise_order", False)),
                    system_message=system_message,
                )
            )
        else:
            conditions.extend(baseline_conditions(system_message))

    for record in raw.get("condition", []):
        try:
            label = str(record["label"])
            conditions.append(
                GenerationCondition(
                    label=label,
                    persona=persona_for_label(lexicon, str(record.get("persona", NEUTRAL_LABEL))),
                    use_system_message=bool(record.get("use_system_message", False)),
                    randomise_order=bool(record.get("randomise_order", False)),
                    system_message=str(record.get("system_message", system_message)),
                )
            )
        except KeyError as e:
            raise ConfigError(f"{path}: 条件缺少字段 {e}") from e

    default_control = BASELINE_LABEL if preset == "interventions" else NEUTRAL_LABEL
    # 相对路径以当前工作目录为准
    out = Path(str(exp.get("out", "out")))
    try:
        plan = ExperimentPlan(
            name=str(exp.get("name", Path(path).stem)),
            conditions=tuple(conditions),
            samples_per_condition=int(exp.get("samples", DEFAULT_SAMPLES)),
            seed=int(exp.get("seed", 0)),
            provider=str(exp.get("provider", "mock")),
            out=out,
            control=str(exp.get("control", default_control)),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{path}: 计划字段类型错误 {e}") from e

    logger.info("已加载实验计划 %s: %d 个条件 × %d 样本", plan.name, len(plan.conditions), plan.samples_per_condition)
    return plan
