#!/usr/bin/env python3
"""
配置管理
负责读取 TOML 配置文件、解析包内数据文件路径，并与命令行参数合并
"""

import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from importlib import resources

from .errors import ConfigError

DEFAULT_TEMPERATURE = 0.7
DEFAULT_MODEL = "gpt-3.5-turbo"
DEFAULT_ENDPOINT = "https://api.openai.com/v1/chat/completions"
API_KEY_ENV = "SANDMAN_API_KEY"
PROVIDER_KINDS = ("real", "mock", "scripted")

DEFAULT_SYSTEM_MESSAGE = (
    "You are a scheduling assistant. Produce a realistic full-day schedule for "
    "the described person using only the provided tasks, in the specified format."
)


def load_toml(path: Path) -> Dict[str, Any]:
    """读取 TOML 文件"""
    try:
        with open(path, "rb") as f:
            return tomllib.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"配置文件不存在: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"配置文件格式错误 {path}: {e}") from e


def data_path(name: str) -> Path:
    """包内数据文件路径"""
    return Path(str(resources.files("sandman") / "data" / name))


@dataclass(frozen=True)
class ProviderSettings:
    """模型提供方配置"""

    kind: str = "mock"
    endpoint: str = DEFAULT_ENDPOINT
    model_id: str = DEFAULT_MODEL
    timeout_s: float = 60.0
    retry_budget: int = 3
    backoff_base_s: float = 0.5
    max_in_flight: int = 4
    capture: Optional[Path] = None
    transcript: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.kind not in PROVIDER_KINDS:
            raise ConfigError(f"未知的提供方类型: {self.kind}")
        if self.timeout_s <= 0:
            raise ConfigError("timeout_s 必须大于 0")
        if self.retry_budget < 0:
            raise ConfigError("retry_budget 不能为负数")
        if self.max_in_flight < 1:
            raise ConfigError("max_in_flight 至少为 1")
        if self.kind == "scripted" and self.transcript is None:
            raise ConfigError("scripted 提供方需要 transcript 路径")


@dataclass(frozen=True)
class PathSettings:
    """数据文件与输出路径"""

    lexicon: Path = field(default_factory=lambda: data_path("traits.toml"))
    item_bank: Path = field(default_factory=lambda: data_path("mpi_items.jsonl"))
    catalog: Path = field(default_factory=lambda: data_path("tasks.toml"))
    profile: Path = field(default_factory=lambda: data_path("agent.toml"))
    out: Path = Path("out")

    def resolved(self) -> "PathSettings":
        """所有路径转为绝对路径"""
        return PathSettings(
            lexicon=self.lexicon.expanduser().resolve(),
            item_bank=self.item_bank.expanduser().resolve(),
            catalog=self.catalog.expanduser().resolve(),
            profile=self.profile.expanduser().resolve(),
            out=self.out.expanduser().resolve(),
        )


@dataclass(frozen=True)
class SandmanConfig:
    """命令行使用的完整配置"""

    provider: ProviderSettings = field(default_factory=ProviderSettings)
    paths: PathSettings = field(default_factory=PathSettings)
    temperature: float = DEFAULT_TEMPERATURE
    seed: int = 0
    system_message: str = DEFAULT_SYSTEM_MESSAGE

    def __post_init__(self) -> None:
        if not 0.0 <= self.temperature <= 2.0:
            raise ConfigError(f"temperature 超出范围 [0, 2]: {self.temperature}")

    @property
    def api_key(self) -> Optional[str]:
        """凭据只从环境变量读取"""
        return os.environ.get(API_KEY_ENV) or None


def _opt_path(value: Any) -> Optional[Path]:
    return Path(value) if value else None


def load_config(path: Optional[Path] = None) -> SandmanConfig:
    """读取配置文件，未给出路径时返回默认配置"""
    if path is None:
        return SandmanConfig()

    raw = load_toml(path)
    base = Path(path).parent
    prov = raw.get("provider", {})
    gen = raw.get("generation", {})
    paths = raw.get("paths", {})

    def rel(value: Optional[str], default: Path) -> Path:
        if not value:
            return default
        p = Path(value)
        return p if p.is_absolute() else base / p

    defaults = PathSettings()
    try:
        provider = ProviderSettings(
            kind=str(prov.get("kind", "mock")),
            endpoint=str(prov.get("endpoint", DEFAULT_ENDPOINT)),
            model_id=str(prov.get("model_id", DEFAULT_MODEL)),
            timeout_s=float(prov.get("timeout_s", 60.0)),
            retry_budget=int(prov.get("retry_budget", 3)),
            backoff_base_s=float(prov.get("backoff_base_s", 0.5)),
            max_in_flight=int(prov.get("max_in_flight", 4)),
            capture=_opt_path(prov.get("capture")),
            transcript=rel(prov.get("transcript"), Path()) if prov.get("transcript") else None,
        )
        return SandmanConfig(
            provider=provider,
            paths=PathSettings(
                lexicon=rel(paths.get("lexicon"), defaults.lexicon),
                item_bank=rel(paths.get("item_bank"), defaults.item_bank),
                catalog=rel(paths.get("catalog"), defaults.catalog),
                profile=rel(paths.get("profile"), defaults.profile),
                out=rel(paths.get("out"), defaults.out),
            ),
            temperature=float(gen.get("temperature", DEFAULT_TEMPERATURE)),
            seed=int(gen.get("seed", 0)),
            system_message=str(gen.get("system_message", DEFAULT_SYSTEM_MESSAGE)),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"配置值类型错误: {e}") from e


def apply_overrides(config: SandmanConfig, **overrides: Any) -> SandmanConfig:
    """命令行参数覆盖配置文件，值为 None 的项忽略"""
    provider_keys = {"kind", "capture", "transcript", "model_id", "endpoint"}
    path_keys = {"lexicon", "item_bank", "catalog", "profile", "out"}

    provider_changes = {
        k: v for k, v in overrides.items() if k in provider_keys and v is not None
    }
    path_changes = {
        k: Path(v) for k, v in overrides.items() if k in path_keys and v is not None
    }
    top_changes = {
        k: v
        for k, v in overrides.items()
        if k not in provider_keys | path_keys and v is not None
    }

    provider = replace(config.provider, **provider_changes)
    paths = replace(config.paths, **path_changes).resolved()
    return replace(config, provider=provider, paths=paths, **top_changes)
