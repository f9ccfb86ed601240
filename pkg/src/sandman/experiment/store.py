#!/usr/bin/env python3
"""
运行记录存储
目录布局：
  <out>/manifest.json                 计划、任务目录、存储格式版本
  <out>/<条件>/records.jsonl          每个样本一行，只追加
  <out>/<条件>/schedules/NNNNN.jsonl  合格日程的规范化文件
"""

import json
import logging
import re
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Set, Tuple

from ..errors import ConfigError, VersionError
from ..scheduler import (
    RejectReason,
    SampleOutcome,
    Schedule,
    TaskCatalog,
    TaskCategory,
    TaskDef,
    load_schedule,
    serialise_schedule,
)
from .plan import ExperimentPlan

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MANIFEST = "manifest.json"
RECORDS = "records.jsonl"


def label_slug(label: str) -> str:
    """条件标签转目录名，如 "C+" → "c_pos"，"Sys & Rand" → "sys_and_rand" """
    text = label.strip().lower().replace("+", "_pos").replace("&", "and")
    text = re.sub(r"-$", "_neg", text)
    return re.sub(r"[^a-z0-9]+", "_", text).strip("_") or "condition"


@dataclass(frozen=True)
class RunRecord:
    """一个样本的不可变记录"""

    condition: str
    index: int
    seed: int
    request: Dict[str, Any]
    task_order: Tuple[str, ...]
    raw_text: str
    schedule_ref: Optional[str] = None
    reject_reason: Optional[RejectReason] = None
    reject_detail: str = ""
    latency_s: float = 0.0
    attempts: int = 0

    @property
    def accepted(self) -> bool:
        return self.schedule_ref is not None

    def to_dict(self) -> Dict[str, Any]:
        outcome: Dict[str, Any]
        if self.schedule_ref is not None:
            outcome = {"schedule": self.schedule_ref}
        else:
            assert self.reject_reason is not None
            outcome = {"reject": self.reject_reason.value, "detail": self.reject_detail}
        return {
            "condition": self.condition,
            "index": self.index,
            "seed": self.seed,
            "request": self.request,
            "task_order": list(self.task_order),
            "raw_text": self.raw_text,
            "outcome": outcome,
            "timing": {"latency_s": self.latency_s, "attempts": self.attempts},
        }

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "RunRecord":
        outcome = raw["outcome"]
        timing = raw.get("timing", {})
        reject = outcome.get("reject")
        return cls(
            condition=str(raw["condition"]),
            index=int(raw["index"]),
            seed=int(raw["seed"]),
            request=dict(raw["request"]),
            task_order=tuple(raw.get("task_order", ())),
            raw_text=str(raw.get("raw_text", "")),
            schedule_ref=outcome.get("schedule"),
            reject_reason=RejectReason(reject) if reject else None,
            reject_detail=str(outcome.get("detail", "")),
            latency_s=float(timing.get("latency_s", 0.0)),
            attempts=int(timing.get("attempts", 0)),
        )


def _catalog_to_dict(catalog: TaskCatalog) -> List[Dict[str, Any]]:
    return [
        {
            "name": t.name,
            "abbreviation": t.abbreviation,
            "category": t.category.value,
            "aliases": list(t.aliases),
        }
        for t in catalog
    ]


def _catalog_from_dict(raw: List[Dict[str, Any]]) -> TaskCatalog:
    return TaskCatalog(
        tasks=tuple(
            TaskDef(
                name=r["name"],
                abbreviation=r["abbreviation"],
                category=TaskCategory(r["category"]),
                aliases=tuple(r.get("aliases", ())),
            )
            for r in raw
        )
    )


class RunStore:
    """一次实验的全部运行记录，写入由锁串行化"""

    def __init__(self, root: Path, manifest: Dict[str, Any]):
        self.root = root
        self.manifest = manifest
        self._lock = threading.Lock()
        self._catalog = _catalog_from_dict(manifest["catalog"])

    @classmethod
    def create(cls, root: Path, plan: ExperimentPlan, catalog: TaskCatalog, resume: bool = False) -> "RunStore":
        """为计划打开存储；已有记录时必须 resume，且计划与格式版本一致"""
        manifest_path = root / MANIFEST
        if manifest_path.exists():
            store = cls.open(root)
            if store.manifest["plan_digest"] != plan.digest():
                raise VersionError(f"{root} 中的记录来自不同的实验计划")
            if not resume and store.record_count() > 0:
                raise ConfigError(f"{root} 已存在运行记录，续跑请使用 --resume")
            # 样本数可以在续跑时调整
            store.manifest["plan"] = plan.to_dict()
            store._write_manifest()
            for label in plan.labels():
                store._repair(label)
            return store

        root.mkdir(parents=True, exist_ok=True)
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "plan": plan.to_dict(),
            "plan_digest": plan.digest(),
            "catalog": _catalog_to_dict(catalog),
            "conditions": {label: label_slug(label) for label in plan.labels()},
        }
        store = cls(root, manifest)
        store._write_manifest()
        return store

    @classmethod
    def open(cls, root: Path) -> "RunStore":
        """打开已有存储用于分析"""
        manifest_path = root / MANIFEST
        try:
            with open(manifest_path, "r", encoding="utf-8") as f:
                manifest = json.load(f)
        except FileNotFoundError as e:
            raise ConfigError(f"找不到运行记录: {manifest_path}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"清单文件损坏 {manifest_path}: {e}") from e
        version = manifest.get("schema_version")
        if version != SCHEMA_VERSION:
            raise VersionError(f"存储格式版本 {version} 与当前版本 {SCHEMA_VERSION} 不一致")
        return cls(root, manifest)

    def _write_manifest(self) -> None:
        with open(self.root / MANIFEST, "w", encoding="utf-8") as f:
            json.dump(self.manifest, f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write("\n")

    @property
    def catalog(self) -> TaskCatalog:
        return self._catalog

    @property
    def plan(self) -> Dict[str, Any]:
        return self.manifest["plan"]

    def labels(self) -> List[str]:
        return [c["label"] for c in self.plan["conditions"]]

    def condition(self, label: str) -> Dict[str, Any]:
        for c in self.plan["conditions"]:
            if c["label"] == label:
                return c
        raise KeyError(label)

    def condition_dir(self, label: str) -> Path:
        slug = self.manifest["conditions"].get(label) or label_slug(label)
        return self.root / slug

    def _repair(self, label: str) -> None:
        """截掉中断写入留下的不完整末行"""
        path = self.condition_dir(label) / RECORDS
        if not path.exists():
            return
        data = path.read_bytes()
        if not data or data.endswith(b"\n"):
            return
        keep = data[: data.rfind(b"\n") + 1]
        path.write_bytes(keep)
        logger.warning("条件 %s 的记录文件末行不完整，已截断 %d 字节", label, len(data) - len(keep))

    def write(self, outcome: SampleOutcome) -> RunRecord:
        """持久化一个样本：先写日程文件，再追加记录行"""
        with self._lock:
            directory = self.condition_dir(outcome.condition)
            schedule_ref = None
            reason = None
            detail = ""
            if isinstance(outcome.result, Schedule):
                schedule_ref = f"schedules/{outcome.index:05d}.jsonl"
                target = directory / schedule_ref
                target.parent.mkdir(parents=True, exist_ok=True)
                target.write_text(serialise_schedule(outcome.result), encoding="utf-8")
            else:
                reason = outcome.result.reason
                detail = outcome.result.detail

            record = RunRecord(
                condition=outcome.condition,
                index=outcome.index,
                seed=outcome.seed,
                request=outcome.request.snapshot(),
                task_order=outcome.task_order,
                raw_text=outcome.raw_text,
                schedule_ref=schedule_ref,
                reject_reason=reason,
                reject_detail=detail,
                latency_s=outcome.latency_s,
                attempts=outcome.attempts,
            )
            directory.mkdir(parents=True, exist_ok=True)
            with open(directory / RECORDS, "a", encoding="utf-8") as f:
                f.write(json.dumps(record.to_dict(), sort_keys=True, ensure_ascii=False) + "\n")
                f.flush()
        return record

    def records(self, label: str) -> List[RunRecord]:
        """按样本序号排列的记录，重复序号只保留第一条"""
        path = self.condition_dir(label) / RECORDS
        if not path.exists():
            return []
        seen: Dict[int, RunRecord] = {}
        with open(path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    record = RunRecord.from_dict(json.loads(line))
                except (json.JSONDecodeError, KeyError, ValueError) as e:
                    logger.warning("%s:%d 记录无法读取，已跳过: %s", path, lineno, e)
                    continue
                seen.setdefault(record.index, record)
        return [seen[i] for i in sorted(seen)]

    def existing_indices(self, label: str) -> Set[int]:
        return {r.index for r in self.records(label)}

    def record_count(self) -> int:
        return sum(len(self.records(label)) for label in self.labels())

    def load_schedule(self, label: str, record: RunRecord) -> Schedule:
        assert record.schedule_ref is not None
        text = (self.condition_dir(label) / record.schedule_ref).read_text(encoding="utf-8")
        return load_schedule(text)

    def accepted(self, label: str) -> List[Tuple[RunRecord, Schedule]]:
        return [(r, self.load_schedule(label, r)) for r in self.records(label) if r.accepted]

    def rejects(self, label: str) -> List[RunRecord]:
        return [r for r in self.records(label) if not r.accepted]

    def write_json(self, name: str, payload: Dict[str, Any]) -> Path:
        path = self.root / name
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write("\n")
        return path
