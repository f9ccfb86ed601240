#!/usr/bin/env python3
"""
实验执行
逐条件生成样本并写入存储，可中断后续跑
"""

import logging
import time
from typing import Optional

from ..collector import HostCollector
from ..config import DEFAULT_MODEL, DEFAULT_TEMPERATURE
from ..llm_gateway import ChatProvider
from ..scheduler import TaskCatalog, generate_samples
from .plan import ExperimentPlan
from .store import RunStore

logger = logging.getLogger(__name__)

PROVENANCE = "provenance.json"


def run_experiment(
    plan: ExperimentPlan,
    provider: ChatProvider,
    catalog: TaskCatalog,
    profile_text: str = "",
    resume: bool = False,
    temperature: float = DEFAULT_TEMPERATURE,
    model_id: str = DEFAULT_MODEL,
    collector: Optional[HostCollector] = None,
) -> RunStore:
    """为每个 条件×序号 生成恰好一条记录

    已存在的记录在续跑时跳过；不可恢复的提供方错误向上抛出，已写入的记录保留。
    """
    store = RunStore.create(plan.out, plan, catalog, resume=resume)
    collector = collector or HostCollector()
    started = time.monotonic()

    for condition in plan.conditions:
        done = store.existing_indices(condition.label)
        todo = [i for i in range(plan.samples_per_condition) if i not in done]
        if done:
            logger.info("条件 %s 已有 %d 条记录，补齐 %d 条", condition.label, len(done), len(todo))
        if not todo:
            continue
        generate_samples(
            provider,
            condition,
            catalog,
            plan.samples_per_condition,
            plan.seed,
            profile_text=profile_text,
            sink=store.write,
            indices=todo,
            temperature=temperature,
            model_id=model_id,
        )

    store.write_json(PROVENANCE, collector.provenance(wall_time_s=time.monotonic() - started))
    logger.info("实验 %s 完成，共 %d 条记录", plan.name, store.record_count())
    return store
