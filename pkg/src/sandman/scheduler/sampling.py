#!/usr/bin/env python3
"""
日程采样
对一个生成条件发出 n 次引导请求，解析并划分为合格日程与拒收记录
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Tuple, Union

from ..config import DEFAULT_MODEL, DEFAULT_TEMPERATURE
from ..errors import AuthError, ProviderError
from ..llm_gateway import ChatProvider, ChatRequest
from ..seeding import derive_seed
from .catalog import TaskCatalog
from .parser import parse_schedule
from .prompts import GenerationCondition, build_bootstrap_prompt, presented_order
from .schedule import RejectReason, RejectRecord, Schedule

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SampleOutcome:
    """单个样本的请求、原始输出与解析结果"""

    condition: str
    index: int
    seed: int
    request: ChatRequest
    task_order: Tuple[str, ...]
    raw_text: str
    result: Union[Schedule, RejectRecord]
    latency_s: float = 0.0
    attempts: int = 0

    @property
    def accepted(self) -> bool:
        return isinstance(self.result, Schedule)


@dataclass
class SampleSet:
    """一个条件下的全部样本，按样本序号排列"""

    label: str
    outcomes: List[SampleOutcome] = field(default_factory=list)

    @property
    def schedules(self) -> List[Schedule]:
        return [o.result for o in self.outcomes if isinstance(o.result, Schedule)]

    @property
    def rejects(self) -> List[RejectRecord]:
        return [o.result for o in self.outcomes if isinstance(o.result, RejectRecord)]

    def __len__(self) -> int:
        return len(self.outcomes)


def sample_seed(master_seed: int, label: str, index: int) -> int:
    """样本子种子，可由 (主种子, 条件, 序号) 重新计算"""
    return derive_seed(master_seed, label, index)


def generate_one(
    provider: ChatProvider,
    condition: GenerationCondition,
    catalog: TaskCatalog,
    index: int,
    master_seed: int,
    profile_text: str = "",
    temperature: float = DEFAULT_TEMPERATURE,
    model_id: str = DEFAULT_MODEL,
) -> SampleOutcome:
    """生成并解析一个样本

    认证以外的提供方错误（含重试耗尽）记为 Transport 拒收；认证错误向上抛出。
    """
    seed = sample_seed(master_seed, condition.label, index)
    order = presented_order(condition, catalog, seed)
    request = build_bootstrap_prompt(
        condition,
        order,
        profile_text=profile_text,
        temperature=temperature,
        model_id=model_id,
        seed=seed,
    )

    try:
        response = provider.complete(request)
    except AuthError:
        raise
    except ProviderError as e:
        logger.warning("条件 %s 样本 %d 请求失败: %s", condition.label, index, e)
        reject = RejectRecord(
            condition=condition.label,
            sample_index=index,
            reason=RejectReason.TRANSPORT,
            raw_text="",
            detail=str(e),
        )
        return SampleOutcome(condition.label, index, seed, request, tuple(order), "", reject)

    result = parse_schedule(response.text, catalog, condition.label, index)
    if isinstance(result, RejectRecord):
        logger.info("条件 %s 样本 %d 拒收: %s", condition.label, index, result.reason.value)
    return SampleOutcome(
        condition=condition.label,
        index=index,
        seed=seed,
        request=request,
        task_order=tuple(order),
        raw_text=response.text,
        result=result,
        latency_s=response.latency_s,
        attempts=response.attempts,
    )


def generate_samples(
    provider: ChatProvider,
    condition: GenerationCondition,
    catalog: TaskCatalog,
    n: int,
    seed: int,
    profile_text: str = "",
    sink: Optional[Callable[[SampleOutcome], None]] = None,
    indices: Optional[Iterable[int]] = None,
    temperature: float = DEFAULT_TEMPERATURE,
    model_id: str = DEFAULT_MODEL,
) -> SampleSet:
    """为一个条件生成 n 个样本

    请求按提供方的并发上限并行发出，结果按序号顺序交给 sink 持久化。
    indices 用于续跑时只补齐缺失的样本。
    """
    if n < 1:
        raise ValueError(f"样本数至少为 1: {n}")
    todo = sorted(set(indices)) if indices is not None else list(range(n))

    def work(index: int) -> SampleOutcome:
        return generate_one(
            provider,
            condition,
            catalog,
            index,
            seed,
            profile_text=profile_text,
            temperature=temperature,
            model_id=model_id,
        )

    sample_set = SampleSet(label=condition.label)
    if not todo:
        return sample_set

    with ThreadPoolExecutor(max_workers=min(provider.max_in_flight, len(todo))) as executor:
        for outcome in executor.map(work, todo):
            if sink is not None:
                sink(outcome)
            sample_set.outcomes.append(outcome)

    logger.info(
        "条件 %s: 合格 %d, 拒收 %d",
        condition.label,
        len(sample_set.schedules),
        len(sample_set.rejects),
    )
    return sample_set
