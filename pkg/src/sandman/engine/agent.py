#!/usr/bin/env python3
"""
智能体决策引擎
引导任务生成日程，决策循环按槽位顺序逐个执行任务
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple, Union

from ..config import DEFAULT_MODEL, DEFAULT_TEMPERATURE
from ..errors import BootstrapFailed, ProviderError, TaskStateError
from ..llm_gateway import ChatProvider
from ..scheduler import (
    GenerationCondition,
    RejectRecord,
    Schedule,
    TaskCatalog,
    TaskDef,
    generate_one,
    rule_based_plan,
)
from ..seeding import derive_seed
from .channels import ActionEvent, ActionLog, ChannelRegistry, default_registry
from .clock import SECONDS_PER_DAY, SimClock
from .generators import ContentGenerator
from .memory import EpisodicMemory, EventKind, MemoryStores, ProceduralMemory, SemanticMemory
from .profile import AgentProfile
from .tasks import TaskInstance, TaskList, TaskStatus

logger = logging.getLogger(__name__)

PLANNERS = ("llm", "rule")


class DayComplete:
    """当天任务全部完成"""

    def __repr__(self) -> str:
        return "DAY_COMPLETE"


DAY_COMPLETE = DayComplete()

# (槽位, 任务名, 状态, 失败说明)
TaskSnapshot = Tuple[int, str, str, Optional[str]]


@dataclass(frozen=True)
class AgentState:
    """可由日志重建的智能体状态"""

    day: int
    tasks: Tuple[TaskSnapshot, ...]
    episodic_events: int
    clock_s: float

    def counts(self) -> Dict[str, int]:
        result = {s.value: 0 for s in TaskStatus}
        for _, _, status, _ in self.tasks:
            result[status] += 1
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {
            "day": self.day,
            "tasks": [
                {"slot": slot, "task": name, "status": status, "failure": failure}
                for slot, name, status, failure in self.tasks
            ],
            "episodic_events": self.episodic_events,
            "clock_s": self.clock_s,
        }


class Agent:
    """单个智能体，决策循环单线程执行"""

    def __init__(
        self,
        profile: AgentProfile,
        catalog: TaskCatalog,
        provider: ChatProvider,
        condition: Optional[GenerationCondition] = None,
        registry: Optional[ChannelRegistry] = None,
        clock: Optional[SimClock] = None,
        action_log: Optional[ActionLog] = None,
        episodic: Optional[EpisodicMemory] = None,
        seed: int = 0,
        planner: str = "llm",
        retry_budget: int = 2,
        temperature: float = DEFAULT_TEMPERATURE,
        model_id: str = DEFAULT_MODEL,
    ):
        if planner not in PLANNERS:
            raise ValueError(f"未知的规划方式: {planner}")
        self.profile = profile
        self.catalog = catalog
        self.provider = provider
        self.condition = condition or GenerationCondition(label=profile.persona.label, persona=profile.persona)
        self.registry = registry or default_registry(typing=profile.typing)
        self.clock = clock or SimClock()
        self.action_log = action_log or ActionLog()
        self.memory = MemoryStores(
            semantic=SemanticMemory(profile_text=profile.semantic_text(), facts=dict(profile.facts)),
            episodic=episodic or EpisodicMemory(),
            procedural=ProceduralMemory(recent_events=profile.recent_events),
        )
        self.generator = ContentGenerator(
            provider,
            profile,
            persona=self.condition.persona,
            temperature=temperature,
            model_id=model_id,
        )
        self.seed = seed
        self.planner = planner
        self.retry_budget = retry_budget
        self.temperature = temperature
        self.model_id = model_id
        self.tasks = TaskList()
        self.day = 0

    def _plan(self, day: int) -> Tuple[Schedule, str]:
        if self.planner == "rule":
            return rule_based_plan(self.catalog), "rule"

        day_seed = derive_seed(self.seed, "day", day)
        last: Optional[RejectRecord] = None
        for attempt in range(self.retry_budget + 1):
            outcome = generate_one(
                self.provider,
                self.condition,
                self.catalog,
                attempt,
                day_seed,
                profile_text=self.memory.semantic.describe(),
                temperature=self.temperature,
                model_id=self.model_id,
            )
            if isinstance(outcome.result, Schedule):
                return outcome.result, "llm"
            last = outcome.result
            logger.warning("第 %d 次规划被拒收: %s", attempt + 1, last.reason.value)
        reason = last.reason.value if last else "unknown"
        raise BootstrapFailed(f"重试 {self.retry_budget} 次后仍未得到合格日程 (最后原因: {reason})")

    def bootstrap(self, day: int = 0) -> TaskList:
        """生成当天日程并填充任务列表，记录一条 PlanCreated 事件"""
        schedule, source = self._plan(day)
        self.day = day
        self.tasks = TaskList.from_schedule(schedule, self.catalog)
        self.clock.advance_to(day * SECONDS_PER_DAY)
        self.memory.episodic.append(
            self.clock.now,
            EventKind.PLAN_CREATED,
            {
                "day": day,
                "source": source,
                "tasks": len(self.tasks),
                "entries": [e.to_dict() for e in schedule.entries],
            },
        )
        logger.info("第 %d 天日程已生成，共 %d 项任务", day, len(self.tasks))
        return self.tasks

    def add_task(self, task: TaskDef, start_min: int, duration_min: int) -> TaskInstance:
        """当天追加任务，排在现有任务之后"""
        instance = self.tasks.add(task, start_min, duration_min)
        self.memory.episodic.append(
            self.clock.now,
            EventKind.TASK_ADDED,
            {"task": task.name, "slot": instance.slot, "start_min": start_min, "duration_min": duration_min},
        )
        return instance

    def decision_step(self) -> Union[TaskInstance, DayComplete]:
        """选择下一个待办任务并置为 Active"""
        self.memory.working.clear()
        task = self.tasks.next_pending()
        if task is None:
            return DAY_COMPLETE
        task.start()
        self.memory.working.update(
            {"task": task.task.name, "slot": task.slot, "start_min": task.start_min, "end_min": task.end_min}
        )
        return task

    def execute_task(self, task: TaskInstance) -> List[ActionEvent]:
        """通过通道执行任务；生成内容失败时任务照常完成并附带失败说明"""
        if task.status is not TaskStatus.ACTIVE:
            raise TaskStateError(f"任务 {task.task.name}#{task.slot} 未处于 Active 状态")
        channel = self.registry.resolve(task.task)
        day_offset = self.day * SECONDS_PER_DAY
        self.clock.advance_to(day_offset + task.start_min * 60)
        self.memory.episodic.append(
            self.clock.now,
            EventKind.TASK_STARTED,
            {"task": task.task.name, "slot": task.slot, "channel": channel.name},
        )

        content = ""
        failure: Optional[str] = None
        if channel.content_kind is not None:
            try:
                content = self.generator.generate(
                    task,
                    channel.content_kind,
                    self.memory,
                    seed=derive_seed(self.seed, "content", self.day, task.slot),
                )
            except ProviderError as e:
                failure = f"{type(e).__name__}: {e}"
                logger.warning("任务 %s 内容生成失败: %s", task.task.name, e)

        events = channel.emit(task, content, self.clock.now, derive_seed(self.seed, "typing", self.day, task.slot))
        self.action_log.append(events)
        finished_at = max(events[-1].t if events else self.clock.now, day_offset + task.end_min * 60)
        self.clock.advance_to(finished_at)

        task.finish(failure)
        self.memory.episodic.append(
            self.clock.now,
            EventKind.TASK_FINISHED,
            {"task": task.task.name, "slot": task.slot, "actions": len(events), "failure": failure},
        )
        return events

    def run_day(self, day: int = 0) -> AgentState:
        """引导并执行一整天"""
        self.bootstrap(day)
        while True:
            step = self.decision_step()
            if isinstance(step, DayComplete):
                break
            self.execute_task(step)
        counts = self.tasks.counts()
        logger.info("第 %d 天完成: %d 项任务，%d 个动作", day, counts[TaskStatus.DONE], len(self.action_log))
        return self.snapshot()

    def snapshot(self) -> AgentState:
        return AgentState(
            day=self.day,
            tasks=tuple((t.slot, t.task.name, t.status.value, t.failure) for t in self.tasks),
            episodic_events=len(self.memory.episodic),
            clock_s=self.clock.now,
        )
