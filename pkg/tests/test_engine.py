"""智能体运行时测试"""

import string

import numpy as np
import pytest

from sandman.errors import BootstrapFailed, ChannelUnbound, ConfigError, TaskStateError
from sandman.llm_gateway import MockBehaviour, MockChatProvider
from sandman.engine import (
    BACKSPACE,
    DAY_COMPLETE,
    ActionKind,
    ActionLog,
    Agent,
    ChannelRegistry,
    EpisodicMemory,
    EventKind,
    SimClock,
    TaskList,
    TaskStatus,
    TypingProfile,
    WorkingMemory,
    default_registry,
    load_action_log,
    load_episodic_log,
    load_profile,
    reconstruct,
    replay,
    simulate_typing,
)
from sandman.persona import persona_for_label
from sandman.scheduler import GenerationCondition, rule_based_plan


@pytest.fixture
def profile(lexicon):
    return load_profile(lexicon)


def make_agent(profile, catalog, tmp_path=None, provider=None, **kwargs):
    action_log = ActionLog(tmp_path / "actions.jsonl" if tmp_path else None)
    episodic = EpisodicMemory(tmp_path / "episodic.jsonl" if tmp_path else None)
    return Agent(
        profile,
        catalog,
        provider or MockChatProvider(seed=0),
        action_log=action_log,
        episodic=episodic,
        seed=kwargs.pop("seed", 3),
        **kwargs,
    )


class TestTyping:
    def test_reconstructs_content(self):
        content = "Quarterly numbers attached, see the notes below."
        strokes = simulate_typing(content, TypingProfile(mistake_prob=0.3), seed=4)
        assert reconstruct([s.key for s in strokes]) == content
        assert any(s.key == BACKSPACE for s in strokes)

    def test_first_key_after_one_interval(self):
        profile = TypingProfile(wpm_mean=40.0, wpm_std=0.0, mistake_prob=0.0, jitter=0.0)
        strokes = simulate_typing("hello", profile, seed=0)
        assert len(strokes) == 5
        assert strokes[0].offset_s == pytest.approx(60.0 / (40.0 * 5))
        assert strokes[-1].offset_s == pytest.approx(5 * 0.3)

    def test_duration_closed_form(self):
        """40 wpm 下 1000 个字符约 300 秒"""
        content = ("lorem ipsum " * 100)[:1000]
        steady = TypingProfile(wpm_mean=40.0, wpm_std=0.0, mistake_prob=0.0, jitter=0.0)
        strokes = simulate_typing(content, steady, seed=3)
        assert len(strokes) == 1000
        assert strokes[-1].offset_s == pytest.approx(300.0)
        jittered = TypingProfile(wpm_mean=40.0, wpm_std=0.0, mistake_prob=0.0, jitter=0.25)
        assert simulate_typing(content, jittered, seed=3)[-1].offset_s == pytest.approx(300.0, rel=0.03)

    def test_offsets_increase(self):
        strokes = simulate_typing("some text to type", TypingProfile(), seed=9)
        offsets = [s.offset_s for s in strokes]
        assert offsets == sorted(offsets)
        assert offsets[0] > 0

    def test_deterministic(self):
        a = simulate_typing("abc def", TypingProfile(), seed=1)
        b = simulate_typing("abc def", TypingProfile(), seed=1)
        assert a == b

    @pytest.mark.parametrize("mistake_prob", [0.0, 0.02, 0.3])
    def test_reconstruction_property(self, mistake_prob):
        rng = np.random.default_rng(1000)
        alphabet = list(string.ascii_letters + string.digits + " .,;!?\n")
        profile = TypingProfile(mistake_prob=mistake_prob)
        for i in range(1000):
            content = "".join(rng.choice(alphabet, int(rng.integers(0, 40))))
            strokes = simulate_typing(content, profile, seed=i)
            assert reconstruct([s.key for s in strokes]) == content
            offsets = [s.offset_s for s in strokes]
            assert offsets == sorted(offsets)

    def test_backspace_on_empty_buffer(self):
        assert reconstruct([BACKSPACE, "a", BACKSPACE, BACKSPACE, "b"]) == "b"

    @pytest.mark.parametrize("kwargs", [{"wpm_mean": 0}, {"wpm_std": -1}, {"mistake_prob": 1.0}, {"jitter": 1.5}])
    def test_invalid_profile(self, kwargs):
        with pytest.raises(ConfigError):
            TypingProfile(**kwargs)


class TestClock:
    def test_never_goes_back(self):
        clock = SimClock()
        clock.advance(10)
        assert clock.advance_to(5) == 10
        assert clock.advance(-3) == 10

    def test_speed_scales_sleep(self):
        slept = []
        clock = SimClock(speed=0.5, sleeper=slept.append)
        clock.advance(10)
        assert slept == [5.0]
        assert clock.now == 10

    def test_zero_speed_never_sleeps(self):
        slept = []
        SimClock(sleeper=slept.append).advance(3600)
        assert slept == []

    def test_negative_speed(self):
        with pytest.raises(ValueError):
            SimClock(speed=-1)


class TestMemory:
    def test_episodic_persisted(self, tmp_path):
        path = tmp_path / "episodic.jsonl"
        memory = EpisodicMemory(path)
        memory.append(0.0, EventKind.PLAN_CREATED, {"day": 0, "tasks": 2})
        memory.append(60.0, EventKind.TASK_STARTED, {"task": "Work", "slot": 0})
        loaded = load_episodic_log(path)
        assert [e.seq for e in loaded] == [0, 1]
        assert loaded == list(memory.events)
        assert memory.count(EventKind.TASK_STARTED) == 1
        assert [e.summary() for e in memory.recent(1)] == ["Started Work"]
        assert memory.recent(0) == []

    def test_working_memory_cleared_each_step(self, profile, catalog):
        agent = make_agent(profile, catalog, planner="rule")
        agent.bootstrap()
        agent.memory.working["scratch"] = 1
        task = agent.decision_step()
        assert "scratch" not in agent.memory.working
        assert agent.memory.working["task"] == task.task.name

    def test_working_memory_basics(self):
        memory = WorkingMemory()
        memory.update({"a": 1})
        assert memory.get("b", 2) == 2
        assert len(memory) == 1
        memory.clear()
        assert "a" not in memory


class TestTasks:
    def test_state_transitions(self, catalog):
        tasks = TaskList.from_schedule(rule_based_plan(catalog, order=["Work", "Lunch"]), catalog)
        first = tasks.next_pending()
        with pytest.raises(TaskStateError):
            first.finish()
        first.start()
        with pytest.raises(TaskStateError):
            first.start()
        first.finish()
        assert first.status is TaskStatus.DONE
        assert tasks.next_pending() is tasks[1]
        assert len(tasks.pending()) == 1

    def test_add_extends_slots(self, catalog):
        tasks = TaskList()
        tasks.add(catalog.get("Work"), 540, 60)
        added = tasks.add(catalog.get("Call"), 600, 15)
        assert added.slot == 1
        assert tasks.counts()[TaskStatus.PENDING] == 2


class TestChannels:
    def test_routing(self, catalog):
        registry = default_registry()
        assert registry.resolve(catalog.get("Email")).name == "document"
        assert registry.resolve(catalog.get("Research")).name == "web"
        assert registry.resolve(catalog.get("Lunch")).name == "log"

    def test_unbound_task(self, catalog):
        with pytest.raises(ChannelUnbound):
            ChannelRegistry().resolve(catalog.get("Lunch"))

    def test_action_log_round_trip(self, tmp_path, profile, catalog):
        agent = make_agent(profile, catalog, tmp_path, planner="rule")
        agent.run_day()
        loaded = load_action_log(tmp_path / "actions.jsonl")
        assert [(e.channel, e.kind, e.payload) for e in loaded] == [
            (e.channel, e.kind, e.payload) for e in agent.action_log.events
        ]
        assert [e.t for e in loaded] == pytest.approx([e.t for e in agent.action_log.events], abs=1e-6)


class TestAgent:
    def test_rule_planner_day(self, profile, catalog, tmp_path):
        agent = make_agent(profile, catalog, tmp_path, planner="rule")
        state = agent.run_day()
        assert [name for _, name, _, _ in state.tasks] == rule_based_plan(catalog).task_names()
        assert state.counts()["Done"] == len(state.tasks)
        assert agent.decision_step() is DAY_COMPLETE
        kinds = {e.kind for e in agent.action_log.events}
        assert {ActionKind.OPEN, ActionKind.KEY_PRESS, ActionKind.NAVIGATE, ActionKind.LOG} <= kinds
        assert (tmp_path / "episodic.jsonl").exists()

    def test_llm_planner_day(self, profile, catalog):
        agent = make_agent(profile, catalog)
        state = agent.run_day()
        assert state.tasks
        assert all(status == "Done" for _, _, status, _ in state.tasks)
        plan = agent.memory.episodic.events[0]
        assert plan.kind is EventKind.PLAN_CREATED
        assert plan.data["source"] == "llm"

    def test_action_timestamps_non_decreasing(self, profile, catalog):
        agent = make_agent(profile, catalog)
        agent.run_day()
        times = [e.t for e in agent.action_log.events]
        assert times == sorted(times)

    def test_deterministic(self, profile, catalog):
        first = make_agent(profile, catalog)
        second = make_agent(profile, catalog)
        assert first.run_day() == second.run_day()
        assert first.action_log.events == second.action_log.events

    def test_second_day_offsets_clock(self, profile, catalog):
        agent = make_agent(profile, catalog, planner="rule")
        state = agent.run_day(day=1)
        assert state.day == 1
        assert agent.action_log.events[0].t >= 86400.0

    def test_replay_matches_snapshot(self, profile, catalog, tmp_path):
        agent = make_agent(profile, catalog, tmp_path)
        agent.bootstrap()
        agent.add_task(catalog.get("Reflect"), 23 * 60, 30)
        while True:
            step = agent.decision_step()
            if step is DAY_COMPLETE:
                break
            agent.execute_task(step)
        replayed = replay(tmp_path / "actions.jsonl", tmp_path / "episodic.jsonl")
        assert replayed == agent.snapshot()
        assert replayed.tasks[-1][1] == "Reflect"

    def test_replay_rejects_gaps(self, tmp_path):
        path = tmp_path / "episodic.jsonl"
        path.write_text(
            '{"seq": 0, "t": 0.0, "kind": "PlanCreated", "data": {"day": 0, "entries": []}}\n'
            '{"seq": 2, "t": 1.0, "kind": "PlanCreated", "data": {"day": 0, "entries": []}}\n',
            encoding="utf-8",
        )
        with pytest.raises(ValueError):
            replay(None, path)

    def test_execute_requires_active(self, profile, catalog):
        agent = make_agent(profile, catalog, planner="rule")
        agent.bootstrap()
        with pytest.raises(TaskStateError):
            agent.execute_task(agent.tasks[0])

    def test_bootstrap_failed_after_retries(self, profile, catalog):
        garbage = [{"text": "I'd rather not."}] * 3
        provider = MockChatProvider(behaviour=MockBehaviour.SCRIPTED, transcript=garbage)
        agent = make_agent(profile, catalog, provider=provider, retry_budget=2)
        with pytest.raises(BootstrapFailed, match="Unparseable"):
            agent.bootstrap()

    def test_bootstrap_retry_recovers(self, profile, catalog):
        transcript = [{"text": "nope"}, {"text": "09:00 - 10:00 | Lunch"}]
        provider = MockChatProvider(behaviour=MockBehaviour.SCRIPTED, transcript=transcript)
        agent = make_agent(profile, catalog, provider=provider, retry_budget=1)
        tasks = agent.bootstrap()
        assert [t.task.name for t in tasks] == ["Lunch"]

    def test_content_failure_recorded(self, profile, catalog):
        provider = MockChatProvider(behaviour=MockBehaviour.SCRIPTED, transcript=[{"text": "09:00 - 10:00 | Email"}])
        agent = make_agent(profile, catalog, provider=provider)
        state = agent.run_day()
        (_, name, status, failure), = state.tasks
        assert (name, status) == ("Email", "Done")
        assert failure.startswith("TransportError")

    def test_unknown_planner(self, profile, catalog):
        with pytest.raises(ValueError):
            make_agent(profile, catalog, planner="oracle")

    def test_profile_condition_override(self, lexicon):
        profile = load_profile(lexicon, condition="N+")
        assert profile.persona.label == "N+"
        assert profile.name == "Alex Morgan"

    def test_generator_uses_condition_persona(self, profile, catalog, lexicon):
        persona = persona_for_label(lexicon, "C+")
        condition = GenerationCondition(label="C+", persona=persona)
        agent = make_agent(profile, catalog, planner="rule", condition=condition)
        tasks = agent.bootstrap()
        request = agent.generator.build_request(tasks[0], "document", agent.memory, seed=1)
        assert profile.persona.is_neutral
        assert request.user_message.startswith(persona.text + ".")
