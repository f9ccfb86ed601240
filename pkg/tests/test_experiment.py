"""实验计划、运行存储、执行与分析测试"""

import json
from pathlib import Path

import numpy as np
import pytest

from sandman.errors import ConfigError, ControlMissing, VersionError
from sandman.experiment import (
    SCHEMA_VERSION,
    ExperimentPlan,
    ReportTables,
    RunStore,
    analyze,
    label_slug,
    load_plan,
    mpi_rows,
    run_experiment,
)
from sandman.llm_gateway import ChatRequest, MockChatProvider
from sandman.psychometrics import run_mpi_study
from sandman.reporter import render_report
from sandman.persona import OceanFactor, TraitDirection
from sandman.scheduler import (
    GenerationCondition,
    RejectReason,
    RejectRecord,
    SampleOutcome,
    Schedule,
    ScheduleEntry,
    load_catalog,
)

PLAN_TOML = """
[experiment]
name = "small"
samples = 20
seed = 4
provider = "mock"
out = "{out}"
control = "Neutral"

[[condition]]
label = "Neutral"

[[condition]]
label = "C+"
persona = "C+"
randomise_order = true
"""


def write_plan(tmp_path, out, text=PLAN_TOML):
    path = tmp_path / "plan.toml"
    path.write_text(text.format(out=out.as_posix()), encoding="utf-8")
    return path


def day(*durations, tasks=("Work", "Lunch", "Email"), extra=()):
    entries = []
    t = 8 * 60
    for name, duration in list(zip(tasks, durations)) + list(extra):
        entries.append(ScheduleEntry(name, t, int(duration)))
        t += int(duration)
    return Schedule(tuple(entries))


def outcome(label, index, result, order=()):
    return SampleOutcome(label, index, index, ChatRequest("plan", seed=index), tuple(order), "raw", result)


def synthetic_store(tmp_path, control_days, condition_days, rejects=0):
    plan = ExperimentPlan(
        name="synthetic",
        conditions=(GenerationCondition(label="Neutral"), GenerationCondition(label="C+")),
        samples_per_condition=max(len(control_days), len(condition_days) + rejects),
        out=tmp_path / "store",
    )
    store = RunStore.create(plan.out, plan, load_catalog())
    for i, schedule in enumerate(control_days):
        store.write(outcome("Neutral", i, schedule))
    for i, schedule in enumerate(condition_days):
        store.write(outcome("C+", i, schedule))
    for j in range(rejects):
        index = len(condition_days) + j
        store.write(outcome("C+", index, RejectRecord("C+", index, RejectReason.OVERLAP, "raw")))
    return store


def control_durations(n=60, seed=2):
    rng = np.random.default_rng(seed)
    return [
        (max(5, rng.normal(64, 19)), max(5, rng.normal(55, 10)), max(5, rng.normal(30, 8)))
        for _ in range(n)
    ]


class TestPlan:
    def test_load_custom_plan(self, tmp_path, lexicon):
        plan = load_plan(write_plan(tmp_path, tmp_path / "out"), lexicon)
        assert plan.labels() == ["Neutral", "C+"]
        assert plan.samples_per_condition == 20
        assert plan.condition("C+").randomise_order
        assert plan.condition("C+").persona.label == "C+"

    def test_presets(self, lexicon):
        persona = load_plan(Path("persona"), lexicon)
        assert len(persona.conditions) == 11
        assert persona.control == "Neutral"
        interventions = load_plan(Path("interventions"), lexicon)
        assert interventions.labels() == ["Baseline", "Sys", "Rand", "Sys & Rand"]
        assert interventions.control == "Baseline"

    def test_duplicate_labels(self, tmp_path, lexicon):
        text = PLAN_TOML.replace('label = "C+"', 'label = "Neutral"')
        with pytest.raises(ConfigError):
            load_plan(write_plan(tmp_path, tmp_path / "out", text), lexicon)

    def test_unknown_preset(self, tmp_path, lexicon):
        text = PLAN_TOML.replace('name = "small"', 'name = "small"\npreset = "moods"')
        with pytest.raises(ConfigError):
            load_plan(write_plan(tmp_path, tmp_path / "out", text), lexicon)

    def test_digest_ignores_sample_count(self, tmp_path, lexicon):
        plan = load_plan(write_plan(tmp_path, tmp_path / "out"), lexicon)
        assert plan.with_overrides(samples=5, provider="real").digest() == plan.digest()
        assert plan.with_overrides(seed=5).digest() != plan.digest()

    @pytest.mark.parametrize("label, slug", [("C+", "c_pos"), ("N-", "n_neg"), ("Sys & Rand", "sys_and_rand"), ("Neutral", "neutral")])
    def test_label_slug(self, label, slug):
        assert label_slug(label) == slug


class TestRunExperiment:
    def test_one_record_per_sample(self, tmp_path, lexicon, catalog):
        plan = load_plan(write_plan(tmp_path, tmp_path / "out"), lexicon)
        store = run_experiment(plan, MockChatProvider(seed=0), catalog)
        for label in plan.labels():
            records = store.records(label)
            assert [r.index for r in records] == list(range(20))
            for record in records:
                assert record.request["temperature"] == 0.7
                assert record.accepted != (record.reject_reason is not None)
        assert (tmp_path / "out" / "provenance.json").exists()
        assert store.accepted("Neutral")

    def test_randomised_condition_records_order(self, tmp_path, lexicon, catalog):
        plan = load_plan(write_plan(tmp_path, tmp_path / "out"), lexicon)
        store = run_experiment(plan, MockChatProvider(seed=0), catalog)
        fixed = {r.task_order for r in store.records("Neutral")}
        shuffled = {r.task_order for r in store.records("C+")}
        assert fixed == {tuple(catalog.names())}
        assert len(shuffled) > 1

    def test_resume_adds_no_duplicates(self, tmp_path, lexicon, catalog):
        plan = load_plan(write_plan(tmp_path, tmp_path / "out"), lexicon)
        run_experiment(plan.with_overrides(samples=10), MockChatProvider(seed=0), catalog)
        store = run_experiment(plan, MockChatProvider(seed=0), catalog, resume=True)
        lines = (store.condition_dir("Neutral") / "records.jsonl").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 20
        assert store.record_count() == 40

    def test_resumed_store_matches_fresh_run(self, tmp_path, lexicon, catalog):
        plan = load_plan(write_plan(tmp_path, tmp_path / "a"), lexicon)
        run_experiment(plan.with_overrides(samples=7), MockChatProvider(seed=0), catalog)
        resumed = run_experiment(plan, MockChatProvider(seed=0), catalog, resume=True)
        fresh = run_experiment(plan.with_overrides(out=tmp_path / "b"), MockChatProvider(seed=0), catalog)
        for label in plan.labels():
            assert resumed.records(label) == fresh.records(label)

    def test_byte_identical_reruns(self, tmp_path, lexicon, catalog):
        plan = load_plan(write_plan(tmp_path, tmp_path / "a"), lexicon)
        first = run_experiment(plan, MockChatProvider(seed=0), catalog)
        second = run_experiment(plan.with_overrides(out=tmp_path / "b"), MockChatProvider(seed=0), catalog)
        for label in plan.labels():
            a = first.condition_dir(label)
            b = second.condition_dir(label)
            assert (a / "records.jsonl").read_bytes() == (b / "records.jsonl").read_bytes()
            assert sorted(p.name for p in (a / "schedules").iterdir()) == sorted(p.name for p in (b / "schedules").iterdir())
        assert (tmp_path / "a" / "manifest.json").read_bytes() == (tmp_path / "b" / "manifest.json").read_bytes()

    def test_end_to_end_reports_identical(self, tmp_path, lexicon, catalog):
        plan = load_plan(write_plan(tmp_path, tmp_path / "a"), lexicon).with_overrides(samples=50)
        outputs = []
        for name in ("a", "b"):
            store = run_experiment(plan.with_overrides(out=tmp_path / name), MockChatProvider(seed=0), catalog)
            tables = analyze(store)
            assert sum(tables.accepted.values()) + sum(r["total"] for r in tables.rejects.values()) == 100
            outputs.append([render_report(tables, fmt, store.root).read_bytes() for fmt in ("markdown", "csv", "html")])
        assert outputs[0] == outputs[1]

    def test_existing_store_requires_resume(self, tmp_path, lexicon, catalog):
        plan = load_plan(write_plan(tmp_path, tmp_path / "out"), lexicon).with_overrides(samples=2)
        run_experiment(plan, MockChatProvider(seed=0), catalog)
        with pytest.raises(ConfigError):
            run_experiment(plan, MockChatProvider(seed=0), catalog)

    def test_different_plan_rejected(self, tmp_path, lexicon, catalog):
        plan = load_plan(write_plan(tmp_path, tmp_path / "out"), lexicon).with_overrides(samples=2)
        run_experiment(plan, MockChatProvider(seed=0), catalog)
        with pytest.raises(VersionError):
            run_experiment(plan.with_overrides(seed=99), MockChatProvider(seed=0), catalog, resume=True)


class TestRunStore:
    def test_schema_version_checked(self, tmp_path):
        store = synthetic_store(tmp_path, [day(60, 60, 30)] * 2, [day(60, 60, 30)] * 2)
        manifest = json.loads((store.root / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["schema_version"] == SCHEMA_VERSION
        manifest["schema_version"] = SCHEMA_VERSION + 1
        (store.root / "manifest.json").write_text(json.dumps(manifest), encoding="utf-8")
        with pytest.raises(VersionError):
            RunStore.open(store.root)

    def test_missing_store(self, tmp_path):
        with pytest.raises(ConfigError):
            RunStore.open(tmp_path / "nothing")

    def test_truncated_line_repaired_on_resume(self, tmp_path, lexicon, catalog):
        plan = load_plan(write_plan(tmp_path, tmp_path / "out"), lexicon).with_overrides(samples=3)
        store = run_experiment(plan, MockChatProvider(seed=0), catalog)
        records = store.condition_dir("Neutral") / "records.jsonl"
        with open(records, "a", encoding="utf-8") as f:
            f.write('{"condition": "Neutral", "index": 3, "se')
        resumed = run_experiment(plan.with_overrides(samples=4), MockChatProvider(seed=0), catalog, resume=True)
        assert [r.index for r in resumed.records("Neutral")] == [0, 1, 2, 3]
        assert records.read_text(encoding="utf-8").endswith("\n")

    def test_duplicate_index_keeps_first(self, tmp_path):
        store = synthetic_store(tmp_path, [day(60, 60, 30)] * 2, [day(60, 60, 30)] * 2)
        store.write(outcome("Neutral", 0, RejectRecord("Neutral", 0, RejectReason.OVERLAP, "again")))
        records = store.records("Neutral")
        assert [r.index for r in records] == [0, 1]
        assert records[0].accepted
        assert store.rejects("Neutral") == []


class TestAnalysis:
    def test_self_copy_has_no_significant_cells(self, tmp_path):
        days = [day(*d) for d in control_durations()]
        tables = analyze(synthetic_store(tmp_path, days, days), "Neutral")
        assert tables.significant_cells() == []
        assert tables.durations["Neutral"]["Work"].note == "control"
        assert tables.frequencies["C+"]["Work"].note == "identical"
        assert tables.positions is None
        assert tables.interventions is None

    def test_shift_flags_durations(self, tmp_path):
        base = control_durations()
        shifted = [day(*(d + 20 for d in durations)) for durations in base]
        tables = analyze(synthetic_store(tmp_path, [day(*d) for d in base], shifted), "Neutral")
        cells = tables.significant_cells()
        for task in ("Work", "Lunch", "Email"):
            assert ("durations", "C+", task) in cells
            assert tables.durations["C+"][task].test.statistic > 0
        assert tables.durations["C+"]["Call"].note == "n=0"

    def test_frequency_difference_flagged(self, tmp_path):
        base = control_durations()
        control = [day(*d) for d in base]
        condition = [day(*d, extra=[("Call", 15)] if i % 2 else ()) for i, d in enumerate(base)]
        tables = analyze(synthetic_store(tmp_path, control, condition), "Neutral")
        assert ("frequencies", "C+", "Call") in tables.significant_cells()
        assert tables.frequencies["C+"]["Call"].stats.mean == pytest.approx(0.5)

    def test_reject_counts_and_requested_basis(self, tmp_path):
        days = [day(60, 60, 30)] * 4
        store = synthetic_store(tmp_path, days, days, rejects=4)
        accepted = analyze(store, "Neutral")
        assert accepted.requested["C+"] == 8
        assert accepted.accepted["C+"] == 4
        assert accepted.rejects["C+"] == {"Overlap": 4, "total": 4}
        assert accepted.frequencies["C+"]["Work"].stats.mean == 1.0
        requested = analyze(store, "Neutral", frequency_basis="requested")
        assert requested.frequencies["C+"]["Work"].stats.mean == 0.5

    def test_expected_schedule(self, tmp_path):
        days = [day(60, 60, 30)] * 3
        tables = analyze(synthetic_store(tmp_path, days, days), "Neutral")
        assert tables.expected["Neutral"].tasks() == ["Work", "Lunch", "Email", "End"]

    def test_control_missing(self, tmp_path):
        days = [day(60, 60, 30)] * 3
        store = synthetic_store(tmp_path, days, days)
        with pytest.raises(ControlMissing):
            analyze(store, "Baseline")

    def test_control_needs_two_schedules(self, tmp_path):
        store = synthetic_store(tmp_path, [day(60, 60, 30)], [day(60, 60, 30)] * 3)
        with pytest.raises(ControlMissing):
            analyze(store, "Neutral")

    def test_positions_for_randomised_run(self, tmp_path, lexicon, catalog):
        plan = load_plan(write_plan(tmp_path, tmp_path / "out"), lexicon)
        tables = analyze(run_experiment(plan, MockChatProvider(seed=0), catalog))
        assert tables.control == "Neutral"
        assert tables.positions is not None
        cell = tables.positions["C+"]["Work"]
        assert cell.stats is not None and cell.stats.n > 0
        assert cell.correlation is None or -1.0 <= cell.correlation.rho <= 1.0

    def test_interventions_table(self, tmp_path, lexicon, catalog):
        plan = load_plan(Path("interventions"), lexicon).with_overrides(samples=6, out=tmp_path / "iv")
        tables = analyze(run_experiment(plan, MockChatProvider(seed=0), catalog))
        assert list(tables.interventions) == ["Baseline", "Sys", "Rand", "Sys & Rand"]
        assert tables.interventions["Baseline"]["Work"].note in ("control", "n=0")

    def test_tables_json_round_trip(self, tmp_path):
        base = control_durations(20)
        store = synthetic_store(tmp_path, [day(*d) for d in base], [day(*(d + 20 for d in x)) for x in base])
        tables = analyze(store, "Neutral")
        restored = ReportTables.from_dict(json.loads(tables.to_json()))
        assert restored.to_json() == tables.to_json()
        assert restored.significant_cells() == tables.significant_cells()

    def test_mpi_rows(self, answerer, lexicon, fixture_bank):
        study = run_mpi_study(
            answerer,
            lexicon,
            fixture_bank,
            runs=2,
            factors=[OceanFactor.CONSCIENTIOUSNESS],
            directions=[TraitDirection.POSITIVE],
        )
        rows = mpi_rows(study, fixture_bank)
        assert [r.label for r in rows] == ["C+", "Neutral"]
        assert rows[0].target == "C"
        assert set(rows[0].p_values) == {"O", "C", "E", "A", "N"}
        assert rows[-1].is_control
        assert set(rows[-1].alphas) == {"O", "C", "E", "A", "N"}
