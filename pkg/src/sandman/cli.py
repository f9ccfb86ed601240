#!/usr/bin/env python3
"""
SANDMAN 命令行界面模块
人格量表、日程实验、智能体仿真与报告四类命令
"""

import argparse
import json
import logging
import shutil
import sys
import time
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from . import __version__
from .collector import HostCollector
from .config import apply_overrides, load_config
from .errors import (
    BootstrapFailed,
    ConfigError,
    ControlMissing,
    InsufficientData,
    ProviderError,
    SandmanError,
    VersionError,
)
from .llm_gateway import ChatProvider, MockBehaviour, create_provider
from .logging_setup import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_PROVIDER = 3
EXIT_ANALYSIS = 4
EXIT_AGENT = 5

ACTIONS_FILE = "actions.jsonl"
EPISODIC_FILE = "episodic.jsonl"
AGENT_STATE_FILE = "agent_state.json"
AGENT_SUMMARY_FILE = "agent_summary.json"
DOCUMENTS_DIR = "documents"

# 全局参数在主命令和每个子命令后都可以出现
GLOBAL_DEFAULTS: Dict[str, Any] = {
    "config": None,
    "provider": None,
    "mock": False,
    "seed": None,
    "out": None,
    "verbose": False,
    "capture": None,
}


def exit_code_for(error: BaseException) -> int:
    """异常族映射到退出码"""
    if isinstance(error, (ConfigError, VersionError)):
        return EXIT_CONFIG
    if isinstance(error, ProviderError):
        return EXIT_PROVIDER
    if isinstance(error, (ControlMissing, InsufficientData)):
        return EXIT_ANALYSIS
    if isinstance(error, BootstrapFailed):
        return EXIT_AGENT
    return EXIT_ERROR


def _write_json(path: Path, payload: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    return path


class SandmanCLI:
    """SANDMAN 命令行界面类"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        for name, default in GLOBAL_DEFAULTS.items():
            if not hasattr(args, name):
                setattr(args, name, default)

        kind = "mock" if args.mock else args.provider
        self.config = apply_overrides(
            load_config(Path(args.config) if args.config else None),
            kind=kind,
            capture=Path(args.capture) if args.capture else None,
            out=args.out,
            seed=args.seed,
        )
        self.kind_override: Optional[str] = kind
        self.out_override: Optional[Path] = self.config.paths.out if args.out else None

    def _provider(self, behaviour: MockBehaviour, kind: Optional[str] = None, seed: Optional[int] = None) -> ChatProvider:
        """命令行指定的提供方优先于计划文件中的设置"""
        settings = self.config.provider
        if kind is not None and self.kind_override is None:
            settings = replace(settings, kind=kind)
        return create_provider(
            settings,
            behaviour,
            seed=self.config.seed if seed is None else seed,
            api_key=self.config.api_key,
            capture=settings.capture,
        )

    def run(self) -> int:
        handler = {
            "mpi": self.cmd_mpi,
            "experiment": self.cmd_experiment,
            "agent": self.cmd_agent,
        }[self.args.command]
        return handler()

    # ---- 人格量表 ----

    def cmd_mpi(self) -> int:
        """施测对照组与诱导条件，写出 mpi.json 与单因素人格分析表"""
        from .experiment import MPI_RESULTS, mpi_rows
        from .persona import OceanFactor, TraitDirection, load_lexicon
        from .psychometrics import load_item_bank, run_mpi_study
        from .reporter import render_mpi_report

        args = self.args
        paths = self.config.paths
        lexicon = load_lexicon(paths.lexicon)
        bank = load_item_bank(paths.item_bank)
        factors = [OceanFactor.parse(args.trait)] if args.trait else None
        directions = (
            (TraitDirection.parse(args.direction),)
            if args.direction
            else (TraitDirection.POSITIVE, TraitDirection.NEGATIVE)
        )
        if TraitDirection.NEUTRAL in directions:
            raise ConfigError("--direction 只能是 pos 或 neg，对照组总会施测")

        provider = self._provider(MockBehaviour.MPI_ANSWERER)
        study = run_mpi_study(
            provider,
            lexicon,
            bank,
            runs=args.runs,
            factors=factors,
            directions=directions,
            shuffle=args.shuffle,
            seed=self.config.seed,
            pooled=args.pooled,
            temperature=self.config.temperature,
            model_id=self.config.provider.model_id,
        )
        rows = mpi_rows(study, bank)
        _write_json(paths.out / MPI_RESULTS, {"rows": [r.to_dict() for r in rows], "study": study.to_dict()})
        for fmt in ("markdown", "csv"):
            render_mpi_report(rows, fmt, paths.out)

        for result in study.conditions:
            mark = "显著" if result.target_significant else "不显著"
            bleed = ", ".join(f.letter for f in result.bleed_through) or "无"
            print(f"{result.label}: 目标因素{mark}，其他显著因素: {bleed}")
        excluded = study.control.excluded + sum(c.report.excluded for c in study.conditions)
        if excluded:
            logger.warning("共有 %d 道题因无法解析被排除", excluded)
            print(f"警告: {excluded} 道题无法解析，已排除")
        print(f"结果已写入: {paths.out}")
        return EXIT_OK

    # ---- 日程实验 ----

    def _lexicon_and_catalog(self):
        from .persona import load_lexicon
        from .scheduler import load_catalog

        return load_lexicon(self.config.paths.lexicon), load_catalog(self.config.paths.catalog)

    def _load_plan(self):
        from .experiment import load_plan

        lexicon, _ = self._lexicon_and_catalog()
        plan = load_plan(Path(self.args.plan), lexicon, system_message=self.config.system_message)
        return plan.with_overrides(
            samples=getattr(self.args, "samples", None),
            seed=self.args.seed,
            provider=self.kind_override,
            out=self.out_override,
        )

    def _store_root(self) -> Path:
        if self.out_override is not None:
            return self.out_override
        if self.args.plan:
            return self._load_plan().out
        return self.config.paths.out

    def cmd_experiment(self) -> int:
        return {
            "run": self.cmd_experiment_run,
            "analyze": self.cmd_experiment_analyze,
            "report": self.cmd_experiment_report,
        }[self.args.action]()

    def cmd_experiment_run(self) -> int:
        from .experiment import run_experiment

        _, catalog = self._lexicon_and_catalog()
        plan = self._load_plan()
        provider = self._provider(MockBehaviour.SCHEDULE_PLANNER, kind=plan.provider, seed=plan.seed)
        store = run_experiment(
            plan,
            provider,
            catalog,
            resume=self.args.resume,
            temperature=self.config.temperature,
            model_id=self.config.provider.model_id,
        )
        for label in store.labels():
            records = store.records(label)
            accepted = sum(1 for r in records if r.accepted)
            print(f"{label}: {accepted}/{len(records)} 份合格")
        print(f"运行记录已写入: {store.root}")
        return EXIT_OK

    def _analyze(self):
        from .experiment import TABLES, RunStore, analyze

        store = RunStore.open(self._store_root())
        tables = analyze(
            store,
            self.args.control,
            pooled=self.args.pooled,
            frequency_basis=self.args.frequency_basis,
        )
        (store.root / TABLES).write_text(tables.to_json(), encoding="utf-8")
        return store, tables

    def cmd_experiment_analyze(self) -> int:
        store, tables = self._analyze()
        significant = tables.significant_cells()
        print(f"分析完成: {len(tables.conditions)} 个条件，{len(significant)} 个显著单元")
        for table, condition, task in significant:
            print(f"  {table}: {condition} / {task}")
        print(f"结果表已写入: {store.root}")
        return EXIT_OK

    def cmd_experiment_report(self) -> int:
        from .reporter import render_report

        store, tables = self._analyze()
        for fmt in self.args.format or ["markdown", "csv"]:
            path = render_report(tables, fmt, store.root)
            print(f"报告已生成: {path}")
        return EXIT_OK

    # ---- 智能体 ----

    def cmd_agent(self) -> int:
        return {"run": self.cmd_agent_run, "replay": self.cmd_agent_replay}[self.args.action]()

    def cmd_agent_run(self) -> int:
        """引导并执行一天，写出动作日志与情景日志"""
        from .engine import ActionLog, Agent, EpisodicMemory, SimClock, default_registry, load_profile

        args = self.args
        out = self.config.paths.out
        lexicon, catalog = self._lexicon_and_catalog()
        profile_path = Path(args.profile) if args.profile else self.config.paths.profile
        profile = load_profile(lexicon, profile_path, condition=args.condition)

        out.mkdir(parents=True, exist_ok=True)
        for name in (ACTIONS_FILE, EPISODIC_FILE):
            (out / name).unlink(missing_ok=True)
        shutil.rmtree(out / DOCUMENTS_DIR, ignore_errors=True)

        agent = Agent(
            profile,
            catalog,
            self._provider(MockBehaviour.SCHEDULE_PLANNER),
            registry=default_registry(typing=profile.typing, documents=out / DOCUMENTS_DIR),
            clock=SimClock(speed=args.speed),
            action_log=ActionLog(out / ACTIONS_FILE),
            episodic=EpisodicMemory(out / EPISODIC_FILE),
            seed=self.config.seed,
            planner=args.planner,
            retry_budget=args.retry_budget,
            temperature=self.config.temperature,
            model_id=self.config.provider.model_id,
        )
        started = time.monotonic()
        state = agent.run_day(args.day)
        _write_json(out / AGENT_STATE_FILE, state.to_dict())
        _write_json(
            out / AGENT_SUMMARY_FILE,
            {
                "profile": profile.name,
                "condition": profile.persona.label,
                "actions": len(agent.action_log),
                "provenance": HostCollector().provenance(wall_time_s=time.monotonic() - started),
            },
        )
        counts = state.counts()
        print(f"{profile.name} ({profile.persona.label}) 第 {state.day} 天: {len(state.tasks)} 项任务，{len(agent.action_log)} 个动作")
        print(f"完成状态: {', '.join(f'{k}={v}' for k, v in counts.items())}")
        print(f"日志已写入: {out}")
        return EXIT_OK

    def cmd_agent_replay(self) -> int:
        """由日志重建最终状态，并与运行时写出的状态比对"""
        from .engine import replay

        out = self.config.paths.out
        actions = Path(self.args.actions) if self.args.actions else out / ACTIONS_FILE
        episodic = Path(self.args.episodic) if self.args.episodic else out / EPISODIC_FILE
        if not episodic.exists():
            raise ConfigError(f"找不到情景日志: {episodic}")
        try:
            state = replay(actions if actions.exists() else None, episodic)
        except ValueError as e:
            raise ConfigError(f"日志无法回放: {e}") from e

        print(json.dumps(state.to_dict(), indent=2, sort_keys=True, ensure_ascii=False))
        recorded = out / AGENT_STATE_FILE
        if recorded.exists():
            with open(recorded, "r", encoding="utf-8") as f:
                same = json.load(f) == json.loads(json.dumps(state.to_dict()))
            print("回放结果与运行记录一致" if same else "回放结果与运行记录不一致")
            return EXIT_OK if same else EXIT_ERROR
        return EXIT_OK


def _global_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument('--config', '-c', type=str, help='TOML 配置文件路径')
    common.add_argument(
        '--provider',
        choices=['real', 'mock', 'scripted'],
        help='模型提供方，real 需要环境变量 SANDMAN_API_KEY'
    )
    common.add_argument('--mock', action='store_true', help='使用确定性模拟提供方，等同 --provider mock')
    common.add_argument('--seed', type=int, help='主种子，模拟提供方下结果完全可复现')
    common.add_argument('--out', '-o', type=str, help='输出目录，所有文件只写在这里')
    common.add_argument('--verbose', '-v', action='store_true', help='输出调试日志')
    common.add_argument('--capture', type=str, help='把每次模型请求与响应追加到该 JSONL 文件')
    return common


def create_parser() -> argparse.ArgumentParser:
    """创建命令行参数解析器"""
    common = _global_options()
    parser = argparse.ArgumentParser(
        prog="sandman",
        description="SANDMAN - 人格驱动的欺骗型智能体仿真引擎",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
        epilog="""
示例:
  sandman mpi --trait E --direction pos --mock --seed 1 --out out/mpi
  sandman experiment run --plan persona --mock --samples 20 --out out/persona
  sandman experiment report --out out/persona --format markdown csv html
  sandman agent run --mock --seed 9 --out out/agent
  sandman agent replay --out out/agent
        """
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    commands = parser.add_subparsers(dest='command', required=True)

    mpi = commands.add_parser('mpi', parents=[common], help='施测 MPI 人格量表')
    mpi.add_argument('--trait', '-t', type=str, help='诱导因素 O/C/E/A/N，默认全部五个')
    mpi.add_argument('--direction', '-d', type=str, help='诱导方向 pos 或 neg，默认两个方向')
    mpi.add_argument('--runs', type=int, default=5, help='每个条件施测轮数，默认5轮')
    mpi.add_argument('--shuffle', action='store_true', help='每轮按种子打乱题目顺序')
    mpi.add_argument('--pooled', action='store_true', help='使用合并方差 t 检验代替 Welch')

    experiment = commands.add_parser('experiment', help='日程生成实验')
    actions = experiment.add_subparsers(dest='action', required=True)

    run = actions.add_parser('run', parents=[common], help='按计划生成日程样本')
    run.add_argument('--plan', '-p', type=str, required=True, help='计划文件路径，或预设名 persona / interventions')
    run.add_argument('--resume', action='store_true', help='续跑，跳过已有记录')
    run.add_argument('--samples', '-n', type=int, help='覆盖每个条件的样本数')

    for name, help_text in (('analyze', '计算结果表并写出 tables.json'), ('report', '渲染报告文件')):
        sub = actions.add_parser(name, parents=[common], help=help_text)
        sub.add_argument('--plan', '-p', type=str, help='计划文件，用于确定输出目录')
        sub.add_argument('--control', type=str, help='对照条件标签，默认取计划中的 control')
        sub.add_argument('--pooled', action='store_true', help='使用合并方差 t 检验代替 Welch')
        sub.add_argument(
            '--frequency-basis',
            choices=['accepted', 'requested'],
            default='accepted',
            help='频次均值的分母：合格样本 (默认) 或全部请求'
        )
        if name == 'report':
            sub.add_argument(
                '--format', '-f',
                nargs='+',
                choices=['markdown', 'csv', 'html'],
                help='报告格式，默认 markdown 与 csv'
            )

    agent = commands.add_parser('agent', help='智能体仿真')
    agent_actions = agent.add_subparsers(dest='action', required=True)

    agent_run = agent_actions.add_parser('run', parents=[common], help='运行一整天')
    agent_run.add_argument('--profile', type=str, help='智能体档案 TOML，默认使用包内示例')
    agent_run.add_argument('--condition', type=str, help='人格条件标签，如 Neutral、C+、N-')
    agent_run.add_argument('--speed', type=float, default=0.0, help='时间倍率，0 为不等待，1 为实时')
    agent_run.add_argument('--planner', choices=['llm', 'rule'], default='llm', help='日程来源，默认由模型生成')
    agent_run.add_argument('--day', type=int, default=0, help='模拟的日序号')
    agent_run.add_argument('--retry-budget', type=int, default=2, help='引导任务的重试次数，默认2次')

    agent_replay = agent_actions.add_parser('replay', parents=[common], help='由日志重建最终状态')
    agent_replay.add_argument('--actions', type=str, help='动作日志路径，默认 <out>/actions.jsonl')
    agent_replay.add_argument('--episodic', type=str, help='情景日志路径，默认 <out>/episodic.jsonl')

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数"""
    parser = create_parser()
    args = parser.parse_args(argv)
    configure_logging(getattr(args, "verbose", False))

    try:
        return SandmanCLI(args).run()
    except KeyboardInterrupt:
        print("\n程序被用户中断", file=sys.stderr)
        return EXIT_ERROR
    except SandmanError as e:
        print(f"错误: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
