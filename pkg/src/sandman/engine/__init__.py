"""
智能体运行时
决策引擎、四类记忆、任务列表、动作通道、内容生成与打字模拟
"""

from .agent import DAY_COMPLETE, Agent, AgentState, DayComplete
from .channels import (
    ActionEvent,
    ActionKind,
    ActionLog,
    Channel,
    ChannelRegistry,
    DocumentChannel,
    LogChannel,
    WebChannel,
    default_registry,
    load_action_log,
)
from .clock import SECONDS_PER_DAY, SimClock
from .generators import ContentGenerator
from .memory import (
    EpisodicEvent,
    EpisodicMemory,
    EventKind,
    MemoryStores,
    ProceduralMemory,
    SemanticMemory,
    WorkingMemory,
    load_episodic_log,
)
from .profile import AgentProfile, load_profile
from .replay import replay
from .tasks import TaskInstance, TaskList, TaskStatus
from .typing_sim import BACKSPACE, Keystroke, TypingProfile, reconstruct, simulate_typing

__all__ = [
    'DAY_COMPLETE', 'Agent', 'AgentState', 'DayComplete',
    'ActionEvent', 'ActionKind', 'ActionLog', 'Channel', 'ChannelRegistry',
    'DocumentChannel', 'LogChannel', 'WebChannel', 'default_registry', 'load_action_log',
    'SECONDS_PER_DAY', 'SimClock', 'ContentGenerator',
    'EpisodicEvent', 'EpisodicMemory', 'EventKind', 'MemoryStores', 'ProceduralMemory',
    'SemanticMemory', 'WorkingMemory', 'load_episodic_log',
    'AgentProfile', 'load_profile', 'replay',
    'TaskInstance', 'TaskList', 'TaskStatus',
    'BACKSPACE', 'Keystroke', 'TypingProfile', 'reconstruct', 'simulate_typing',
]
