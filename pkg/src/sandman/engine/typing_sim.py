#!/usr/bin/env python3
"""
打字模拟
把文本转换为带时间间隔的按键序列，按概率插入错字并用退格更正
"""

import string
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from ..errors import ConfigError

BACKSPACE = "Backspace"
CHARS_PER_WORD = 5
_TYPO_ALPHABET = string.ascii_lowercase


@dataclass(frozen=True)
class TypingProfile:
    """打字速度 (每分钟词数) 与错字率

    jitter 为每次按键间隔的相对抖动幅度，0 表示匀速。
    """

    wpm_mean: float = 40.0
    wpm_std: float = 10.0
    mistake_prob: float = 0.02
    jitter: float = 0.25

    def __post_init__(self) -> None:
        if self.wpm_mean <= 0:
            raise ConfigError(f"wpm_mean 必须大于 0: {self.wpm_mean}")
        if self.wpm_std < 0:
            raise ConfigError(f"wpm_std 不能为负: {self.wpm_std}")
        if not 0.0 <= self.mistake_prob < 1.0:
            raise ConfigError(f"mistake_prob 必须在 [0, 1) 内: {self.mistake_prob}")
        if not 0.0 <= self.jitter < 1.0:
            raise ConfigError(f"jitter 必须在 [0, 1) 内: {self.jitter}")

    def key_interval(self, wpm: float) -> float:
        """平均按键间隔 (秒) = 60 / (wpm × 5)"""
        return 60.0 / (wpm * CHARS_PER_WORD)


@dataclass(frozen=True)
class Keystroke:
    """相对开始时刻的按键，key 为单个字符或 BACKSPACE"""

    offset_s: float
    key: str


def simulate_typing(content: str, profile: TypingProfile, seed: int) -> List[Keystroke]:
    """模拟输入 content

    每段文本抽取一次打字速度 (下限为均值的 1/4)，每个按键在平均间隔上叠加抖动。
    出错时先敲一个错误字母，再退格，再敲正确字符。
    """
    rng = np.random.default_rng(seed)
    wpm = profile.wpm_mean
    if profile.wpm_std > 0:
        wpm = max(profile.wpm_mean / 4.0, float(rng.normal(profile.wpm_mean, profile.wpm_std)))
    base = profile.key_interval(wpm)

    strokes: List[Keystroke] = []
    t = 0.0

    def press(key: str) -> None:
        nonlocal t
        factor = 1.0
        if profile.jitter > 0:
            factor += profile.jitter * float(rng.uniform(-1.0, 1.0))
        t += base * factor
        strokes.append(Keystroke(offset_s=t, key=key))

    for char in content:
        if profile.mistake_prob > 0 and rng.random() < profile.mistake_prob:
            wrong = _TYPO_ALPHABET[int(rng.integers(len(_TYPO_ALPHABET)))]
            if wrong == char:
                wrong = _TYPO_ALPHABET[(_TYPO_ALPHABET.index(wrong) + 1) % len(_TYPO_ALPHABET)]
            press(wrong)
            press(BACKSPACE)
        press(char)
    return strokes


def reconstruct(keys: Sequence[str]) -> str:
    """按键序列还原为文本"""
    buffer: List[str] = []
    for key in keys:
        if key == BACKSPACE:
            if buffer:
                buffer.pop()
        else:
            buffer.append(key)
    return "".join(buffer)
