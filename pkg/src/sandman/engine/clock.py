"""模拟时钟"""

import time
from typing import Callable

SECONDS_PER_DAY = 86400.0


class SimClock:
    """以秒计的虚拟时钟，只向前走

    speed 为 0 时从不等待；speed > 0 时每推进 1 虚拟秒等待 speed 秒墙钟时间。
    """

    def __init__(self, speed: float = 0.0, sleeper: Callable[[float], None] = time.sleep, start_s: float = 0.0):
        if speed < 0:
            raise ValueError(f"speed 不能为负: {speed}")
        self.speed = speed
        self._sleep = sleeper
        self._now = start_s

    @property
    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> float:
        if seconds > 0:
            if self.speed > 0:
                self._sleep(seconds * self.speed)
            self._now += seconds
        return self._now

    def advance_to(self, t: float) -> float:
        return self.advance(t - self._now)
