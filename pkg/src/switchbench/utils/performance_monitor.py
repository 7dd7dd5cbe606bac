from contextlib import contextmanager
from time import perf_counter
from dvg_ringbuffer import RingBuffer
import numpy as np
from .singleton import SingletonMeta
from engineering_notation import EngNumber

import logging

LOGGER = logging.getLogger(__name__)


def format_seconds(value: float) -> str:
    return f"{EngNumber(value, precision=2)}s"


class PerformanceTimer:
    """Keeps the last ``buffer_size`` start/stop marks of one analysis stage."""

    def __init__(self, name, buffer_size=256) -> None:
        self.name = name
        self.buffer_size = buffer_size
        self.start_buf = RingBuffer(buffer_size)
        self.stop_buf = RingBuffer(buffer_size)

    def mark_start(self) -> None:
        self.start_buf.append(perf_counter())

    def mark_stop(self) -> None:
        self.stop_buf.append(perf_counter())

    @contextmanager
    def measure(self):
        self.mark_start()
        try:
            yield self
        finally:
            self.mark_stop()

    @property
    def last_duration(self) -> float | None:
        if len(self.stop_buf) == 0 or len(self.start_buf) != len(self.stop_buf):
            return None
        return float(self.stop_buf[-1] - self.start_buf[-1])

    def durations(self) -> np.ndarray:
        if len(self.start_buf) != len(self.stop_buf):
            return np.empty(0)
        return np.subtract(self.stop_buf, self.start_buf)

    def get_stats(self) -> dict:
        data = self.durations()
        if len(data) == 0:
            return {}
        return {
            "count": len(data),
            "mean": float(np.mean(data)),
            "min": float(np.min(data)),
            "max": float(np.max(data)),
            "std": float(np.std(data)),
        }

    def __str__(self) -> str:
        stats = self.get_stats()
        if not stats:
            return f"PerformanceTimer {self.name}: no samples"
        body = ", ".join(
            f"{key}: {value if key == 'count' else format_seconds(value)}"
            for key, value in stats.items()
        )
        return f"PerformanceTimer {self.name}: {body}"


class PerformanceMonitorService(metaclass=SingletonMeta):
    def __init__(self) -> None:
        self.timers: dict[str, PerformanceTimer] = {}
        LOGGER.debug("PerformanceMonitorService created")

    def timer(self, name, buffer_size=256) -> PerformanceTimer:
        if name not in self.timers:
            self.timers[name] = PerformanceTimer(name, buffer_size)
        return self.timers[name]

    def dump(self) -> None:
        for timer in self.timers.values():
            LOGGER.info(str(timer))
