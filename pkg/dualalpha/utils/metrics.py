"""Wall-clock totals per build stage, shared by all threads of a process."""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from threading import Lock
from time import perf_counter
from typing import Dict, Iterator, List


@dataclass
class _Stage:
    count: int = 0
    total: float = 0.0
    max: float = 0.0


_stages: Dict[str, _Stage] = {}
_lock = Lock()


def record_duration(label: str, seconds: float) -> None:
    with _lock:
        st = _stages.setdefault(label, _Stage())
        st.count += 1
        st.total += seconds
        st.max = max(st.max, seconds)


def get_stats(label: str) -> Dict[str, float]:
    with _lock:
        st = _stages.get(label) or _Stage()
        return {"count": st.count, "total": st.total, "max": st.max}


def labels() -> List[str]:
    with _lock:
        return sorted(_stages)


def reset() -> None:
    with _lock:
        _stages.clear()


@contextmanager
def time_block(label: str) -> Iterator[None]:
    start = perf_counter()
    try:
        yield
    finally:
        record_duration(label, perf_counter() - start)
