"""Instrumented arrays and reports for access counting and space checks.

The wrappers expose ``len`` and integer indexing, so the kernels run on them
unchanged (in Python rather than compiled). ``__array__`` gives validators a
view of the data without touching the counters.
"""

from __future__ import annotations

import time
import tracemalloc
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class CountingArray:
    """Array wrapper counting element reads and writes."""

    def __init__(self, data):
        self.data = np.array(data, dtype=np.int64)
        self.reads = 0
        self.writes = 0

    def __len__(self) -> int:
        return len(self.data)

    def __getitem__(self, i):
        self.reads += 1
        return int(self.data[i])

    def __setitem__(self, i, v):
        self.writes += 1
        self.data[i] = v

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype, copy=False)

    @property
    def accesses(self) -> int:
        return self.reads + self.writes

    def reset(self) -> None:
        self.reads = self.writes = 0


class ProvenanceViolation(AssertionError):
    pass


class TracedArray(CountingArray):
    """Array that may only ever be written with values previously read from it.

    A write of a value never read, or of a value outside the original multiset,
    raises :class:`ProvenanceViolation` at the offending write.
    """

    def __init__(self, data):
        super().__init__(data)
        self.original = set(self.data.tolist())
        self.seen = set()

    def __getitem__(self, i):
        v = super().__getitem__(i)
        self.seen.add(v)
        return v

    def __setitem__(self, i, v):
        v = int(v)
        if v not in self.seen or v not in self.original:
            raise ProvenanceViolation(f"wrote {v} at position {i + 1} without reading it from the keys")
        super().__setitem__(i, v)


@dataclass
class TransformReport:
    operation: str
    n: int
    wall_ns: int = 0
    reads: Optional[int] = None  # None when accesses were not counted
    writes: Optional[int] = None
    aux_words: int = 0
    scratch_bits: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def accesses(self) -> Optional[int]:
        if self.reads is None or self.writes is None:
            return None
        return self.reads + self.writes

    def lines(self) -> list[str]:
        out = [f"operation={self.operation}", f"n={self.n}", f"wall_ns={self.wall_ns}"]
        if self.accesses is not None:
            out += [f"reads={self.reads}", f"writes={self.writes}"]
        out += [f"aux_words={self.aux_words}", f"scratch_bits={self.scratch_bits}"]
        out += [f"{k}={v}" for k, v in self.extra.items()]
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def count_accesses(fn: Callable, *arrays) -> tuple[int, int]:
    """Run ``fn`` on counting wrappers of ``arrays``; return total (reads, writes)."""
    wrapped = [CountingArray(a) for a in arrays]
    fn(*wrapped)
    for src, w in zip(arrays, wrapped):
        if isinstance(src, np.ndarray):
            src[:] = w.data
    return sum(w.reads for w in wrapped), sum(w.writes for w in wrapped)


def timed(fn: Callable, *args) -> int:
    t0 = time.perf_counter_ns()
    fn(*args)
    return time.perf_counter_ns() - t0


def peak_allocation(fn: Callable, *args) -> int:
    """Peak bytes allocated (and traced) while ``fn(*args)`` runs."""
    was_tracing = tracemalloc.is_tracing()
    if not was_tracing:
        tracemalloc.start()
    try:
        tracemalloc.reset_peak()
        base, _ = tracemalloc.get_traced_memory()
        fn(*args)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        if not was_tracing:
            tracemalloc.stop()
    return peak - base
