"""Wall-clock phase accounting: Datalog fraction, phase splits, rule skew, speedup.

All durations are microseconds.  Inside an iteration, the merge and the
graph updates count as sequential time.  Worker wall time is divided into
inter-rule and intra-rule parts in proportion to the busy time of slice 0
versus the busy time of the extra slices.
"""

from __future__ import annotations

import contextlib
import gc
import json
import math
from dataclasses import dataclass, field
from typing import Sequence


@dataclass
class PhaseBreakdown:
    seq_us: float = 0.0
    inter_us: float = 0.0
    intra_us: float = 0.0

    @property
    def total_us(self) -> float:
        return self.seq_us + self.inter_us + self.intra_us

    def add(self, other: "PhaseBreakdown") -> None:
        self.seq_us += other.seq_us
        self.inter_us += other.inter_us
        self.intra_us += other.intra_us

    def fractions(self, total_us: float) -> dict[str, float]:
        if total_us <= 0:
            return {"seq": 0.0, "inter": 0.0, "intra": 0.0}
        return {
            "seq": self.seq_us / total_us,
            "inter": self.inter_us / total_us,
            "intra": self.intra_us / total_us,
        }

    def as_dict(self) -> dict[str, float]:
        return {"seq_us": self.seq_us, "inter_us": self.inter_us, "intra_us": self.intra_us}


@dataclass
class PhaseTimings:
    total_us: float = 0.0
    action: PhaseBreakdown = field(default_factory=PhaseBreakdown)
    ff: PhaseBreakdown = field(default_factory=PhaseBreakdown)
    per_rule_us: list[float] = field(default_factory=list)
    expansions: int = 0
    evaluations: int = 0
    plan_length: int | None = None

    @property
    def datalog_us(self) -> float:
        return self.action.total_us + self.ff.total_us

    def to_json(self) -> dict:
        return {
            "total_us": self.total_us,
            "datalog_us": self.datalog_us,
            "phases": {"action": self.action.as_dict(), "ff": self.ff.as_dict()},
            "per_rule_us": list(self.per_rule_us),
            "expansions": self.expansions,
            "evaluations": self.evaluations,
            "plan_length": self.plan_length,
        }

    def dump(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def datalog_fraction(t: PhaseTimings) -> float:
    if t.total_us <= 0:
        raise ValueError("total time must be positive")
    return min(1.0, t.datalog_us / t.total_us)


def amdahl_bound(p: float) -> float:
    """Speedup bound ``1 / (1 - p)``; ``inf`` for a fully parallel workload."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"parallel fraction must lie in [0, 1], got {p}")
    if p == 1.0:
        return math.inf
    return 1.0 / (1.0 - p)


def lower_median(values: Sequence[float]) -> float:
    s = sorted(values)
    return s[(len(s) - 1) // 2]


def rule_skew(per_rule: Sequence[float]) -> float | None:
    """Max over (lower) median of per-rule times; ``None`` when all are zero."""
    if not per_rule or not any(v > 0 for v in per_rule):
        return None
    med = lower_median(per_rule)
    if med <= 0:
        return math.inf
    return max(per_rule) / med


def speedup(baseline_s: float, run_s: float) -> float:
    if run_s <= 0:
        raise ValueError("run time must be positive")
    return baseline_s / run_s


@contextlib.contextmanager
def gc_paused():
    """Disable the cyclic collector for a timed region, like ``timeit`` does."""
    was = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was:
            gc.enable()
