from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

from .cnf import Assignment

if TYPE_CHECKING:
    from .encoders import Coloring


class Status(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"

    def __str__(self) -> str:
        return self.value

    @property
    def exit_code(self) -> int:
        return {Status.SAT: 10, Status.UNSAT: 20}.get(self, 0)


@dataclass
class SearchStats:
    decisions: int = 0
    propagations: int = 0
    two_sat_calls: int = 0
    flips: int = 0
    restarts: int = 0
    elapsed: float = 0.0

    def merge(self, other: "SearchStats") -> None:
        self.decisions += other.decisions
        self.propagations += other.propagations
        self.two_sat_calls += other.two_sat_calls
        self.flips += other.flips
        self.restarts += other.restarts


@dataclass
class SolveResult:
    status: Status
    model: Optional[Assignment] = None
    stats: SearchStats = field(default_factory=SearchStats)
    coloring: Optional["Coloring"] = None
    # why an UNKNOWN was produced: "budget", "timeout" or "cancelled"
    reason: Optional[str] = None

    @property
    def is_sat(self) -> bool:
        return self.status is Status.SAT
