"""Budgets, statistics and results shared by the CDITO and ITO solvers."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from cdito.order import Clause, Conflict, TotalOrder

# h(order) -> (consistent?, conflicts)
ConsistencyFn = Callable[[TotalOrder], "tuple[bool, Sequence[Conflict]]"]


class Status(str, enum.Enum):
    SOLVED = "SOLVED"
    UNSAT = "UNSAT"
    TIMEOUT = "TIMEOUT"


class IntegrityError(RuntimeError):
    """A consistency function returned a conflict that does not hold in the queried order."""


class BudgetExceeded(Exception):
    pass


@dataclass
class Budget:
    """Cooperative limits, checked once per iteration and once per h call."""

    timeout: Optional[float] = None
    max_iterations: Optional[int] = None
    max_h_calls: Optional[int] = None

    def start(self) -> "Deadline":
        return Deadline(self)


class Deadline:
    def __init__(self, budget: Budget):
        self.budget = budget
        self.t0 = time.perf_counter()
        self.until = None if budget.timeout is None else self.t0 + budget.timeout

    def expired(self, iterations: int, h_calls: int) -> bool:
        b = self.budget
        if b.max_iterations is not None and iterations >= b.max_iterations:
            return True
        if b.max_h_calls is not None and h_calls >= b.max_h_calls:
            return True
        return self.until is not None and time.perf_counter() >= self.until

    def elapsed(self) -> float:
        return time.perf_counter() - self.t0


@dataclass
class SolveStats:
    h_calls: int = 0
    inconsistent_h_calls: int = 0
    iterations: int = 0
    nodes_pruned_estimate: int = 0
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        return {
            "h_calls": self.h_calls,
            "inconsistent_h_calls": self.inconsistent_h_calls,
            "iterations": self.iterations,
            "nodes_pruned_estimate": self.nodes_pruned_estimate,
            "wall_ms": round(self.wall_time * 1000, 3),
        }


@dataclass
class SolveResult:
    status: Status
    order: Optional[tuple[int, ...]]
    learned: list[Clause] = field(default_factory=list)
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def solved(self) -> bool:
        return self.status is Status.SOLVED


def check_h_output(order: TotalOrder, consistent: bool, conflicts: Sequence[Conflict]) -> list[Conflict]:
    conflicts = list(conflicts)
    if consistent:
        return conflicts
    if not conflicts:
        raise IntegrityError(f"h reported {order} inconsistent without a conflict")
    for c in conflicts:
        if not c.active_in(order):
            raise IntegrityError(f"h returned conflict {c} that is not active in {order}")
    return conflicts
