"""Conflict-directed incremental total ordering (CDITO)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import factorial
from typing import Callable, Iterable, Optional, Sequence

from cdito.kernel import KernelKind, classify, next_move
from cdito.order import (
    Clause,
    Conflict,
    OrderMove,
    SearchStatus,
    TotalOrder,
    as_order,
    satisfies_all,
    violated_conflicts,
)
from cdito.result import (
    Budget,
    ConsistencyFn,
    SolveResult,
    SolveStats,
    Status,
    check_h_output,
)
from cdito.tree import default_successor

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Step:
    """One loop iteration, as seen before the chosen move is applied."""

    iteration: int
    order: tuple[int, ...]
    status: SearchStatus
    conflicts: tuple[Conflict, ...]
    move: OrderMove
    kind: KernelKind
    h_called: bool


def learn_clauses(conflicts: Iterable[Conflict]) -> list[Clause]:
    """Negate each conflict into a clause."""
    return [c.negate() for c in conflicts]


def _skipped_moves(n: int, start: OrderMove, stop: OrderMove, max_i: int):
    i, j = int(start.i), int(start.j)
    while (i, j) < (stop.i, stop.j) and i < max_i:
        yield i, j
        if j < n:
            j += 1
        else:
            i, j = i + 1, i + 2


def solve(
    n: int,
    phi: Iterable[Clause],
    h: ConsistencyFn,
    budget: Optional[Budget] = None,
    start: Optional[tuple[TotalOrder, Sequence[SearchStatus]]] = None,
    on_step: Optional[Callable[[Step], None]] = None,
) -> SolveResult:
    """Search the total order tree for an order satisfying ``phi`` that ``h`` accepts.

    ``h`` is only called on orders satisfying the current clause set; every
    conflict it reports is negated and added to that set. The search stops
    with UNSAT when the tree is exhausted or an empty clause is learned.
    """
    phi = list(phi)
    learned: list[Clause] = []
    if start is None:
        order = TotalOrder.root(n)
        stack = [SearchStatus(1, 1, n)]
    else:
        order = as_order(start[0]).copy()
        stack = [SearchStatus(*s) for s in start[1]]
    deadline = (budget or Budget()).start()
    stats = SolveStats()

    def done(status, found=None):
        stats.wall_time = deadline.elapsed()
        log.debug("cdito %s after %d iterations, %d h calls", status.value, stats.iterations, stats.h_calls)
        return SolveResult(status, found, learned, stats)

    wiped_out = any(len(c) == 0 for c in phi)
    while not wiped_out and stack:
        if deadline.expired(stats.iterations, stats.h_calls):
            return done(Status.TIMEOUT)
        stats.iterations += 1
        h_called = False
        if satisfies_all(order, phi):
            h_called = True
            stats.h_calls += 1
            ok, conflicts = h(order)
            conflicts = check_h_output(order, ok, conflicts)
            if ok:
                return done(Status.SOLVED, order.as_tuple())
            stats.inconsistent_h_calls += 1
            new = learn_clauses(conflicts)
            log.debug("h rejected %s; learned %s", order, "; ".join(map(str, new)))
            phi.extend(new)
            learned.extend(new)
            if any(len(c) == 0 for c in new):
                wiped_out = True
                break

        status = stack[-1]
        conflicts = violated_conflicts(order, phi)
        move = next_move(order, conflicts, status)
        kind = classify(move, status.l)
        if on_step is not None:
            on_step(Step(stats.iterations, order.as_tuple(), status, tuple(conflicts), move, kind, h_called))

        if kind is KernelKind.CHILD:
            for i, _ in _skipped_moves(n, default_successor(status, n), move, status.l):
                stats.nodes_pruned_estimate += factorial(i)
            order.apply(move)
            stack[-1] = SearchStatus(int(move.i), int(move.j), status.l)
            stack.append(SearchStatus(1, 1, int(move.i)))
            continue

        stack.pop()
        if not stack:
            break
        pi, pj, pl = stack[-1]
        order.apply(OrderMove(pj, pi - 1))
        if kind is KernelKind.SIBLING:
            stats.nodes_pruned_estimate += (int(move.j) - 1 - pj) * factorial(pi)
            stack[-1] = SearchStatus(pi, int(move.j) - 1, pl)
        elif kind is KernelKind.INFEASIBLE:
            stats.nodes_pruned_estimate += (n - pj) * factorial(pi)
            stack[-1] = SearchStatus(pi + 1, pi + 1, pl)

    return done(Status.UNSAT)
