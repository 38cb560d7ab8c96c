"""The total order tree, its depth-first enumerator, and the ITO baseline."""

from __future__ import annotations

import logging
from typing import Iterable, Iterator, Optional

from cdito.order import (
    Clause,
    OrderMove,
    SearchStatus,
    TotalOrder,
    as_order,
    satisfies_all,
)
from cdito.result import (
    Budget,
    ConsistencyFn,
    SolveResult,
    SolveStats,
    Status,
    check_h_output,
)

log = logging.getLogger(__name__)


def child_moves(order) -> list[OrderMove]:
    """Feasible order moves from ``order``, ascending by rank."""
    order = as_order(order)
    n, l = order.n, order.level()
    return [OrderMove(i, j) for i in range(1, l) for j in range(i + 1, n + 1)]


def children(order) -> list[tuple[OrderMove, TotalOrder]]:
    order = as_order(order)
    return [(m, order.copy().apply(m)) for m in child_moves(order)]


def default_successor(status: SearchStatus, n: int) -> OrderMove:
    i, j, _ = status
    if j != n:
        return OrderMove(i, j + 1)
    return OrderMove(i + 1, i + 2)


class TotalOrderSearch:
    """Depth-first walk over the total order tree using a stack of search statuses.

    ``order`` is mutated in place; ``stack[-1]`` is the status of the current order.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.order = TotalOrder.root(n)
        self.stack: list[SearchStatus] = [SearchStatus(1, 1, n)]

    def advance(self) -> bool:
        """Step to the next unvisited order; False once the tree is exhausted."""
        n, stack, order = self.n, self.stack, self.order
        while stack:
            l = stack[-1].l
            move = default_successor(stack[-1], n)
            if move.i < l:
                stack[-1] = SearchStatus(move.i, move.j, l)
                order.apply(move)
                stack.append(SearchStatus(1, 1, move.i))
                return True
            stack.pop()
            if stack:
                i, j, _ = stack[-1]
                order.apply(OrderMove(j, i - 1))
        return False

    def path(self) -> list[OrderMove]:
        """Moves from the root to the current order, read off the stack."""
        return [OrderMove(s.i, s.j) for s in self.stack[:-1]]


def iter_orders(n: int) -> Iterator[tuple[int, ...]]:
    walker = TotalOrderSearch(n)
    yield walker.order.as_tuple()
    while walker.advance():
        yield walker.order.as_tuple()


def enumerate_all(n: int) -> list[tuple[int, ...]]:
    """All ``n!`` total orders in depth-first tree order, starting at the root."""
    return list(iter_orders(n))


def ito_solve(
    n: int,
    phi: Iterable[Clause],
    h: ConsistencyFn,
    budget: Optional[Budget] = None,
) -> SolveResult:
    """Systematic baseline: visit orders in tree order, call ``h`` on each order satisfying ``phi``.

    No conflict direction and no learning. Clause checks run before ``h``.
    """
    phi = list(phi)
    deadline = (budget or Budget()).start()
    stats = SolveStats()
    walker = TotalOrderSearch(n)
    order = walker.order

    def done(status, found=None):
        stats.wall_time = deadline.elapsed()
        return SolveResult(status, found, [], stats)

    while True:
        if deadline.expired(stats.iterations, stats.h_calls):
            return done(Status.TIMEOUT)
        stats.iterations += 1
        if satisfies_all(order, phi):
            stats.h_calls += 1
            ok, conflicts = h(order)
            check_h_output(order, ok, conflicts)
            if ok:
                return done(Status.SOLVED, order.as_tuple())
            stats.inconsistent_h_calls += 1
        if not walker.advance():
            return done(Status.UNSAT)
