"""Conflict resolution on the total order tree: constituent and combined kernels."""

from __future__ import annotations

import enum
from typing import Iterable

from cdito.order import (
    INF,
    INF_MOVE,
    Conflict,
    OrderMove,
    SearchStatus,
    UsageError,
    as_order,
)
from cdito.tree import default_successor


class KernelKind(enum.Enum):
    CHILD = 1        # i < l: take the move, descend
    SIBLING = 2      # l < i < inf: jump the parent to a later sibling
    INFEASIBLE = 3   # i = inf: prune the remaining siblings of this level
    EXHAUSTED = 4    # i = l: children exhausted, plain backtrack


def classify(move: OrderMove, l: int) -> KernelKind:
    if move.i < l:
        return KernelKind.CHILD
    if move.i == l:
        return KernelKind.EXHAUSTED
    if move.i == INF:
        return KernelKind.INFEASIBLE
    return KernelKind.SIBLING


def constituent_kernel(order, conflict: Conflict, l: int) -> OrderMove:
    """First move in search order that negates some conjunct of ``conflict``.

    Only conjuncts whose earlier event is ``<= l`` can be negated below the
    current node; ``INF_MOVE`` when there is none.
    """
    order = as_order(order)
    if not conflict.active_in(order):
        raise UsageError(f"conflict {conflict} is not active in {order}")
    n, pos = order.n, order.pos
    best, best_rank = INF_MOVE, INF
    for a, b in conflict.conjuncts:
        if a > l:
            continue
        r = n * pos[a] + pos[b]
        if r < best_rank:
            best, best_rank = OrderMove(pos[a], pos[b]), r
    return best


def next_move(order, conflicts: Iterable[Conflict], status: SearchStatus) -> OrderMove:
    """Combined kernel of ``conflicts`` given the node's search status.

    Starts from the default successor and keeps the latest constituent kernel.
    A conflict with any conjunct at or before the incumbent is already covered
    and skipped. Returns ``INF_MOVE`` as soon as one conflict cannot be
    resolved inside this subtree.
    """
    order = as_order(order)
    n, pos = order.n, order.pos
    _, _, l = status
    best = default_successor(status, n)
    best_rank = best.rank(n)
    for conflict in conflicts:
        kr, kr_rank = INF_MOVE, INF
        covered = False
        for a, b in conflict.conjuncts:
            ip, jp = pos[a], pos[b]
            r = n * ip + jp
            if r <= best_rank:
                covered = True
                break
            if a <= l and r < kr_rank:
                kr, kr_rank = OrderMove(ip, jp), r
        if covered:
            continue
        if kr.is_inf:
            return INF_MOVE
        if best_rank < kr_rank:
            best, best_rank = kr, kr_rank
    return best
