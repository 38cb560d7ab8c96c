"""Events, total orders, partial orders, clauses and conflicts.

Events and positions are 1-based. Position 0 only appears as the target of
an undo move, where it means "insert at the front".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

INF = math.inf


class UsageError(ValueError):
    """Raised when an operation is called outside its precondition."""


class PartialOrder(NamedTuple):
    """``before`` precedes ``after``."""

    before: int
    after: int

    def negate(self) -> "PartialOrder":
        return PartialOrder(self.after, self.before)

    def holds_in(self, order: "TotalOrder") -> bool:
        return order.pos[self.before] < order.pos[self.after]

    def __str__(self) -> str:
        return f"{self.before}<{self.after}"


class OrderMove(NamedTuple):
    """Delete the element at position ``i`` and reinsert it right after position ``j``."""

    i: float
    j: float

    def rank(self, n: int) -> float:
        return n * self.i + self.j

    @property
    def is_inf(self) -> bool:
        return self.i == INF

    def __str__(self) -> str:
        if self.is_inf:
            return "(inf->inf)"
        return f"({self.i}->{self.j})"


INF_MOVE = OrderMove(INF, INF)


class SearchStatus(NamedTuple):
    """Per-depth search status: last move ``(i -> j)`` and level bound ``l``."""

    i: int
    j: int
    l: int


def _as_partial(p) -> PartialOrder:
    if isinstance(p, PartialOrder):
        return p
    a, b = p
    return PartialOrder(int(a), int(b))


@dataclass(frozen=True)
class Clause:
    """A disjunction of partial orders."""

    disjuncts: tuple[PartialOrder, ...]

    def __init__(self, disjuncts: Iterable):
        ds = tuple(_as_partial(p) for p in disjuncts)
        for p in ds:
            if p.before == p.after:
                raise UsageError(f"partial order {p} relates an event to itself")
        object.__setattr__(self, "disjuncts", ds)

    def satisfied_by(self, order: TotalOrder) -> bool:
        pos = order.pos
        return any(pos[a] < pos[b] for a, b in self.disjuncts)

    def negate(self) -> Conflict:
        return Conflict(p.negate() for p in self.disjuncts)

    def events(self) -> set[int]:
        return {e for p in self.disjuncts for e in p}

    def __len__(self) -> int:
        return len(self.disjuncts)

    def __str__(self) -> str:
        if not self.disjuncts:
            return "FALSE"
        return " | ".join(str(p) for p in self.disjuncts)


@dataclass(frozen=True)
class Conflict:
    """A conjunction of partial orders that jointly cause inconsistency.

    The empty conflict is active in every order; it marks a problem that no
    ordering can fix.
    """

    conjuncts: tuple[PartialOrder, ...]

    def __init__(self, conjuncts: Iterable):
        cs = tuple(_as_partial(p) for p in conjuncts)
        for p in cs:
            if p.before == p.after:
                raise UsageError(f"partial order {p} relates an event to itself")
        object.__setattr__(self, "conjuncts", cs)

    def active_in(self, order: TotalOrder) -> bool:
        pos = order.pos
        return all(pos[a] < pos[b] for a, b in self.conjuncts)

    def negate(self) -> Clause:
        return Clause(p.negate() for p in self.conjuncts)

    def events(self) -> set[int]:
        return {e for p in self.conjuncts for e in p}

    def __len__(self) -> int:
        return len(self.conjuncts)

    def __str__(self) -> str:
        if not self.conjuncts:
            return "TRUE"
        return " & ".join(str(p) for p in self.conjuncts)


class TotalOrder:
    """A permutation of events ``1..n`` with its inverse position index.

    ``seq[k]`` is the event at position ``k`` and ``pos[e]`` the position of
    event ``e``; index 0 of both lists is unused padding.
    """

    __slots__ = ("n", "seq", "pos")

    def __init__(self, events: Sequence[int]):
        n = len(events)
        if sorted(events) != list(range(1, n + 1)):
            raise UsageError(f"not a permutation of 1..{n}: {tuple(events)}")
        self.n = n
        self.seq = [0, *events]
        self.pos = [0] * (n + 1)
        for k in range(1, n + 1):
            self.pos[self.seq[k]] = k

    @classmethod
    def root(cls, n: int) -> "TotalOrder":
        return cls(range(1, n + 1))

    def copy(self) -> "TotalOrder":
        other = TotalOrder.__new__(TotalOrder)
        other.n = self.n
        other.seq = self.seq[:]
        other.pos = self.pos[:]
        return other

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self.seq[1:])

    def precedes(self, a: int, b: int) -> bool:
        return self.pos[a] < self.pos[b]

    def level(self) -> int:
        for k in range(1, self.n + 1):
            if self.seq[k] != k:
                return k
        return self.n

    def apply(self, move: OrderMove) -> "TotalOrder":
        """Apply ``move`` in place and return self."""
        n = self.n
        i, j = move.i, move.j
        if move.is_inf or not (1 <= i <= n and 0 <= j <= n):
            raise UsageError(f"move {move} out of range for n={n}")
        i, j = int(i), int(j)
        seq, pos = self.seq, self.pos
        e = seq[i]
        if j >= i:
            # shift (i, j] left by one, e lands at j
            seq[i:j] = seq[i + 1:j + 1]
            seq[j] = e
            for k in range(i, j + 1):
                pos[seq[k]] = k
        else:
            # shift [j+1, i) right by one, e lands at j+1
            seq[j + 2:i + 1] = seq[j + 1:i]
            seq[j + 1] = e
            for k in range(j + 1, i + 1):
                pos[seq[k]] = k
        return self

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if isinstance(other, TotalOrder):
            return self.seq == other.seq
        if isinstance(other, tuple):
            return self.as_tuple() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.as_tuple())

    def __repr__(self) -> str:
        return f"TotalOrder({self.as_tuple()})"

    def __str__(self) -> str:
        return "".join(map(str, self.seq[1:])) if self.n < 10 else " ".join(map(str, self.seq[1:]))


def as_order(order) -> TotalOrder:
    return order if isinstance(order, TotalOrder) else TotalOrder(order)


def level(order) -> int:
    """Minimum ``l`` with ``p_l != l``; ``n`` for the root order."""
    return as_order(order).level()


def apply_move(order, move) -> TotalOrder:
    """Return a new order with ``move`` applied; the input is left untouched."""
    return as_order(order).copy().apply(OrderMove(*move))


def undo_of(move) -> OrderMove:
    """The move that restores the parent after a forward move ``(i -> j)``."""
    move = OrderMove(*move)
    if move.is_inf or not move.i < move.j:
        raise UsageError(f"{move} is not a forward move")
    return OrderMove(move.j, move.i - 1)


def violated_conflicts(order, phi: Iterable[Clause]) -> list[Conflict]:
    """Negations of the clauses of ``phi`` that ``order`` violates, in clause order.

    An empty clause is always violated and yields the empty conflict.
    """
    order = as_order(order)
    pos = order.pos
    out = []
    for clause in phi:
        for a, b in clause.disjuncts:
            if pos[a] < pos[b]:
                break
        else:
            out.append(clause.negate())
    return out


def satisfies_all(order, phi: Iterable[Clause]) -> bool:
    order = as_order(order)
    return all(c.satisfied_by(order) for c in phi)


def unit(a: int, b: int) -> Clause:
    """The single-disjunct clause ``a < b``."""
    return Clause([(a, b)])
