"""Temporal consistency of a total order over a simple temporal network.

Times are integers (milliseconds). An edge ``u -> v`` of weight ``w`` in the
distance graph encodes ``t_v - t_u <= w``. A total order adds one precedence
edge per consecutive pair; a negative cycle through such edges is reported
as the conjunction of the precedences it uses.

Separation constraints (``|t_a - t_b| >= gap``) are disjunctive, but a total
order decides the disjunction, so for a given order they are plain edges
whose presence depends on the precedence between ``a`` and ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from cdito.order import Conflict, PartialOrder, TotalOrder, as_order


class InvalidInstanceError(ValueError):
    """The temporal network is inconsistent regardless of ordering."""


@dataclass(frozen=True)
class TemporalConstraint:
    """``lb <= t_dst - t_src <= ub``; ``None`` bounds are unbounded."""

    src: int
    dst: int
    lb: Optional[int] = 0
    ub: Optional[int] = None

    def __post_init__(self):
        if self.lb is not None and self.ub is not None and self.lb > self.ub:
            raise ValueError(f"lb > ub in {self}")


@dataclass(frozen=True)
class Separation:
    """``a`` and ``b`` occur at least ``gap`` apart, in either order."""

    a: int
    b: int
    gap: int


class Edge(NamedTuple):
    u: int
    v: int
    weight: int
    # None for network constraints, else ("order" | "sep", before, after)
    tag: Optional[tuple]

    @property
    def partial_order(self) -> Optional[PartialOrder]:
        return None if self.tag is None else PartialOrder(self.tag[1], self.tag[2])


@dataclass
class TemporalNetwork:
    n: int
    constraints: list[TemporalConstraint] = field(default_factory=list)
    separations: list[Separation] = field(default_factory=list)
    origin: Optional[int] = None
    # minimum spacing imposed by a precedence; 0 is non-strict
    precedence_gap: int = 0

    def base_edges(self) -> list[Edge]:
        edges = []
        for c in self.constraints:
            if c.ub is not None:
                edges.append(Edge(c.src, c.dst, c.ub, None))
            if c.lb is not None:
                edges.append(Edge(c.dst, c.src, -c.lb, None))
        return edges

    def order_edges(self, order: TotalOrder, encoding: str = "consecutive",
                    keep: Optional[set] = None, exclude=frozenset()) -> list[Edge]:
        """Precedence and separation edges implied by ``order``.

        With ``keep``, precedences are taken over the order projected onto
        those events; the result is still implied by ``order``. Precedences
        listed in ``exclude`` are left out.
        """
        seq, pos = order.seq, order.pos
        gap = self.precedence_gap
        edges = []
        if keep is not None:
            proj = [e for e in seq[1:] if e in keep]
            for a, b in zip(proj, proj[1:]):
                if (a, b) not in exclude:
                    edges.append(Edge(b, a, -gap, ("order", a, b)))
        elif encoding == "consecutive":
            for k in range(1, order.n):
                a, b = seq[k], seq[k + 1]
                if (a, b) not in exclude:
                    edges.append(Edge(b, a, -gap, ("order", a, b)))
        elif encoding == "all_pairs":
            for x in range(1, order.n + 1):
                for y in range(x + 1, order.n + 1):
                    a, b = seq[x], seq[y]
                    if (a, b) not in exclude:
                        edges.append(Edge(b, a, -gap, ("order", a, b)))
        else:
            raise ValueError(f"unknown encoding {encoding!r}")
        for s in self.separations:
            a, b = (s.a, s.b) if pos[s.a] < pos[s.b] else (s.b, s.a)
            if (a, b) in exclude:
                continue
            edges.append(Edge(b, a, -s.gap, ("sep", a, b)))
        return edges


@dataclass
class StnResult:
    consistent: bool
    conflicts: list[Conflict]
    # negative cycles backing the conflicts, one or more per conflict
    cycles: list[list[Edge]]
    schedule: Optional[dict[int, int]] = None

    def __iter__(self):
        yield self.consistent
        yield self.conflicts


def cycle_weight(cycle: Sequence[Edge]) -> int:
    return sum(e.weight for e in cycle)


def find_negative_cycle(n: int, edges: Sequence[Edge]):
    """Bellman-Ford from a virtual source joined to every vertex with weight 0.

    Returns ``(dist, cycle)`` where ``cycle`` is a list of edges forming a
    negative cycle, or ``None`` when the graph has none.
    """
    dist = [0] * (n + 1)
    pred: list[Optional[int]] = [None] * (n + 1)
    last = None
    for _ in range(n + 1):
        last = None
        for idx, (u, v, w, _tag) in enumerate(edges):
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                pred[v] = idx
                last = v
        if last is None:
            return dist, None
    # `last` was relaxed on pass n+1, so a negative cycle is on its predecessor chain
    y = last
    for _ in range(n):
        y = edges[pred[y]].u
    cycle = []
    v = y
    while True:
        e = edges[pred[v]]
        cycle.append(e)
        v = e.u
        if v == y:
            break
    cycle.reverse()
    return dist, cycle


def _conjuncts(cycle: Sequence[Edge]) -> list[PartialOrder]:
    out: list[PartialOrder] = []
    for e in cycle:
        p = e.partial_order
        if p is not None and p not in out:
            out.append(p)
    return out


def _check(tn: TemporalNetwork, order: TotalOrder, encoding: str, keep=None, exclude=frozenset()):
    edges = tn.base_edges() + tn.order_edges(order, encoding, keep, exclude)
    dist, cycle = find_negative_cycle(order.n, edges)
    if cycle is not None and all(e.tag is None for e in cycle):
        raise InvalidInstanceError(
            "temporal network has a negative cycle without ordering edges: "
            + " ".join(f"{e.u}->{e.v}({e.weight})" for e in cycle)
        )
    return dist, cycle


def _shrink(tn: TemporalNetwork, order: TotalOrder, cycle: list[Edge],
            exclude=frozenset()) -> list[Edge]:
    """Greedily drop events from the order projection while a negative cycle remains."""
    keep = {e.u for e in cycle}
    for x in sorted(keep, key=lambda e: -order.pos[e]):
        trial = keep - {x}
        _, c = _check(tn, order, "consecutive", trial, exclude)
        if c is not None:
            keep, cycle = trial, c
    return cycle


def _swap(order: TotalOrder, a: int, b: int) -> TotalOrder:
    seq = list(order.seq[1:])
    i, j = order.pos[a] - 1, order.pos[b] - 1
    seq[i], seq[j] = seq[j], seq[i]
    return TotalOrder(seq)


def _generalize(tn, order, encoding, cycle, minimize):
    conj = _conjuncts(cycle)
    cycles = [cycle]
    tried = set()
    while True:
        seps = [e.partial_order for c in cycles for e in c
                if e.tag is not None and e.tag[0] == "sep" and e.partial_order in conj]
        seps = [s for s in seps if frozenset(s) not in tried]
        if not seps:
            break
        s = seps[0]
        tried.add(frozenset(s))
        swapped = _swap(order, *s)
        _, other = _check(tn, swapped, encoding)
        if other is None:
            continue
        if minimize:
            other = _shrink(tn, swapped, other)
        merged = [p for p in conj if p != s]
        for p in _conjuncts(other):
            if p != s.negate() and p not in merged:
                merged.append(p)
        if merged and all(p.holds_in(order) for p in merged):
            conj = merged
            cycles.append(other)
    return conj, cycles


def check_order(
    tn: TemporalNetwork,
    order,
    encoding: str = "consecutive",
    generalize: bool = True,
    minimize: bool = True,
    max_conflicts: int = 1,
) -> StnResult:
    """Check whether ``order`` is temporally consistent.

    On failure, returns conflicts built from the precedences on negative
    cycles. With ``minimize``, events are dropped from the order one at a time
    (keeping the precedences implied among the rest) while a negative cycle
    survives, which shortens the conflict. With ``generalize``, each
    separation precedence ``x < y`` in a conflict is resolved away when the
    order with ``x`` and ``y`` swapped is also inconsistent: the two conflicts
    are merged without the separation literal, provided the result still
    holds in ``order``.

    With ``max_conflicts > 1``, further conflicts are looked for by banning
    one precedence of the first conflict at a time, so each extra conflict
    differs from the first in at least that literal.
    """
    order = as_order(order)
    dist, cycle = _check(tn, order, encoding)
    if cycle is None:
        ref = dist[tn.origin] if tn.origin is not None else min(dist[1:], default=0)
        schedule = {e: dist[e] - ref for e in range(1, order.n + 1)}
        return StnResult(True, [], [], schedule)

    def finish(cycle, exclude=frozenset()):
        if minimize:
            cycle = _shrink(tn, order, cycle, exclude)
        if generalize:
            return _generalize(tn, order, encoding, cycle, minimize)
        return _conjuncts(cycle), [cycle]

    conj, cycles = finish(cycle)
    conflicts = [Conflict(conj)]
    seen = {frozenset(conj)}
    for p in conj:
        if len(conflicts) >= max_conflicts:
            break
        ban = frozenset({tuple(p)})
        _, other = _check(tn, order, encoding, exclude=ban)
        if other is None:
            continue
        more, more_cycles = finish(other, ban)
        key = frozenset(more)
        if key in seen or any(k <= key for k in seen):
            continue
        seen.add(key)
        conflicts.append(Conflict(more))
        cycles.extend(more_cycles)
    return StnResult(False, conflicts, cycles)


def check_base(tn: TemporalNetwork) -> None:
    """Raise InvalidInstanceError if the network alone is inconsistent."""
    _, cycle = find_negative_cycle(tn.n, tn.base_edges())
    if cycle is not None:
        raise InvalidInstanceError("temporal network is inconsistent on its own")
