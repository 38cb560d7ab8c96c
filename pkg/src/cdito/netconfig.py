"""State consistency for temporal network configuration.

Given a total order of flow start/end events, every flow gets one fixed
path for its lifetime, and in each span between consecutive events the
flows active in that span must fit on the links they share.

Units are integers: loss in thousandths of a percent, delay in ms,
bandwidth and throughput in kbps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from cdito.order import Conflict, PartialOrder, TotalOrder, UsageError, as_order
from cdito.stn import TemporalNetwork, check_order

log = logging.getLogger(__name__)

LOSS_MODELS = ("additive", "multiplicative")


@dataclass(frozen=True)
class Link:
    u: int
    v: int
    loss: int
    delay: int
    bandwidth: int


@dataclass
class Network:
    nodes: list[int]
    links: dict[tuple[int, int], Link] = field(default_factory=dict)

    @classmethod
    def from_links(cls, nodes: Iterable[int], links: Iterable[Link]) -> "Network":
        net = cls(list(nodes))
        for link in links:
            if (link.u, link.v) in net.links:
                raise ValueError(f"duplicate link {link.u}->{link.v}")
            if link.loss < 0 or link.delay < 0 or link.bandwidth <= 0:
                raise ValueError(f"bad link parameters {link}")
            net.links[(link.u, link.v)] = link
        return net

    def out_links(self) -> dict[int, list[Link]]:
        out: dict[int, list[Link]] = {u: [] for u in self.nodes}
        for link in self.links.values():
            out.setdefault(link.u, []).append(link)
        for u in out:
            out[u].sort(key=lambda l: l.v)
        return out


@dataclass(frozen=True)
class Flow:
    id: str
    source: int
    sink: int
    max_loss: int
    max_delay: int
    min_throughput: int
    duration: tuple[int, Optional[int]]
    start_event: int
    end_event: int

    def __post_init__(self):
        lo, hi = self.duration
        if hi is not None and lo > hi:
            raise ValueError(f"flow {self.id}: duration lo > hi")
        if self.start_event == self.end_event:
            raise ValueError(f"flow {self.id}: start and end events coincide")


Path = tuple[tuple[int, int], ...]


@dataclass
class RouteResult:
    # "feasible" | "infeasible" | "unroutable" | "unknown"
    status: str
    conflicts: list[Conflict]
    plan: Optional[dict[str, Path]] = None
    infeasible_set: Optional[frozenset[str]] = None

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def __iter__(self):
        yield self.feasible
        yield self.conflicts
        yield self.plan


def path_metrics(net: Network, path: Path, loss_model: str = "additive") -> tuple[float, int]:
    delay = sum(net.links[e].delay for e in path)
    if loss_model == "additive":
        loss: float = sum(net.links[e].loss for e in path)
    else:
        keep = 1.0
        for e in path:
            keep *= 1 - net.links[e].loss / 100_000
        loss = (1 - keep) * 100_000
    return loss, delay


def candidate_paths(net: Network, flow: Flow, limit: int = 16, loss_model: str = "additive",
                    out: Optional[dict] = None, first_only: bool = False) -> list[Path]:
    """Simple paths that carry ``flow`` alone within its loss and delay bounds.

    Sorted by (delay, loss, hop count, nodes) and capped at ``limit``.
    """
    if loss_model not in LOSS_MODELS:
        raise ValueError(f"unknown loss model {loss_model!r}")
    out = out if out is not None else net.out_links()
    found = []

    def dfs(u, visited, path, delay, keep, loss):
        if u == flow.sink:
            found.append((delay, loss, len(path), tuple(path)))
            return
        for link in out.get(u, ()):
            if first_only and found:
                return
            if link.v in visited or link.bandwidth < flow.min_throughput:
                continue
            d = delay + link.delay
            if d > flow.max_delay:
                continue
            if loss_model == "additive":
                k, lo = keep, loss + link.loss
            else:
                k = keep * (1 - link.loss / 100_000)
                lo = (1 - k) * 100_000
            if lo > flow.max_loss:
                continue
            visited.add(link.v)
            path.append((link.u, link.v))
            dfs(link.v, visited, path, d, k, lo)
            path.pop()
            visited.discard(link.v)

    dfs(flow.source, {flow.source}, [], 0, 1.0, 0)
    found.sort(key=lambda t: (t[0], t[1], t[2], t[3]))
    if len(found) > limit and not first_only:
        log.info("flow %s has %d candidate paths, keeping %d; routing search is incomplete",
                 flow.id, len(found), limit)
    return [p for *_, p in found[:limit]]


def concurrency_intervals(order, flows: Sequence[Flow]) -> list[frozenset[str]]:
    """Active flow ids in each gap between consecutive events; empty gaps dropped."""
    order = as_order(order)
    pos = order.pos
    for f in flows:
        if pos[f.start_event] > pos[f.end_event]:
            raise UsageError(f"flow {f.id} ends before it starts in {order}")
    out = []
    for k in range(1, order.n):
        active = frozenset(f.id for f in flows if pos[f.start_event] <= k < pos[f.end_event])
        if active:
            out.append(active)
    return out


def concurrent(order: TotalOrder, f: Flow, g: Flow) -> bool:
    pos = order.pos
    return pos[f.start_event] < pos[g.end_event] and pos[g.start_event] < pos[f.end_event]


def concurrency_conflict(order: TotalOrder, flows: Sequence[Flow]) -> Conflict:
    """Start-before-end precedences for every concurrent pair of ``flows``."""
    conj = []
    for f in flows:
        for g in flows:
            if f is g or f.start_event == g.end_event:
                continue
            if concurrent(order, f, g):
                p = PartialOrder(f.start_event, g.end_event)
                if p not in conj:
                    conj.append(p)
    return Conflict(conj)


class _Budget(Exception):
    pass


def _maximal(groups: Iterable[frozenset]) -> list[frozenset]:
    uniq = sorted(set(groups), key=lambda g: (-len(g), sorted(g)))
    out: list[frozenset] = []
    for g in uniq:
        if not any(g <= h for h in out):
            out.append(g)
    return out


def _components(groups: list[frozenset]) -> list[list[frozenset]]:
    comps: list[tuple[set, list]] = []
    for g in groups:
        hit = [c for c in comps if c[0] & g]
        members, gs = set(g), [g]
        for c in hit:
            members |= c[0]
            gs.extend(c[1])
            comps.remove(c)
        comps.append((members, gs))
    return [gs for _, gs in sorted(comps, key=lambda c: sorted(c[0]))]


def assign_paths(groups: list[frozenset], flows: dict[str, Flow], cands: dict[str, list[Path]],
                 net: Network, node_budget: int) -> Optional[dict[str, Path]]:
    """Backtracking search for one path per flow respecting link capacity in every group.

    Returns a plan, None when none exists, or raises _Budget.
    """
    ids = sorted({f for g in groups for f in g}, key=lambda f: (len(cands[f]), f))
    member = {f: [k for k, g in enumerate(groups) if f in g] for f in ids}
    loads: list[dict] = [dict() for _ in groups]
    plan: dict[str, Path] = {}
    nodes = 0

    def fits(f, path):
        t = flows[f].min_throughput
        for k in member[f]:
            load = loads[k]
            for e in path:
                if load.get(e, 0) + t > net.links[e].bandwidth:
                    return False
        return True

    def place(f, path, sign):
        t = sign * flows[f].min_throughput
        for k in member[f]:
            load = loads[k]
            for e in path:
                load[e] = load.get(e, 0) + t

    def search(idx):
        nonlocal nodes
        if idx == len(ids):
            return True
        f = ids[idx]
        for path in cands[f]:
            nodes += 1
            if nodes > node_budget:
                raise _Budget
            if fits(f, path):
                place(f, path, 1)
                plan[f] = path
                if search(idx + 1):
                    return True
                place(f, path, -1)
                del plan[f]
        return False

    return dict(plan) if search(0) else None


class RouteChecker:
    """Joint routability checks over one network and flow set, with cached candidate paths."""

    def __init__(self, net: Network, flows: Sequence[Flow], max_paths: int = 16,
                 node_budget: int = 20_000, minimize: bool = True, loss_model: str = "additive",
                 all_components: bool = True):
        self.net = net
        self.flows = list(flows)
        self.by_id = {f.id: f for f in self.flows}
        self.node_budget = node_budget
        self.minimize = minimize
        self.all_components = all_components
        self.budget_hits = 0
        out = net.out_links()
        self.cands = {f.id: candidate_paths(net, f, max_paths, loss_model, out) for f in self.flows}
        self.unroutable = sorted(f for f, ps in self.cands.items() if not ps)

    def _solve(self, groups):
        try:
            return "ok", assign_paths(groups, self.by_id, self.cands, self.net, self.node_budget)
        except _Budget:
            self.budget_hits += 1
            return "unknown", None

    def _shrink(self, members: list[str], groups: list[frozenset]) -> list[str]:
        keep = list(members)
        for f in members:
            trial = [x for x in keep if x != f]
            sub = _maximal(g & frozenset(trial) for g in groups)
            sub = [g for g in sub if len(g) > 1]
            if not sub:
                continue
            tag, plan = self._solve(sub)
            if tag == "ok" and plan is None:
                keep = trial
        return keep

    def check(self, order) -> RouteResult:
        order = as_order(order)
        if self.unroutable:
            return RouteResult("unroutable", [Conflict(())], None, frozenset(self.unroutable))
        groups = _maximal(concurrency_intervals(order, self.flows))
        plan: dict[str, Path] = {}
        for f in self.flows:
            plan[f.id] = self.cands[f.id][0]
        conflicts, bad, status = [], set(), "infeasible"
        for comp in _components(groups):
            tag, sub = self._solve(comp)
            if tag == "ok" and sub is not None:
                plan.update(sub)
                continue
            members = sorted({f for g in comp for f in g})
            if tag == "ok" and self.minimize:
                members = self._shrink(members, comp)
            if tag != "ok":
                status = "unknown"
            conflicts.append(concurrency_conflict(order, [self.by_id[f] for f in members]))
            bad.update(members)
            if not self.all_components:
                break
        if conflicts:
            return RouteResult(status, conflicts, None, frozenset(bad))
        return RouteResult("feasible", [], plan)


def route_check(net: Network, order, flows: Sequence[Flow], **kw) -> RouteResult:
    return RouteChecker(net, flows, **kw).check(order)


def validate_plan(net: Network, order, flows: Sequence[Flow], plan: dict[str, Path],
                  loss_model: str = "additive") -> list[str]:
    """Independent check of a routing plan; returns a list of violations."""
    order = as_order(order)
    errors = []
    by_id = {f.id: f for f in flows}
    for f in flows:
        path = plan.get(f.id)
        if not path:
            errors.append(f"{f.id}: no path")
            continue
        if path[0][0] != f.source or path[-1][1] != f.sink:
            errors.append(f"{f.id}: path does not join {f.source} to {f.sink}")
        if any(a[1] != b[0] for a, b in zip(path, path[1:])):
            errors.append(f"{f.id}: path is not contiguous")
        if any(e not in net.links for e in path):
            errors.append(f"{f.id}: path uses a missing link")
            continue
        loss, delay = path_metrics(net, path, loss_model)
        if loss > f.max_loss or delay > f.max_delay:
            errors.append(f"{f.id}: loss/delay bound exceeded")
    pos = order.pos
    for k in range(1, order.n):
        load: dict = {}
        for f in flows:
            if pos[f.start_event] <= k < pos[f.end_event] and f.id in plan:
                for e in plan[f.id]:
                    load[e] = load.get(e, 0) + by_id[f.id].min_throughput
        for e, x in load.items():
            if e in net.links and x > net.links[e].bandwidth:
                errors.append(f"gap {k}: link {e} carries {x} > {net.links[e].bandwidth}")
    return errors


def make_h(net: Network, flows: Sequence[Flow], tn: TemporalNetwork, *, state_first: bool = True,
           short_circuit: bool = False, max_temporal_conflicts: int = 4, **route_kw):
    """Compose routing and temporal checks into a consistency function.

    Both checks run unless ``short_circuit`` is set, in which case the first
    failing one decides. Conflicts are returned state first when
    ``state_first``. The temporal check may report up to
    ``max_temporal_conflicts`` distinct conflicts per call.
    """
    router = RouteChecker(net, flows, **route_kw)

    def state(order):
        r = router.check(order)
        return r.feasible, r.conflicts

    def temporal(order):
        r = check_order(tn, order, max_conflicts=max_temporal_conflicts)
        return r.consistent, r.conflicts

    checks = (state, temporal) if state_first else (temporal, state)

    def h(order):
        ok, conflicts = True, []
        for check in checks:
            good, cs = check(order)
            if not good:
                ok = False
                conflicts.extend(cs)
                if short_circuit:
                    break
        return ok, conflicts

    h.router = router
    return h
