"""Instance files: network, flows, temporal constraints and clauses, plus the generator."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Any, Optional

from cdito.netconfig import Flow, Link, Network, candidate_paths, make_h
from cdito.order import Clause, unit
from cdito.stn import (
    InvalidInstanceError,
    Separation,
    TemporalConstraint,
    TemporalNetwork,
    check_base,
)

FORMAT_VERSION = 1

HORIZON_MS = 300_000
MESH_NODES = 16


class InstanceError(ValueError):
    """Malformed or inconsistent instance file."""


@dataclass
class Instance:
    n_events: int
    network: Network
    flows: list[Flow]
    temporal: list[TemporalConstraint]
    clauses: list[Clause]
    separations: list[Separation] = field(default_factory=list)
    origin: Optional[int] = None
    precedence_gap: int = 0
    meta: dict[str, Any] = field(default_factory=dict)

    def temporal_network(self) -> TemporalNetwork:
        """Explicit constraints plus one duration constraint per flow."""
        cons = [TemporalConstraint(f.start_event, f.end_event, f.duration[0], f.duration[1])
                for f in self.flows]
        return TemporalNetwork(self.n_events, cons + list(self.temporal), list(self.separations),
                               self.origin, self.precedence_gap)

    def consistency_fn(self, **kw):
        return make_h(self.network, self.flows, self.temporal_network(), **kw)

    def validate(self) -> None:
        n = self.n_events
        if n < 1:
            raise InstanceError("instance needs at least one event")

        def ev(e, what):
            if not (isinstance(e, int) and 1 <= e <= n):
                raise InstanceError(f"{what}: event {e!r} outside 1..{n}")

        nodes = set(self.network.nodes)
        for f in self.flows:
            ev(f.start_event, f"flow {f.id}")
            ev(f.end_event, f"flow {f.id}")
            if f.source not in nodes or f.sink not in nodes:
                raise InstanceError(f"flow {f.id}: unknown endpoint")
        for c in self.temporal:
            ev(c.src, "temporal constraint")
            ev(c.dst, "temporal constraint")
        for s in self.separations:
            ev(s.a, "separation")
            ev(s.b, "separation")
        for cl in self.clauses:
            for p in cl.disjuncts:
                ev(p.before, "clause")
                ev(p.after, "clause")
        if self.origin is not None:
            ev(self.origin, "origin")
        try:
            check_base(self.temporal_network())
        except InvalidInstanceError as exc:
            raise InstanceError(str(exc)) from exc

    # serialization

    def to_dict(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "n_events": self.n_events,
            "origin": self.origin,
            "precedence_gap_ms": self.precedence_gap,
            "nodes": list(self.network.nodes),
            "links": [
                {"u": l.u, "v": l.v, "loss_millipct": l.loss, "delay_ms": l.delay,
                 "bandwidth_kbps": l.bandwidth}
                for l in self.network.links.values()
            ],
            "flows": [
                {"id": f.id, "source": f.source, "sink": f.sink,
                 "max_loss_millipct": f.max_loss, "max_delay_ms": f.max_delay,
                 "min_throughput_kbps": f.min_throughput,
                 "duration_ms": [f.duration[0], f.duration[1]],
                 "start_event": f.start_event, "end_event": f.end_event}
                for f in self.flows
            ],
            "temporal": [{"from": c.src, "to": c.dst, "lb_ms": c.lb, "ub_ms": c.ub}
                         for c in self.temporal],
            "separations": [{"a": s.a, "b": s.b, "min_gap_ms": s.gap} for s in self.separations],
            "clauses": [[[p.before, p.after] for p in c.disjuncts] for c in self.clauses],
            "meta": dict(self.meta),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Instance":
        try:
            if d.get("version") != FORMAT_VERSION:
                raise InstanceError(f"unsupported instance version {d.get('version')!r}")
            links = [Link(int(l["u"]), int(l["v"]), int(l["loss_millipct"]), int(l["delay_ms"]),
                          int(l["bandwidth_kbps"])) for l in d["links"]]
            net = Network.from_links([int(x) for x in d["nodes"]], links)
            flows = [Flow(str(f["id"]), int(f["source"]), int(f["sink"]),
                          int(f["max_loss_millipct"]), int(f["max_delay_ms"]),
                          int(f["min_throughput_kbps"]),
                          (int(f["duration_ms"][0]), _opt_int(f["duration_ms"][1])),
                          int(f["start_event"]), int(f["end_event"])) for f in d["flows"]]
            temporal = [TemporalConstraint(int(c["from"]), int(c["to"]), _opt_int(c["lb_ms"]),
                                           _opt_int(c["ub_ms"])) for c in d["temporal"]]
            seps = [Separation(int(s["a"]), int(s["b"]), int(s["min_gap_ms"]))
                    for s in d.get("separations", [])]
            clauses = [Clause((int(a), int(b)) for a, b in c) for c in d["clauses"]]
            inst = cls(int(d["n_events"]), net, flows, temporal, clauses, seps,
                       _opt_int(d.get("origin")), int(d.get("precedence_gap_ms", 0)),
                       dict(d.get("meta", {})))
        except InstanceError:
            raise
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InstanceError(f"malformed instance: {exc!r}") from exc
        inst.validate()
        return inst

    @classmethod
    def loads(cls, text: str) -> "Instance":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"not valid JSON: {exc}") from exc
        if not isinstance(d, dict):
            raise InstanceError("instance must be a JSON object")
        return cls.from_dict(d)

    @classmethod
    def load(cls, path) -> "Instance":
        with open(path) as fh:
            return cls.loads(fh.read())

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps())


def _opt_int(x):
    return None if x is None else int(x)


def motivating_example() -> Instance:
    """Three flows over a three-node network, with exactly one consistent order (2,4,1,3,5).

    Events: 1 A start, 2 mission start (B and C start), 3 B end, 4 C end, 5 A end.
    Flow and temporal requirements are taken as given for the example. The
    link parameters are reconstructed so that only 1-2 serves A and C, B may
    also use 1-3-2, and 1-2 cannot carry two flows at once.
    """
    links = [
        Link(1, 2, 200, 100, 500),      # reconstructed: fits any single flow, no pair
        Link(1, 3, 1000, 400, 500),     # reconstructed: 1-3-2 is 2% loss, 0.8 s delay
        Link(3, 2, 1000, 400, 500),
    ]
    net = Network.from_links([1, 2, 3], links)
    dur = (30_000, 60_000)
    flows = [
        Flow("A", 1, 2, 500, 1000, 200, dur, 1, 5),
        Flow("B", 1, 2, 3000, 1000, 360, dur, 2, 3),
        Flow("C", 1, 2, 3000, 300, 360, dur, 2, 4),
    ]
    temporal = [
        TemporalConstraint(2, 1, 0, None),          # A starts after the mission begins
        TemporalConstraint(2, 3, 0, 70_000),        # whole mission within 70 s
        TemporalConstraint(2, 4, 0, 70_000),
        TemporalConstraint(2, 5, 0, 70_000),
    ]
    separations = [Separation(3, 4, 20_000)]       # B and C end at least 20 s apart
    clauses = [unit(1, 5), unit(2, 3), unit(2, 4), Clause([(3, 1), (4, 1)])]
    inst = Instance(5, net, flows, temporal, clauses, separations, origin=2, precedence_gap=1,
                    meta={"name": "motivating-example", "horizon_ms": 70_000})
    inst.validate()
    return inst


def _uniform_int(rng: random.Random, lo: float, hi: float, scale: int) -> int:
    return int(round(rng.uniform(lo, hi) * scale))


def generate(seed: int, num_flows: int, nodes: int = MESH_NODES, horizon: int = HORIZON_MS) -> Instance:
    """Random temporal network configuration instance.

    Complete directed mesh; each flow gets requirements drawn from the
    benchmark ranges and a source/sink pair that can carry it on its own.
    Event 1 is the mission start; flow k starts at 2k and ends at 2k+1.
    """
    if num_flows < 1:
        raise ValueError("num_flows must be >= 1")
    rng = random.Random(seed)
    node_ids = list(range(1, nodes + 1))
    links = []
    for u in node_ids:
        for v in node_ids:
            if u != v:
                links.append(Link(u, v, _uniform_int(rng, 0.1, 0.3, 1000),
                                  _uniform_int(rng, 0.1, 0.3, 1000),
                                  _uniform_int(rng, 500, 1000, 1)))
    net = Network.from_links(node_ids, links)
    out = net.out_links()
    pairs = [(u, v) for u in node_ids for v in node_ids if u != v]

    flows = []
    for k in range(1, num_flows + 1):
        while True:
            loss = _uniform_int(rng, 0.1, 0.3, 1000)
            delay = _uniform_int(rng, 0.1, 0.3, 1000)
            thr = _uniform_int(rng, 600, 1000, 1)
            min_dur = _uniform_int(rng, 20, 80, 1000)
            ok = []
            for s, t in pairs:
                f = Flow(f"F{k}", s, t, loss, delay, thr, (min_dur, horizon), 2 * k, 2 * k + 1)
                if candidate_paths(net, f, out=out, first_only=True):
                    ok.append(f)
            if ok:
                flows.append(rng.choice(ok))
                break

    n = 2 * num_flows + 1
    temporal = [TemporalConstraint(1, e, 0, horizon) for e in range(2, n + 1)]
    clauses = [unit(f.start_event, f.end_event) for f in flows]
    clauses += [unit(1, e) for e in range(2, n + 1)]
    base = Instance(n, net, flows, temporal, clauses, [], origin=1, precedence_gap=1)
    extra = []
    for _ in range(math.ceil(num_flows / 5)):
        while True:
            a, b = rng.sample(range(1, n + 1), 2)
            d = max(1, int(math.ceil(rng.uniform(0, 100) * 1000)))
            c = TemporalConstraint(a, b, d, d)
            base.temporal = temporal + extra + [c]
            try:
                check_base(base.temporal_network())
            except InvalidInstanceError:
                continue
            extra.append(c)
            break
    base.temporal = temporal + extra
    base.meta = {"seed": seed, "num_flows": num_flows, "horizon_ms": horizon,
                 "random_constraints": len(extra)}
    base.validate()
    return base
