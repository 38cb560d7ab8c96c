"""Benchmark harness: CDITO against the systematic baseline on generated instances."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from statistics import mean
from typing import Optional

from cdito import search, tree
from cdito.instance import generate
from cdito.result import Budget

log = logging.getLogger(__name__)

SOLVERS = {"cdito": search.solve, "ito": tree.ito_solve}


@dataclass
class BenchConfig:
    flows: list[int] = field(default_factory=lambda: [10])
    trials: int = 20
    timeout: Optional[float] = 20.0
    seed: int = 0
    # deterministic alternative to the wall-clock limit
    max_iterations: Optional[int] = None
    jobs: int = 1
    solvers: tuple[str, ...] = ("cdito", "ito")

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.flows or any(f < 1 for f in self.flows):
            raise ValueError("flows must be positive")
        unknown = set(self.solvers) - set(SOLVERS)
        if unknown:
            raise ValueError(f"unknown solvers {sorted(unknown)}")

    def budget(self) -> Budget:
        return Budget(timeout=self.timeout, max_iterations=self.max_iterations)


@dataclass
class Trial:
    flows: int
    seed: int
    solver: str
    status: str
    h_calls: int = 0
    iterations: int = 0
    error: Optional[str] = None


def run_trial(cfg: BenchConfig, flows: int, seed: int) -> list[Trial]:
    """Both solvers on one generated instance, each with a fresh copy of the same h."""
    try:
        inst = generate(seed, flows)
    except Exception as exc:  # recorded, never aborts the sweep
        log.warning("generation failed for flows=%d seed=%d: %s", flows, seed, exc)
        return [Trial(flows, seed, s, "ERROR", error=repr(exc)) for s in cfg.solvers]
    out = []
    for name in cfg.solvers:
        try:
            h = inst.consistency_fn()
            r = SOLVERS[name](inst.n_events, inst.clauses, h, cfg.budget())
            out.append(Trial(flows, seed, name, r.status.value, r.stats.h_calls, r.stats.iterations))
        except Exception as exc:
            log.warning("%s failed on flows=%d seed=%d: %s", name, flows, seed, exc)
            out.append(Trial(flows, seed, name, "ERROR", error=repr(exc)))
        log.info("flows=%d seed=%d %s %s h=%d", flows, seed, name, out[-1].status, out[-1].h_calls)
    return out


def _run(args):
    return run_trial(*args)


def aggregate(trials: list[Trial], flows: list[int], solvers) -> list[dict]:
    rows = []
    for f in flows:
        row = {"flows": f}
        for s in solvers:
            ts = [t for t in trials if t.flows == f and t.solver == s]
            solved = [t.h_calls for t in ts if t.status == "SOLVED"]
            unsolved = [t.h_calls for t in ts if t.status != "SOLVED"]
            row[s] = {
                "trials": len(ts),
                "solved": len(solved),
                "N_S": float(mean(solved)) if solved else None,
                "N_U": float(mean(unsolved)) if unsolved else None,
            }
        rows.append(row)
    return rows


def run_bench(cfg: BenchConfig) -> dict:
    """Run the sweep and return the structured report (no wall-clock fields)."""
    jobs = [(cfg, f, cfg.seed + t) for f in cfg.flows for t in range(cfg.trials)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(_run, jobs))
    else:
        results = [_run(j) for j in jobs]
    trials = [t for r in results for t in r]
    return {
        "config": {"flows": list(cfg.flows), "trials": cfg.trials, "timeout_s": cfg.timeout,
                   "seed": cfg.seed, "max_iterations": cfg.max_iterations,
                   "solvers": list(cfg.solvers)},
        "rows": aggregate(trials, cfg.flows, cfg.solvers),
        "trials": [asdict(t) for t in trials],
    }


def _fmt(x) -> str:
    if x is None:
        return "-"
    return f"{x:.1f}" if isinstance(x, float) else str(x)


def format_table(report: dict) -> str:
    solvers = report["config"]["solvers"]
    head = ["#flows"]
    for s in solvers:
        head += [f"{s} #solved", f"{s} N_S", f"{s} N_U"]
    lines = [head]
    for row in report["rows"]:
        cells = [str(row["flows"])]
        for s in solvers:
            r = row[s]
            cells += [f"{r['solved']}/{r['trials']}", _fmt(r["N_S"]), _fmt(r["N_U"])]
        lines.append(cells)
    widths = [max(len(l[k]) for l in lines) for k in range(len(head))]
    text = ["  ".join(c.rjust(w) for c, w in zip(l, widths)) for l in lines]
    text.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(text)
