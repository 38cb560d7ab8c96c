"""Command line: ``gen``, ``solve`` and ``bench``.

Results go to stdout, logs to stderr. Set CDITO_LOG_LEVEL (e.g. DEBUG) for
more detail.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from cdito.bench import BenchConfig, format_table, run_bench
from cdito.instance import Instance, InstanceError, generate, motivating_example
from cdito.result import Budget, Status
from cdito.search import solve
from cdito.stn import InvalidInstanceError, check_order
from cdito.tree import ito_solve

EXIT_SOLVED, EXIT_UNSAT, EXIT_TIMEOUT, EXIT_INPUT = 0, 1, 2, 3
EXIT_CODES = {Status.SOLVED: EXIT_SOLVED, Status.UNSAT: EXIT_UNSAT, Status.TIMEOUT: EXIT_TIMEOUT}

log = logging.getLogger("cdito")


def _flow_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("flow counts must be positive")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cdito", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--flows", type=int, default=10)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--motivating", action="store_true",
                   help="write the three-flow example instead of a random one")
    g.add_argument("-o", "--output", default="-")

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("--instance", required=True)
    s.add_argument("--solver", choices=("cdito", "ito"), default="cdito")
    s.add_argument("--timeout", type=float, default=20.0, help="seconds")
    s.add_argument("--max-iterations", type=int, default=None)
    s.add_argument("--json", action="store_true", help="emit the result as JSON")

    b = sub.add_parser("bench", help="compare both solvers on generated instances")
    b.add_argument("--flows", type=_flow_list, default=[10])
    b.add_argument("--trials", type=int, default=20)
    b.add_argument("--timeout", type=float, default=20.0, help="seconds per solver run")
    b.add_argument("--max-iterations", type=int, default=None)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("-o", "--output", default=None, help="write the JSON report here")
    return p


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    if args.motivating:
        inst = motivating_example()
    else:
        if args.flows < 1:
            log.error("--flows must be >= 1")
            return EXIT_INPUT
        inst = generate(args.seed, args.flows)
    _write(args.output, inst.dumps())
    return 0


def solve_instance(inst: Instance, solver: str = "cdito", timeout=20.0, max_iterations=None) -> dict:
    h = inst.consistency_fn()
    fn = solve if solver == "cdito" else ito_solve
    r = fn(inst.n_events, inst.clauses, h, Budget(timeout=timeout, max_iterations=max_iterations))
    out = {
        "status": r.status.value,
        "solver": solver,
        "order": list(r.order) if r.order else None,
        "plan": None,
        "schedule": None,
        "stats": r.stats.as_dict(),
        "learned_clauses": [[[p.before, p.after] for p in c.disjuncts] for c in r.learned],
    }
    if r.solved:
        routes = h.router.check(r.order)
        out["plan"] = {f: [path[0][0]] + [v for _, v in path] for f, path in routes.plan.items()}
        sched = check_order(inst.temporal_network(), r.order).schedule
        out["schedule"] = {str(e): t for e, t in sorted(sched.items())}
    return out


def cmd_solve(args) -> int:
    try:
        inst = Instance.load(args.instance)
    except (OSError, InstanceError) as exc:
        log.error("cannot load %s: %s", args.instance, exc)
        return EXIT_INPUT
    try:
        res = solve_instance(inst, args.solver, args.timeout, args.max_iterations)
    except InvalidInstanceError as exc:
        log.error("invalid instance: %s", exc)
        return EXIT_INPUT
    if args.json:
        print(json.dumps(res, indent=1))
    else:
        st = res["stats"]
        print(f"{res['status']}  order={res['order']}  h_calls={st['h_calls']}  "
              f"iterations={st['iterations']}  wall_ms={st['wall_ms']}")
        for f, path in (res["plan"] or {}).items():
            print(f"  {f}: {'-'.join(map(str, path))}")
    return EXIT_CODES[Status(res["status"])]


def cmd_bench(args) -> int:
    try:
        cfg = BenchConfig(args.flows, args.trials, args.timeout, args.seed,
                          args.max_iterations, args.jobs)
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    report = run_bench(cfg)
    print(format_table(report))
    if args.output:
        _write(args.output, json.dumps(report, indent=1) + "\n")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("CDITO_LOG_LEVEL", "WARNING").upper(),
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return {"gen": cmd_gen, "solve": cmd_solve, "bench": cmd_bench}[args.cmd](args)


if __name__ == "__main__":
    sys.exit(main())
