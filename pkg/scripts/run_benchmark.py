"""Table-2 style sweep: CDITO vs the systematic baseline on generated instances.

    python scripts/run_benchmark.py --flows 10,20 --trials 20 --timeout 5 --out results/bench.json
"""

import argparse
import json
import logging
import os

from cdito.bench import BenchConfig, format_table, run_bench
from cdito.cli import _flow_list


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--flows", type=_flow_list, default=[10, 20])
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--timeout", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default="results/bench.json")
    args = p.parse_args()
    logging.basicConfig(level=os.environ.get("CDITO_LOG_LEVEL", "WARNING").upper())

    rep = run_bench(BenchConfig(args.flows, args.trials, args.timeout, args.seed, jobs=args.jobs))
    print(format_table(rep))
    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    with open(args.out, "w") as fh:
        json.dump(rep, fh, indent=1)
    print(f"report written to {args.out}")


if __name__ == "__main__":
    main()
