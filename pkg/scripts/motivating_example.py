"""Solve the three-flow example and print the search step by step."""

from cdito.instance import motivating_example
from cdito.search import solve
from cdito.stn import check_order


def main():
    inst = motivating_example()
    h = inst.consistency_fn()

    def show(step):
        order = "".join(map(str, step.order))
        cs = ", ".join(str(c) for c in step.conflicts) or "-"
        mark = "h" if step.h_called else " "
        print(f"{step.iteration:3d} {mark} {order}  status={tuple(step.status)}  "
              f"conflicts=[{cs}]  -> {step.move} ({step.kind.name})")

    r = solve(inst.n_events, inst.clauses, h, on_step=show)
    print()
    print("result:", r.status.value, r.order)
    print("learned:", "; ".join(str(c) for c in r.learned))
    print("h calls:", r.stats.h_calls)
    if r.solved:
        print("routes:", h.router.check(r.order).plan)
        print("schedule (ms from mission start):", check_order(inst.temporal_network(), r.order).schedule)


if __name__ == "__main__":
    main()
