import random

import pytest
from hypothesis import given, settings, strategies as st

from cdito.order import Clause, Conflict, TotalOrder, unit
from cdito.result import Budget, IntegrityError, Status
from cdito.search import learn_clauses, solve
from helpers import (
    C5,
    C6,
    PHI_1_4,
    PHI_5,
    PHI_6,
    HiddenConflicts,
    all_orders,
    brute_force_sat,
    random_solve_instance,
)


def test_learn_clauses():
    assert learn_clauses([C5, C6]) == [PHI_5, PHI_6]
    assert learn_clauses([]) == []


def test_motivating_scripted_trace():
    h = HiddenConflicts([C5, C6], report_all=False)
    r = solve(5, PHI_1_4, h)
    assert r.order == (2, 4, 1, 3, 5)
    assert r.stats.inconsistent_h_calls == 2
    assert r.learned == [PHI_5, PHI_6]


def test_contradictory_units():
    r = solve(3, [unit(1, 2), unit(2, 1)], lambda o: (True, []))
    assert r.status is Status.UNSAT and r.order is None and r.stats.h_calls == 0


def test_empty_conflict_wipes_out():
    calls = []

    def h(order):
        calls.append(order)
        return False, [Conflict([])]

    r = solve(4, [], h)
    assert r.status is Status.UNSAT and len(calls) == 1
    assert r.learned == [Clause([])]


def test_empty_input_clause_is_unsat():
    assert solve(3, [Clause([])], lambda o: (True, [])).status is Status.UNSAT


def test_inactive_conflict_is_integrity_error():
    with pytest.raises(IntegrityError):
        solve(3, [], lambda o: (False, [Conflict([(3, 1)])]))
    with pytest.raises(IntegrityError):
        solve(3, [], lambda o: (False, []))


def test_budget_timeout():
    r = solve(6, [], lambda o: (False, [Conflict([(o.seq[1], o.seq[2]), (o.seq[3], o.seq[4])])]),
              Budget(max_h_calls=3))
    assert r.status is Status.TIMEOUT and r.stats.h_calls == 3


@given(st.integers(0, 10_000))
@settings(max_examples=60)
def test_h_always_consistent_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    phi = []
    for _ in range(rng.randint(0, 6)):
        if n < 2:
            break
        phi.append(Clause([tuple(rng.sample(range(1, n + 1), 2)) for _ in range(rng.randint(1, 2))]))
    r = solve(n, phi, lambda o: (True, []))
    assert r.solved == brute_force_sat(n, phi, lambda o: True)


@pytest.mark.parametrize("seed", range(150))
def test_soundness_and_discipline(seed):
    n, phi, hidden, report_all = random_solve_instance(seed)
    h = HiddenConflicts(hidden, report_all)
    r = solve(n, phi, h)
    expected = brute_force_sat(n, phi, h.accepts)
    assert r.solved == expected
    # never revisit
    assert len(h.calls) == len(set(h.calls)) == r.stats.h_calls
    # each h call saw an order satisfying the clauses known at that time
    known = list(phi)
    learned = iter(r.learned)
    for order in h.calls:
        L = TotalOrder(order)
        assert all(c.satisfied_by(L) for c in known)
        ok, conflicts = HiddenConflicts(hidden, report_all)(L)
        known.extend(next(learned) for _ in conflicts)
    if r.solved:
        L = TotalOrder(r.order)
        assert all(c.satisfied_by(L) for c in phi + r.learned)
        assert h.accepts(L)
    # learned clauses never exclude an accepted order
    for c in r.learned:
        for L in all_orders(n):
            if h.accepts(L):
                assert c.satisfied_by(L)


def test_restart_from_given_node():
    # starting inside the tree still finds a solution in that subtree
    start = (TotalOrder((2, 1, 3)), [(1, 2, 3), (1, 1, 1)])
    r = solve(3, [], lambda o: (True, []), start=start)
    assert r.order == (2, 1, 3)
