import math
import random

import pytest
from hypothesis import given, strategies as st

from cdito.order import Clause, TotalOrder, apply_move, unit
from cdito.result import Budget, Status
from cdito.tree import TotalOrderSearch, children, default_successor, enumerate_all, ito_solve
from helpers import C5, C6, PHI_1_4, HiddenConflicts


def test_children_golden():
    got = [(m, c.as_tuple()) for m, c in children((1, 2, 4, 3))]
    assert [m for m, _ in got] == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]
    assert [c for _, c in got] == [(2, 1, 4, 3), (2, 4, 1, 3), (2, 4, 3, 1), (1, 4, 2, 3), (1, 4, 3, 2)]


def test_children_edge_cases():
    assert children((2, 1, 3, 4)) == []
    assert [c.as_tuple() for _, c in children((1, 2, 3))] == [(2, 1, 3), (2, 3, 1), (1, 3, 2)]


@given(st.permutations(range(1, 7)))
def test_child_count_and_levels(seq):
    order = TotalOrder(seq)
    n, l = order.n, order.level()
    kids = children(order)
    assert len(kids) == sum(n - i for i in range(1, l))
    for m, c in kids:
        assert c.level() == m.i
    ranks = [m.rank(n) for m, _ in kids]
    assert ranks == sorted(ranks)


def test_enumerate_small():
    assert enumerate_all(1) == [(1,)]
    assert enumerate_all(3) == [(1, 2, 3), (2, 1, 3), (2, 3, 1), (1, 3, 2), (3, 1, 2), (3, 2, 1)]


@pytest.mark.parametrize("n", range(1, 8))
def test_enumerate_totality(n):
    orders = enumerate_all(n)
    assert orders[0] == tuple(range(1, n + 1))
    assert len(orders) == len(set(orders)) == math.factorial(n)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_enumeration_is_tree_preorder(n):
    """Cross-check against a recursive walk built only from children()."""
    def walk(order):
        yield order.as_tuple()
        for _, c in children(order):
            yield from walk(c)
    assert enumerate_all(n) == list(walk(TotalOrder.root(n)))


@pytest.mark.parametrize("n", [4, 5, 6])
def test_stack_fidelity(n):
    walker = TotalOrderSearch(n)
    while walker.advance():
        order = TotalOrder.root(n)
        for m in walker.path():
            order = apply_move(order, m)
        assert order == walker.order


def test_descendants_keep_high_event_precedences():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(2, 6)
        node = TotalOrder(rng.sample(range(1, n + 1), n))
        l = node.level()
        desc = node
        while True:
            kids = children(desc)
            if not kids or rng.random() < 0.3:
                break
            desc = rng.choice(kids)[1]
        for a in range(l, n + 1):
            for b in range(l, n + 1):
                if a != b:
                    assert node.precedes(a, b) == desc.precedes(a, b)


def test_default_successor():
    assert default_successor((1, 1, 5), 5) == (1, 2)
    assert default_successor((2, 5, 5), 5) == (3, 4)


def test_ito_trivial_cases():
    r = ito_solve(4, [], lambda o: (True, []))
    assert r.status is Status.SOLVED and r.order == (1, 2, 3, 4)
    assert r.stats.h_calls == 1
    r = ito_solve(3, [unit(1, 2), unit(2, 1)], lambda o: (True, []))
    assert r.status is Status.UNSAT and r.stats.h_calls == 0
    assert r.stats.iterations == 6


def test_ito_motivating_scripted():
    h = HiddenConflicts([C5, C6], report_all=False)
    r = ito_solve(5, PHI_1_4, h)
    assert r.order == (2, 4, 1, 3, 5)


def test_ito_budget():
    r = ito_solve(6, [], lambda o: (False, [Clause([(o.seq[2], o.seq[1])]).negate()]),
                  Budget(max_iterations=10))
    assert r.status is Status.TIMEOUT and r.stats.iterations == 10
