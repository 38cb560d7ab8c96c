"""Shared strategies, oracles and scripted consistency functions for the tests."""

import itertools
import random

from hypothesis import strategies as st

from cdito.order import Clause, Conflict, TotalOrder

# the four input clauses of the three-flow example
PHI_1_4 = [Clause([(1, 5)]), Clause([(2, 3)]), Clause([(2, 4)]), Clause([(3, 1), (4, 1)])]
C4 = Conflict([(1, 3), (1, 4)])
C5 = Conflict([(1, 4), (2, 5)])
C6 = Conflict([(3, 1), (4, 1)])
PHI_5 = Clause([(4, 1), (5, 2)])
PHI_6 = Clause([(1, 3), (1, 4)])


@st.composite
def orders(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    return TotalOrder(draw(st.permutations(range(1, n + 1))))


@st.composite
def clauses(draw, n, max_len=3):
    k = draw(st.integers(1, max_len))
    pairs = draw(st.lists(st.permutations(range(1, n + 1)).map(lambda p: (p[0], p[1])),
                          min_size=k, max_size=k))
    return Clause(pairs)


def random_pair(rng, n):
    a, b = rng.sample(range(1, n + 1), 2)
    return a, b


def random_clause(rng, n, max_len=3):
    return Clause([random_pair(rng, n) for _ in range(rng.randint(1, max_len))])


def random_conflict(rng, n, max_len=3):
    return Conflict([random_pair(rng, n) for _ in range(rng.randint(1, max_len))])


def all_orders(n):
    return [TotalOrder(p) for p in itertools.permutations(range(1, n + 1))]


class HiddenConflicts:
    """Deterministic h: an order is consistent iff none of the hidden conflicts is active.

    Reports the active hidden conflicts (all of them, or only the first).
    """

    def __init__(self, hidden, report_all=True):
        self.hidden = list(hidden)
        self.report_all = report_all
        self.calls = []

    def __call__(self, order):
        self.calls.append(order.as_tuple())
        active = [c for c in self.hidden if c.active_in(order)]
        if not active:
            return True, []
        return False, active if self.report_all else active[:1]

    def accepts(self, order):
        return not any(c.active_in(order) for c in self.hidden)


def brute_force_sat(n, phi, accepts):
    return any(all(c.satisfied_by(L) for c in phi) and accepts(L) for L in all_orders(n))


def random_solve_instance(seed, max_n=6):
    rng = random.Random(seed)
    n = rng.randint(2, max_n)
    phi = [random_clause(rng, n) for _ in range(rng.randint(0, 6))]
    hidden = [random_conflict(rng, n) for _ in range(rng.randint(0, 8))]
    return n, phi, hidden, rng.random() < 0.5


def floyd_warshall_consistent(n, edges):
    """Independent consistency oracle: no negative diagonal entry after all-pairs shortest paths."""
    inf = float("inf")
    d = [[0 if i == j else inf for j in range(n + 1)] for i in range(n + 1)]
    for u, v, w, *_ in edges:
        d[u][v] = min(d[u][v], w)
    for k in range(1, n + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return all(d[i][i] >= 0 for i in range(1, n + 1))
