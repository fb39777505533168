from __future__ import annotations

import pytest

from listdecode.fields import field_make, prime_field, tower_make
from listdecode.linalg import rank
from listdecode.periodic import periodic_make
from listdecode.rng import SplitMix64


@pytest.fixture(scope="session")
def gf2():
    return prime_field(2)


@pytest.fixture(scope="session")
def gf4():
    return field_make(2, 2, [1, 1, 1])


@pytest.fixture(scope="session")
def f4_over_f2():
    return tower_make(prime_field(2), 2, [1, 1, 1])


def random_matrix(F, rows, cols, rng):
    return [[F.random(rng) for _ in range(cols)] for _ in range(rows)]


def random_matrix_of_rank(F, n, rk, rng):
    """n x n matrix of rank exactly rk (product of random n x rk and rk x n until rank fits)."""
    while True:
        L = random_matrix(F, n, rk, rng)
        R = random_matrix(F, rk, n, rng)
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                acc = 0
                for t in range(rk):
                    acc = F.add(acc, F.mul(L[i][t], R[t][j]))
                M[i][j] = acc
        if rank(F, M) == rk:
            return M


def random_periodic(F, delta, b, rng, nullity=None, shared=True):
    """Random canonical representation; B has the given nullity (random if None)."""
    def one_B():
        k = rng.below(delta + 1) if nullity is None else nullity
        return random_matrix_of_rank(F, delta, delta - k, rng)

    B = one_B() if shared else [one_B() for _ in range(b)]
    a = [[F.random(rng) for _ in range(delta)] for _ in range(b)]
    A = [[random_matrix(F, delta, delta, rng) for _ in range(i)] for i in range(b)]
    return periodic_make(F, delta, B, a, A)


@pytest.fixture
def rng():
    return SplitMix64(20240601)


# one line per acceptance criterion, shown at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
