from __future__ import annotations

import pytest

from listdecode.designs import design_sample
from listdecode.errors import TooLarge
from listdecode.fields import field_make, prime_field, tower_make
from listdecode.linalg import full_space, linear_span
from listdecode.oracle import (
    OracleBudget,
    brute_design_sum,
    brute_equation_members,
    brute_planes,
    brute_rs_decode,
    log_q,
    rs_equation_holds,
    span_points,
)
from listdecode.rs import InterpolationPoly, RsCodeSpec, coeffs_to_vector, rs_encode, rs_make

F2 = prime_field(2)
F4 = field_make(2, 2, [1, 1, 1])
T16 = tower_make(F4, 2)
T8 = tower_make(F2, 3)


def test_budget():
    OracleBudget(10).check(10)
    with pytest.raises(TooLarge):
        OracleBudget(10).check(11)
    with pytest.raises(TooLarge):
        brute_equation_members(lambda x: True, 2, 11, budget=1000)
    spec = rs_make(T16, 4, 2)
    with pytest.raises(TooLarge):
        brute_rs_decode(spec, [0] * 4, 1, budget=255)


def test_span_points_and_log():
    assert span_points(F2, [[1, 1, 0], [0, 1, 1], [1, 0, 1]], 3) == {(0, 0, 0), (1, 1, 0), (0, 1, 1), (1, 0, 1)}
    assert len(span_points(F4, [[1, 2]], 2)) == 4
    assert log_q(64, 4) == 3 and log_q(1, 2) == 0
    with pytest.raises(ValueError):
        log_q(12, 2)


def test_rs_decode_extremes(rng):
    spec = rs_make(T16, 4, 2)
    y = [T16.random(rng) for _ in range(4)]
    assert len(brute_rs_decode(spec, y, 4)) == 16**2
    f = [T16.random(rng), T16.random(rng)]
    assert brute_rs_decode(spec, rs_encode(spec, f), 0) == [f]


def _q(k, A):
    return InterpolationPoly(len(A) - 1, len(A[1]) - 1, k, tuple(tuple(a) for a in A))


def test_equation_trivial_cases(rng):
    spec = RsCodeSpec(T8, 4, 3, (0, 1, 0, 1))
    g = [T8.random(rng) for _ in range(3)]
    Q = _q(3, [[T8.neg(c) for c in g] + [0], [1, 0]])
    assert brute_equation_members(rs_equation_holds(spec, Q), 2, 9) == {tuple(coeffs_to_vector(spec, g))}
    fixed = _q(3, [[0, 0, 0, 0], [1, 0], [1, 0]])
    members = brute_equation_members(rs_equation_holds(spec, fixed), 2, 9)
    assert len(members) == 2**3
    assert all(T8.in_subfield(c) for x in members for c in [T8.from_vector(list(x[i : i + 3])) for i in (0, 3, 6)])


def test_design_sum_trivial(rng):
    D = design_sample(F2, 4, 2, 3, seed=9)
    assert brute_design_sum(F2, D.subspaces, []) == 0
    H = linear_span(F2, 4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    W = [[1, 1, 0, 0]]
    assert brute_design_sum(F2, [H, H, full_space(F2, 4)], W) == 3 * 1
    assert brute_design_sum(F2, [H] * 4, [[1, 0, 0, 0], [0, 1, 0, 0]]) == 4 * 2


def test_planes():
    assert len(brute_planes(F2, 4, 2)) == 35
    assert len(brute_planes(F2, 3, 1)) == 7
    with pytest.raises(TooLarge):
        brute_planes(F2, 6, 2, budget=100)
