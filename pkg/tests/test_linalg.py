from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from listdecode.errors import DimMismatch, EnumerationTooLarge, NoSolution
from listdecode.fields import field_make, prime_field
from listdecode.linalg import (
    EmptySubspace,
    affine_enumerate,
    affine_from_equations,
    affine_intersect,
    affine_make,
    affine_product,
    affine_project,
    identity,
    linear_span,
    mat_vec,
    nullspace,
    point,
    rank,
    rref,
    solve,
    zeros,
)
from listdecode.oracle import span_points
from listdecode.rng import SplitMix64

from conftest import random_matrix


def test_rref_identity_and_zero():
    F = field_make(2, 2)
    R, piv, rk = rref(F, identity(F, 4))
    assert R == identity(F, 4) and piv == [0, 1, 2, 3] and rk == 4
    R, piv, rk = rref(F, zeros(3, 4))
    assert rk == 0 and piv == [] and R == zeros(3, 4)


def test_rank_nullity_over_f4():
    F = field_make(2, 2)
    rng = SplitMix64(1)
    for _ in range(50):
        M = random_matrix(F, 6, 6, rng)
        N = nullspace(F, M, 6)
        assert rank(F, M) + len(N) == 6
        for v in N:
            assert not any(mat_vec(F, M, v))


def test_rref_preserves_row_space():
    F = field_make(3, 1)
    rng = SplitMix64(2)
    for _ in range(30):
        M = random_matrix(F, 4, 6, rng)
        R, _, rk = rref(F, M, 6)
        assert rank(F, R[:rk] + M) == rk
        assert rank(F, M) == rk


def test_solve():
    F = field_make(3, 2)
    b = [1, 2, 3]
    x, N = solve(F, identity(F, 3), b)
    assert x == b and N == []
    with pytest.raises(NoSolution):
        solve(F, zeros(2, 2), [1, 0])
    rng = SplitMix64(3)
    for _ in range(30):
        M = random_matrix(F, 4, 5, rng)
        x_true = [F.random(rng) for _ in range(5)]
        rhs = mat_vec(F, M, x_true)
        x, N = solve(F, M, rhs, 5)
        assert mat_vec(F, M, x) == rhs
        for v in N:
            assert not any(mat_vec(F, M, v))


def test_disjoint_parallel_lines():
    F = prime_field(2)
    A = affine_make(F, [0, 0], [[1, 0]])
    B = affine_make(F, [0, 1], [[1, 0]])
    assert isinstance(affine_intersect(A, B), EmptySubspace)
    assert affine_intersect(A, A) == A
    with pytest.raises(DimMismatch):
        affine_intersect(A, point(F, [0, 0, 0]))


def _points(A):
    return set(affine_enumerate(A))


def test_intersection_matches_point_sets():
    F = prime_field(3)
    rng = SplitMix64(4)
    for _ in range(60):
        subs = []
        for _ in range(2):
            k = rng.below(4)
            subs.append(affine_make(F, [F.random(rng) for _ in range(4)], random_matrix(F, k, 4, rng)))
        A, B = subs
        I = affine_intersect(A, B)
        assert _points(I) == _points(A) & _points(B)
        assert affine_intersect(B, A) == I
        # independent reference: translate the closure of the basis
        pts = {tuple(F.add(o, v) for o, v in zip(A.offset, p)) for p in span_points(F, A.basis, 4)}
        assert pts == _points(A)


def test_enumerate():
    F = prime_field(2)
    assert list(affine_enumerate(point(F, [1, 0, 1]))) == [(1, 0, 1)]
    assert list(affine_enumerate(EmptySubspace(F, 3))) == []
    A = affine_make(F, [1, 1, 0, 0], [[1, 0, 0, 1], [0, 1, 1, 0], [0, 0, 1, 1]])
    pts = list(affine_enumerate(A))
    assert len(pts) == 8 == len(set(pts))
    assert all(A.contains(p) for p in pts)
    with pytest.raises(EnumerationTooLarge):
        list(affine_enumerate(A, cap=4))


def test_canonical_form_is_unique():
    F = prime_field(5)
    rng = SplitMix64(5)
    for _ in range(30):
        V = random_matrix(F, 2, 4, rng)
        off = [F.random(rng) for _ in range(4)]
        A = affine_make(F, off, V)
        # another offset in the same coset and a different spanning set
        shift = mat_vec(F, [list(r) for r in zip(*V)], [F.random(rng), F.random(rng)])
        off2 = [F.add(a, b) for a, b in zip(off, shift)]
        V2 = [[F.add(a, b) for a, b in zip(V[0], V[1])], V[1]]
        assert affine_make(F, off2, V2) == A


def test_equations_round_trip():
    F = field_make(2, 2)
    rng = SplitMix64(6)
    for _ in range(30):
        A = affine_make(F, [F.random(rng) for _ in range(5)], random_matrix(F, rng.below(5), 5, rng))
        E, h = A.equations()
        assert affine_from_equations(F, E, h, 5) == A


def test_project_and_product():
    F = prime_field(2)
    H1 = linear_span(F, 2, [[1, 1]])
    H2 = affine_make(F, [1, 0, 0], [[0, 1, 0]])
    P = affine_product([H1, H2])
    assert P.dim == 2 and P.ambient == 5
    assert _points(P) == {a + b for a in _points(H1) for b in _points(H2)}
    assert affine_project(P, range(2)) == H1
    assert affine_project(P, range(2, 5)) == H2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 2), min_size=4, max_size=4), min_size=1, max_size=5))
def test_nullspace_property(rows):
    F = prime_field(3)
    N = nullspace(F, rows, 4)
    assert len(N) == 4 - rank(F, rows)
    for v in N:
        assert not any(mat_vec(F, rows, v))
    kernel = {x for x in itertools.product(range(3), repeat=4) if not any(mat_vec(F, rows, list(x)))}
    assert kernel == span_points(F, N, 4)
