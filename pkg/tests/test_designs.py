from __future__ import annotations

import pytest

from listdecode.designs import (
    cascade_build,
    cascade_prune,
    canonical_subspace,
    design_certify,
    design_make,
    design_prune,
    design_sample,
    design_verify,
    format_design,
    gaussian_binomial,
    iter_subspaces,
    parse_design,
    precode_subspace,
)
from listdecode.errors import BadDims, ShapeMismatch, TooLarge, Uncertified
from listdecode.fields import prime_field
from listdecode.linalg import (
    EmptySubspace,
    affine_enumerate,
    affine_make,
    full_space,
    linear_span,
    point,
)
from listdecode.oracle import brute_design_sum, brute_planes, span_points
from listdecode.periodic import periodic_from_affine
from listdecode.rng import SplitMix64

from conftest import random_periodic

F2 = prime_field(2)


def pts(X):
    return set(affine_enumerate(X))


# ---------------------------------------------------------------------------
# sampling and verification


def test_sample_shapes_and_determinism():
    D = design_sample(F2, 6, 3, 4, seed=1)
    assert D.count == 4 and all(H.dim == 3 and not any(H.offset) for H in D.subspaces)
    assert design_sample(F2, 6, 3, 4, seed=1) == D
    full = design_sample(F2, 4, 4, 2, seed=2)
    assert all(H == full_space(F2, 4) for H in full.subspaces)
    with pytest.raises(BadDims):
        design_sample(F2, 3, 4, 1, seed=0)


def test_verify_trivial_designs():
    D = design_make(F2, 4, [full_space(F2, 4)] * 3)
    for r in range(5):
        assert design_verify(D, r) == 3 * r
    plane = linear_span(F2, 4, [[1, 0, 1, 0], [0, 1, 1, 1]])
    assert design_verify(design_make(F2, 4, [plane]), 2) == 2


def test_gaussian_binomial():
    assert gaussian_binomial(6, 2, 2) == 651
    assert sum(1 for _ in iter_subspaces(F2, 6, 2)) == 651
    assert gaussian_binomial(4, 2, 3) == sum(1 for _ in iter_subspaces(prime_field(3), 4, 2))


def test_verify_matches_independent_plane_scan():
    D = design_sample(F2, 6, 3, 4, seed=3)
    seen = {}
    d = design_verify(D, 2, visit=lambda W, v: seen.__setitem__(frozenset(span_points(F2, W, 6)), v))
    planes = brute_planes(F2, 6, 2)
    assert len(planes) == 651 == len(seen)
    for pointset, spanning in planes:
        assert seen[pointset] == brute_design_sum(F2, D.subspaces, spanning)
    assert d == max(seen.values())


def test_verify_budget():
    D = design_sample(F2, 6, 3, 4, seed=3)
    with pytest.raises(TooLarge):
        design_verify(D, 2, cap=650)


def test_sampled_designs_meet_the_loose_bound():
    # q=2, Lambda=8, eta=1/2, r=2: 8r/eta = 32 is far above what shows up
    for seed in range(20):
        D = design_sample(F2, 8, 4, 4, seed)
        assert design_verify(D, 2) <= 32


def test_brute_design_sum_trivial():
    D = design_sample(F2, 4, 2, 3, seed=4)
    assert brute_design_sum(F2, D.subspaces, []) == 0
    W = [list(D.subspaces[0].basis[0])]
    full = [full_space(F2, 4)] * 3
    assert brute_design_sum(F2, full, W) == 3


def test_format_round_trip():
    D = design_certify(design_sample(F2, 5, 2, 3, seed=5), 1)
    assert format_design(parse_design(F2, format_design(D))) == format_design(D)


# ---------------------------------------------------------------------------
# pruning


def test_precode_subspace():
    H = linear_span(F2, 4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]])
    assert precode_subspace([H]) == H
    V = precode_subspace([H, H, H])
    assert V.dim == 9 and V.ambient == 12
    rng = SplitMix64(6)
    for _ in range(1000):
        x = [rng.below(2) for _ in range(12)]
        assert V.contains(x) == all(H.contains(x[4 * j : 4 * j + 4]) for j in range(3))
    with pytest.raises(ShapeMismatch):
        precode_subspace([H, full_space(F2, 3)])


def test_prune_trivial_cases():
    rng = SplitMix64(7)
    T = random_periodic(F2, 4, 3, rng, nullity=1)
    full = [full_space(F2, 4)] * 3
    out = design_prune(full, T, (T.r, 3 * T.r + 3))
    assert pts(out) == pts(T.to_affine())
    Z = periodic_from_affine(point(F2, [0] * 12), 4)
    D = design_certify(design_sample(F2, 4, 2, 3, seed=1), 1)
    assert pts(design_prune(D.subspaces, Z, D.certified)) == {(0,) * 12}
    with pytest.raises(Uncertified):
        design_prune(D.subspaces, Z, None)


def test_prune_matches_filter():
    rng = SplitMix64(8)
    done = 0
    seed = 0
    while done < 100:
        seed += 1
        r = 1 + rng.below(2)
        D = design_certify(design_sample(F2, 4, 2, 3, seed), r)
        T = random_periodic(F2, 4, 3, rng, nullity=r)
        X = T.to_affine()
        if isinstance(X, EmptySubspace) or T.r > r:
            continue
        try:
            out = design_prune(D.subspaces, T, D.certified)
        except Uncertified:
            continue  # the sampled T is not (r, 4)-periodic as a point set
        brute = {v for v in affine_enumerate(X) if all(D.subspaces[j].contains(v[4 * j : 4 * j + 4]) for j in range(3))}
        assert pts(out) == brute
        assert out.dim <= D.certified[1]
        done += 1


# ---------------------------------------------------------------------------
# cascades


def test_cascade_shapes_and_certificates():
    C = cascade_build(F2, (2, 4, 8), (1, 2, 2), (1, 2), seed=1)
    assert [L.dim for L in C.levels] == [2, 4] and [L.count for L in C.levels] == [2, 2]
    for i, L in enumerate(C.levels, start=1):
        r_prev, d = L.certified
        assert r_prev == C.ranks[i - 1]
        assert design_verify(L, r_prev) == d <= C.ranks[i]
    C1 = cascade_build(F2, (2, 4), (1, 2), (1,), seed=2)
    assert C1.depth == 1


def test_canonical_subspace():
    full_levels = cascade_build(F2, (2, 4), (2, 4), (2,), seed=1)
    U = canonical_subspace(full_levels, 6)
    assert pts(U) == {v for v in pts(full_space(F2, 6)) if v[4:] == (0, 0)}
    C = cascade_build(F2, (2, 4, 8), (1, 2, 2), (1, 2), seed=3)
    U = canonical_subspace(C, 10)
    constraints = sum((2 - L.subspaces[0].dim) * (8 // 2) for L in C.levels[:1]) + sum(
        (4 - L.subspaces[0].dim) * (8 // 4) for L in C.levels[1:]
    )
    assert U.dim >= 8 - constraints
    rng = SplitMix64(9)
    for _ in range(300):
        x = [rng.below(2) for _ in range(10)]
        ok = x[8:] == [0, 0]
        for i, L in enumerate(C.levels, start=1):
            lam, per = C.lengths[i - 1], C.lengths[i] // C.lengths[i - 1]
            for blk in range(8 // lam):
                ok &= L.subspaces[blk % per].contains(x[blk * lam : (blk + 1) * lam])
        assert U.contains(x) == ok
    with pytest.raises(ShapeMismatch):
        canonical_subspace(C, 6)


def test_cascade_prune_single_level_is_design_prune():
    C = cascade_build(F2, (2, 6), (1, 3), (1,), seed=4)
    rng = SplitMix64(10)
    for _ in range(20):
        T = random_periodic(F2, 2, 3, rng, nullity=1)
        X = T.to_affine()
        if isinstance(X, EmptySubspace) or not _periodic(X, 2, 3, 1):
            continue
        L = C.levels[0]
        a = cascade_prune(C, T, 6)
        b = design_prune([L.subspaces[j % L.count] for j in range(3)], periodic_from_affine(X, 2), L.certified)
        assert pts(a) == pts(b)


def _periodic(X, delta, blocks, r):
    from listdecode.periodic import common_block_space

    return common_block_space(X, delta, blocks) <= r


def test_cascade_prune_zero_and_brute():
    C = cascade_build(F2, (2, 4, 8), (1, 2, 2), (1, 2), seed=5)
    Z = point(F2, [0] * 8)
    assert pts(cascade_prune(C, Z, 8)) == {(0,) * 8}
    U = canonical_subspace(C, 8)
    rng = SplitMix64(11)
    checked = 0
    while checked < 30:
        X = affine_make(F2, [rng.below(2) for _ in range(8)], [[0, 0] * 3 + [rng.below(2), rng.below(2)]])
        out = cascade_prune(C, X, 8)
        assert pts(out) == pts(X) & pts(U)
        assert out.dim <= C.ranks[-1]
        checked += 1
