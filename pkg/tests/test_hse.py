from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction

import pytest

from listdecode.errors import BadDims, FormatError, FrontierOverflow, LengthMismatch, MissingFieldSpec, ShapeMismatch
from listdecode.fields import field_make, prime_field
from listdecode.hse import (
    format_hse,
    hse_build,
    hse_decode,
    hse_encode,
    hse_intersect,
    hse_member,
    hse_params,
    parse_hse,
)
from listdecode.linalg import affine_enumerate, identity, point
from listdecode.periodic import periodic_from_affine, periodic_make
from listdecode.rng import SplitMix64

from conftest import random_periodic

F2 = prime_field(2)


def small_set(seed=0, delta=4, b=4):
    return hse_build(F2, hse_params(2, delta, b, Fraction(1, 2), seed=seed))


def test_params_shape():
    p = hse_params(4, 4, 4, "1/2")
    assert (p.delta_p, p.b_p, p.k, p.k_p, p.z_len, p.w_len, p.input_len) == (2, 2, 16, 8, 2, 8, 4)
    assert p.lam == 16 and p.L == 16
    assert hse_params(2, 4, 40, "1/2").lam == 64  # capped
    flags = p.asymptotic_hypotheses(s=1)
    assert set(flags) == {"zeta<1/3", "s<zeta*delta/10", "q^(zeta*delta)>=(2q^2ck)^(10/9)"}
    assert flags["zeta<1/3"] is False


def test_param_errors():
    with pytest.raises(BadDims):
        hse_params(2, 4, 4, "3/4")
    with pytest.raises(BadDims):
        hse_params(2, 3, 4, "1/2")
    with pytest.raises(BadDims):
        hse_params(2, 4, 4, 0)


def test_build_is_deterministic_and_shaped():
    F4 = field_make(2, 2)
    p = hse_params(4, 4, 4, "1/2", seed=9)
    S1, S2 = hse_build(F4, p), hse_build(F4, p)
    assert S1.polys == S2.polys and S1.Q == S2.Q
    assert [T.m for T in S1.fields] == [2, 4] and S1.q_field.m == 8
    assert all(len(P) == p.lam + 1 for P in S1.polys) and len(S1.Q) == p.lam + 1
    assert hse_build(F4, hse_params(4, 4, 4, "1/2", seed=10)).Q != S1.Q


def test_explicit_polys_must_cover_every_degree():
    p = hse_params(2, 4, 4, "1/2")
    with pytest.raises(MissingFieldSpec):
        hse_build(F2, p, {2: [1, 1, 1]})
    S = hse_build(F2, p, {2: [1, 1, 1], 4: [1, 1, 0, 0, 1], 8: [1, 0, 1, 1, 1, 0, 0, 0, 1]})
    assert S.q_field.defining_poly == (1, 0, 1, 1, 1, 0, 0, 0, 1)


def test_encode_layout_injective_and_member():
    S = small_set()
    p = S.params
    images = {}
    for x in itertools.product(range(2), repeat=p.input_len):
        v = hse_encode(S, list(x))
        assert len(v) == p.k
        assert v[0:2] == list(x[0:2]) and v[4:6] == list(x[2:4])  # y blocks verbatim
        assert hse_member(S, v)
        assert hse_decode(S, v) == list(x)
        images[tuple(v)] = x
    assert len(images) == 2**p.input_len
    with pytest.raises(LengthMismatch):
        hse_encode(S, [0] * 3)


def test_flipping_a_hash_bit_leaves_the_set():
    S = small_set(3)
    v = hse_encode(S, [1, 0, 1, 1])
    for pos in (2, 3, 6, 7, 8, 15):  # z_1, z_2 and w coordinates
        u = list(v)
        u[pos] ^= 1
        assert not hse_member(S, u)


def test_set_size_by_exhaustive_scan():
    for delta, b in ((4, 2), (2, 4)):
        S = small_set(5, delta, b)
        count = sum(hse_member(S, list(v)) for v in itertools.product(range(2), repeat=8))
        assert count == 2 ** S.params.input_len


def test_prefix_determines_tail():
    S = small_set(6)
    members = [v for v in itertools.product(range(2), repeat=16) if hse_member(S, list(v))]
    heads = {}
    for v in members:
        heads.setdefault(v[:8], set()).add(v[8:])
    assert all(len(t) == 1 for t in heads.values())


def test_intersect_trivial_cases():
    S = small_set(7)
    zero = periodic_make(F2, 4, identity(F2, 4), [[0] * 4] * 4)
    got = hse_intersect(S, zero)
    assert got == ([[0] * 16] if hse_member(S, [0] * 16) else [])
    v = hse_encode(S, [0, 1, 1, 0])
    W = periodic_from_affine(point(F2, v), 4)
    assert hse_intersect(S, W) == [v]
    with pytest.raises(ShapeMismatch):
        hse_intersect(S, periodic_from_affine(point(F2, v), 8))


def test_intersect_matches_filter_on_random_rank_one():
    rng = SplitMix64(21)
    for trial in range(60):
        S = small_set(trial)
        W = random_periodic(F2, 4, 4, rng, nullity=1)
        frontier = []
        got = sorted(map(tuple, hse_intersect(S, W, frontier)))
        brute = sorted(v for v in affine_enumerate(W.to_affine()) if hse_member(S, list(v)))
        assert got == brute
        assert all(f <= S.params.L for f in frontier)


def test_frontier_overflow():
    S = hse_build(F2, hse_params(2, 4, 4, "1/2", seed=1, L=0))
    W = periodic_make(F2, 4, [[0] * 4] * 4, [[0] * 4] * 4)
    with pytest.raises(FrontierOverflow):
        hse_intersect(S, W)


def test_serialization():
    S = small_set(8)
    text = format_hse(S)
    assert format_hse(parse_hse(F2, text)) == text
    with pytest.raises(FormatError):
        parse_hse(F2, text.replace("seed=8", "seed=9"))


def test_coefficient_stream_smoke():
    # advisory uniformity check: chi-square of 10^4 draws over F16 stays far
    # below a generous cutoff
    F = field_make(2, 4)
    g = SplitMix64(123)
    counts = Counter(F.random(g) for _ in range(10_000))
    expected = 10_000 / 16
    chi2 = sum((counts[x] - expected) ** 2 / expected for x in range(16))
    assert chi2 < 60
