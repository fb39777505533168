"""Reed-Solomon codes over F_{q^m} evaluated on points of the subfield F_q.

Decoding interpolates a linear polynomial Q = A_0 + A_1 Y_1 + ... + A_s Y_s,
turns the functional equation A_0 + sum_t A_t f^{sigma^(t-1)} = 0 into a
block-triangular system over F_q for the coefficient vectors of f, and then
prunes that periodic subspace by the pre-code (if any) before re-encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .designs import SubspaceDesign, precode_subspace
from .errors import (
    BadDims,
    BadS,
    DegreeTooHigh,
    InternalInvariant,
    LengthMismatch,
    RadiusTooLarge,
    ShapeMismatch,
    ZeroQ,
)
from .fields import LinearizedPoly, TowerSpec, poly_eval, poly_valuation
from .hse import HseSet, hse_decode, hse_encode, hse_intersect
from .linalg import (
    DEFAULT_CAP,
    EmptySubspace,
    affine_enumerate,
    affine_intersect,
    nullspace,
    zeros,
)
from .periodic import PeriodicSubspace, periodic_make, periodic_regroup


@dataclass(frozen=True)
class RsCodeSpec:
    tower: TowerSpec
    n: int
    k: int
    alphas: tuple[int, ...]
    precode: SubspaceDesign | HseSet | None = None

    @property
    def m(self) -> int:
        return self.tower.m

    @property
    def q(self) -> int:
        return self.tower.q

    def message_length(self) -> int:
        """Length of a message over F_q (or over F_{q^m} when there is no pre-code)."""
        P = self.precode
        if P is None:
            return self.k
        if isinstance(P, SubspaceDesign):
            return sum(H.dim for H in P.subspaces)
        return P.params.input_len


@dataclass(frozen=True)
class InterpolationPoly:
    s: int
    D: int
    k: int
    A: tuple[tuple[int, ...], ...]  # A_0 .. A_s, fixed-length coefficient lists

    def eval(self, T: TowerSpec, x: int, ys: Sequence[int]) -> int:
        acc = poly_eval(T, self.A[0], x)
        for At, y in zip(self.A[1:], ys):
            acc = T.add(acc, T.mul(poly_eval(T, At, x), y))
        return acc


def rs_make(
    tower: TowerSpec,
    n: int,
    k: int,
    alphas: Sequence[int] | None = None,
    precode: SubspaceDesign | HseSet | None = None,
) -> RsCodeSpec:
    if not 1 <= k < n <= tower.q:
        raise BadDims(f"need 1 <= k < n <= q, got k={k}, n={n}, q={tower.q}")
    alphas = tuple(range(n)) if alphas is None else tuple(alphas)
    if len(alphas) != n or len(set(alphas)) != n:
        raise BadDims("need n distinct evaluation points")
    if any(not tower.in_subfield(a) for a in alphas):
        raise BadDims("evaluation points must lie in the subfield F_q")
    if isinstance(precode, SubspaceDesign):
        if precode.count != k or precode.dim != tower.m:
            raise ShapeMismatch(f"design pre-code needs {k} subspaces of F_q^{tower.m}")
    elif isinstance(precode, HseSet):
        p = precode.params
        if p.q != tower.q or p.k != k * tower.m or p.delta % tower.m:
            raise ShapeMismatch("h.s.e. pre-code must cover k*m coordinates in blocks that are multiples of m")
    return RsCodeSpec(tower, n, k, alphas, precode)


def guaranteed_radius(n: int, k: int, s: int) -> int:
    return s * (n - k) // (s + 1)


def degree_param(n: int, k: int, s: int) -> int:
    return (n - k + 1) // (s + 1)


# ---------------------------------------------------------------------------
# messages and encoding


def coeffs_to_vector(spec: RsCodeSpec, f: Sequence[int]) -> list[int]:
    """Coefficients f_0..f_{k-1} as one F_q vector of length m*k."""
    out: list[int] = []
    for c in f:
        out.extend(spec.tower.to_vector(c))
    return out


def vector_to_coeffs(spec: RsCodeSpec, v: Sequence[int]) -> list[int]:
    m = spec.m
    return [spec.tower.from_vector(list(v[i * m : (i + 1) * m])) for i in range(len(v) // m)]


def precode_encode(spec: RsCodeSpec, msg: Sequence[int]) -> list[int]:
    """Message -> coefficient list of f (length k over F_{q^m})."""
    P = spec.precode
    if len(msg) != spec.message_length():
        raise LengthMismatch(f"expected {spec.message_length()} message symbols, got {len(msg)}")
    if P is None:
        return list(msg)
    F = spec.tower.base
    if isinstance(P, SubspaceDesign):
        vec: list[int] = []
        pos = 0
        for H in P.subspaces:
            block = [0] * spec.m
            for row in H.basis:
                c = msg[pos]
                pos += 1
                if c:
                    block = [F.add(a, F.mul(c, b)) for a, b in zip(block, row)]
            vec.extend(block)
        return vector_to_coeffs(spec, vec)
    return vector_to_coeffs(spec, hse_encode(P, msg))


def precode_decode(spec: RsCodeSpec, f: Sequence[int]) -> list[int]:
    """Inverse of :func:`precode_encode` on its image."""
    P = spec.precode
    if P is None:
        return list(f)
    vec = coeffs_to_vector(spec, f)
    if isinstance(P, SubspaceDesign):
        out: list[int] = []
        for j, H in enumerate(P.subspaces):
            block = vec[j * spec.m : (j + 1) * spec.m]
            # RREF basis: coordinate at each pivot is the coefficient
            out.extend(block[p] for p in H.pivots)
        return out
    return hse_decode(P, vec)


def rs_encode(spec: RsCodeSpec, f: Sequence[int]) -> list[int]:
    """(f(alpha_1), .., f(alpha_n)) for a coefficient list of degree < k."""
    if any(f[spec.k :]):
        raise DegreeTooHigh(f"polynomial degree must be below k={spec.k}")
    T = spec.tower
    return [poly_eval(T, f[: spec.k], a) for a in spec.alphas]


def hamming(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a != b for a, b in zip(u, v))


# ---------------------------------------------------------------------------
# decoding


def rs_interpolate(spec: RsCodeSpec, y: Sequence[int], s: int) -> InterpolationPoly:
    """Nonzero Q with A_0(a_i) + sum_t A_t(a_i) y_i^(q^(t-1)) = 0 for every i."""
    T, n, k = spec.tower, spec.n, spec.k
    if not 1 <= s <= spec.m:
        raise BadS(f"s must lie in [1, m={spec.m}]")
    if len(y) != n:
        raise LengthMismatch(f"received word must have {n} symbols")
    D = degree_param(n, k, s)
    if (D + 1) * (s + 1) + k - 1 <= n:
        raise InternalInvariant("interpolation system has no more unknowns than constraints")
    rows = []
    for a, yi in zip(spec.alphas, y):
        powers = [1]
        for _ in range(D + k - 1):
            powers.append(T.mul(powers[-1], a))
        row = powers[: D + k]
        yt = yi
        for t in range(s):
            if t:
                yt = T.frobenius(yt, 1)
            row += [T.mul(yt, pw) for pw in powers[: D + 1]]
        rows.append(row)
    basis = nullspace(T, rows, D + k + s * (D + 1))
    v = basis[0]
    A = [tuple(v[: D + k])]
    for t in range(s):
        start = D + k + t * (D + 1)
        A.append(tuple(v[start : start + D + 1]))
    return InterpolationPoly(s, D, k, tuple(A))


def _empty_periodic(F, delta: int, b: int) -> PeriodicSubspace:
    B = [[int(i == j and i < delta - 1) for j in range(delta)] for i in range(delta)]
    a = [[0] * delta for _ in range(b)]
    a[0][delta - 1] = 1
    return periodic_make(F, delta, B, a)


def rs_solve(spec: RsCodeSpec, Q: InterpolationPoly) -> PeriodicSubspace:
    """Coefficient vectors (f_0..f_{k-1}) in F_q^{mk} solving the first k shifted equations.

    After dividing every A_t by X^u (u the least valuation among A_1..A_s),
    coefficient i of A_0 + sum_t A_t f^{sigma^(t-1)} reads
    a_{0,i} + sum_{j<=i} B_{i-j}(f_j) with B_l(X) = sum_t a_{t,l} X^(q^(t-1)).
    """
    T, k, m = spec.tower, spec.k, spec.m
    F = T.base
    vals = [poly_valuation(list(At)) for At in Q.A[1:]]
    if all(v is None for v in vals):
        if poly_valuation(list(Q.A[0])) is None:
            raise ZeroQ("interpolation polynomial is zero")
        raise InternalInvariant("A_1..A_s vanish while A_0 does not")
    u = min(v for v in vals if v is not None)
    v0 = poly_valuation(list(Q.A[0]))
    if v0 is not None and v0 < u:
        return _empty_periodic(F, m, k)

    def coeff(poly: Sequence[int], i: int) -> int:
        return poly[u + i] if u + i < len(poly) else 0

    mats = []
    for l in range(k):
        Bl = LinearizedPoly(T, tuple(coeff(At, l) for At in Q.A[1:]))
        mats.append(Bl.matrix() if Bl.q_degree >= 0 else zeros(m, m))
    a = [T.to_vector(coeff(Q.A[0], i)) for i in range(k)]
    A = [[mats[i - j] for j in range(i)] for i in range(k)]
    return periodic_make(F, m, mats[0], a, A)


@dataclass
class DecodeReport:
    D: int
    radius: int
    solver_dim: int
    pruned_dim: int
    candidates: int
    frontier: list[int] = field(default_factory=list)
    results: list[list[int]] = field(default_factory=list)


def rs_decode_report(
    spec: RsCodeSpec,
    y: Sequence[int],
    s: int,
    e: int,
    cap: int = DEFAULT_CAP,
) -> DecodeReport:
    """Full pipeline; ``results`` holds coefficient lists within distance e of y."""
    if e > guaranteed_radius(spec.n, spec.k, s):
        raise RadiusTooLarge(f"radius {e} exceeds the guaranteed {guaranteed_radius(spec.n, spec.k, s)}")
    Q = rs_interpolate(spec, y, s)
    H = rs_solve(spec, Q)
    X = H.to_affine()
    report = DecodeReport(Q.D, e, X.dim, X.dim, 0)
    P = spec.precode
    if isinstance(X, EmptySubspace):
        return report
    if P is None:
        candidates = [vector_to_coeffs(spec, v) for v in affine_enumerate(X, cap)]
    elif isinstance(P, SubspaceDesign):
        pruned = affine_intersect(X, precode_subspace(P.subspaces))
        report.pruned_dim = pruned.dim
        if P.certified is not None and H.r <= P.certified[0] and pruned.dim > P.certified[1]:
            raise InternalInvariant("pruned dimension exceeds the design certificate")
        candidates = [vector_to_coeffs(spec, v) for v in affine_enumerate(pruned, cap)]
    else:
        u = P.params.delta // spec.m
        W = periodic_regroup(H, u) if u > 1 else H
        found = hse_intersect(P, W, report.frontier)
        report.pruned_dim = -1 if not found else 0
        candidates = [vector_to_coeffs(spec, v) for v in found]
    report.candidates = len(candidates)
    report.results = [f for f in candidates if hamming(rs_encode(spec, f), y) <= e]
    return report


def rs_list_decode(spec: RsCodeSpec, y: Sequence[int], s: int, e: int, cap: int = DEFAULT_CAP) -> list[list[int]]:
    return rs_decode_report(spec, y, s, e, cap).results
