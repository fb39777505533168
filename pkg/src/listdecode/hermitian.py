"""Folded codes from the Hermitian tower x_{i+1}^r + x_{i+1} = x_i^{r+1} over F_{r^2}.

Functions in L(l*Pinf) are coordinate vectors over the monomial basis
x_1^{j_1} .. x_e^{j_e} with weighted degree at most l (and j_i < r for
i >= 2).  Everything the decoder needs reduces to evaluating monomials at
rational places and expanding them as power series in x = x_1 at the place
P0 = (0, .., 0).

sigma acts on functions by x_i -> gamma^{(r+1)^(i-1)} x_i and on places by
P -> (xi^{(r+1)^(i-1)} alpha_i) with xi = 1/gamma, so f(P^sigma) = f^{sigma^-1}(P).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .designs import SubspaceDesign, design_prune
from .errors import (
    BadDims,
    BadS,
    InternalInvariant,
    LengthMismatch,
    NoSolution,
    PoleAtInfinity,
    ShapeMismatch,
    SingularSystem,
    ThresholdTooLow,
    TooLarge,
    ZeroQ,
)
from .fields import FieldSpec, field_make, is_prime
from .hse import HseSet, hse_decode, hse_encode, hse_intersect
from .linalg import (
    DEFAULT_CAP,
    EmptySubspace,
    affine_enumerate,
    affine_project,
    mat_vec,
    nullspace,
    solve,
)
from .periodic import PeriodicSubspace, periodic_from_affine, periodic_make

PINF = "Pinf"
PLACE_LIMIT = 1 << 16

Place = tuple  # affine tuple (alpha_1, .., alpha_e) or the string PINF


def _prime_power(r: int) -> tuple[int, int]:
    for p in range(2, r + 1):
        if r % p == 0:
            a, x = 0, r
            while x % p == 0:
                x //= p
                a += 1
            if x == 1 and is_prime(p):
                return p, a
            break
    raise BadDims(f"r={r} is not a prime power")


def genus(r: int, e: int) -> int:
    """g_e = (sum_{i=1}^{e-1} r^e (1+1/r)^{i-1} - (r+1)^{e-1} + 1) / 2."""
    total = sum(Fraction(r**e) * (1 + Fraction(1, r)) ** (i - 1) for i in range(1, e))
    g = (total - (r + 1) ** (e - 1) + 1) / 2
    if g.denominator != 1:
        raise InternalInvariant(f"genus formula gave a non-integer {g}")
    g = int(g)
    if g > e * r**e:
        raise InternalInvariant("genus exceeds e*r^e")
    return g


@dataclass(frozen=True)
class LocalSeries:
    """Coefficients c_0..c_{n} of a power series in the local parameter at P0."""

    coeffs: tuple[int, ...]

    @property
    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None


@dataclass(frozen=True)
class RrBasis:
    l: int
    monomials: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.monomials)


class HermitianTower:
    def __init__(self, r: int, e: int) -> None:
        if e < 2:
            raise BadDims("the tower needs e >= 2 levels")
        p, a = _prime_power(r)
        self.r, self.e = r, e
        self.field: FieldSpec = field_make(p, 2 * a)
        self.q = r * r
        F = self.field
        self.gamma = F.primitive
        self.xi = F.inv(self.gamma)
        self.weights = tuple(r ** (e - i) * (r + 1) ** (i - 1) for i in range(1, e + 1))
        self.sigma_exps = tuple((r + 1) ** (i - 1) for i in range(1, e + 1))
        self.g = genus(r, e)
        # the asymptotic analysis assumes r >= 2e; recorded, not enforced
        self.analysis_regime = r >= 2 * e
        self._series: dict[int, list[list[list[int]]]] = {}

    def __repr__(self) -> str:
        return f"HermitianTower(r={self.r}, e={self.e})"

    @cached_property
    def places(self) -> list[tuple[int, ...]]:
        return tower_places(self)

    # -- series ---------------------------------------------------------------

    def _power(self, i: int, j: int, n: int) -> list[int]:
        """Series of x_{i+1}^j truncated to n coefficients (cached per n)."""
        if n not in self._series:
            S = [list(ls.coeffs[:n]) for ls in local_expansions(self, n)]
            self._series[n] = [[[1] + [0] * (n - 1), S[i]] for i in range(self.e)]
        pw = self._series[n][i]
        while len(pw) <= j:
            pw.append(series_mul(self.field, pw[-1], pw[1], n))
        return pw[j]

    def monomial_series(self, monomials: Sequence[Sequence[int]], n: int) -> list[list[int]]:
        if not monomials:
            return []
        F = self.field
        out = []
        for mono in monomials:
            acc = self._power(0, mono[0], n)
            for i in range(1, self.e):
                if mono[i]:
                    acc = series_mul(F, acc, self._power(i, mono[i], n), n)
            out.append(acc)
        return out

    def function_series(self, basis: RrBasis, coeffs: Sequence[int], n: int) -> list[int]:
        F = self.field
        out = [0] * n
        for c, s in zip(coeffs, self.monomial_series(basis.monomials, n)):
            if c:
                out = [F.add(a, F.mul(c, b)) for a, b in zip(out, s)]
        return out


def series_mul(F, a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(n - i):
                y = b[j]
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return out


def hermitian_tower(r: int, e: int) -> HermitianTower:
    return HermitianTower(r, e)


def tower_places(tower: HermitianTower) -> list[tuple[int, ...]]:
    """All affine rational places, sorted lexicographically (r^{e+1} of them)."""
    F, r = tower.field, tower.r
    if r ** (tower.e + 1) > PLACE_LIMIT:
        raise TooLarge(f"{r ** (tower.e + 1)} places exceed the limit {PLACE_LIMIT}")
    # preimages of beta -> beta^r + beta
    pre: dict[int, list[int]] = {}
    for beta in range(F.order):
        pre.setdefault(F.add(F.pow(beta, r), beta), []).append(beta)
    tuples: list[tuple[int, ...]] = [(a,) for a in range(F.order)]
    for _ in range(tower.e - 1):
        tuples = [t + (beta,) for t in tuples for beta in pre.get(F.pow(t[-1], r + 1), [])]
    return sorted(tuples)


def rr_basis(tower: HermitianTower, l: int) -> RrBasis:
    """Monomials with sum_i j_i * r^{e-i} (r+1)^{i-1} <= l and j_i < r for i >= 2."""
    w, r, e = tower.weights, tower.r, tower.e
    out: list[tuple[int, ...]] = []

    def rec(i: int, left: int, acc: tuple[int, ...]) -> None:
        if i == e:
            out.append(acc)
            return
        top = left // w[i]
        if i > 0:
            top = min(top, r - 1)
        for j in range(top + 1):
            rec(i + 1, left - j * w[i], acc + (j,))

    if l >= 0:
        rec(0, l, ())
    out.sort(key=lambda mono: (sum(j * wi for j, wi in zip(mono, w)), mono))
    return RrBasis(l, tuple(out))


def monomial_values(tower: HermitianTower, basis: RrBasis, P: Place) -> list[int]:
    if P == PINF:
        raise PoleAtInfinity("functions in L(l*Pinf) have a pole at Pinf")
    F = tower.field
    out = []
    for mono in basis.monomials:
        v = 1
        for a, j in zip(P, mono):
            if j:
                v = F.mul(v, F.pow(a, j))
        out.append(v)
    return out


def rr_eval(tower: HermitianTower, basis: RrBasis, coeffs: Sequence[int], P: Place) -> int:
    F = tower.field
    acc = 0
    for c, v in zip(coeffs, monomial_values(tower, basis, P)):
        if c and v:
            acc = F.add(acc, F.mul(c, v))
    return acc


def sigma_on_place(tower: HermitianTower, P: Place, j: int = 1) -> Place:
    if P == PINF:
        return PINF
    F = tower.field
    return tuple(F.mul(F.pow(tower.xi, j * c), a) for c, a in zip(tower.sigma_exps, P))


def sigma_on_function(tower: HermitianTower, basis: RrBasis, coeffs: Sequence[int], j: int = 1) -> list[int]:
    F = tower.field
    out = []
    for c, mono in zip(coeffs, basis.monomials):
        shift = sum(cc * jj for cc, jj in zip(tower.sigma_exps, mono))
        out.append(F.mul(c, F.pow(tower.gamma, j * shift)) if c else 0)
    return out


def local_expansions(tower: HermitianTower, n: int) -> list[LocalSeries]:
    """Series of x_1..x_e at P0 in x = x_1, coefficients 0..n.

    c_{i+1,j} = [x^j] x_i^{r+1} - [r | j] c_{i+1,j/r}^r, which solves
    S^r + S = S_i^{r+1} in characteristic p.
    """
    if n < 1:
        raise BadDims("need n >= 1")
    F, r = tower.field, tower.r
    size = n + 1
    S = [0] * size
    S[1] = 1
    out = [LocalSeries(tuple(S))]
    for _ in range(tower.e - 1):
        rhs = [1] + [0] * (size - 1)
        for _ in range(r + 1):
            rhs = series_mul(F, rhs, S, size)
        nxt = [0] * size
        for j in range(1, size):
            c = rhs[j]
            if j % r == 0:
                c = F.sub(c, F.pow(nxt[j // r], r))
            nxt[j] = c
        S = nxt
        out.append(LocalSeries(tuple(S)))
    return out


# ---------------------------------------------------------------------------
# ev / kappa at P0


@dataclass(frozen=True)
class EvMap:
    tower: HermitianTower
    k: int
    basis: RrBasis
    ev: list[list[int]]  # k x |basis|
    kappa: list[list[int]]  # |basis| x k, ev * kappa = I


def ev_map(tower: HermitianTower, k: int) -> EvMap:
    """First k local coefficients at P0 on L((k+2g-1)Pinf) and a right inverse."""
    F = tower.field
    basis = rr_basis(tower, k + 2 * tower.g - 1)
    cols = tower.monomial_series(basis.monomials, max(k, 1))
    ev = [[cols[c][row] for c in range(len(basis))] for row in range(k)]
    kappa_cols = []
    for i in range(k):
        try:
            x, _ = solve(F, ev, [int(j == i) for j in range(k)], len(basis))
        except NoSolution as exc:
            raise SingularSystem("evaluation at P0 is not surjective") from exc
        kappa_cols.append(x)
    kappa = [[kappa_cols[c][row] for c in range(k)] for row in range(len(basis))]
    return EvMap(tower, k, basis, ev, kappa)


def ev_P0(E: EvMap, coeffs: Sequence[int]) -> list[int]:
    return mat_vec(E.tower.field, E.ev, coeffs)


def kappa_P0(E: EvMap, msg: Sequence[int]) -> list[int]:
    if len(msg) != E.k:
        raise LengthMismatch(f"expected {E.k} coordinates")
    return mat_vec(E.tower.field, E.kappa, msg)


# ---------------------------------------------------------------------------
# folded code


@dataclass(frozen=True)
class FoldedSpec:
    tower: HermitianTower
    m: int
    s: int
    N: int
    k: int
    reps: tuple[tuple[int, ...], ...]
    evmap: EvMap = field(repr=False, compare=False)

    @property
    def l(self) -> int:
        return self.k + 2 * self.tower.g - 1

    @property
    def q(self) -> int:
        return self.tower.q

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.N * self.m)

    @property
    def D(self) -> int:
        return degree_param(self.N, self.m, self.s, self.k, self.tower.g)

    @property
    def threshold(self) -> int:
        """Smallest agreement t with t*(m-s+1) > D+k+2g-1."""
        return (self.D + self.l) // (self.m - self.s + 1) + 1

    @cached_property
    def places(self) -> list[list[tuple[int, ...]]]:
        """places[i][j] = P_i^{sigma^j}."""
        return [[sigma_on_place(self.tower, P, j) for j in range(self.m)] for P in self.reps]


def degree_param(N: int, m: int, s: int, k: int, g: int) -> int:
    return (N * (m - s + 1) - k + (s - 1) * g + 1) // (s + 1)


def error_fraction_bound(N: int, m: int, s: int, k: int, g: int) -> Fraction:
    """Parameter-advice formula for the correctable error fraction (not asserted)."""
    return (
        Fraction(s, s + 1)
        - Fraction(s, s + 1) * Fraction(k, N * (m - s + 1))
        - Fraction(3 * m, m - s + 1) * Fraction(g, m * N)
    )


def orbit_representatives(tower: HermitianTower, m: int) -> list[tuple[int, ...]]:
    """Places P with P^{sigma^{tm}} for t < (q-1)//m, orbit by orbit.

    Orbits are opened greedily from the lexicographically smallest unvisited
    place with alpha_1 != 0; every such orbit has q-1 distinct places.
    """
    order = tower.q - 1
    seen: set[tuple[int, ...]] = set()
    out = []
    for P in tower.places:
        if P[0] == 0 or P in seen:
            continue
        orbit = [sigma_on_place(tower, P, j) for j in range(order)]
        if len(set(orbit)) != order:
            raise InternalInvariant("sigma orbit has fewer than q-1 places")
        seen.update(orbit)
        out.extend(orbit[t * m] for t in range(order // m))
    return out


def folded_make(tower: HermitianTower, m: int, s: int, N: int, k: int) -> FoldedSpec:
    q = tower.q
    if not 1 <= m <= q - 1:
        raise BadDims("folding parameter m must lie in [1, q-1]")
    if not 1 <= s <= m:
        raise BadS("s must lie in [1, m]")
    if k < 1:
        raise BadDims("k must be positive")
    limit = tower.r ** (tower.e - 1) * ((q - 1) // m)
    if not 1 <= N <= limit:
        raise BadDims(f"N must lie in [1, {limit}]")
    l = k + 2 * tower.g - 1
    if l > N * m:
        raise BadDims(f"l = k+2g-1 = {l} exceeds N*m = {N * m}")
    reps = tuple(orbit_representatives(tower, m)[:N])
    return FoldedSpec(tower, m, s, N, k, reps, ev_map(tower, k))


def folded_encode(spec: FoldedSpec, msg: Sequence[int]) -> list[list[int]]:
    """Column i = (f(P_i), f(P_i^sigma), .., f(P_i^{sigma^{m-1}})) for f = kappa(msg)."""
    f = kappa_P0(spec.evmap, msg)
    basis = spec.evmap.basis
    return [[rr_eval(spec.tower, basis, f, P) for P in col] for col in spec.places]


def agreement(u: Sequence[Sequence[int]], v: Sequence[Sequence[int]]) -> int:
    return sum(list(a) == list(b) for a, b in zip(u, v))


@dataclass(frozen=True)
class FoldedQ:
    s: int
    D: int
    basis0: RrBasis  # for A_0
    basisD: RrBasis  # for A_1..A_s
    A: tuple[tuple[int, ...], ...]


def folded_interpolate(spec: FoldedSpec, Y: Sequence[Sequence[int]]) -> FoldedQ:
    T, s, m, k, g = spec.tower, spec.s, spec.m, spec.k, spec.tower.g
    if len(Y) != spec.N or any(len(col) != m for col in Y):
        raise ShapeMismatch(f"received word must be {spec.N} columns of {m} symbols")
    D = spec.D
    if s * (D - g + 1) + D + k + g <= spec.N * (m - s + 1):
        raise InternalInvariant("interpolation has too few degrees of freedom")
    basis0 = rr_basis(T, D + k + 2 * g - 1)
    basisD = rr_basis(T, D)
    F = T.field
    rows = []
    for col, places in zip(Y, spec.places):
        for j in range(m - s + 1):
            P = places[j]
            row = monomial_values(T, basis0, P)
            vals = monomial_values(T, basisD, P)
            for t in range(1, s + 1):
                y = col[j + t - 1]
                row += [F.mul(y, v) for v in vals]
            rows.append(row)
    n0, nD = len(basis0), len(basisD)
    v = nullspace(F, rows, n0 + s * nD)[0]
    A = [tuple(v[:n0])] + [tuple(v[n0 + t * nD : n0 + (t + 1) * nD]) for t in range(s)]
    return FoldedQ(s, D, basis0, basisD, tuple(A))


def interpolation_residuals(spec: FoldedSpec, Q: FoldedQ, Y: Sequence[Sequence[int]]) -> list[int]:
    """Left-hand sides of every interpolation condition (all zero for a valid Q)."""
    T, F = spec.tower, spec.tower.field
    out = []
    for col, places in zip(Y, spec.places):
        for j in range(spec.m - Q.s + 1):
            P = places[j]
            acc = rr_eval(T, Q.basis0, Q.A[0], P)
            for t in range(1, Q.s + 1):
                acc = F.add(acc, F.mul(rr_eval(T, Q.basisD, Q.A[t], P), col[j + t - 1]))
            out.append(acc)
    return out


@dataclass(frozen=True)
class SolveInfo:
    u: int
    bad_residues: tuple[int, ...]  # d in [0, q-2] with B_0(xi^d) = 0


def series_order(spec: FoldedSpec, Q: FoldedQ) -> int:
    return Q.D + spec.k + 2 * spec.tower.g + 1


def folded_solve(spec: FoldedSpec, Q: FoldedQ, info: list | None = None) -> PeriodicSubspace:
    """Local coefficient vectors (f_0..f_{k-1}) solving the functional equation, padded to blocks of q-1.

    Coefficient u+d of A_0 + sum_t A_t f^{sigma^-(t-1)} is
    a_{0,d} + sum_{j<=d} B_{d-j}(xi^j) f_j with B_l(X) = sum_t a_{t,l} X^{t-1}.
    """
    T, F, k = spec.tower, spec.tower.field, spec.k
    n = series_order(spec, Q)
    series = [T.function_series(Q.basis0, Q.A[0], n)]
    series += [T.function_series(Q.basisD, At, n) for At in Q.A[1:]]
    vals = []
    for At, ser in zip(Q.A[1:], series[1:]):
        v = LocalSeries(tuple(ser)).valuation
        if v is None and any(At):
            raise InternalInvariant("nonzero coefficient function has a vanishing truncated series")
        vals.append(v)
    if all(v is None for v in vals):
        if not any(Q.A[0]):
            raise ZeroQ("interpolation polynomial is zero")
        raise InternalInvariant("A_1..A_s vanish while A_0 does not")
    u = min(v for v in vals if v is not None)
    delta = T.q - 1
    b = -(-k // delta)
    size = b * delta
    if u + k > n:
        raise InternalInvariant("series truncated below the needed order")
    a = [[ser[u + l] if u + l < n else 0 for l in range(k)] for ser in series]

    def B(l: int, x: int) -> int:
        acc, pw = 0, 1
        for t in range(1, Q.s + 1):
            if a[t][l]:
                acc = F.add(acc, F.mul(a[t][l], pw))
            pw = F.mul(pw, x)
        return acc

    xi_pows = [F.pow(T.xi, j) for j in range(delta)]
    bad = tuple(d for d in range(delta) if B(0, xi_pows[d]) == 0)
    if len(bad) > Q.s - 1:
        raise InternalInvariant(f"{len(bad)} residues kill B_0, more than s-1")
    if info is not None:
        info.append(SolveInfo(u, bad))
    v0 = LocalSeries(tuple(series[0])).valuation
    if v0 is not None and v0 < u:
        Bm = [[int(i == j and i < delta - 1) for j in range(delta)] for i in range(delta)]
        avecs = [[0] * delta for _ in range(b)]
        avecs[0][delta - 1] = 1
        return periodic_make(F, delta, Bm, avecs, pad=size - k)
    M = [[0] * size for _ in range(size)]
    rhs = [0] * size
    for d in range(size):
        if d >= k:
            M[d][d] = 1
            continue
        rhs[d] = a[0][d]
        for j in range(d + 1):
            M[d][j] = B(d - j, xi_pows[j % delta])
    Bs, avecs, Amats = [], [], []
    for I in range(b):
        rows = range(I * delta, (I + 1) * delta)
        Bs.append([M[d][I * delta : (I + 1) * delta] for d in rows])
        avecs.append([rhs[d] for d in rows])
        Amats.append([[M[d][J * delta : (J + 1) * delta] for d in rows] for J in range(I)])
    return periodic_make(F, delta, Bs, avecs, Amats, pad=size - k)


# ---------------------------------------------------------------------------
# list decoding


def folded_precode_encode(spec: FoldedSpec, precode, x: Sequence[int]) -> list[int]:
    """Pre-coded message -> F_q^k message of the folded code."""
    if precode is None:
        return list(x)
    if isinstance(precode, HseSet):
        return hse_encode(precode, x)
    F = spec.tower.field
    out: list[int] = []
    pos = 0
    for H in precode.subspaces:
        block = [0] * H.ambient
        for row in H.basis:
            c = x[pos]
            pos += 1
            block = [F.add(u, F.mul(c, w)) for u, w in zip(block, row)]
        out.extend(block)
    return out


def folded_precode_decode(spec: FoldedSpec, precode, v: Sequence[int]) -> list[int]:
    if precode is None:
        return list(v)
    if isinstance(precode, HseSet):
        return hse_decode(precode, v)
    out: list[int] = []
    lam = precode.dim
    for j, H in enumerate(precode.subspaces):
        block = v[j * lam : (j + 1) * lam]
        out.extend(block[p] for p in H.pivots)
    return out


@dataclass
class FoldedReport:
    D: int
    threshold: int
    solver_dim: int
    pruned_dim: int
    candidates: int
    frontier: list[int] = field(default_factory=list)
    results: list[list[int]] = field(default_factory=list)
    solver: PeriodicSubspace | None = None


def folded_decode_report(
    spec: FoldedSpec,
    Y: Sequence[Sequence[int]],
    t: int,
    precode: SubspaceDesign | HseSet | None = None,
    cap: int = DEFAULT_CAP,
) -> FoldedReport:
    """Interpolate, solve, prune by the pre-code, keep messages agreeing in >= t columns."""
    if t * (spec.m - spec.s + 1) <= spec.D + spec.l:
        raise ThresholdTooLow(f"agreement {t} is below the threshold {spec.threshold}")
    k = spec.k
    Q = folded_interpolate(spec, Y)
    H = folded_solve(spec, Q)
    X = H.to_affine()
    report = FoldedReport(Q.D, spec.threshold, X.dim, X.dim, 0, solver=H)
    if isinstance(X, EmptySubspace):
        return report
    X = affine_project(X, range(k))
    if precode is None:
        cands = [list(v) for v in affine_enumerate(X, cap)]
    elif isinstance(precode, HseSet):
        if precode.params.k != k or precode.params.q != spec.q:
            raise ShapeMismatch("h.s.e. pre-code must produce exactly k symbols of F_q")
        W = periodic_from_affine(X, precode.params.delta)
        cands = hse_intersect(precode, W, report.frontier)
        report.pruned_dim = 0 if cands else -1
    else:
        lam = precode.dim
        if lam * precode.count != k:
            raise ShapeMismatch("design blocks must tile the k message coordinates")
        pruned = design_prune(precode.subspaces, periodic_from_affine(X, lam), precode.certified)
        report.pruned_dim = pruned.dim
        cands = [list(v) for v in affine_enumerate(pruned, cap)]
    report.candidates = len(cands)
    report.results = [
        folded_precode_decode(spec, precode, v) for v in cands if agreement(folded_encode(spec, v), Y) >= t
    ]
    return report


def folded_list_decode(
    spec: FoldedSpec,
    Y: Sequence[Sequence[int]],
    t: int,
    precode: SubspaceDesign | HseSet | None = None,
    cap: int = DEFAULT_CAP,
) -> list[list[int]]:
    return folded_decode_report(spec, Y, t, precode, cap).results
