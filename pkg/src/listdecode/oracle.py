"""Brute-force references for the decoders, the solvers and the designs.

Nothing here uses :mod:`listdecode.linalg`: every check enumerates points
and evaluates with field operations directly, so a bug in the exact linear
algebra cannot hide itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Sequence

from .errors import TooLarge
from .fields import TowerSpec, poly_add, poly_frobenius, poly_mul

DEFAULT_BUDGET = 1 << 20


@dataclass(frozen=True)
class OracleBudget:
    max_count: int = DEFAULT_BUDGET
    max_seconds: float | None = None  # advisory only

    def check(self, count: int, what: str = "scan") -> None:
        if count > self.max_count:
            raise TooLarge(f"{what} of {count} items exceeds the oracle budget {self.max_count}")


def _budget(budget: OracleBudget | int | None) -> OracleBudget:
    if budget is None:
        return OracleBudget()
    if isinstance(budget, int):
        return OracleBudget(budget)
    return budget


# ---------------------------------------------------------------------------
# generic scans


def brute_equation_members(
    holds: Callable[[tuple[int, ...]], bool],
    q: int,
    length: int,
    budget: OracleBudget | int | None = None,
) -> set[tuple[int, ...]]:
    """Every x in F_q^length with ``holds(x)``."""
    _budget(budget).check(q**length, "equation scan")
    return {x for x in product(range(q), repeat=length) if holds(x)}


def span_points(F, vectors: Sequence[Sequence[int]], n: int) -> set[tuple[int, ...]]:
    """All F-linear combinations, by closure (vectors need not be independent)."""
    pts = {tuple([0] * n)}
    for v in vectors:
        if tuple(v) in pts:
            continue
        pts = {tuple(F.add(a, F.mul(c, b)) for a, b in zip(p, v)) for p in pts for c in range(F.order)}
    return pts


def log_q(size: int, q: int) -> int:
    d = 0
    while size > 1:
        if size % q:
            raise ValueError("not a power of q")
        size //= q
        d += 1
    return d


# ---------------------------------------------------------------------------
# Reed-Solomon


def _horner(T: TowerSpec, f: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = T.add(T.mul(acc, x), c)
    return acc


def brute_rs_decode(spec, y: Sequence[int], e: int, budget: OracleBudget | int | None = None) -> list[list[int]]:
    """All messages (in the pre-code's message space) whose codeword is within e of y."""
    from .rs import precode_encode

    T = spec.tower
    P = spec.precode
    length = spec.message_length()
    alphabet = T.order if P is None else T.q
    _budget(budget).check(alphabet**length, "message scan")
    out = []
    for msg in product(range(alphabet), repeat=length):
        f = list(msg) if P is None else precode_encode(spec, list(msg))
        dist = 0
        for a, yi in zip(spec.alphas, y):
            if _horner(T, f, a) != yi:
                dist += 1
                if dist > e:
                    break
        if dist <= e:
            out.append(list(msg))
    return out


def rs_equation_holds(spec, Q) -> Callable[[tuple[int, ...]], bool]:
    """Predicate on F_q^{mk}: coefficients below u+k of A_0 + sum_t A_t f^{sigma^(t-1)} vanish.

    u is the least X-adic valuation among A_1..A_s; the product is formed with
    ordinary polynomial arithmetic.
    """
    T, m, k = spec.tower, spec.m, spec.k
    vals = [next((i for i, c in enumerate(At) if c), None) for At in Q.A[1:]]
    u = min(v for v in vals if v is not None)
    top = u + k

    def holds(x: tuple[int, ...]) -> bool:
        f = [T.from_vector(list(x[i * m : (i + 1) * m])) for i in range(k)]
        phi = [c for c in Q.A[0]]
        ft = f
        for t, At in enumerate(Q.A[1:]):
            if t:
                ft = poly_frobenius(T, ft, 1)
            phi = poly_add(T, phi, poly_mul(T, list(At), ft))
        return not any(phi[:top])

    return holds


# ---------------------------------------------------------------------------
# Hermitian


def folded_equation_holds(spec, Q) -> Callable[[tuple[int, ...]], bool]:
    """Predicate on F_q^k: the local series of A_0 + sum_t A_t f^{sigma^-(t-1)} vanishes below u+k.

    f = kappa(msg) is expanded as a function; sigma is applied to f itself
    and the products are formed as truncated series.
    """
    from .hermitian import kappa_P0, series_mul, sigma_on_function

    T, k = spec.tower, spec.k
    F = T.field
    n = Q.D + k + 2 * T.g + 1
    basis_f = spec.evmap.basis
    A_series = [T.function_series(Q.basis0, Q.A[0], n)] + [T.function_series(Q.basisD, At, n) for At in Q.A[1:]]
    vals = [next((i for i, c in enumerate(s) if c), None) for s in A_series[1:]]
    u = min(v for v in vals if v is not None)
    top = u + k

    def holds(msg: tuple[int, ...]) -> bool:
        f = kappa_P0(spec.evmap, list(msg))
        total = list(A_series[0][:top])
        for t in range(1, Q.s + 1):
            ft = sigma_on_function(T, basis_f, f, -(t - 1))
            prod = series_mul(F, A_series[t], T.function_series(basis_f, ft, top), top)
            total = [F.add(a, b) for a, b in zip(total, prod)]
        return not any(total)

    return holds


def brute_folded_decode(spec, Y, t: int, budget: OracleBudget | int | None = None) -> list[list[int]]:
    """All messages of F_q^k whose folded codeword agrees with Y in at least t columns."""
    from .hermitian import folded_encode

    _budget(budget).check(spec.q**spec.k, "message scan")
    out = []
    for msg in product(range(spec.q), repeat=spec.k):
        cw = folded_encode(spec, list(msg))
        if sum(a == list(b) for a, b in zip(cw, Y)) >= t:
            out.append(list(msg))
    return out


# ---------------------------------------------------------------------------
# subspace designs and periodicity


def brute_design_sum(F, subspaces: Iterable, W: Sequence[Sequence[int]]) -> int:
    """sum_H dim(W & H), counting common points of the two spans."""
    n = len(W[0]) if W else 0
    w_pts = span_points(F, W, n) if W else {()}
    total = 0
    for H in subspaces:
        n = H.ambient
        h_pts = span_points(F, [list(b) for b in H.basis], n)
        common = w_pts & h_pts if W else {tuple([0] * n)}
        total += log_q(len(common), F.order)
    return total


def brute_planes(F, n: int, r: int, budget: OracleBudget | int | None = None) -> list[tuple[frozenset, list]]:
    """Every r-dimensional subspace of F^n as (point set, spanning vectors), from r-subsets of vectors."""
    from itertools import combinations

    vectors = [v for v in product(range(F.order), repeat=n) if any(v)]
    _budget(budget).check(len(vectors) ** r, "subspace scan")
    seen: dict[frozenset, list] = {}
    for combo in combinations(vectors, r):
        pts = frozenset(span_points(F, combo, n))
        if len(pts) == F.order**r and pts not in seen:
            seen[pts] = [list(v) for v in combo]
    return list(seen.items())


def fiber_rank(F, points: Iterable[Sequence[int]], delta: int, blocks: int) -> int:
    """Dimension of the span of all block-fiber differences (exhaustive coset inspection).

    For each block j the points of the projection onto the first j+1 blocks
    are grouped by their prefix; differences inside every group span the
    smallest W such that all fibers lie in cosets of W.
    """
    pts = [tuple(p) for p in points]
    diffs: list[tuple[int, ...]] = []
    for j in range(blocks):
        groups: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
        for p in pts:
            groups.setdefault(p[: j * delta], set()).add(p[j * delta : (j + 1) * delta])
        for fiber in groups.values():
            items = sorted(fiber)
            base = items[0]
            for y in items[1:]:
                diffs.append(tuple(F.sub(a, b) for a, b in zip(y, base)))
    return log_q(len(span_points(F, diffs, delta)), F.order)


def brute_ultra_dims(F, points: Iterable[Sequence[int]], delta: int, b: int) -> list[int]:
    """fiber_rank of proj_{(b//l)*l*delta} at block size l*delta, for l = 1..b."""
    pts = [tuple(p) for p in points]
    out = []
    for l in range(1, b + 1):
        bl = b // l
        proj = {p[: bl * l * delta] for p in pts}
        out.append(fiber_rank(F, proj, l * delta, bl))
    return out
