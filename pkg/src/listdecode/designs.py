"""Subspace designs: sampling, exhaustive certification and pruning.

A family H_1..H_c of subspaces of F_q^Lambda is an (r, d)-design when every
r-dimensional W satisfies sum_j dim(W & H_j) <= d.  Designs here are drawn
at random and certified by scanning every W, which is exact at desk sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations, product
from typing import Callable, Iterator, Sequence

from .errors import BadDims, InternalInvariant, ShapeMismatch, TooLarge, Uncertified, VerificationFailed
from .linalg import (
    DEFAULT_CAP,
    AffineSubspace,
    EmptySubspace,
    Subspace,
    affine_from_equations,
    affine_intersect,
    affine_make,
    affine_product,
    affine_project,
    linear_span,
    rank,
)
from .periodic import PeriodicSubspace, common_block_basis, common_block_space, periodic_from_affine
from .rng import SplitMix64, derive_seed

RETRY_CAP = 16


@dataclass(frozen=True)
class SubspaceDesign:
    field: object
    dim: int  # Lambda
    t: int
    subspaces: tuple[AffineSubspace, ...]
    certified: tuple[int, int] | None = None

    @property
    def count(self) -> int:
        return len(self.subspaces)


@dataclass(frozen=True)
class CascadedDesign:
    field: object
    lengths: tuple[int, ...]  # m_0 | m_1 | ... | m_l
    ranks: tuple[int, ...]  # r_0 <= ... <= r_l
    levels: tuple[SubspaceDesign, ...]

    @property
    def depth(self) -> int:
        return len(self.levels)


def design_make(F, dim: int, subspaces: Sequence[AffineSubspace], certified: tuple[int, int] | None = None) -> SubspaceDesign:
    if not subspaces:
        raise BadDims("a design needs at least one subspace")
    for H in subspaces:
        if H.ambient != dim:
            raise ShapeMismatch("member subspace has the wrong ambient dimension")
        if any(H.offset):
            raise ShapeMismatch("design members must be linear subspaces")
    t = subspaces[0].dim
    if any(H.dim != t for H in subspaces):
        t = -1
    return SubspaceDesign(F, dim, t, tuple(subspaces), certified)


def design_sample(F, dim: int, t: int, count: int, seed: int) -> SubspaceDesign:
    """``count`` uniform t-dimensional subspaces of F_q^dim (rejection on rank)."""
    if not 0 <= t <= dim or count < 1:
        raise BadDims("need 0 <= t <= Lambda and a positive count")
    rng = SplitMix64(seed)
    members = []
    for _ in range(count):
        while True:
            M = [[F.random(rng) for _ in range(dim)] for _ in range(t)]
            if rank(F, M) == t:
                break
        members.append(linear_span(F, dim, M))
    return SubspaceDesign(F, dim, t, tuple(members))


def gaussian_binomial(n: int, r: int, q: int) -> int:
    if not 0 <= r <= n:
        return 0
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def iter_subspaces(F, n: int, r: int) -> Iterator[list[list[int]]]:
    """Every r-dimensional subspace of F^n once, as its RREF basis.

    Pivot profiles are visited in lexicographic order; within a profile the
    free entries run through F^(#free) with the first entry varying slowest.
    """
    for pivots in combinations(range(n), r):
        pivset = set(pivots)
        slots = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivset]
        for values in product(range(F.order), repeat=len(slots)):
            rows = [[0] * n for _ in range(r)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, c), v in zip(slots, values):
                rows[i][c] = v
            yield rows


def intersection_dim(F, W: Sequence[Sequence[int]], H: AffineSubspace) -> int:
    """dim(span(W) & H) = dim W + dim H - dim(W + H) for independent rows."""
    rows = [list(w) for w in W] + [list(h) for h in H.basis]
    if not rows:
        return 0
    return len(W) + H.dim - rank(F, rows)


def _dot(F, u: Sequence[int], v: Sequence[int]) -> int:
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


def design_sum(D: SubspaceDesign, W: Sequence[Sequence[int]]) -> int:
    return sum(intersection_dim(D.field, W, H) for H in D.subspaces)


def design_verify(
    D: SubspaceDesign,
    r: int,
    cap: int = DEFAULT_CAP,
    visit: Callable[[list[list[int]], int], None] | None = None,
) -> int:
    """Exact max over r-dim W of sum_j dim(W & H_j).

    ``visit(W, total)`` is called for every W in scan order when given.
    """
    F = D.field
    if not 0 <= r <= D.dim:
        raise BadDims("r must lie in [0, Lambda]")
    total = gaussian_binomial(D.dim, r, F.order)
    if total > cap:
        raise TooLarge(f"{total} subspaces of dimension {r} exceed the verification cap {cap}")
    # dim(W & H) = r - rank(E_H W^T) with E_H the annihilator rows of H
    annihilators = [H.equations()[0] for H in D.subspaces]
    best = 0
    for W in iter_subspaces(F, D.dim, r):
        value = 0
        for E in annihilators:
            value += r - rank(F, [[_dot(F, e, w) for w in W] for e in E]) if E else r
        if visit is not None:
            visit(W, value)
        if value > best:
            best = value
    return best


def design_certify(D: SubspaceDesign, r: int, cap: int = DEFAULT_CAP) -> SubspaceDesign:
    return replace(D, certified=(r, design_verify(D, r, cap)))


def precode_subspace(subspaces: Sequence[AffineSubspace]) -> AffineSubspace:
    """V = H_1 x ... x H_b."""
    if not subspaces:
        raise ShapeMismatch("need at least one subspace")
    if any(H.ambient != subspaces[0].ambient for H in subspaces):
        raise ShapeMismatch("subspaces live in different ambient spaces")
    return affine_product(subspaces)


def _as_affine(T: PeriodicSubspace | Subspace) -> Subspace:
    return T.to_affine() if isinstance(T, PeriodicSubspace) else T


def design_prune(
    subspaces: Sequence[AffineSubspace],
    T: PeriodicSubspace,
    certified: tuple[int, int] | None,
) -> Subspace:
    """{x in T : block_j(x) in H_j for all j}, built one block at a time.

    ``certified = (r, d)`` is the design certificate; T's common block space
    must have dimension at most r.  Each tree level is checked against the
    running sum of dim(W & H_j) and the result against d.
    """
    if certified is None:
        raise Uncertified("design carries no certificate")
    r, d = certified
    lam = T.delta
    if len(subspaces) != T.b or any(H.ambient != lam for H in subspaces):
        raise ShapeMismatch(f"need {T.b} subspaces of F_q^{lam}")
    F = T.field
    X = T.to_affine()
    n = T.length
    if isinstance(X, EmptySubspace):
        return X
    W = common_block_basis(X, lam, T.b)
    if len(W) > r:
        raise Uncertified(f"periodic rank {len(W)} exceeds the certified r={r}")
    budget = 0
    for j, H in enumerate(subspaces):
        E, _ = H.equations()
        rows = []
        for row in E:
            full = [0] * n
            full[j * lam : (j + 1) * lam] = row
            rows.append(full)
        X = affine_intersect(X, affine_from_equations(F, rows, [0] * len(rows), n))
        if isinstance(X, EmptySubspace):
            return X
        budget += intersection_dim(F, W, H)
        level_dim = affine_project(X, range((j + 1) * lam)).dim
        if level_dim > budget:
            raise InternalInvariant(f"tree level {j + 1} has dimension {level_dim} > {budget}")
    if X.dim > d:
        raise InternalInvariant(f"pruned dimension {X.dim} exceeds certified d={d}")
    return X


# ---------------------------------------------------------------------------
# cascades


def cascade_build(
    F,
    lengths: Sequence[int],
    ranks: Sequence[int],
    dims: Sequence[int],
    seed: int,
    cap: int = DEFAULT_CAP,
) -> CascadedDesign:
    """Sample and certify each level; up to RETRY_CAP draws per level."""
    l = len(lengths) - 1
    if l < 1 or len(ranks) != l + 1 or len(dims) != l:
        raise BadDims("need l+1 lengths, l+1 ranks and l dimensions")
    for a, b in zip(lengths, lengths[1:]):
        if b % a:
            raise BadDims("each length must divide the next")
    levels = []
    for i in range(1, l + 1):
        lam, count = lengths[i - 1], lengths[i] // lengths[i - 1]
        for attempt in range(RETRY_CAP):
            D = design_sample(F, lam, dims[i - 1], count, derive_seed(seed, i * RETRY_CAP + attempt))
            d = design_verify(D, ranks[i - 1], cap)
            if d <= ranks[i]:
                levels.append(replace(D, certified=(ranks[i - 1], d)))
                break
        else:
            raise VerificationFailed(f"level {i}: no ({ranks[i - 1]},{ranks[i]})-design in {RETRY_CAP} draws")
    return CascadedDesign(F, tuple(lengths), tuple(ranks), tuple(levels))


def canonical_subspace(C: CascadedDesign, kappa: int) -> AffineSubspace:
    """U(M) inside F_q^kappa; coordinates past m_l are fixed to zero."""
    F = C.field
    ml = C.lengths[-1]
    if ml > kappa:
        raise ShapeMismatch(f"m_l={ml} exceeds kappa={kappa}")
    rows: list[list[int]] = []
    for i, D in enumerate(C.levels, start=1):
        lam = C.lengths[i - 1]
        per = C.lengths[i] // lam
        annihilators = [D.subspaces[t].equations()[0] for t in range(per)]
        for block in range(ml // lam):
            for row in annihilators[block % per]:
                full = [0] * kappa
                full[block * lam : (block + 1) * lam] = row
                rows.append(full)
    for c in range(ml, kappa):
        full = [0] * kappa
        full[c] = 1
        rows.append(full)
    U = affine_from_equations(F, rows, [0] * len(rows), kappa)
    assert isinstance(U, AffineSubspace)
    return U


def cascade_prune(C: CascadedDesign, T: PeriodicSubspace | Subspace, kappa: int) -> Subspace:
    """T & U(M), pruning with the level-i design at period m_{i-1}.

    After level i the intermediate subspace must be (r_i, m_i)-periodic;
    the final dimension is at most r_l.
    """
    F = C.field
    X = _as_affine(T)
    ml = C.lengths[-1]
    if X.ambient != kappa:
        raise ShapeMismatch(f"T lives in dimension {X.ambient}, expected {kappa}")
    if ml > kappa:
        raise ShapeMismatch(f"m_l={ml} exceeds kappa={kappa}")
    tail = [[int(c == j) for c in range(kappa)] for j in range(ml, kappa)]
    X = affine_intersect(X, affine_from_equations(F, tail, [0] * len(tail), kappa)) if tail else X
    if isinstance(X, EmptySubspace):
        return X
    Y = affine_project(X, range(ml))
    for i, D in enumerate(C.levels, start=1):
        lam = C.lengths[i - 1]
        per = C.lengths[i] // lam
        reps = ml // C.lengths[i]
        Hs = [D.subspaces[j % per] for j in range(ml // lam)]
        P = periodic_from_affine(Y, lam)
        if D.certified is None:
            raise Uncertified(f"level {i} design is not certified")
        r_prev, d = D.certified
        Y = design_prune(Hs, P, (r_prev, d * reps))
        if isinstance(Y, EmptySubspace):
            return EmptySubspace(F, kappa)
        if common_block_space(Y, C.lengths[i], reps) > C.ranks[i]:
            raise InternalInvariant(f"level {i} output is not ({C.ranks[i]}, {C.lengths[i]})-periodic")
    if Y.dim > C.ranks[-1]:
        raise InternalInvariant(f"pruned dimension {Y.dim} exceeds r_l={C.ranks[-1]}")
    return affine_make(F, list(Y.offset) + [0] * (kappa - ml), [list(b) + [0] * (kappa - ml) for b in Y.basis])


# ---------------------------------------------------------------------------
# serialization


def format_design(D: SubspaceDesign) -> str:
    F = D.field
    r, d = D.certified if D.certified else ("-", "-")
    lines = [f"design q={F.order} Lambda={D.dim} t={D.t} count={D.count} r={r} d={d}"]
    for H in D.subspaces:
        lines.append(f"member dim={H.dim}")
        lines += ["row " + " ".join(F.format(c) for c in row) for row in H.basis]
    return "\n".join(lines) + "\n"


def parse_design(F, text: str) -> SubspaceDesign:
    from .errors import FormatError

    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    try:
        head = dict(tok.split("=") for tok in lines[0][1:])
        dim = int(head["Lambda"])
        if int(head["q"]) != F.order:
            raise FormatError("field order differs from the header")
        cert = None if head["r"] == "-" else (int(head["r"]), int(head["d"]))
        members: list[AffineSubspace] = []
        rows: list[list[int]] | None = None
        for ln in lines[1:]:
            if ln[0] == "member":
                if rows is not None:
                    members.append(linear_span(F, dim, rows))
                rows = []
            elif ln[0] == "row" and rows is not None:
                row = [F.parse(t) for t in ln[1:]]
                if len(row) != dim:
                    raise FormatError("basis row has the wrong length")
                rows.append(row)
            else:
                raise FormatError(f"unexpected line {' '.join(ln)!r}")
        if rows is not None:
            members.append(linear_span(F, dim, rows))
        if len(members) != int(head["count"]):
            raise FormatError("member count differs from the header")
    except (KeyError, IndexError, ValueError) as exc:
        raise FormatError("malformed design text") from exc
    return design_make(F, dim, members, cert)
