"""Periodic and ultra-periodic affine subspaces of F_q^{b*delta}.

A :class:`PeriodicSubspace` stores the block-triangular system

    a_i + sum_{j<i} A[i][j] x_j + B_i x_i = 0      (i = 0 .. b-1)

over F_q, where ``x_i`` is the i-th block of ``delta`` coordinates.  The
decoders emit the same ``B_i`` for every block; regrouping and padding can
make them differ, so one matrix per block is kept.  The rank bound ``r`` is
the largest nullity among the ``B_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .errors import (
    DimMismatch,
    EnumerationTooLarge,
    FormatError,
    InternalInvariant,
    LengthMismatch,
    NotDivisible,
    ShapeMismatch,
)
from .linalg import (
    DEFAULT_CAP,
    AffineSubspace,
    EmptySubspace,
    Matrix,
    Subspace,
    affine_from_equations,
    affine_make,
    affine_project,
    identity,
    mat_vec,
    nullspace,
    rank,
    rref,
    zeros,
)


@dataclass(frozen=True, eq=False)
class PeriodicSubspace:
    field: object
    delta: int
    b: int
    Bs: tuple[Matrix, ...]
    a: tuple[tuple[int, ...], ...]
    A: tuple[tuple[Matrix, ...], ...]  # A[i][j] for j < i
    pad: int = 0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def length(self) -> int:
        return self.b * self.delta

    @property
    def r(self) -> int:
        return max((self.delta - rank(self.field, B) for B in self.Bs), default=0)

    @property
    def B(self) -> Matrix:
        """The block matrix when it is shared by all blocks."""
        if any(Bi != self.Bs[0] for Bi in self.Bs[1:]):
            raise ShapeMismatch("block matrices differ between blocks")
        return self.Bs[0]

    def block(self, x: Sequence[int], i: int) -> list[int]:
        return list(x[i * self.delta : (i + 1) * self.delta])

    def system(self) -> tuple[Matrix, list[int]]:
        """The stacked system ``E x = h`` of all block equations."""
        F, d = self.field, self.delta
        n = self.length
        E: Matrix = []
        h: list[int] = []
        for i in range(self.b):
            for row in range(d):
                full = [0] * n
                for j in range(i):
                    full[j * d : (j + 1) * d] = self.A[i][j][row]
                full[i * d : (i + 1) * d] = self.Bs[i][row]
                E.append(full)
                h.append(F.neg(self.a[i][row]))
        return E, h

    def to_affine(self) -> Subspace:
        if "affine" not in self._cache:
            E, h = self.system()
            self._cache["affine"] = affine_from_equations(self.field, E, h, self.length)
        return self._cache["affine"]

    @property
    def is_empty(self) -> bool:
        return isinstance(self.to_affine(), EmptySubspace)

    @property
    def dim(self) -> int:
        return self.to_affine().dim

    def prefix_equations(self, j: int) -> tuple[Matrix, list[int]] | None:
        """Equations of ``proj_{j*delta}(H)``; None when H is empty."""
        key = ("prefix", j)
        if key not in self._cache:
            X = self.to_affine()
            if isinstance(X, EmptySubspace):
                self._cache[key] = None
            else:
                P = affine_project(X, range(j * self.delta))
                self._cache[key] = P.equations()
        return self._cache[key]


def _check_matrix(M: Sequence[Sequence[int]], rows: int, cols: int, what: str) -> Matrix:
    if len(M) != rows or any(len(row) != cols for row in M):
        raise ShapeMismatch(f"{what} must be {rows}x{cols}")
    return [list(row) for row in M]


def periodic_make(
    F,
    delta: int,
    B: Sequence[Sequence[int]] | Sequence[Sequence[Sequence[int]]],
    a: Sequence[Sequence[int]],
    A: Sequence[Sequence[Sequence[Sequence[int]]]] | None = None,
    pad: int = 0,
) -> PeriodicSubspace:
    """Validated representation.

    ``B`` is one delta x delta matrix (shared) or a list with one per block;
    ``A[i][j]`` for ``j < i`` may be omitted (zero).
    """
    b = len(a)
    if b == 0:
        raise ShapeMismatch("need at least one block")
    per_block = bool(B) and bool(B[0]) and isinstance(B[0][0], (list, tuple))
    Bs = [_check_matrix(Bi, delta, delta, "B") for Bi in (B if per_block else [B] * b)]
    if len(Bs) != b:
        raise ShapeMismatch("one B per block required")
    avecs = []
    for ai in a:
        if len(ai) != delta:
            raise ShapeMismatch("a_i must have length delta")
        avecs.append(tuple(ai))
    Amats = []
    for i in range(b):
        row = []
        for j in range(i):
            if A is None or i >= len(A) or j >= len(A[i]) or A[i][j] is None:
                row.append(zeros(delta, delta))
            else:
                row.append(_check_matrix(A[i][j], delta, delta, "A_ij"))
        Amats.append(tuple(row))
    return PeriodicSubspace(F, delta, b, tuple(Bs), tuple(avecs), tuple(Amats), pad)


def periodic_member(H: PeriodicSubspace, x: Sequence[int]) -> bool:
    if len(x) != H.length:
        raise LengthMismatch(f"expected {H.length} coordinates, got {len(x)}")
    F = H.field
    blocks = [H.block(x, i) for i in range(H.b)]
    for i in range(H.b):
        acc = list(H.a[i])
        for j in range(i):
            acc = [F.add(u, v) for u, v in zip(acc, mat_vec(F, H.A[i][j], blocks[j]))]
        acc = [F.add(u, v) for u, v in zip(acc, mat_vec(F, H.Bs[i], blocks[i]))]
        if any(acc):
            return False
    return True


def block_equation_solutions(H: PeriodicSubspace, prefix: Sequence[int]) -> Subspace:
    """Solutions y of the next block's own equation, ignoring later blocks."""
    F, d = H.field, H.delta
    if len(prefix) % d or len(prefix) >= H.length:
        raise LengthMismatch("prefix must be a whole number of blocks shorter than H")
    i = len(prefix) // d
    rhs = [F.neg(c) for c in H.a[i]]
    for j in range(i):
        rhs = [F.sub(u, v) for u, v in zip(rhs, mat_vec(F, H.A[i][j], prefix[j * d : (j + 1) * d]))]
    return affine_from_equations(F, H.Bs[i], rhs, d)


def periodic_extend(H: PeriodicSubspace, prefix: Sequence[int]) -> Subspace:
    """All y with ``prefix + y`` in the projection of H onto the first blocks.

    The result is a coset of a subspace of ker(B_j), or Empty when the prefix
    does not extend (either it fails its own equations or no completion exists).
    """
    F, d = H.field, H.delta
    if len(prefix) % d or len(prefix) >= H.length:
        raise LengthMismatch("prefix must be a whole number of blocks shorter than H")
    j = len(prefix) // d + 1
    eqs = H.prefix_equations(j)
    if eqs is None:
        return EmptySubspace(F, d)
    E, h = eqs
    p = len(prefix)
    Ey = [row[p:] for row in E]
    rhs = [F.sub(hi, c) for hi, c in zip(h, mat_vec(F, [row[:p] for row in E], prefix))]
    return affine_from_equations(F, Ey, rhs, d)


def periodic_project(H: PeriodicSubspace, j: int) -> int:
    """Exact dimension of ``proj_{j*delta}(H)`` (-1 if empty); asserts it is at most j*r."""
    if not 0 <= j <= H.b:
        raise ShapeMismatch("block index out of range")
    X = H.to_affine()
    if isinstance(X, EmptySubspace):
        return -1
    dim = affine_project(X, range(j * H.delta)).dim
    if dim > j * H.r:
        raise InternalInvariant(f"projection onto {j} blocks has dim {dim} > {j}*{H.r}")
    return dim


def periodic_regroup(H: PeriodicSubspace, u: int) -> PeriodicSubspace:
    """Same point set with blocks of ``u*delta`` coordinates (u consecutive blocks stacked)."""
    if u <= 0 or H.b % u:
        raise NotDivisible(f"{u} does not divide the block count {H.b}")
    d, D = H.delta, u * H.delta
    nb = H.b // u
    Bs, avecs, Amats = [], [], []
    for I in range(nb):
        Bn = zeros(D, D)
        an: list[int] = []
        for s in range(u):
            i = I * u + s
            an.extend(H.a[i])
            for row in range(d):
                for t in range(s):
                    Bn[s * d + row][t * d : (t + 1) * d] = H.A[i][I * u + t][row]
                Bn[s * d + row][s * d : (s + 1) * d] = H.Bs[i][row]
        Arow = []
        for J in range(I):
            M = zeros(D, D)
            for s in range(u):
                for t in range(u):
                    src = H.A[I * u + s][J * u + t]
                    for row in range(d):
                        M[s * d + row][t * d : (t + 1) * d] = src[row]
            Arow.append(M)
        Bs.append(Bn)
        avecs.append(tuple(an))
        Amats.append(tuple(Arow))
    return PeriodicSubspace(H.field, D, nb, tuple(Bs), tuple(avecs), tuple(Amats), H.pad)


def periodic_from_affine(X: Subspace, delta: int, field=None) -> PeriodicSubspace:
    """Canonical block-triangular representation of an affine subspace.

    Ambient dimensions that are not a multiple of ``delta`` are padded with
    zero coordinates.  For block i the equations of the projection onto the
    first i+1 blocks are reduced with the block-i columns first; the rows
    that pivot inside block i form ``B_i`` and ``A[i][*]``.
    """
    F = X.field if field is None else field
    n = X.ambient
    pad = (-n) % delta
    b = (n + pad) // delta
    if isinstance(X, EmptySubspace):
        # 0 = 1 in the first block
        a0 = [1] + [0] * (delta - 1)
        return periodic_make(F, delta, zeros(delta, delta), [a0] + [[0] * delta] * (b - 1), pad=pad)
    if pad:
        X = affine_make(
            F,
            list(X.offset) + [0] * pad,
            [list(row) + [0] * pad for row in X.basis],
        )
    Bs, avecs, Amats = [], [], []
    for i in range(b):
        P = affine_project(X, range((i + 1) * delta))
        E, h = P.equations()
        p = i * delta
        reordered = [row[p:] + row[:p] + [hi] for row, hi in zip(E, h)]
        R, pivots, rk = rref(F, reordered, (i + 1) * delta)
        Bi = zeros(delta, delta)
        ai = [0] * delta
        Ai = [zeros(delta, delta) for _ in range(i)]
        slot = 0
        for row, pc in zip(R, pivots):
            if pc >= delta:
                break
            Bi[slot] = row[:delta]
            ai[slot] = F.neg(row[-1])
            for j in range(i):
                Ai[j][slot] = row[delta + j * delta : delta + (j + 1) * delta]
            slot += 1
        Bs.append(Bi)
        avecs.append(tuple(ai))
        Amats.append(tuple(Ai))
    return PeriodicSubspace(F, delta, b, tuple(Bs), tuple(avecs), tuple(Amats), pad)


# ---------------------------------------------------------------------------
# periodicity at coarser scales


@dataclass(frozen=True)
class UltraPeriodicWitness:
    """Per-scale data: ``dims[l-1]`` is dim of the common block subspace at scale l."""

    subspace: PeriodicSubspace
    delta: int
    r: int
    dims: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return all(d <= (l + 1) * self.r for l, d in enumerate(self.dims))


def common_block_basis(X: AffineSubspace, delta: int, blocks: int) -> list[list[int]]:
    """RREF basis of sum_j K_j, K_j = {y : (0, .., 0, y) in the underlying space of proj_{j*delta}(X)}.

    Every block fiber of the projection onto ``blocks`` blocks is a coset of
    K_j, so the projection is periodic with rank bound r iff this has
    dimension at most r.
    """
    F = X.field
    vectors: list[list[int]] = []
    for j in range(blocks):
        E, _ = affine_project(X, range((j + 1) * delta)).equations()
        Ey = [row[j * delta :] for row in E]
        vectors.extend(nullspace(F, Ey, delta) if Ey else identity(F, delta))
    if not vectors:
        return []
    R, _, rk = rref(F, vectors, delta)
    return R[:rk]


def common_block_space(X: AffineSubspace, delta: int, blocks: int) -> int:
    return len(common_block_basis(X, delta, blocks))


def ultra_witness(H: PeriodicSubspace, r: int | None = None) -> UltraPeriodicWitness:
    r = H.r if r is None else r
    X = H.to_affine()
    dims = []
    for l in range(1, H.b + 1):
        bl = H.b // l
        if isinstance(X, EmptySubspace):
            dims.append(0)
        else:
            dims.append(common_block_space(X, l * H.delta, bl))
    return UltraPeriodicWitness(H, H.delta, r, tuple(dims))


def ultra_check(H: PeriodicSubspace, r: int | None = None) -> bool:
    """True when every scale l <= b gives an (l*r, l*delta, b//l)-periodic prefix projection."""
    return ultra_witness(H, r).holds


def is_periodic(H: PeriodicSubspace, r: int | None = None) -> bool:
    """(r, delta, b)-periodicity of the point set itself (scale 1)."""
    r = H.r if r is None else r
    X = H.to_affine()
    if isinstance(X, EmptySubspace):
        return True
    return common_block_space(X, H.delta, H.b) <= r


# ---------------------------------------------------------------------------
# enumeration and serialization


def periodic_enumerate(H: PeriodicSubspace, cap: int = DEFAULT_CAP):
    from .linalg import affine_enumerate

    return affine_enumerate(H.to_affine(), cap)


def brute_members(H: PeriodicSubspace, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    """Member set by scanning all of F_q^{b*delta} (reference only)."""
    if H.field.order**H.length > cap:
        raise EnumerationTooLarge("ambient space too large to scan")
    return [x for x in product(range(H.field.order), repeat=H.length) if periodic_member(H, x)]


def format_periodic(H: PeriodicSubspace) -> str:
    F = H.field
    fmt = lambda row: " ".join(F.format(c) for c in row)  # noqa: E731
    lines = [f"periodic q={F.order} delta={H.delta} b={H.b} r={H.r} pad={H.pad}"]
    for i in range(H.b):
        lines.append(f"block {i}")
        lines.append("a " + fmt(H.a[i]))
        lines += ["B " + fmt(row) for row in H.Bs[i]]
        for j in range(i):
            lines += [f"A{j} " + fmt(row) for row in H.A[i][j]]
    return "\n".join(lines) + "\n"


def parse_periodic(F, text: str) -> PeriodicSubspace:
    lines = [ln.split() for ln in text.strip().splitlines()]
    try:
        head = dict(tok.split("=") for tok in lines[0][1:])
        delta, b, pad = int(head["delta"]), int(head["b"]), int(head["pad"])
        if int(head["q"]) != F.order:
            raise DimMismatch("field order differs from the header")
        Bs, avecs, Amats = [], [], []
        pos = 1
        for i in range(b):
            pos += 1  # "block i"
            avecs.append([F.parse(t) for t in lines[pos][1:]])
            pos += 1
            Bs.append([[F.parse(t) for t in lines[pos + r][1:]] for r in range(delta)])
            pos += delta
            row = []
            for _ in range(i):
                row.append([[F.parse(t) for t in lines[pos + r][1:]] for r in range(delta)])
                pos += delta
            Amats.append(row)
    except (KeyError, IndexError, ValueError) as exc:
        raise FormatError("malformed periodic subspace text") from exc
    return periodic_make(F, delta, Bs, avecs, Amats, pad)
