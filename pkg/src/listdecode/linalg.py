"""Dense exact linear algebra over any field object from :mod:`listdecode.fields`.

Matrices are lists of rows (lists of ints).  Every routine is deterministic:
pivots are the first nonzero entry scanning columns left to right.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .errors import DimMismatch, EnumerationTooLarge, NoSolution, ShapeMismatch

Matrix = list[list[int]]
Vector = list[int]

DEFAULT_CAP = 1 << 20


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(F, n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence[int]], cols: int | None = None) -> Matrix:
    if not M:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*M)]


def mat_vec(F, M: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    out = []
    for row in M:
        acc = 0
        for a, x in zip(row, v):
            if a and x:
                acc = F.add(acc, F.mul(a, x))
        out.append(acc)
    return out


def mat_mul(F, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    Bt = transpose(B)
    return [[_dot(F, row, col) for col in Bt] for row in A]


def _dot(F, u: Sequence[int], v: Sequence[int]) -> int:
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = F.add(acc, F.mul(a, b))
    return acc


def vec_add(F, u: Sequence[int], v: Sequence[int]) -> Vector:
    return [F.add(a, b) for a, b in zip(u, v)]


def vec_sub(F, u: Sequence[int], v: Sequence[int]) -> Vector:
    return [F.sub(a, b) for a, b in zip(u, v)]


def vec_scale(F, c: int, v: Sequence[int]) -> Vector:
    return [F.mul(c, a) for a in v]


def vec_neg(F, v: Sequence[int]) -> Vector:
    return [F.neg(a) for a in v]


def rref(F, M: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, list[int], int]:
    """Reduced row-echelon form; returns ``(R, pivot_columns, rank)``.

    ``R`` keeps all rows (zero rows at the bottom).
    """
    R = [list(row) for row in M]
    if ncols is None:
        ncols = len(R[0]) if R else 0
    pivots: list[int] = []
    row = 0
    nrows = len(R)
    for col in range(ncols):
        if row == nrows:
            break
        piv = next((i for i in range(row, nrows) if R[i][col]), None)
        if piv is None:
            continue
        R[row], R[piv] = R[piv], R[row]
        inv = F.inv(R[row][col])
        if inv != 1:
            R[row] = [F.mul(inv, a) for a in R[row]]
        prow = R[row]
        for i in range(nrows):
            if i != row:
                c = R[i][col]
                if c:
                    R[i] = [F.sub(a, F.mul(c, b)) if b else a for a, b in zip(R[i], prow)]
        pivots.append(col)
        row += 1
    return R, pivots, len(pivots)


def rank(F, M: Sequence[Sequence[int]]) -> int:
    return rref(F, M)[2]


def nullspace(F, M: Sequence[Sequence[int]], ncols: int | None = None) -> list[Vector]:
    """Basis of ``{x : M x = 0}``, one vector per free column in increasing order.

    The vector for free column ``c`` has a 1 at ``c``, zeros at the other
    free columns, and the forced values at pivot columns.
    """
    if ncols is None:
        ncols = len(M[0]) if M else 0
    R, pivots, rk = rref(F, M, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for i, pc in enumerate(pivots):
            c = R[i][free]
            if c:
                v[pc] = F.neg(c)
        basis.append(v)
    return basis


def solve(F, M: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None) -> tuple[Vector, list[Vector]]:
    """One solution of ``M x = b`` (free variables zero) and a nullspace basis."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if len(b) != len(M):
        raise ShapeMismatch("right-hand side length differs from row count")
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, pivots, rk = rref(F, aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        raise NoSolution("inconsistent linear system")
    x = [0] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = R[i][ncols]
    return x, nullspace(F, M, ncols)


# ---------------------------------------------------------------------------
# affine subspaces


@dataclass(frozen=True)
class EmptySubspace:
    """The empty affine subspace of F^ambient."""

    field: object
    ambient: int

    @property
    def dim(self) -> int:
        return -1

    def contains(self, x: Sequence[int]) -> bool:
        return False


@dataclass(frozen=True)
class AffineSubspace:
    """``offset + span(basis)`` in canonical form.

    The basis rows are in reduced row-echelon form and the offset is zero at
    every basis pivot column, so equal sets have equal representations.
    """

    field: object
    ambient: int
    offset: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        return [next(i for i, c in enumerate(row) if c) for row in self.basis]

    def contains(self, x: Sequence[int]) -> bool:
        if len(x) != self.ambient:
            raise DimMismatch("point has wrong length")
        F = self.field
        diff = vec_sub(F, x, self.offset)
        # reduce against the RREF basis: coefficient at each pivot is forced
        for row, pc in zip(self.basis, self.pivots):
            c = diff[pc]
            if c:
                diff = [F.sub(a, F.mul(c, b)) if b else a for a, b in zip(diff, row)]
        return not any(diff)

    def equations(self) -> tuple[Matrix, Vector]:
        """``(E, h)`` with this subspace = ``{x : E x = h}``."""
        F = self.field
        E = nullspace(F, [list(r) for r in self.basis], self.ambient) if self.basis else identity(F, self.ambient)
        return E, mat_vec(F, E, self.offset)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AffineSubspace)
            and self.ambient == other.ambient
            and self.offset == other.offset
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.ambient, self.offset, self.basis))


Subspace = AffineSubspace | EmptySubspace


def affine_make(F, offset: Sequence[int], vectors: Sequence[Sequence[int]]) -> AffineSubspace:
    """Canonical ``offset + span(vectors)``; vectors need not be independent."""
    n = len(offset)
    if any(len(v) != n for v in vectors):
        raise DimMismatch("spanning vector has wrong length")
    R, pivots, rk = rref(F, [list(v) for v in vectors], n) if vectors else ([], [], 0)
    basis = [R[i] for i in range(rk)]
    off = list(offset)
    for row, pc in zip(basis, pivots):
        c = off[pc]
        if c:
            off = [F.sub(a, F.mul(c, b)) if b else a for a, b in zip(off, row)]
    return AffineSubspace(F, n, tuple(off), tuple(tuple(r) for r in basis))


def linear_span(F, n: int, vectors: Sequence[Sequence[int]]) -> AffineSubspace:
    return affine_make(F, [0] * n, vectors)


def full_space(F, n: int) -> AffineSubspace:
    return AffineSubspace(F, n, tuple([0] * n), tuple(tuple(r) for r in identity(F, n)))


def point(F, x: Sequence[int]) -> AffineSubspace:
    return AffineSubspace(F, len(x), tuple(x), ())


def affine_from_equations(F, E: Sequence[Sequence[int]], h: Sequence[int], n: int) -> Subspace:
    """``{x in F^n : E x = h}``."""
    if not E:
        return full_space(F, n)
    try:
        x0, basis = solve(F, E, h, n)
    except NoSolution:
        return EmptySubspace(F, n)
    return affine_make(F, x0, basis)


def affine_intersect(A: Subspace, B: Subspace) -> Subspace:
    if A.ambient != B.ambient:
        raise DimMismatch("ambient dimensions differ")
    if isinstance(A, EmptySubspace):
        return A
    if isinstance(B, EmptySubspace):
        return B
    F = A.field
    E1, h1 = A.equations()
    E2, h2 = B.equations()
    return affine_from_equations(F, E1 + E2, h1 + h2, A.ambient)


def affine_enumerate(A: Subspace, cap: int = DEFAULT_CAP) -> Iterator[tuple[int, ...]]:
    """All points, lexicographic in the basis coefficients (first varying slowest)."""
    if isinstance(A, EmptySubspace):
        return iter(())
    F = A.field
    if F.order**A.dim > cap:
        raise EnumerationTooLarge(f"{F.order}^{A.dim} points exceed the cap {cap}")
    return _enumerate(F, A)


def _enumerate(F, A: AffineSubspace) -> Iterator[tuple[int, ...]]:
    for coeffs in product(range(F.order), repeat=A.dim):
        x = list(A.offset)
        for c, row in zip(coeffs, A.basis):
            if c:
                x = [F.add(a, F.mul(c, b)) if b else a for a, b in zip(x, row)]
        yield tuple(x)


def affine_size(A: Subspace) -> int:
    if isinstance(A, EmptySubspace):
        return 0
    return A.field.order**A.dim


def affine_project(A: Subspace, coords: Sequence[int]) -> Subspace:
    """Image under the coordinate projection onto ``coords``."""
    if isinstance(A, EmptySubspace):
        return EmptySubspace(A.field, len(coords))
    return affine_make(A.field, [A.offset[c] for c in coords], [[row[c] for c in coords] for row in A.basis])


def affine_product(parts: Sequence[AffineSubspace]) -> AffineSubspace:
    """Cartesian product, blocks in the given order."""
    F = parts[0].field
    n = sum(p.ambient for p in parts)
    offset: list[int] = []
    vectors: list[list[int]] = []
    pos = 0
    for p in parts:
        offset.extend(p.offset)
        for row in p.basis:
            v = [0] * n
            v[pos : pos + p.ambient] = row
            vectors.append(v)
        pos += p.ambient
    return affine_make(F, offset, vectors)


def format_subspace(A: Subspace) -> str:
    F = A.field
    if isinstance(A, EmptySubspace):
        return f"empty ambient={A.ambient}"
    lines = [f"ambient={A.ambient} dim={A.dim}", "offset " + " ".join(F.format(c) for c in A.offset)]
    lines += ["basis " + " ".join(F.format(c) for c in row) for row in A.basis]
    return "\n".join(lines)
