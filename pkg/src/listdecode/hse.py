"""Hierarchically subspace-evasive sets built from nested random polynomials.

A vector of F_q^k (k = b*delta) is laid out as

    (y_1 z_1) (y_2 z_2) ... (y_b' z_b') w

with ``y_j`` of length delta' = (1-zeta)*delta, ``z_j`` of length zeta*delta
and ``w`` of length zeta*k.  It lies in the set iff every

    z_j = xi_j(P_j(rho_j(y_1 .. y_j)))     and     w = xi(Q(rho(y_1 z_1 .. y_b' z_b')))

where ``rho`` reads a coordinate vector in the power basis of an extension
field and ``xi`` keeps the leading coordinates of an element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BadDims, FrontierOverflow, LengthMismatch, MissingFieldSpec, ShapeMismatch
from .fields import FieldSpec, TowerSpec, tower_make
from .linalg import affine_enumerate
from .periodic import PeriodicSubspace, periodic_extend, periodic_member
from .rng import SplitMix64

LAMBDA_CAP = 64


@dataclass(frozen=True)
class HseParams:
    q: int
    delta: int
    b: int
    zeta: Fraction
    lam: int
    seed: int
    L: int

    @property
    def k(self) -> int:
        return self.b * self.delta

    @property
    def delta_p(self) -> int:
        return int((1 - self.zeta) * self.delta)

    @property
    def b_p(self) -> int:
        return int((1 - self.zeta) * self.b)

    @property
    def k_p(self) -> int:
        return self.b_p * self.delta

    @property
    def z_len(self) -> int:
        return int(self.zeta * self.delta)

    @property
    def w_len(self) -> int:
        return int(self.zeta * self.k)

    @property
    def input_len(self) -> int:
        return self.b_p * self.delta_p

    def asymptotic_hypotheses(self, s: int, c: float = 1.0) -> dict[str, bool]:
        """Which asymptotic evasiveness hypotheses hold for rank bound ``s``.

        Recorded for reporting only; the construction runs regardless.
        """
        return {
            "zeta<1/3": self.zeta < Fraction(1, 3),
            "s<zeta*delta/10": s < self.zeta * self.delta / 10,
            "q^(zeta*delta)>=(2q^2ck)^(10/9)": self.q ** float(self.zeta * self.delta)
            >= (2 * self.q**2 * c * self.k) ** (10 / 9),
        }


def hse_params(
    q: int,
    delta: int,
    b: int,
    zeta: Fraction | str | float,
    seed: int = 0,
    c: float = 1.0,
    lam: int | None = None,
    L: int | None = None,
) -> HseParams:
    zeta = Fraction(zeta).limit_denominator(1 << 16) if not isinstance(zeta, Fraction) else zeta
    if not 0 < zeta < 1:
        raise BadDims("zeta must lie strictly between 0 and 1")
    if zeta > Fraction(1, 2):
        raise BadDims("zeta above 1/2 leaves too few prefix coordinates for the hash outputs")
    for what, value in (("zeta*delta", zeta * delta), ("zeta*b", zeta * b)):
        if value.denominator != 1:
            raise BadDims(f"{what} must be an integer")
    k = b * delta
    bound = math.ceil(c * k)
    lam = min(bound, LAMBDA_CAP) if lam is None else lam
    if lam < 1:
        raise BadDims("polynomial degree must be at least 1")
    return HseParams(q, delta, b, zeta, lam, seed, bound if L is None else L)


@dataclass(frozen=True)
class HseSet:
    params: HseParams
    base: FieldSpec
    fields: tuple[TowerSpec, ...]  # F_{q^{j delta'}}, j = 1..b'
    q_field: TowerSpec  # F_{q^{k'}}
    polys: tuple[tuple[int, ...], ...]  # P_1..P_b', each lam+1 coefficients low to high
    Q: tuple[int, ...]


def hse_build(base: FieldSpec, params: HseParams, polys: dict[int, Sequence[int]] | None = None) -> HseSet:
    """Sample P_1..P_b' and Q from the seed.

    ``polys`` maps extension degree -> defining polynomial over F_q; when
    given it must cover every degree needed, otherwise defaults are used.
    """
    if base.order != params.q:
        raise ShapeMismatch("base field order differs from params.q")
    degrees = [j * params.delta_p for j in range(1, params.b_p + 1)] + [params.k_p]

    def make(deg: int) -> TowerSpec:
        if polys is None:
            return tower_make(base, deg)
        if deg not in polys:
            raise MissingFieldSpec(f"no defining polynomial of degree {deg} supplied")
        return tower_make(base, deg, polys[deg])

    towers = tuple(make(d) for d in degrees[:-1])
    qf = make(degrees[-1])
    rng = SplitMix64(params.seed)
    P = tuple(tuple(T.random(rng) for _ in range(params.lam + 1)) for T in towers)
    Q = tuple(qf.random(rng) for _ in range(params.lam + 1))
    return HseSet(params, base, towers, qf, P, Q)


def _horner(T: TowerSpec, coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = T.add(T.mul(acc, x), c)
    return acc


def _z(S: HseSet, j: int, ys: Sequence[int]) -> list[int]:
    """xi_j(P_j(rho_j(y_1..y_j))) for 1-based level j."""
    T = S.fields[j - 1]
    val = _horner(T, S.polys[j - 1], T.from_vector(list(ys)))
    return T.to_vector(val)[: S.params.z_len]


def _w(S: HseSet, prefix: Sequence[int]) -> list[int]:
    T = S.q_field
    val = _horner(T, S.Q, T.from_vector(list(prefix)))
    return T.to_vector(val)[: S.params.w_len]


def hse_encode(S: HseSet, x: Sequence[int]) -> list[int]:
    p = S.params
    if len(x) != p.input_len:
        raise LengthMismatch(f"expected {p.input_len} input symbols, got {len(x)}")
    out: list[int] = []
    ys: list[int] = []
    for j in range(1, p.b_p + 1):
        y = list(x[(j - 1) * p.delta_p : j * p.delta_p])
        ys.extend(y)
        out.extend(y)
        out.extend(_z(S, j, ys))
    out.extend(_w(S, out))
    return out


def hse_decode(S: HseSet, v: Sequence[int]) -> list[int]:
    """The y-blocks of ``v`` (inverse of :func:`hse_encode` on the set)."""
    p = S.params
    if len(v) != p.k:
        raise LengthMismatch(f"expected {p.k} symbols, got {len(v)}")
    out: list[int] = []
    for j in range(p.b_p):
        out.extend(v[j * p.delta : j * p.delta + p.delta_p])
    return out


def _level_ok(S: HseSet, j: int, prefix: Sequence[int]) -> bool:
    """Whether block j (1-based) of ``prefix`` satisfies its hash constraint."""
    p = S.params
    ys: list[int] = []
    for i in range(j):
        ys.extend(prefix[i * p.delta : i * p.delta + p.delta_p])
    block = prefix[(j - 1) * p.delta : j * p.delta]
    return list(block[p.delta_p :]) == _z(S, j, ys)


def hse_member(S: HseSet, v: Sequence[int]) -> bool:
    p = S.params
    if len(v) != p.k:
        raise LengthMismatch(f"expected {p.k} symbols, got {len(v)}")
    for j in range(1, p.b_p + 1):
        if not _level_ok(S, j, v):
            return False
    return list(v[p.k_p :]) == _w(S, v[: p.k_p])


def hse_intersect(
    S: HseSet,
    W: PeriodicSubspace,
    frontier: list[int] | None = None,
) -> list[list[int]]:
    """W intersected with the set, one block level at a time.

    ``frontier`` (if given) receives the size of each level's intersection
    ``proj(W) & proj(Gamma)``.  A level larger than ``params.L`` raises
    FrontierOverflow.
    """
    p = S.params
    if W.delta != p.delta or W.b != p.b:
        raise ShapeMismatch(f"periodic subspace has blocks {W.b}x{W.delta}, expected {p.b}x{p.delta}")
    if W.field.order != p.q:
        raise ShapeMismatch("field order mismatch")
    level: list[list[int]] = [[]]
    for j in range(1, p.b_p + 1):
        nxt: list[list[int]] = []
        for prefix in level:
            ext = periodic_extend(W, prefix)
            for y in affine_enumerate(ext):
                cand = prefix + list(y)
                if _level_ok(S, j, cand):
                    nxt.append(cand)
        if frontier is not None:
            frontier.append(len(nxt))
        if len(nxt) > p.L:
            raise FrontierOverflow(f"level {j} intersection has {len(nxt)} > L={p.L} elements")
        level = nxt
    out = []
    for prefix in level:
        v = prefix + _w(S, prefix)
        if periodic_member(W, v):
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# serialization


def format_hse(S: HseSet) -> str:
    p = S.params
    lines = [
        f"q={p.q}",
        f"delta={p.delta}",
        f"b={p.b}",
        f"zeta={p.zeta}",
        f"lambda={p.lam}",
        f"L={p.L}",
        f"seed={p.seed}",
        f"base_poly={S.base.format_poly()}",
    ]
    for T in S.fields + (S.q_field,):
        lines.append(f"field{T.m}={T.format_poly()}")
    for j, (T, P) in enumerate(zip(S.fields, S.polys), start=1):
        lines.append(f"P{j}=" + " ".join(T.format(c) for c in P))
    lines.append("Q=" + " ".join(S.q_field.format(c) for c in S.Q))
    return "\n".join(lines) + "\n"


def parse_hse(base: FieldSpec, text: str) -> HseSet:
    from .errors import FormatError

    kv = dict(line.split("=", 1) for line in text.strip().splitlines() if "=" in line)
    try:
        params = HseParams(
            int(kv["q"]),
            int(kv["delta"]),
            int(kv["b"]),
            Fraction(kv["zeta"]),
            int(kv["lambda"]),
            int(kv["seed"]),
            int(kv["L"]),
        )
        polys = {}
        for key, val in kv.items():
            if key.startswith("field"):
                polys[int(key[5:])] = [base.parse(t) for t in val.split(":")]
    except (KeyError, ValueError) as exc:
        raise FormatError("malformed h.s.e. description") from exc
    S = hse_build(base, params, polys)
    # coefficient lists are regenerated from the seed; confirm they match the text
    if format_hse(S).strip() != text.strip():
        raise FormatError("stored coefficients do not match the seed")
    return S
