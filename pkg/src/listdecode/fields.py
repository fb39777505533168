"""Exact arithmetic in GF(p), GF(p^a) = F_q and F_{q^m}.

Elements are plain Python ints that pack the coordinate vector over the
immediate base field positionally: an element of GF(p^a) is
``sum(d_i * p**i)`` for its base-p digits, and an element of F_{q^m} is
``sum(c_i * q**i)`` for its F_q-coordinates ``c_i`` in the power basis of
the defining polynomial's root.  The subfield F_q therefore sits inside
F_{q^m} as the ints ``0 .. q-1``.

Univariate polynomials are coefficient lists, low degree first, with no
trailing zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import FieldMismatch, FormatError, NotIrreducible, NotMonic, NotPrime, ZeroMap
from .rng import SplitMix64

# multiplicative tables are built for fields up to this size
TABLE_LIMIT = 1 << 17

_DIGITS = string.digits + string.ascii_lowercase


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class _Field:
    """Arithmetic shared by both field levels; subclasses supply ``_slow_mul``."""

    p: int
    order: int
    zero = 0
    one = 1

    # -- additive structure -------------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        return self._add_digits(x, y)

    def sub(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        return self._add_digits(x, self.neg(y))

    def neg(self, x: int) -> int:
        if self.p == 2:
            return x
        return self._neg_digits(x)

    # -- multiplicative structure -------------------------------------------

    @cached_property
    def _tables(self) -> tuple[list[int], list[int]] | None:
        if self.order > TABLE_LIMIT:
            return None
        g = self.primitive
        n = self.order - 1
        exp = [0] * (2 * n)
        log = [0] * self.order
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        return exp, log

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        t = self._tables
        if t is None:
            return self._slow_mul(x, y)
        exp, log = t
        return exp[log[x] + log[y]]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        t = self._tables
        if t is None:
            return self._slow_pow(x, self.order - 2)
        exp, log = t
        return exp[(self.order - 1 - log[x]) % (self.order - 1)]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            x, e = self.inv(x), -e
        if x == 0:
            return 1 if e == 0 else 0
        t = self._tables
        if t is None:
            return self._slow_pow(x, e)
        exp, log = t
        return exp[(log[x] * e) % (self.order - 1)]

    def _slow_pow(self, x: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, x)
            x = self._slow_mul(x, x)
            e >>= 1
        return result

    def log(self, x: int) -> int:
        """Discrete log to the base :attr:`primitive`."""
        if x == 0:
            raise ValueError("log of zero")
        t = self._tables
        if t is not None:
            return t[1][x]
        g, acc = self.primitive, 1
        for i in range(self.order - 1):
            if acc == x:
                return i
            acc = self._slow_mul(acc, g)
        raise ValueError("element not in multiplicative group")

    @cached_property
    def primitive(self) -> int:
        """First generator of the multiplicative group in the order 1, 2, 3, ..."""
        n = self.order - 1
        if n == 1:
            return 1
        factors = prime_factors(n)
        for g in range(1, self.order):
            if all(self._slow_pow(g, n // f) != 1 for f in factors):
                return g
        raise NotIrreducible("multiplicative group is not cyclic; defining polynomial is bad")

    def multiplicative_order(self, x: int) -> int:
        if x == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.order - 1
        k = n
        for f in prime_factors(n):
            while k % f == 0 and self.pow(x, k // f) == 1:
                k //= f
        return k

    # -- misc ---------------------------------------------------------------

    def elements(self) -> range:
        return range(self.order)

    def nonzero(self) -> range:
        return range(1, self.order)

    def random(self, rng: SplitMix64) -> int:
        raise NotImplementedError

    def scalar(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p


@dataclass(frozen=True, eq=False)
class FieldSpec(_Field):
    """GF(p^a) defined by a monic irreducible polynomial over GF(p)."""

    p: int
    a: int
    defining_poly: tuple[int, ...]

    @property
    def order(self) -> int:  # type: ignore[override]
        return self.p**self.a

    @property
    def q(self) -> int:
        return self.order

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and (self.p, self.a, self.defining_poly) == (
            other.p,
            other.a,
            other.defining_poly,
        )

    def __hash__(self) -> int:
        return hash(("F", self.p, self.a, self.defining_poly))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.a})"

    # digits
    def digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.a):
            x, d = divmod(x, self.p)
            out.append(d)
        return out

    def from_digits(self, ds: Sequence[int]) -> int:
        x = 0
        for d in reversed(ds):
            x = x * self.p + d
        return x

    def _add_digits(self, x: int, y: int) -> int:
        p = self.p
        if self.a == 1:
            return (x + y) % p
        out, place = 0, 1
        while x or y:
            x, dx = divmod(x, p)
            y, dy = divmod(y, p)
            out += ((dx + dy) % p) * place
            place *= p
        return out

    def _neg_digits(self, x: int) -> int:
        p = self.p
        if self.a == 1:
            return (-x) % p
        out, place = 0, 1
        while x:
            x, d = divmod(x, p)
            out += ((-d) % p) * place
            place *= p
        return out

    def _slow_mul(self, x: int, y: int) -> int:
        p, a = self.p, self.a
        if a == 1:
            return (x * y) % p
        dx, dy = self.digits(x), self.digits(y)
        prod = [0] * (2 * a - 1)
        for i, u in enumerate(dx):
            if u:
                for j, v in enumerate(dy):
                    prod[i + j] = (prod[i + j] + u * v) % p
        f = self.defining_poly
        for deg in range(2 * a - 2, a - 1, -1):
            c = prod[deg]
            if c:
                for i in range(a + 1):
                    prod[deg - a + i] = (prod[deg - a + i] - c * f[i]) % p
        return self.from_digits(prod[:a])

    def random(self, rng: SplitMix64) -> int:
        return self.from_digits(rng.digits(self.p, self.a))

    # serialization
    def format(self, x: int) -> str:
        return "".join(_DIGITS[d] for d in self.digits(x))

    def parse(self, s: str) -> int:
        s = s.strip()
        if len(s) != self.a:
            raise FormatError(f"expected {self.a} digits for {self!r}, got {s!r}")
        try:
            ds = [_DIGITS.index(ch) for ch in s.lower()]
        except ValueError as exc:
            raise FormatError(f"bad digit in {s!r}") from exc
        if any(d >= self.p for d in ds):
            raise FormatError(f"digit out of range in {s!r}")
        return self.from_digits(ds)

    def format_poly(self) -> str:
        return "".join(_DIGITS[d] for d in self.defining_poly)


@dataclass(frozen=True, eq=False)
class TowerSpec(_Field):
    """F_{q^m} as F_q[X]/(defining_poly)."""

    base: FieldSpec
    m: int
    defining_poly: tuple[int, ...]

    @property
    def p(self) -> int:  # type: ignore[override]
        return self.base.p

    @property
    def q(self) -> int:
        return self.base.order

    @property
    def order(self) -> int:  # type: ignore[override]
        return self.base.order**self.m

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TowerSpec) and (self.base, self.m, self.defining_poly) == (
            other.base,
            other.m,
            other.defining_poly,
        )

    def __hash__(self) -> int:
        return hash(("T", self.base, self.m, self.defining_poly))

    def __repr__(self) -> str:
        return f"GF(({self.base.p}^{self.base.a})^{self.m})"

    # coordinates over F_q
    def to_vector(self, x: int) -> list[int]:
        q = self.q
        out = []
        for _ in range(self.m):
            x, c = divmod(x, q)
            out.append(c)
        return out

    def from_vector(self, v: Sequence[int]) -> int:
        if len(v) != self.m:
            raise FieldMismatch(f"coordinate vector must have length {self.m}")
        q = self.q
        x = 0
        for c in reversed(v):
            x = x * q + c
        return x

    def embed(self, c: int) -> int:
        """Image of a base-field element (constant polynomial)."""
        return c

    def in_subfield(self, x: int) -> bool:
        return 0 <= x < self.q

    def _add_digits(self, x: int, y: int) -> int:
        B = self.base
        return self.from_vector([B.add(u, v) for u, v in zip(self.to_vector(x), self.to_vector(y))])

    def _neg_digits(self, x: int) -> int:
        B = self.base
        return self.from_vector([B.neg(u) for u in self.to_vector(x)])

    def _slow_mul(self, x: int, y: int) -> int:
        B, m = self.base, self.m
        vx, vy = self.to_vector(x), self.to_vector(y)
        prod = [0] * (2 * m - 1)
        for i, u in enumerate(vx):
            if u:
                for j, v in enumerate(vy):
                    if v:
                        prod[i + j] = B.add(prod[i + j], B.mul(u, v))
        f = self.defining_poly
        for deg in range(2 * m - 2, m - 1, -1):
            c = prod[deg]
            if c:
                for i in range(m):
                    prod[deg - m + i] = B.sub(prod[deg - m + i], B.mul(c, f[i]))
                prod[deg] = 0
        return self.from_vector(prod[:m])

    def random(self, rng: SplitMix64) -> int:
        return self.from_vector([self.base.random(rng) for _ in range(self.m)])

    # Frobenius x -> x^q
    @cached_property
    def frobenius_matrix(self) -> list[list[int]]:
        """m x m matrix over F_q of the F_q-linear map x -> x^q (columns = images of X^i)."""
        cols = [self.to_vector(self.pow(self.from_vector(_unit(self.m, i)), self.q)) for i in range(self.m)]
        return [[cols[c][r] for c in range(self.m)] for r in range(self.m)]

    def frobenius(self, x: int, j: int = 1) -> int:
        """``x ** (q ** j)``."""
        j %= self.m
        if j == 0 or x < self.q:
            return x
        t = self._tables
        if t is not None:
            exp, log = t
            n = self.order - 1
            return exp[(log[x] * pow(self.q, j, n)) % n]
        for _ in range(j):
            x = self.pow(x, self.q)
        return x

    # serialization
    def format(self, x: int) -> str:
        return ":".join(self.base.format(c) for c in self.to_vector(x))

    def parse(self, s: str) -> int:
        parts = s.strip().split(":")
        if len(parts) != self.m:
            raise FormatError(f"expected {self.m} ':'-separated blocks, got {s!r}")
        return self.from_vector([self.base.parse(part) for part in parts])

    def format_poly(self) -> str:
        return ":".join(self.base.format(c) for c in self.defining_poly)


def _unit(n: int, i: int) -> list[int]:
    v = [0] * n
    v[i] = 1
    return v


# ---------------------------------------------------------------------------
# construction


def prime_field(p: int) -> FieldSpec:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return FieldSpec(p, 1, (0, 1))


def field_make(p: int, a: int, defining_poly: Sequence[int] | None = None) -> FieldSpec:
    """Validated GF(p^a); ``defining_poly`` is low-to-high over GF(p)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if a < 1:
        raise ValueError("extension degree must be positive")
    gfp = prime_field(p)
    if defining_poly is None:
        return FieldSpec(p, a, tuple(default_poly(gfp, a)))
    f = [c % p for c in defining_poly]
    if len(f) != a + 1:
        raise NotIrreducible(f"defining polynomial must have degree {a}")
    if f[-1] != 1:
        raise NotMonic("defining polynomial must be monic")
    if not is_irreducible(gfp, f):
        raise NotIrreducible(f"{f} is reducible over GF({p})")
    return FieldSpec(p, a, tuple(f))


def tower_make(base: FieldSpec, m: int, defining_poly: Sequence[int] | None = None) -> TowerSpec:
    """Validated F_{q^m} over ``base``; ``defining_poly`` is low-to-high over F_q."""
    if m < 1:
        raise ValueError("extension degree must be positive")
    if defining_poly is None:
        return TowerSpec(base, m, tuple(default_poly(base, m)))
    f = list(defining_poly)
    if len(f) != m + 1:
        raise NotIrreducible(f"defining polynomial must have degree {m}")
    if f[-1] != 1:
        raise NotMonic("defining polynomial must be monic")
    if any(not 0 <= c < base.order for c in f):
        raise FieldMismatch("coefficient outside the base field")
    if not is_irreducible(base, f):
        raise NotIrreducible(f"{f} is reducible over {base!r}")
    return TowerSpec(base, m, tuple(f))


_DEFAULT_CACHE: dict[tuple, tuple[int, ...]] = {}


def default_poly(F: _Field, n: int) -> list[int]:
    """First monic irreducible of degree ``n`` over ``F``.

    Candidates are ``X^n + c(X)`` with the lower coefficients ``c`` packed
    base-|F| and scanned in increasing order; degree one gives ``X``.
    """
    key = (repr(F), getattr(F, "defining_poly", None), n)
    if key in _DEFAULT_CACHE:
        return list(_DEFAULT_CACHE[key])
    if n == 1:
        f = [0, 1]
    else:
        Q = F.order
        for packed in range(Q**n):
            low = []
            x = packed
            for _ in range(n):
                x, c = divmod(x, Q)
                low.append(c)
            if low[0] == 0:
                continue
            f = low + [1]
            if is_irreducible(F, f):
                break
        else:  # pragma: no cover - every degree has irreducibles
            raise NotIrreducible(f"no irreducible polynomial of degree {n}")
    _DEFAULT_CACHE[key] = tuple(f)
    return list(f)


def is_irreducible(F: _Field, f: Sequence[int]) -> bool:
    """Rabin-style test: gcd(f, X^{Q^i} - X) = 1 for all i <= deg/2."""
    f = poly_trim(list(f))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    Q = F.order
    x = [0, 1]
    h = x
    for _ in range(1, n // 2 + 1):
        h = poly_powmod(F, h, Q, f)
        g = poly_gcd(F, f, poly_sub(F, h, x))
        if len(g) > 1:
            return False
    return True


def find_tower(base: FieldSpec, degree: int, polys: dict[int, Sequence[int]] | None = None) -> TowerSpec:
    """Extension of ``base`` of the given degree, from ``polys`` or the default table."""
    if polys and degree in polys:
        return tower_make(base, degree, polys[degree])
    return tower_make(base, degree)


# ---------------------------------------------------------------------------
# polynomials


def poly_trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_deg(f: Sequence[int]) -> int:
    return len(f) - 1


def poly_add(F: _Field, f: Sequence[int], g: Sequence[int]) -> list[int]:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return poly_trim(out)


def poly_sub(F: _Field, f: Sequence[int], g: Sequence[int]) -> list[int]:
    return poly_add(F, f, [F.neg(c) for c in g])


def poly_scale(F: _Field, f: Sequence[int], c: int) -> list[int]:
    if c == 0:
        return []
    return poly_trim([F.mul(c, a) for a in f])


def poly_mul(F: _Field, f: Sequence[int], g: Sequence[int]) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
    return poly_trim(out)


def poly_eval(F: _Field, f: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_divmod(F: _Field, f: Sequence[int], g: Sequence[int]) -> tuple[list[int], list[int]]:
    g = poly_trim(list(g))
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    poly_trim(r)
    dg = len(g) - 1
    lead_inv = F.inv(g[-1])
    if len(r) - 1 < dg:
        return [], r
    quo = [0] * (len(r) - dg)
    while len(r) - 1 >= dg and r:
        shift = len(r) - 1 - dg
        c = F.mul(r[-1], lead_inv)
        quo[shift] = c
        for i, b in enumerate(g):
            r[shift + i] = F.sub(r[shift + i], F.mul(c, b))
        poly_trim(r)
    return poly_trim(quo), r


def poly_mod(F: _Field, f: Sequence[int], g: Sequence[int]) -> list[int]:
    return poly_divmod(F, f, g)[1]


def poly_mulmod(F: _Field, f: Sequence[int], g: Sequence[int], mod: Sequence[int]) -> list[int]:
    return poly_mod(F, poly_mul(F, f, g), mod)


def poly_powmod(F: _Field, f: Sequence[int], e: int, mod: Sequence[int]) -> list[int]:
    result = [1]
    base = poly_mod(F, f, mod)
    while e:
        if e & 1:
            result = poly_mulmod(F, result, base, mod)
        base = poly_mulmod(F, base, base, mod)
        e >>= 1
    return result


def poly_gcd(F: _Field, f: Sequence[int], g: Sequence[int]) -> list[int]:
    a, b = poly_trim(list(f)), poly_trim(list(g))
    while b:
        a, b = b, poly_mod(F, a, b)
    if a:
        a = poly_scale(F, a, F.inv(a[-1]))
    return a


def poly_frobenius(T: TowerSpec, f: Sequence[int], j: int = 1) -> list[int]:
    """Coefficient-wise ``q**j``-th power, written f^{sigma^j}."""
    return poly_trim([T.frobenius(c, j) for c in f])


def poly_valuation(f: Sequence[int]) -> int | None:
    """Largest power of X dividing ``f`` (None for the zero polynomial)."""
    for i, c in enumerate(f):
        if c:
            return i
    return None


# ---------------------------------------------------------------------------
# linearized polynomials


@dataclass(frozen=True)
class LinearizedPoly:
    """``X -> sum_i coeffs[i] * X^(q^i)`` over a :class:`TowerSpec`."""

    field: TowerSpec
    coeffs: tuple[int, ...]

    @property
    def q_degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    def __call__(self, x: int) -> int:
        return linearized_eval(self, x)

    def matrix(self) -> list[list[int]]:
        """Matrix over F_q acting on coordinate vectors (columns = images of the power basis)."""
        T = self.field
        cols = [T.to_vector(self(T.from_vector(_unit(T.m, i)))) for i in range(T.m)]
        return [[cols[c][r] for c in range(T.m)] for r in range(T.m)]


def frobenius(T: TowerSpec, x: int, j: int = 1) -> int:
    return T.frobenius(x, j)


def linearized_eval(B: LinearizedPoly, x: int) -> int:
    T = B.field
    acc = 0
    y = x
    for i, a in enumerate(B.coeffs):
        if i:
            y = T.frobenius(y, 1)
        if a:
            acc = T.add(acc, T.mul(a, y))
    return acc


def linearized_kernel(B: LinearizedPoly) -> list[int]:
    """F_q-basis of ``ker B`` inside F_{q^m}, via the coordinate matrix."""
    from .linalg import nullspace

    if B.q_degree < 0:
        raise ZeroMap("linearized polynomial is identically zero")
    T = B.field
    return [T.from_vector(v) for v in nullspace(T.base, B.matrix())]


def iter_vectors(F: _Field, n: int) -> Iterator[tuple[int, ...]]:
    """All of F^n, first coordinate varying slowest."""
    from itertools import product

    return product(range(F.order), repeat=n)


def format_vector(F: _Field, v: Iterable[int], sep: str = " ") -> str:
    return sep.join(F.format(x) for x in v)
