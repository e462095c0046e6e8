"""Finite fields GF(p^r) with integer-encoded elements.

An element is the integer ``sum(c[i] * p**i)`` of its coefficient vector
``c`` against the power basis ``1, x, ..., x^(r-1)`` modulo the field's
modulus. The modulus is the lexicographically smallest monic irreducible of
degree ``r`` (coefficients compared constant term first); for ``r == 1`` it
is ``x`` so prime-field elements are bare residues.

Arithmetic runs on log/exp/Zech tables built lazily from the primitive
element. A slow polynomial path (``FieldSpec.poly_mul``) is kept as an
independent reference.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from ._accel import kernels

FIELD_CAP = 2**20
TABLE_CAP = 2**10


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def multiplicative_order_mod(a: int, n: int) -> int:
    """Order of ``a`` in (Z/nZ)^x; 1 for n == 1."""
    if n == 1:
        return 1
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
        if k > n:
            raise ValueError(f"{a} is not a unit mod {n}")
    return k


# -- polynomials over F_p as coefficient lists, constant term first ---------


def _poly_rem(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    for deg in range(len(a) - 1, dm - 1, -1):
        c = a[deg] * inv_lead % p
        if c:
            for i in range(dm + 1):
                a[deg - dm + i] = (a[deg - dm + i] - c * m[i]) % p
    return a[:dm] if dm else []


def _poly_mulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    prod = [c % p for c in prod]
    rem = _poly_rem(prod, m, p)
    return rem + [0] * (len(m) - 1 - len(rem))


def _is_irreducible(m: list[int], p: int) -> bool:
    r = len(m) - 1
    if r == 1:
        return True
    # degree-1 factors: root search
    for z in range(p):
        acc = 0
        for c in reversed(m):
            acc = (acc * z + c) % p
        if acc == 0:
            return False
    for d in range(2, r // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_rem(m, list(low) + [1], p)):
                return False
    return True


def _canonical_modulus(p: int, r: int) -> tuple[int, ...]:
    if r == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=r):
        m = list(low) + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class _LogTables:
    exp: list[int]
    log: list[int]
    zech: list[int]


@dataclass(frozen=True)
class FieldSpec:
    p: int
    r: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.r

    def __str__(self) -> str:
        return f"{self.p}^{self.r}"

    # -- encoding ----------------------------------------------------------

    def coeffs(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.r):
            x, c = divmod(x, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        x = 0
        for c in reversed(list(coeffs)):
            x = x * self.p + c % self.p
        return x

    def check(self, x: int) -> int:
        if not 0 <= x < self.q:
            raise FieldError(f"{x} is not an element of GF({self})")
        return x

    def elements(self) -> range:
        return range(self.q)

    # -- reference arithmetic (polynomial path) ------------------------------

    def poly_mul(self, x: int, y: int) -> int:
        if self.r == 1:
            return x * y % self.p
        return self.from_coeffs(
            _poly_mulmod(list(self.coeffs(x)), list(self.coeffs(y)), list(self.modulus), self.p)
        )

    def poly_pow(self, x: int, n: int) -> int:
        result, base = 1, x
        while n:
            if n & 1:
                result = self.poly_mul(result, base)
            base = self.poly_mul(base, base)
            n >>= 1
        return result

    @cached_property
    def primitive_element(self) -> int:
        """Generator of the multiplicative group with the smallest encoding."""
        n = self.q - 1
        cofactors = [n // f for f in prime_factors(n)]
        for x in range(1, self.q):
            if all(self.poly_pow(x, c) != 1 for c in cofactors):
                return x
        raise AssertionError("multiplicative group is not cyclic")  # pragma: no cover

    # -- table arithmetic ----------------------------------------------------

    @cached_property
    def _tables(self) -> _LogTables:
        q, p = self.q, self.p
        gen = np.array(self.coeffs(self.primitive_element), dtype=np.int64)
        mod = np.array(self.modulus, dtype=np.int64)
        exp = [int(v) for v in kernels.exp_table(p, self.r, mod, gen, q)]
        log = [-1] * q
        for k, v in enumerate(exp):
            log[v] = k
        zech = []
        for v in exp:
            w = v - v % p + (v % p + 1) % p
            zech.append(log[w])
        return _LogTables(exp, log, zech)

    def add(self, x: int, y: int) -> int:
        if x == 0:
            return y
        if y == 0:
            return x
        t = self._tables
        n = self.q - 1
        lx = t.log[x]
        z = t.zech[(t.log[y] - lx) % n]
        return 0 if z < 0 else t.exp[(lx + z) % n]

    def neg(self, x: int) -> int:
        if x == 0 or self.p == 2:
            return x
        t = self._tables
        n = self.q - 1
        return t.exp[(t.log[x] + n // 2) % n]

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        t = self._tables
        return t.exp[(t.log[x] + t.log[y]) % (self.q - 1)]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError(f"inverse of zero in GF({self})")
        t = self._tables
        return t.exp[(-t.log[x]) % (self.q - 1)]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, n: int) -> int:
        if x == 0:
            if n < 0:
                raise ZeroDivisionError(f"inverse of zero in GF({self})")
            return 1 if n == 0 else 0
        t = self._tables
        return t.exp[(t.log[x] * n) % (self.q - 1)]

    def frobenius(self, x: int) -> int:
        return self.pow(x, self.p)

    def log(self, x: int) -> int:
        """Discrete log to the base of ``primitive_element``."""
        if x == 0:
            raise FieldError("log of zero")
        return self._tables.log[x]

    def exp(self, k: int) -> int:
        return self._tables.exp[k % (self.q - 1)]

    def element_order(self, x: int) -> int:
        n = self.q - 1
        k = self.log(x)
        from math import gcd

        return n // gcd(n, k)

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> F_p -> F_q."""
        return n % self.p

    def is_square(self, x: int) -> bool:
        if x == 0:
            raise FieldError("is_square is undefined at zero")
        if self.p == 2:
            return True
        return self.log(x) % 2 == 0

    def sqrt(self, x: int) -> int | None:
        """Smallest-encoding square root, or None."""
        if x == 0:
            return 0
        roots = [y for y in self.roots([self.neg(x), 0, 1])]
        return roots[0] if roots else None

    def roots_of_unity(self, n: int) -> list[int]:
        """mu_n(F_q) in increasing encoding."""
        if n < 1 or (self.q - 1) % n:
            raise FieldError(f"mu_{n} is not rational over GF({self}): {n} does not divide {self.q - 1}")
        step = (self.q - 1) // n
        return sorted(self.exp(k * step) for k in range(n))

    def root_of_unity(self, n: int) -> int:
        """The primitive n-th root g^((q-1)/n) of the primitive element g."""
        if n < 1 or (self.q - 1) % n:
            raise FieldError(f"mu_{n} is not rational over GF({self}): {n} does not divide {self.q - 1}")
        return self.exp((self.q - 1) // n)

    def subfield(self, s: int) -> list[int]:
        """The unique subfield of order p^s, as sorted encodings."""
        if self.r % s:
            raise FieldError(f"GF({self.p}^{s}) is not a subfield of GF({self})")
        return sorted([0] + self.roots_of_unity(self.p**s - 1))

    # -- vectorized helpers ----------------------------------------------------

    @cached_property
    def _np_tables(self):
        t = self._tables
        return (
            np.array(t.exp, dtype=np.int64),
            np.array(t.log, dtype=np.int64),
            np.array(t.zech, dtype=np.int64),
        )

    def vmul(self, x, y):
        exp, log, _ = self._np_tables
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        zero = (x == 0) | (y == 0)
        s = (log[np.where(zero, 1, x)] + log[np.where(zero, 1, y)]) % (self.q - 1)
        return np.where(zero, 0, exp[s])

    def vadd(self, x, y):
        exp, log, zech = self._np_tables
        x, y = np.broadcast_arrays(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
        n = self.q - 1
        safe_x = np.where(x == 0, 1, x)
        safe_y = np.where(y == 0, 1, y)
        lx = log[safe_x]
        z = zech[(log[safe_y] - lx) % n]
        s = np.where(z < 0, 0, exp[(lx + np.maximum(z, 0)) % n])
        return np.where(x == 0, y, np.where(y == 0, x, s))

    def roots(self, coeffs) -> list[int]:
        """All roots in F_q of the polynomial with field-element coefficients
        ``coeffs`` (constant term first), by exhaustive evaluation."""
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            raise FieldError("zero polynomial")
        xs = np.arange(self.q, dtype=np.int64)
        acc = np.full(self.q, coeffs[-1], dtype=np.int64)
        for c in reversed(coeffs[:-1]):
            acc = self.vadd(self.vmul(acc, xs), c)
        return [int(v) for v in np.nonzero(acc == 0)[0]]

    @cached_property
    def dense(self) -> "DenseTables":
        """Full operation tables for the compiled kernels."""
        if self.q > TABLE_CAP:
            raise FieldError(f"dense tables need q <= {TABLE_CAP}, got {self.q}")
        xs = np.arange(self.q, dtype=np.int64)
        add = self.vadd(xs[:, None], xs[None, :])
        mul = self.vmul(xs[:, None], xs[None, :])
        neg = np.array([self.neg(int(x)) for x in xs], dtype=np.int64)
        inv = np.zeros(self.q, dtype=np.int64)
        for x in range(1, self.q):
            inv[x] = self.inv(x)
        return DenseTables(self.q, np.ascontiguousarray(add), np.ascontiguousarray(mul), neg, inv)


@dataclass(frozen=True, eq=False)
class DenseTables:
    q: int
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray


@lru_cache(maxsize=None)
def make_field(p: int, r: int = 1, modulus: tuple[int, ...] | None = None) -> FieldSpec:
    """GF(p^r) with the canonical modulus, or with an explicit monic
    irreducible ``modulus`` (constant term first) for alternative models."""
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"characteristic must be prime, got {p}")
    if not isinstance(r, int) or r < 1:
        raise FieldError(f"degree must be a positive integer, got {r}")
    if p**r > FIELD_CAP:
        raise FieldError(f"GF({p}^{r}) exceeds the field cap {FIELD_CAP}")
    if modulus is None:
        modulus = _canonical_modulus(p, r)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != r + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {r}")
        if not _is_irreducible(list(modulus), p):
            raise FieldError(f"modulus {list(modulus)} is reducible over F_{p}")
        if r == 1 and modulus != (0, 1):
            raise FieldError("degree-1 modulus must be x")
    return FieldSpec(p, r, tuple(modulus))


def parse_field(text: str) -> FieldSpec:
    """Parse ``"p^r"`` (or a bare prime ``"p"``)."""
    text = text.strip()
    try:
        if "^" in text:
            p, r = text.split("^")
            return make_field(int(p), int(r))
        return make_field(int(text), 1)
    except ValueError as exc:
        if isinstance(exc, FieldError):
            raise
        raise FieldError(f"bad field {text!r}; expected p^r") from None


class SubfieldEmbedding:
    """Field embedding GF(p^s) -> GF(p^r), s | r.

    The root of the small modulus is sent to its smallest-encoding root in
    the big field.
    """

    def __init__(self, small: FieldSpec, big: FieldSpec):
        if small.p != big.p:
            raise FieldError(f"characteristics differ: {small.p} vs {big.p}")
        if big.r % small.r:
            raise FieldError(f"GF({small}) does not embed in GF({big}): {small.r} does not divide {big.r}")
        self.small = small
        self.big = big
        if small.r == 1:
            self.root = 0
            self.table = list(range(small.p))
        else:
            self.root = big.roots(list(small.modulus))[0]
            powers = [1]
            for _ in range(small.r - 1):
                powers.append(big.mul(powers[-1], self.root))
            table = []
            for x in range(small.q):
                acc = 0
                for c, w in zip(small.coeffs(x), powers):
                    if c:
                        acc = big.add(acc, big.mul(c, w))
                table.append(acc)
            self.table = table
        self._back = {y: x for x, y in enumerate(self.table)}

    def __call__(self, x: int) -> int:
        return self.table[x]

    def image(self) -> list[int]:
        return sorted(self.table)

    def preimage(self, y: int) -> int:
        try:
            return self._back[y]
        except KeyError:
            raise FieldError(f"{y} is not in the image of GF({self.small})") from None


@lru_cache(maxsize=None)
def subfield_embedding(small: FieldSpec, big: FieldSpec) -> SubfieldEmbedding:
    return SubfieldEmbedding(small, big)


def quadratic_extension(field: FieldSpec) -> tuple[FieldSpec, SubfieldEmbedding]:
    big = make_field(field.p, 2 * field.r)
    return big, subfield_embedding(field, big)
