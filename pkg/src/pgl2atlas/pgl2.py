"""Projective 2x2 matrices over GF(p^r) and their action on the projective line."""

from __future__ import annotations

import json
import math
from functools import cached_property, lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from ._accel import kernels
from .gf import FieldError, FieldSpec, make_field, subfield_embedding

INF = math.inf

# dense q^4 bitmaps in the kernels stay below 17M entries
KERNEL_Q_CAP = 64


class SingularMatrixError(ValueError):
    pass


class ProjMatrix(NamedTuple):
    """Canonical representative: the first nonzero of (a, b, c, d) is 1.

    Tuple comparison gives the total order used for every tie-break.
    """

    a: int
    b: int
    c: int
    d: int

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __str__(self) -> str:
        return format_matrix(self)


def format_matrix(m: Sequence[int]) -> str:
    a, b, c, d = m
    return f"[[{a},{b}],[{c},{d}]]"


def parse_matrix(text: str) -> tuple[int, int, int, int]:
    try:
        rows = json.loads(text)
        (a, b), (c, d) = rows
        out = tuple(int(v) for v in (a, b, c, d))
    except (ValueError, TypeError) as exc:
        raise ValueError(f"bad matrix {text!r}; expected [[a,b],[c,d]]") from exc
    if any(isinstance(v, bool) for v in (a, b, c, d)):
        raise ValueError(f"bad matrix {text!r}")
    return out  # type: ignore[return-value]


def parse_point(text: str):
    text = text.strip().lower()
    if text in ("inf", "infinity", "oo"):
        return INF
    return int(text)


def format_point(z) -> str:
    return "inf" if z == INF else str(z)


class PGL2:
    """PGL_2 over a fixed finite field."""

    def __init__(self, field: FieldSpec):
        self.field = field
        self.q = field.q
        self.order_of_group = self.q**3 - self.q
        self.identity = ProjMatrix(1, 0, 0, 1)

    def __repr__(self) -> str:
        return f"PGL2(GF({self.field}))"

    # -- construction -----------------------------------------------------------

    def det(self, m: Sequence[int]) -> int:
        F = self.field
        a, b, c, d = m
        return F.sub(F.mul(a, d), F.mul(b, c))

    def trace(self, m: Sequence[int]) -> int:
        return self.field.add(m[0], m[3])

    def canonicalize(self, m: Sequence[int]) -> ProjMatrix:
        F = self.field
        if len(m) == 2:  # nested rows
            (a, b), (c, d) = m
            m = (a, b, c, d)
        a, b, c, d = (F.check(int(v)) for v in m)
        if self.det((a, b, c, d)) == 0:
            raise SingularMatrixError(f"singular matrix {format_matrix((a, b, c, d))} over GF({F})")
        lead = next(v for v in (a, b, c, d) if v)
        s = F.inv(lead)
        return ProjMatrix(F.mul(a, s), F.mul(b, s), F.mul(c, s), F.mul(d, s))

    def diag(self, x: int, y: int = 1) -> ProjMatrix:
        return self.canonicalize((x, 0, 0, y))

    def antidiag(self, x: int, y: int = 1) -> ProjMatrix:
        return self.canonicalize((0, x, y, 0))

    # -- group law ------------------------------------------------------------

    def _raw_mul(self, x, y):
        F = self.field
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        return (
            F.add(F.mul(a1, a2), F.mul(b1, c2)),
            F.add(F.mul(a1, b2), F.mul(b1, d2)),
            F.add(F.mul(c1, a2), F.mul(d1, c2)),
            F.add(F.mul(c1, b2), F.mul(d1, d2)),
        )

    def mul(self, x: Sequence[int], y: Sequence[int]) -> ProjMatrix:
        return self.canonicalize(self._raw_mul(x, y))

    def inverse(self, m: Sequence[int]) -> ProjMatrix:
        F = self.field
        a, b, c, d = m
        return self.canonicalize((d, F.neg(b), F.neg(c), a))

    def power(self, m: Sequence[int], n: int) -> ProjMatrix:
        if n < 0:
            m, n = self.inverse(m), -n
        result, base = self.identity, self.canonicalize(m)
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def conjugate(self, u: Sequence[int], m: Sequence[int]) -> ProjMatrix:
        """u m u^-1."""
        return self.mul(self.mul(u, m), self.inverse(u))

    def order(self, m: Sequence[int]) -> int:
        m = self.canonicalize(m)
        cur, n = m, 1
        # element orders are at most q + 1 (or p <= q)
        while cur != self.identity:
            cur = self.mul(cur, m)
            n += 1
            if n > self.q + 1:
                raise AssertionError(f"order of {m} exceeds q+1")
        return n

    # -- action on P^1 ----------------------------------------------------------

    def apply(self, m: Sequence[int], z):
        F = self.field
        a, b, c, d = m
        if z == INF:
            return INF if c == 0 else F.div(a, c)
        den = F.add(F.mul(c, z), d)
        if den == 0:
            return INF
        return F.div(F.add(F.mul(a, z), b), den)

    # -- invariants -------------------------------------------------------------

    def order_criterion(self, m: Sequence[int], target) -> bool:
        """Trace/determinant test for order 2, 3, 5 or p (``target="p"``)."""
        m = self.canonicalize(m)
        if m == self.identity:
            raise ValueError("order criterion is undefined at the identity")
        F = self.field
        t, dt = self.trace(m), self.det(m)
        t2 = F.mul(t, t)
        if target == "p" or target == F.p and target not in (2, 3, 5):
            return t2 == F.mul(F.from_int(4), dt)
        if target == 2:
            return t == 0
        if target == 3:
            return t2 == dt
        if target == 5:
            lhs = F.add(F.sub(F.mul(t2, t2), F.mul(F.from_int(3), F.mul(t2, dt))), F.mul(dt, dt))
            return lhs == 0
        raise ValueError(f"order criterion target must be 2, 3, 5 or 'p', got {target!r}")

    def det_class(self, m: Sequence[int]) -> str:
        if self.field.p == 2:
            return "square"
        return "square" if self.field.is_square(self.det(m)) else "nonsquare"

    @cached_property
    def quadratic_extension(self):
        big = make_field(self.field.p, 2 * self.field.r)
        return big, subfield_embedding(self.field, big)

    def fixed_points(self, m: Sequence[int]):
        """Fixed points over F_q and over F_{q^2}.

        Each list is in increasing encoding with ``INF`` last; points over the
        extension are encoded in ``make_field(p, 2r)``.
        """
        m = self.canonicalize(m)
        if m == self.identity:
            raise ValueError("the identity fixes every point")
        big, emb = self.quadratic_extension
        return self._solve_fixed(self.field, m), self._solve_fixed(big, tuple(emb(v) for v in m))

    @staticmethod
    def _solve_fixed(F: FieldSpec, m) -> list:
        # gamma z^2 + (delta - alpha) z - beta = 0, with INF fixed iff gamma = 0
        a, b, c, d = m
        lin = F.sub(d, a)
        if c == 0:
            pts = [] if lin == 0 else [F.div(b, lin)]
            return pts + [INF]
        return F.roots([F.neg(b), lin, c])

    # -- whole-group data --------------------------------------------------------

    def code(self, m: Sequence[int]) -> int:
        q = self.q
        a, b, c, d = m
        return ((a * q + b) * q + c) * q + d

    def decode(self, code: int) -> ProjMatrix:
        q = self.q
        code, d = divmod(int(code), q)
        code, c = divmod(code, q)
        a, b = divmod(code, q)
        return ProjMatrix(a, b, c, d)

    @property
    def identity_code(self) -> int:
        return self.q**3 + 1

    @cached_property
    def all_codes(self) -> np.ndarray:
        """Codes of every element, sorted (equivalently in canonical order)."""
        F, q = self.field, self.q
        xs = np.arange(q, dtype=np.int64)
        # top row (0, 1): det = -c, so c != 0
        c0, d0 = np.meshgrid(xs[1:], xs, indexing="ij")
        low = q * q + (c0 * q + d0).ravel()
        # top row (1, b): det = d - b c
        b1, c1, d1 = np.meshgrid(xs, xs, xs, indexing="ij")
        det = F.vadd(d1, F.vmul(F.vmul(b1, c1), F.neg(1)))
        keep = det != 0
        high = ((q + b1[keep]) * q + c1[keep]) * q + d1[keep]
        out = np.sort(np.concatenate([low.ravel(), high.ravel()]))
        assert out.size == self.order_of_group
        return out

    def elements(self) -> list[ProjMatrix]:
        return [self.decode(c) for c in self.all_codes]

    # -- kernel front-ends (vectorized over code arrays) ------------------------

    @property
    def _dense(self):
        if self.q > KERNEL_Q_CAP:
            raise FieldError(f"group-level kernels need q <= {KERNEL_Q_CAP}, got {self.q}")
        return self.field.dense

    def mul_codes(self, x, y) -> np.ndarray:
        t = self._dense
        x, y = np.broadcast_arrays(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
        return kernels.mat_mul(np.ascontiguousarray(x), np.ascontiguousarray(y), self.q, t.add, t.mul, t.inv)

    def inv_codes(self, x) -> np.ndarray:
        t = self._dense
        return kernels.mat_inv(np.asarray(x, dtype=np.int64), self.q, t.neg, t.mul, t.inv)

    def orders_of_codes(self, x) -> np.ndarray:
        t = self._dense
        return kernels.element_orders(np.asarray(x, dtype=np.int64), self.q + 1, self.q, t.add, t.mul, t.inv)

    def closure_codes(self, gens, cap: int | None = None) -> np.ndarray:
        t = self._dense
        cap = self.order_of_group if cap is None else cap
        gens = np.asarray(sorted(set(int(g) for g in gens)), dtype=np.int64)
        out = kernels.closure(gens, cap, self.q, t.add, t.mul, t.inv)
        if out.size == 0:
            raise OverflowError(f"closure exceeded cap {cap}")
        return out

    def conjugation_mask(self, us, gens, members) -> np.ndarray:
        """Mask of u in ``us`` with u g u^-1 in ``members`` for all g in ``gens``."""
        t = self._dense
        return kernels.conj_member(
            np.asarray(us, dtype=np.int64),
            np.asarray(gens, dtype=np.int64),
            np.asarray(members, dtype=np.int64),
            self.q,
            t.add,
            t.mul,
            t.neg,
            t.inv,
        )

    def det_classes_of_codes(self, x) -> np.ndarray:
        """Boolean array: True where the determinant is a square."""
        F = self.field
        x = np.asarray(x, dtype=np.int64)
        if F.p == 2:
            return np.ones(x.shape, dtype=bool)
        q = self.q
        a, b, c, d = x // q**3, (x // q**2) % q, (x // q) % q, x % q
        det = F.vadd(F.vmul(a, d), F.vmul(F.vmul(b, c), F.neg(1)))
        _, log, _ = F._np_tables
        return log[det] % 2 == 0


@lru_cache(maxsize=None)
def pgl2(field: FieldSpec) -> PGL2:
    return PGL2(field)
