"""Finite additive subgroups of GF(q) as F_p-subspaces.

A subspace is stored by its reduced echelon basis against the power basis
``1, x, ..., x^(r-1)``: each basis vector's pivot is its lowest nonzero
coordinate and equals 1, pivots strictly increase down the basis, and every
other vector vanishes at each pivot. Bases compare as tuples of integer
encodings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .gf import FieldError, FieldSpec, multiplicative_order_mod


class EmptyFamilyError(ValueError):
    pass


def _rref(vectors: list[list[int]], p: int) -> list[list[int]]:
    rows = [list(v) for v in vectors if any(v)]
    out: list[list[int]] = []
    width = len(rows[0]) if rows else 0
    for col in range(width):
        pivot = next((row for row in rows if row[col]), None)
        if pivot is None:
            continue
        rows.remove(pivot)
        s = pow(pivot[col], p - 2, p)
        pivot = [v * s % p for v in pivot]
        for row in rows + out:
            f = row[col]
            if f:
                for i in range(width):
                    row[i] = (row[i] - f * pivot[i]) % p
        rows = [row for row in rows if any(row)]
        out.append(pivot)
    # pivot = lowest nonzero coordinate
    out.sort(key=lambda row: next(i for i, v in enumerate(row) if v))
    return out


@dataclass(frozen=True, order=True)
class AdditiveSubgroup:
    field: FieldSpec
    basis: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.field.p**self.rank

    def elements(self) -> list[int]:
        F = self.field
        out = []
        for combo in itertools.product(range(F.p), repeat=self.rank):
            acc = 0
            for c, b in zip(combo, self.basis):
                if c:
                    acc = F.add(acc, F.mul(F.from_int(c), b))
            out.append(acc)
        return sorted(out)

    def __contains__(self, x: int) -> bool:
        return span(self.field, list(self.basis) + [x]).rank == self.rank

    def scale(self, alpha: int) -> "AdditiveSubgroup":
        F = self.field
        if alpha == 0:
            raise FieldError("homothety by zero")
        return span(F, [F.mul(alpha, b) for b in self.basis])

    def __str__(self) -> str:
        return ",".join(str(b) for b in self.basis) or "0"


def span(field: FieldSpec, elements) -> AdditiveSubgroup:
    vecs = [list(field.coeffs(field.check(int(x)))) for x in elements]
    rows = _rref(vecs, field.p) if vecs else []
    return AdditiveSubgroup(field, tuple(field.from_coeffs(row) for row in rows))


def parse_gamma(field: FieldSpec, text: str) -> AdditiveSubgroup:
    try:
        items = [int(t) for t in text.replace("gamma=", "").split(",") if t.strip()]
    except ValueError:
        raise ValueError(f"bad additive subgroup {text!r}; expected e1,e2,...") from None
    return span(field, items)


def _require_nonzero(gamma: AdditiveSubgroup) -> None:
    if gamma.rank == 0:
        raise ValueError("the zero subgroup has no stabilizer field or homothety class")


def stabilizer_field(gamma: AdditiveSubgroup) -> int:
    """Degree l of the largest subfield F_{p^l} with F_{p^l} * gamma = gamma."""
    _require_nonzero(gamma)
    F = gamma.field
    for ell in sorted((d for d in range(1, F.r + 1) if F.r % d == 0), reverse=True):
        # F_{p^l} = F_p[g_l] for the generator g_l of its unit group
        g = F.exp((F.q - 1) // (F.p**ell - 1))
        if all(F.mul(g, b) in gamma for b in gamma.basis):
            return ell
    raise AssertionError("F_p always stabilizes")  # pragma: no cover


def homothety_orbit(gamma: AdditiveSubgroup) -> set[AdditiveSubgroup]:
    _require_nonzero(gamma)
    return {gamma.scale(alpha) for alpha in range(1, gamma.field.q)}


def homothety_canonical(gamma: AdditiveSubgroup) -> AdditiveSubgroup:
    """The least member of the homothety orbit of ``gamma``."""
    return min(homothety_orbit(gamma), key=lambda g: g.basis)


def enumerate_subspaces(field: FieldSpec, m: int):
    """All rank-m subspaces, one per echelon pattern and free-entry choice."""
    p, r = field.p, field.r
    for pivots in itertools.combinations(range(r), m):
        pivot_set = set(pivots)
        slots = [(i, j) for i, piv in enumerate(pivots) for j in range(piv + 1, r) if j not in pivot_set]
        for values in itertools.product(range(p), repeat=len(slots)):
            rows = [[0] * r for _ in pivots]
            for i, piv in enumerate(pivots):
                rows[i][piv] = 1
            for (i, j), v in zip(slots, values):
                rows[i][j] = v
            yield AdditiveSubgroup(field, tuple(field.from_coeffs(row) for row in rows))


def gaussian_binomial(p: int, r: int, m: int) -> int:
    if not 0 <= m <= r:
        return 0
    num = den = 1
    for i in range(m):
        num *= p ** (r - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def semi_elementary_degree(field: FieldSpec, m: int, n: int) -> int:
    """Degree e of F_p(mu_n); raises EmptyFamilyError unless the family with
    unipotent rank m and torus order n exists over ``field``."""
    p, r, q = field.p, field.r, field.q
    if n < 1 or m < 1 or n % p == 0 or (q - 1) % n:
        raise EmptyFamilyError(f"family empty for these parameters: m={m}, n={n} over GF({field})")
    e = multiplicative_order_mod(p, n)
    if m % e or m > r:
        raise EmptyFamilyError(f"family empty for these parameters: m={m}, n={n} over GF({field})")
    return e


def normalized_representative(gamma: AdditiveSubgroup) -> AdditiveSubgroup:
    """Least orbit member containing 1."""
    F = gamma.field
    return min((gamma.scale(F.inv(b)) for b in gamma.elements() if b), key=lambda g: g.basis)


@lru_cache(maxsize=None)
def semi_elementary_classes(field: FieldSpec, m: int, n: int) -> tuple[AdditiveSubgroup, ...]:
    """One representative per homothety class of rank-m F_{p^e}-submodules,
    each containing F_{p^e}, sorted by canonical form."""
    e = semi_elementary_degree(field, m, n)
    covered: set[AdditiveSubgroup] = set()
    reps: dict[tuple[int, ...], AdditiveSubgroup] = {}
    for gamma in enumerate_subspaces(field, m):
        if gamma in covered or stabilizer_field(gamma) % e:
            continue
        orbit = homothety_orbit(gamma)
        covered |= orbit
        reps[min(g.basis for g in orbit)] = normalized_representative(gamma)
    return tuple(reps[k] for k in sorted(reps))
