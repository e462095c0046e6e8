"""Generator-level constructors for every subgroup family of PGL_2(F_q).

Explicit matrices are used whenever the entries they need (sqrt(-1), roots
of unity, traces of roots of unity) are rational over F_q; otherwise the
missing generator is found by a deterministic scan of the group in
canonical order. Existence in those cases is guaranteed, so a failed scan
is an internal error.
"""

from __future__ import annotations

import numpy as np

from .addsub import AdditiveSubgroup, EmptyFamilyError, span
from .gf import FieldSpec, make_field, subfield_embedding
from .groups import Subgroup, closure, embed_subgroup, pgl_order, psl_order
from .pgl2 import PGL2, ProjMatrix, pgl2

FAMILIES = ("trivial", "cyclic", "dihedral", "semi_elementary", "borel", "tetrahedral", "octahedral", "icosahedral", "psl", "pgl")


class SearchFailure(AssertionError):
    pass


def _group(field: FieldSpec) -> PGL2:
    return pgl2(field)


def _scan(G: PGL2, mask: np.ndarray, what: str) -> ProjMatrix:
    hits = np.nonzero(mask)[0]
    if hits.size == 0:
        raise SearchFailure(f"no {what} found in {G!r}")
    return G.decode(G.all_codes[hits[0]])


def trivial(field: FieldSpec) -> Subgroup:
    return closure(field, [])


# -- cyclic and dihedral ---------------------------------------------------------


def trace_of_root(field: FieldSpec, n: int) -> int:
    """eps + eps^-1 for the primitive n-th root eps of F_{q^2}, as an element of F_q."""
    big = make_field(field.p, 2 * field.r)
    emb = subfield_embedding(field, big)
    eps = big.root_of_unity(n)
    return emb.preimage(big.add(eps, big.inv(eps)))


def cyclic_generator(field: FieldSpec, n: int, form: str | None = None) -> ProjMatrix:
    """Generator of the cyclic subgroup of order n.

    ``form`` is "split" (diagonal), "nonsplit" (trace form) or "unipotent";
    by default the first one that applies in that order.
    """
    G, F, q = _group(field), field, field.q
    if n < 1:
        raise ValueError(f"cyclic order must be positive, got {n}")
    if form is None:
        if (q - 1) % n == 0:
            form = "split"
        elif (q + 1) % n == 0:
            form = "nonsplit"
        elif n == F.p:
            form = "unipotent"
        else:
            raise EmptyFamilyError(f"no cyclic subgroup of order {n} in PGL2(F_{q})")
    if form == "split":
        if (q - 1) % n:
            raise EmptyFamilyError(f"no split cyclic subgroup of order {n}: {n} does not divide {q - 1}")
        return G.diag(F.root_of_unity(n))
    if form == "nonsplit":
        if (q + 1) % n and (q - 1) % n:
            raise EmptyFamilyError(f"no cyclic subgroup of order {n} in PGL2(F_{q})")
        if n < 3:
            # det = lambda + 2 vanishes for n <= 2
            raise EmptyFamilyError(f"trace form degenerates for order {n}")
        lam = trace_of_root(field, n)
        return G.canonicalize((F.add(lam, 1), F.neg(1), 1, 1))
    if form == "unipotent":
        if n != F.p:
            raise EmptyFamilyError(f"unipotent elements have order {F.p}, not {n}")
        return G.canonicalize((1, 1, 0, 1))
    raise ValueError(f"unknown cyclic form {form!r}")


def cyclic(field: FieldSpec, n: int, form: str | None = None) -> Subgroup:
    if n == 1:
        return trivial(field)
    return closure(field, [cyclic_generator(field, n, form)])


def dihedral(field: FieldSpec, n: int, tau: int | None = None, form: str | None = None) -> Subgroup:
    """Dihedral group of order 2n; ``tau`` picks the involution antidiag(tau, 1)
    in the split case."""
    G, F = _group(field), field
    tau = 1 if tau is None else F.check(tau)
    if tau == 0:
        raise ValueError("tau must be nonzero")
    if n % F.p == 0:
        raise EmptyFamilyError(f"p divides {n}: this group is semi-elementary")
    if n == 1:
        return closure(field, [G.antidiag(tau)])
    s = cyclic_generator(field, n, form)
    if s.c == 0:  # diagonal
        return closure(field, [s, G.antidiag(tau)])
    return closure(field, [s, G.antidiag(1)])


# -- semi-elementary ---------------------------------------------------------------


def semi_elementary(field: FieldSpec, gamma: AdditiveSubgroup, n: int) -> Subgroup:
    G, F = _group(field), field
    if gamma.rank == 0:
        raise ValueError("gamma must be nonzero")
    if n < 1 or n % F.p == 0 or (F.q - 1) % n:
        raise EmptyFamilyError(f"mu_{n} is not a rational torus prime to p over GF({F})")
    zeta = F.root_of_unity(n)
    if any(F.mul(zeta, b) not in gamma for b in gamma.basis):
        raise EmptyFamilyError(f"semidirect product not closed: mu_{n} does not stabilize gamma")
    gens = [G.canonicalize((1, b, 0, 1)) for b in gamma.basis]
    if n > 1:
        gens.append(G.diag(zeta))
    return closure(field, gens)


def subfield_subgroup(field: FieldSpec, s: int) -> AdditiveSubgroup:
    if field.r % s:
        raise EmptyFamilyError(f"F_{field.p}^{s} is not a subfield of GF({field})")
    return span(field, field.subfield(s))


def borel(field: FieldSpec, s: int) -> Subgroup:
    """Image of the Borel subgroup of PGL_2(F_{p^s})."""
    return semi_elementary(field, subfield_subgroup(field, s), field.p**s - 1)


# -- tetrahedral, octahedral, icosahedral --------------------------------------------


def sqrt_minus_one(field: FieldSpec) -> int | None:
    return field.sqrt(field.neg(1))


def sum_of_two_squares(field: FieldSpec, target: int) -> tuple[int, int]:
    """Least (x, y) with x^2 + y^2 = target."""
    F = field
    squares = {}
    for y in range(F.q):
        squares.setdefault(F.mul(y, y), y)
    for x in range(F.q):
        y = squares.get(F.sub(target, F.mul(x, x)))
        if y is not None:
            return x, y
    raise SearchFailure(f"{target} is not a sum of two squares in GF({F})")  # pragma: no cover


def klein_normal(field: FieldSpec, route: str = "explicit") -> Subgroup:
    """Klein four-group inside PSL_2 normalized by the tetrahedral completions.

    With sqrt(-1) rational the diagonal form is used; otherwise both
    involutions have determinant 1, the second built from x^2 + y^2 = -1.
    """
    G, F = _group(field), field
    if F.p == 2:
        return semi_elementary(field, subfield_subgroup(field, 2), 1)
    if route == "explicit" and sqrt_minus_one(field) is not None:
        return closure(field, [G.diag(F.neg(1)), G.antidiag(1)])
    x, y = sum_of_two_squares(field, F.neg(1))
    return closure(field, [G.canonicalize((0, F.neg(1), 1, 0)), G.canonicalize((x, y, y, F.neg(x)))])


def _normalizing_elements(G: PGL2, H: Subgroup) -> np.ndarray:
    return G.conjugation_mask(G.all_codes, H.generator_codes, H.codes)


def tetrahedral(field: FieldSpec, route: str = "explicit") -> Subgroup:
    G, F = _group(field), field
    if F.p == 2 and F.r % 2:
        raise EmptyFamilyError(f"no tetrahedral subgroup over GF({F})")
    if route == "explicit":
        if F.p == 2:
            return borel(field, 2)
        i = sqrt_minus_one(field)
        if i is not None:
            c = G.canonicalize((1, i, 1, F.neg(i)))
            return closure(field, list(klein_normal(field).generators) + [c])
    elif route != "search":
        raise ValueError(f"unknown route {route!r}")
    N = klein_normal(field, route)
    orders = G.orders_of_codes(G.all_codes)
    c = _scan(G, _normalizing_elements(G, N) & (orders == 3), "order-3 element normalizing the Klein group")
    return closure(field, list(N.generators) + [c])


def octahedral(field: FieldSpec, route: str = "explicit") -> Subgroup:
    G, F = _group(field), field
    if F.p == 2:
        raise EmptyFamilyError(f"no octahedral subgroup over GF({F}): no elements of order 4")
    T = tetrahedral(field, route)
    if route == "explicit":
        i = sqrt_minus_one(field)
        if i is not None:
            return closure(field, list(T.generators) + [G.diag(i)])
    N = klein_normal(field, route)
    orders = G.orders_of_codes(G.all_codes)
    squares = G.mul_codes(G.all_codes, G.all_codes)
    in_n = np.isin(squares, N.codes)
    t = _scan(G, _normalizing_elements(G, T) & (orders == 4) & in_n, "order-4 element normalizing the tetrahedral group")
    return closure(field, list(T.generators) + [t])


def icosahedral_admissible(field: FieldSpec) -> bool:
    p, r = field.p, field.r
    return p == 5 or p % 5 in (1, 4) or (p % 5 in (2, 3) and r % 2 == 0)


def icosahedral_generators(field: FieldSpec, route: str = "explicit") -> tuple[ProjMatrix, ProjMatrix]:
    """(s, t) with s^5 = t^2 = (st)^3 = 1 generating a copy of A_5."""
    G, F, q = _group(field), field, field.q
    if not icosahedral_admissible(field):
        raise EmptyFamilyError(f"no icosahedral subgroup over GF({F})")
    if route == "explicit":
        if F.p == 5:
            return G.canonicalize((1, 1, 0, 1)), G.canonicalize((0, F.neg(1), 1, 0))
        if (q - 1) % 5 == 0:
            z = F.root_of_unity(5)
            entry = F.sub(F.sub(1, z), F.inv(z))
            return G.diag(z), G.canonicalize((1, entry, 1, F.neg(1)))
    elif route != "search":
        raise ValueError(f"unknown route {route!r}")
    s = cyclic_generator(field, 5)
    codes = G.all_codes
    orders = G.orders_of_codes(codes)
    sc = G.code(s)
    st_orders = G.orders_of_codes(G.mul_codes(np.full(codes.size, sc), codes))
    t = _scan(G, (orders == 2) & (st_orders == 3), "involution t with st of order 3")
    return s, t


def icosahedral(field: FieldSpec, route: str = "explicit") -> Subgroup:
    return closure(field, list(icosahedral_generators(field, route)))


# -- subfield groups ------------------------------------------------------------------


def _subfield_gens(field: FieldSpec, s: int, projective: bool):
    if field.r % s:
        raise EmptyFamilyError(f"{s} does not divide {field.r}")
    G, F = _group(field), field
    small = make_field(F.p, s)
    emb = subfield_embedding(small, F)
    gens = [G.canonicalize((1, emb(small.p**i), 0, 1)) for i in range(s)]
    if projective:
        gens.append(G.diag(emb(small.primitive_element)))
        gens.append(G.antidiag(1))
    else:
        gens.append(G.canonicalize((0, F.neg(1), 1, 0)))
    return gens


def pgl2_subfield(field: FieldSpec, s: int) -> Subgroup:
    H = closure(field, _subfield_gens(field, s, True))
    assert H.order == pgl_order(field.p, s)
    return H


def psl2_subfield(field: FieldSpec, s: int) -> Subgroup:
    H = closure(field, _subfield_gens(field, s, field.p == 2))
    assert H.order == psl_order(field.p, s)
    return H


# -- transport between models of the same field --------------------------------------------


def transport(H: Subgroup, target: FieldSpec) -> Subgroup:
    """Image of H in another model of the same field (or an extension)."""
    return embed_subgroup(H, target)


def build(field: FieldSpec, family: str, n: int | None = None, gamma: AdditiveSubgroup | None = None,
          tau: int | None = None, s: int | None = None, route: str = "explicit") -> Subgroup:
    """Dispatch by family name (the CLI entry point)."""
    family = family.lower().replace("-", "_")

    def need(value, name):
        if value is None:
            raise ValueError(f"family {family} needs --{name}")
        return value

    if family == "trivial":
        return trivial(field)
    if family == "cyclic":
        return cyclic(field, need(n, "n"))
    if family == "dihedral":
        return dihedral(field, need(n, "n"), tau)
    if family == "semi_elementary":
        return semi_elementary(field, need(gamma, "gamma"), 1 if n is None else n)
    if family == "borel":
        return borel(field, need(s, "s"))
    if family == "tetrahedral":
        return tetrahedral(field, route)
    if family == "octahedral":
        return octahedral(field, route)
    if family == "icosahedral":
        return icosahedral(field, route)
    if family == "psl":
        return psl2_subfield(field, need(s, "s"))
    if family == "pgl":
        return pgl2_subfield(field, need(s, "s"))
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


__all__ = [
    "FAMILIES", "SearchFailure", "borel", "build", "cyclic", "cyclic_generator", "dihedral",
    "icosahedral", "icosahedral_admissible", "icosahedral_generators", "klein_normal", "octahedral",
    "pgl2_subfield", "psl2_subfield", "semi_elementary", "sqrt_minus_one",
    "subfield_subgroup", "tetrahedral", "trace_of_root", "transport", "trivial",
]
