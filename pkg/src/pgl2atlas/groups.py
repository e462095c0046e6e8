"""Finite subgroups of PGL_2(F_q): closure, Sylow subgroups, normalizers,
conjugacy with witnesses, and recognition of the isomorphism family."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .addsub import homothety_canonical, span
from .gf import FieldSpec, subfield_embedding
from .pgl2 import INF, PGL2, ProjMatrix, pgl2

A4_PROFILE = {1: 1, 2: 3, 3: 8}
S4_PROFILE = {1: 1, 2: 9, 3: 8, 4: 6}
A5_PROFILE = {1: 1, 2: 15, 3: 20, 5: 24}

# canonical-label precedence, strongest first
PRECEDENCE = ("PGL", "PSL", "Icosahedral", "Octahedral", "Tetrahedral", "SemiElementary", "Dihedral", "Cyclic", "Trivial")


class ClassificationError(AssertionError):
    """No family of the classification matches a subgroup."""


@dataclass(frozen=True, eq=False)
class Subgroup:
    group: PGL2
    generators: tuple[ProjMatrix, ...]
    codes: np.ndarray  # sorted element codes

    @property
    def field(self) -> FieldSpec:
        return self.group.field

    @property
    def order(self) -> int:
        return int(self.codes.size)

    def __len__(self) -> int:
        return self.order

    @cached_property
    def key(self) -> bytes:
        return self.codes.tobytes()

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.group is other.group and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @cached_property
    def elements(self) -> list[ProjMatrix]:
        return [self.group.decode(c) for c in self.codes]

    @cached_property
    def generator_codes(self) -> np.ndarray:
        return np.array([self.group.code(g) for g in self.generators], dtype=np.int64)

    def contains_code(self, code: int) -> bool:
        i = np.searchsorted(self.codes, code)
        return bool(i < self.codes.size and self.codes[i] == code)

    def __contains__(self, m) -> bool:
        return self.contains_code(self.group.code(self.group.canonicalize(m)))

    def issubset(self, other: "Subgroup") -> bool:
        return bool(np.isin(self.codes, other.codes, assume_unique=True).all())

    @cached_property
    def element_orders(self) -> np.ndarray:
        return self.group.orders_of_codes(self.codes)

    @cached_property
    def square_det_mask(self) -> np.ndarray:
        return self.group.det_classes_of_codes(self.codes)

    def __repr__(self) -> str:
        gens = ";".join(str(g) for g in self.generators)
        return f"Subgroup(GF({self.field}), order={self.order}, gens={gens})"


def _as_group(where) -> PGL2:
    return where if isinstance(where, PGL2) else pgl2(where)


def closure(where, generators: Iterable = (), cap: int | None = None) -> Subgroup:
    """Subgroup generated by ``generators`` (breadth-first product closure)."""
    G = _as_group(where)
    gens = tuple(G.canonicalize(g) for g in generators)
    codes = G.closure_codes([G.code(g) for g in gens], cap)
    return Subgroup(G, gens, codes)


def full_group(where) -> Subgroup:
    G = _as_group(where)
    return from_codes(G, G.all_codes)


def _greedy_generators(G: PGL2, codes: np.ndarray, orders: np.ndarray) -> tuple[ProjMatrix, ...]:
    # highest-order elements first keeps the list short
    ranked = sorted(zip((-orders).tolist(), codes.tolist()))
    gens: list[int] = []
    current = np.array([G.identity_code], dtype=np.int64)
    for _, c in ranked:
        if current.size == codes.size:
            break
        if np.searchsorted(current, c) < current.size and current[np.searchsorted(current, c)] == c:
            continue
        gens.append(c)
        current = G.closure_codes(gens, codes.size)
    return tuple(G.decode(c) for c in gens)


def from_codes(G: PGL2, codes, generators: Sequence | None = None) -> Subgroup:
    """Wrap a closed, sorted set of element codes as a Subgroup."""
    codes = np.unique(np.asarray(codes, dtype=np.int64))
    if generators is None:
        generators = _greedy_generators(G, codes, G.orders_of_codes(codes))
    return Subgroup(G, tuple(generators), codes)


def order_profile(H: Subgroup) -> dict[int, int]:
    counts = Counter(H.element_orders.tolist())
    return dict(sorted(counts.items()))


def det_profile(H: Subgroup) -> tuple[int, int]:
    """(number of square-det elements, number of nonsquare-det elements)."""
    sq = int(H.square_det_mask.sum())
    return sq, H.order - sq


def involution_det_profile(H: Subgroup) -> tuple[int, int]:
    inv = H.element_orders == 2
    sq = int((H.square_det_mask & inv).sum())
    return sq, int(inv.sum()) - sq


def is_abelian(H: Subgroup) -> bool:
    return bool(centralizer(H, H).order == H.order)


def conjugate_subgroup(H: Subgroup, u) -> Subgroup:
    """u H u^-1."""
    G = H.group
    uc = G.code(G.canonicalize(u))
    ui = G.inv_codes([uc])[0]
    codes = G.mul_codes(G.mul_codes(np.full(H.order, uc), H.codes), np.full(H.order, ui))
    gens = tuple(G.conjugate(u, g) for g in H.generators)
    return Subgroup(G, gens, np.sort(codes))


def embed_subgroup(H: Subgroup, target: FieldSpec) -> Subgroup:
    """Image of H under the field embedding of its base field into ``target``."""
    emb = subfield_embedding(H.field, target)
    return closure(target, [tuple(emb(v) for v in g) for g in H.generators])


def cyclic_codes(G: PGL2, code: int) -> np.ndarray:
    out = [G.identity_code]
    cur = int(code)
    while cur != G.identity_code:
        out.append(cur)
        cur = int(G.mul_codes([cur], [code])[0])
    return np.sort(np.array(out, dtype=np.int64))


# -- normalizers and centralizers ----------------------------------------------


def _check_inside(ambient: Subgroup, H: Subgroup) -> None:
    if ambient.group is not H.group or not H.issubset(ambient):
        raise ValueError("subgroup is not contained in the ambient group")


def normalizer(ambient: Subgroup, H: Subgroup) -> Subgroup:
    _check_inside(ambient, H)
    mask = ambient.group.conjugation_mask(ambient.codes, H.generator_codes, H.codes)
    return from_codes(ambient.group, ambient.codes[mask])


def centralizer(ambient: Subgroup, H: Subgroup) -> Subgroup:
    _check_inside(ambient, H)
    G = ambient.group
    mask = np.ones(ambient.order, dtype=bool)
    for g in H.generator_codes:
        idx = np.nonzero(mask)[0]
        mask[idx] = G.conjugation_mask(ambient.codes[idx], [g], [g])
    return from_codes(G, ambient.codes[mask])


def normalizer_in_full(H: Subgroup) -> Subgroup:
    return normalizer(full_group(H.group), H)


# -- Sylow subgroups ------------------------------------------------------------


def _prime_power_part(n: int, ell: int) -> int:
    out = 1
    while n % ell == 0:
        n //= ell
        out *= ell
    return out


def _exponent_of(pm: int, ell: int) -> int:
    k = 0
    while pm > 1:
        pm //= ell
        k += 1
    return k


def sylow(H: Subgroup, ell: int) -> Subgroup:
    """A Sylow ell-subgroup, grown deterministically from least elements."""
    if H.order % ell:
        raise ValueError(f"{ell} does not divide |G| = {H.order}")
    G = H.group
    target = _prime_power_part(H.order, ell)
    orders = H.element_orders
    is_ell = np.array([o > 1 and _prime_power_part(int(o), ell) == o for o in orders.tolist()])
    start = int(H.codes[np.argmax(is_ell)])
    P = Subgroup(G, (G.decode(start),), cyclic_codes(G, start))
    while P.order < target:
        N = H.codes[G.conjugation_mask(H.codes, P.generator_codes, P.codes)]
        outside = N[~np.isin(N, P.codes, assume_unique=True)]
        # g^ell in P makes <P, g> an ell-group of order ell |P|
        g_pow = outside
        for _ in range(ell - 1):
            g_pow = G.mul_codes(g_pow, outside)
        pick = int(outside[np.isin(g_pow, P.codes)][0])
        gens = P.generators + (G.decode(pick),)
        P = closure(G, gens)
    return P


def is_sylow_normal(H: Subgroup, ell: int) -> bool:
    orders = H.element_orders.tolist()
    count = sum(1 for o in orders if _prime_power_part(o, ell) == o)
    return count == _prime_power_part(H.order, ell)


def common_fixed_points(H: Subgroup, extension: bool = True) -> list:
    """Points of P^1 fixed by every element (over F_{q^2} by default)."""
    G = H.group
    pts = None
    for g in H.generators:
        if g == G.identity:
            continue
        fq, fq2 = G.fixed_points(g)
        here = set(fq2 if extension else fq)
        pts = here if pts is None else pts & here
    if pts is None:
        raise ValueError("the trivial group fixes every point")
    return sorted(pts)


# -- conjugacy ------------------------------------------------------------------


def conjugacy_invariants(H: Subgroup):
    return H.order, tuple(order_profile(H).items()), det_profile(H), involution_det_profile(H)


def are_conjugate(H1: Subgroup, H2: Subgroup) -> ProjMatrix | None:
    """A u with u H1 u^-1 = H2, or None.

    The witness is the identity when H1 = H2 and otherwise the least such u
    in canonical order, found by testing every group element against the
    generators of H1 at once.
    """
    if H1.field != H2.field:
        raise ValueError("subgroups live over different fields")
    if H1 == H2:
        return H1.group.identity
    if conjugacy_invariants(H1) != conjugacy_invariants(H2):
        return None
    G = H2.group
    mask = G.conjugation_mask(G.all_codes, H1.generator_codes, H2.codes)
    hits = np.nonzero(mask)[0]
    if hits.size == 0:
        return None
    return G.decode(G.all_codes[hits[0]])


# -- recognition ------------------------------------------------------------------


@dataclass(frozen=True)
class ClassLabel:
    family: str
    params: tuple = ()
    aliases: tuple[str, ...] = dc_field(default=(), compare=False)

    @property
    def name(self) -> str:
        if not self.params:
            return self.family
        parts = []
        for v in self.params:
            parts.append("[" + ",".join(str(x) for x in v) + "]" if isinstance(v, tuple) else str(v))
        return f"{self.family}({','.join(parts)})"

    def __str__(self) -> str:
        return self.name

    @property
    def rank(self) -> int:
        return PRECEDENCE.index(self.family)

    def with_aliases(self, aliases: Iterable[str]) -> "ClassLabel":
        return ClassLabel(self.family, self.params, tuple(sorted(set(aliases) - {self.name})))


def psl_order(p: int, s: int) -> int:
    return p**s * (p ** (2 * s) - 1) // (1 if p == 2 else 2)


def pgl_order(p: int, s: int) -> int:
    return p**s * (p ** (2 * s) - 1)


def _is_dihedral(H: Subgroup, m: int) -> bool:
    # element s of order m with every element outside <s> an involution
    G = H.group
    orders = H.element_orders
    idx = np.nonzero(orders == m)[0]
    if idx.size == 0:
        return False
    rot = cyclic_codes(G, int(H.codes[idx[0]]))
    outside = ~np.isin(H.codes, rot, assume_unique=True)
    return bool((orders[outside] == 2).all())


def unipotent_class(P: Subgroup) -> tuple[int, ...]:
    """Homothety class of Gamma for a p-group P conjugated into [[1, Gamma], [0, 1]]."""
    G, F = P.group, P.field
    nontrivial = next(g for g in P.elements if g != G.identity)
    fixed = G.fixed_points(nontrivial)[0]
    assert len(fixed) == 1, "p-elements have a unique fixed point"
    x = fixed[0]
    u = G.identity if x == INF else G.canonicalize((0, 1, 1, F.neg(x)))
    conj = conjugate_subgroup(P, u)
    gamma = []
    for m in conj.elements:
        a, b, c, d = m
        assert c == 0 and a == d == 1, "conjugated p-group is not upper unipotent"
        gamma.append(b)
    return homothety_canonical(span(F, gamma)).basis


def satisfied_labels(H: Subgroup) -> list[ClassLabel]:
    """Every family label whose defining test ``H`` passes."""
    p, n = H.field.p, H.order
    prof = order_profile(H)
    out: list[ClassLabel] = []
    if n == 1:
        return [ClassLabel("Trivial")]
    if n in prof:
        out.append(ClassLabel("Cyclic", (n,)))
    if n % 2 == 0 and n >= 4 and _is_dihedral(H, n // 2):
        out.append(ClassLabel("Dihedral", (n // 2,)))
    if n == 12 and prof == A4_PROFILE:
        out.append(ClassLabel("Tetrahedral"))
    if n == 24 and prof == S4_PROFILE:
        out.append(ClassLabel("Octahedral"))
    if n == 60 and prof == A5_PROFILE:
        out.append(ClassLabel("Icosahedral"))
    if n % p == 0:
        if is_sylow_normal(H, p):
            pm = _prime_power_part(n, p)
            k = n // pm
            if k in prof:
                P = sylow(H, p)
                m = _exponent_of(pm, p)
                out.append(ClassLabel("SemiElementary", (m, k, unipotent_class(P))))
        else:
            for s in range(1, H.field.r + 1):
                if H.field.r % s:
                    continue
                if n == pgl_order(p, s):
                    out.append(ClassLabel("PGL", (s,)))
                elif p != 2 and n == psl_order(p, s):
                    out.append(ClassLabel("PSL", (s,)))
    return out


def recognize(H: Subgroup) -> ClassLabel:
    labels = satisfied_labels(H)
    if not labels:
        raise ClassificationError(f"classification theorem violated by {H!r}")
    best = min(labels, key=lambda lab: lab.rank)
    return best.with_aliases(lab.name for lab in labels)


# -- maximal cyclic subgroups -------------------------------------------------------


def maximal_cyclic_data(H: Subgroup) -> list[tuple[int, int]]:
    """(order, normalizer index) per H-conjugacy class of maximal cyclic subgroups."""
    p = H.field.p
    if H.order % p == 0:
        raise ValueError("maximal cyclic data needs a p-regular group")
    if H.order == 1:
        raise ValueError("trivial group has no maximal cyclic subgroups")
    G = H.group
    cyclics: dict[bytes, tuple[int, np.ndarray]] = {}
    for c in H.codes.tolist():
        if c == G.identity_code:
            continue
        cc = cyclic_codes(G, c)
        cyclics.setdefault(cc.tobytes(), (c, cc))
    maximal = []
    for key, (gen, cc) in cyclics.items():
        bigger = any(
            other.size > cc.size and np.isin(cc, other, assume_unique=True).all()
            for _, other in cyclics.values()
        )
        if not bigger:
            maximal.append((gen, cc))
    out = []
    seen: set[bytes] = set()
    for gen, cc in sorted(maximal, key=lambda t: (t[1].size, t[0])):
        if cc.tobytes() in seen:
            continue
        # H-conjugates of this cyclic subgroup
        ui = G.inv_codes(H.codes)
        images = G.mul_codes(G.mul_codes(H.codes, np.full(H.order, gen)), ui)
        for img in set(images.tolist()):
            seen.add(cyclic_codes(G, img).tobytes())
        norm = int(G.conjugation_mask(H.codes, [gen], cc).sum())
        out.append((int(cc.size), norm // int(cc.size)))
    return sorted(out)


def mass_formula_holds(H: Subgroup) -> bool:
    data = maximal_cyclic_data(H)
    rhs = 1 - sum(Fraction(1, f) * (1 - Fraction(1, d)) for d, f in data)
    return Fraction(1, H.order) == rhs and all(d * f <= H.order for d, f in data)
