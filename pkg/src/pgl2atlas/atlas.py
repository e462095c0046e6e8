"""Subgroup atlases of PGL_2(F_q).

``predicted_atlas`` lists the conjugacy classes the classification
predicts, built from the constructors. ``brute_force_atlas`` finds every
class from scratch by closing cyclic subgroups under one-element
extensions and deduplicating by full conjugation orbits; it never touches
the constructors. ``verify`` pairs the two lists up.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from . import construct
from .addsub import EmptyFamilyError, semi_elementary_classes
from .gf import FieldSpec, divisors, make_field
from .groups import (
    ClassLabel,
    Subgroup,
    are_conjugate,
    embed_subgroup,
    from_codes,
    involution_det_profile,
    mass_formula_holds,
    maximal_cyclic_data,
    normalizer_in_full,
    recognize,
)
from .pgl2 import PGL2, format_matrix, pgl2

log = logging.getLogger(__name__)

ORACLE_CAP = 720
EXTENDED_ORACLE_CAP = 1320


@dataclass(frozen=True, eq=False)
class ClassDescriptor:
    label: ClassLabel
    representative: Subgroup
    class_size: int
    source: str

    @property
    def order(self) -> int:
        return self.representative.order

    def to_json(self) -> dict:
        return {
            "label": self.label.name,
            "family": self.label.family,
            "params": [list(v) if isinstance(v, tuple) else v for v in self.label.params],
            "aliases": list(self.label.aliases),
            "order": self.order,
            "class_size": self.class_size,
            "generators": [format_matrix(g) for g in self.representative.generators],
            "source": self.source,
        }


def _sort_key(d: ClassDescriptor):
    return d.order, d.label.name, d.representative.codes.tolist()


# -- prediction ---------------------------------------------------------------------


def _predicted_candidates(field: FieldSpec):
    """(family name, representative) in label-precedence order."""
    p, r, q = field.p, field.r, field.q
    subdegrees = [s for s in range(1, r + 1) if r % s == 0]
    for s in subdegrees:
        yield f"PGL({s})", lambda s=s: construct.pgl2_subfield(field, s)
    if p != 2:
        for s in subdegrees:
            yield f"PSL({s})", lambda s=s: construct.psl2_subfield(field, s)
    if construct.icosahedral_admissible(field):
        yield "Icosahedral", lambda: construct.icosahedral(field)
    if p != 2:
        yield "Octahedral", lambda: construct.octahedral(field)
    if p != 2 or r % 2 == 0:
        yield "Tetrahedral", lambda: construct.tetrahedral(field)
    for n in divisors(q - 1):
        for m in range(1, r + 1):
            try:
                gammas = semi_elementary_classes(field, m, n)
            except EmptyFamilyError:
                continue
            for gamma in gammas:
                yield f"SemiElementary({m},{n},[{gamma}])", lambda g=gamma, n=n: construct.semi_elementary(field, g, n)
    torus_orders = sorted(set(divisors(q - 1)) | set(divisors(q + 1)))
    # order 2 only exists prime to p for odd q; n = 1 is the trivial group / C2
    dihedral_orders = [n for n in torus_orders if n >= 3 or (n == 2 and p != 2)]
    for n in dihedral_orders:
        yield f"Dihedral({n})", lambda n=n: construct.dihedral(field, n)
    for n in dihedral_orders:
        yield f"Cyclic({n})", lambda n=n: construct.cyclic(field, n)
    yield "Trivial", lambda: construct.trivial(field)


def class_size(H: Subgroup) -> int:
    return H.group.order_of_group // normalizer_in_full(H).order


@lru_cache(maxsize=None)
def predicted_atlas(field: FieldSpec) -> tuple[ClassDescriptor, ...]:
    emitted: list[tuple[ClassLabel, Subgroup, set[str]]] = []
    for name, make in _predicted_candidates(field):
        rep = make()
        label = recognize(rep)
        for lab, other, aliases in emitted:
            if lab == label and are_conjugate(rep, other) is not None:
                aliases.add(name)
                break
        else:
            emitted.append((label, rep, {name, *label.aliases}))
    out = [
        ClassDescriptor(label.with_aliases(aliases), rep, class_size(rep), "predicted")
        for label, rep, aliases in emitted
    ]
    return tuple(sorted(out, key=_sort_key))


# -- brute force ------------------------------------------------------------------------


class OracleCapExceeded(ValueError):
    pass


def conjugation_orbit(G: PGL2, codes: np.ndarray) -> np.ndarray:
    """All conjugates u H u^-1 as a (k, |H|) array of sorted rows, rows sorted."""
    us = G.all_codes
    ui = G.inv_codes(us)
    h = codes.size
    left = G.mul_codes(np.repeat(us, h), np.tile(codes, us.size))
    conj = G.mul_codes(left, np.repeat(ui, h)).reshape(us.size, h)
    conj.sort(axis=1)
    return np.unique(conj, axis=0)


class _ClassBook:
    """Conjugacy classes found so far, keyed by every member's element set."""

    def __init__(self, G: PGL2):
        self.G = G
        self.members: dict[bytes, int] = {}
        self.reps: list[np.ndarray] = []
        self.sizes: list[int] = []

    def add(self, codes: np.ndarray) -> bool:
        if codes.tobytes() in self.members:
            return False
        orbit = conjugation_orbit(self.G, codes)
        idx = len(self.reps)
        for row in orbit:
            self.members[row.tobytes()] = idx
        # least element set (lexicographic on sorted codes) represents the class
        self.reps.append(orbit[0])
        self.sizes.append(int(orbit.shape[0]))
        return True


def _cyclic_subgroups(G: PGL2) -> list[np.ndarray]:
    codes = G.all_codes
    orders = G.orders_of_codes(codes)
    powers = [np.full(codes.size, G.identity_code), codes.copy()]
    for _ in range(int(orders.max()) - 2):
        powers.append(G.mul_codes(powers[-1], codes))
    table = np.stack(powers, axis=1)
    seen: dict[bytes, np.ndarray] = {}
    for i in range(codes.size):
        row = np.sort(table[i, : orders[i]])
        seen.setdefault(row.tobytes(), row)
    return list(seen.values())


@lru_cache(maxsize=None)
def brute_force_atlas(field: FieldSpec, cap: int = ORACLE_CAP) -> tuple[ClassDescriptor, ...]:
    G = pgl2(field)
    if G.order_of_group > cap:
        raise OracleCapExceeded(f"|PGL2(F_{field.q})| = {G.order_of_group} exceeds oracle cap {cap}")
    book = _ClassBook(G)
    book.add(np.array([G.identity_code], dtype=np.int64))
    for cc in _cyclic_subgroups(G):
        book.add(cc)
    head = 0
    while head < len(book.reps):
        H = book.reps[head]
        head += 1
        if H.size == G.order_of_group:
            continue
        gens = _generators_of(G, H)
        done = np.isin(G.all_codes, H)
        for i in np.nonzero(~done)[0].tolist():
            if done[i]:
                continue
            g = int(G.all_codes[i])
            K = G.closure_codes(gens + [g])
            book.add(K)
            # <H, h g h'> = <H, g>: skip the rest of the double coset HgH
            hg = G.mul_codes(H, np.full(H.size, g))
            coset = G.mul_codes(np.repeat(hg, H.size), np.tile(H, H.size))
            done |= np.isin(G.all_codes, coset)
    out = []
    for rep, size in zip(book.reps, book.sizes):
        sub = from_codes(G, rep)
        out.append(ClassDescriptor(recognize(sub), sub, size, "brute_force"))
    return tuple(sorted(out, key=_sort_key))


def _generators_of(G: PGL2, codes: np.ndarray) -> list[int]:
    return [G.code(g) for g in from_codes(G, codes).generators]


# -- verification ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    q: int
    field: FieldSpec
    matched: list[tuple[ClassDescriptor, ClassDescriptor]] = dc_field(default_factory=list)
    predicted_only: list[ClassDescriptor] = dc_field(default_factory=list)
    brute_only: list[ClassDescriptor] = dc_field(default_factory=list)
    residual_notes: list[str] = dc_field(default_factory=list)
    unexplained: list[ClassDescriptor] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.predicted_only and not self.unexplained

    @property
    def perfect(self) -> bool:
        return not self.predicted_only and not self.brute_only

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "ok": self.ok,
            "matched": len(self.matched),
            "predicted_only": [d.label.name for d in self.predicted_only],
            "brute_only": [d.label.name for d in self.brute_only],
            "residual_notes": list(self.residual_notes),
            "unexplained": [d.label.name for d in self.unexplained],
        }


def _det_split_note(extra: ClassDescriptor, matched: list[ClassDescriptor]) -> str | None:
    """Explain a brute-only class as a twin of a matched class with the same
    label whose involutions carry the other determinant class."""
    if extra.representative.field.p == 2:
        return None
    mine = involution_det_profile(extra.representative)
    for d in matched:
        if d.label == extra.label and involution_det_profile(d.representative) != mine:
            sq, ns = mine
            return (
                f"{extra.label.name}: second class split by the determinant class of its involutions "
                f"({sq} square, {ns} nonsquare; predicted class has {involution_det_profile(d.representative)})"
            )
    return None


@lru_cache(maxsize=None)
def verify(field: FieldSpec, cap: int = ORACLE_CAP) -> VerificationReport:
    predicted = predicted_atlas(field)
    brute = list(brute_force_atlas(field, cap))
    report = VerificationReport(field.q, field)
    for pd in predicted:
        hit = None
        for bd in brute:
            if bd.label == pd.label and are_conjugate(pd.representative, bd.representative) is not None:
                hit = bd
                break
        if hit is None:
            report.predicted_only.append(pd)
        else:
            brute.remove(hit)
            report.matched.append((pd, hit))
    report.brute_only = brute
    matched_brute = [b for _, b in report.matched]
    for bd in brute:
        note = _det_split_note(bd, matched_brute)
        if note is None:
            report.unexplained.append(bd)
        else:
            report.residual_notes.append(note)
    return report


# -- property suites ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MassFormulaRow:
    label: str
    order: int
    data: tuple[tuple[int, int], ...]
    holds: bool


def mass_formula_suite(field: FieldSpec, cap: int = ORACLE_CAP) -> list[MassFormulaRow]:
    rows = []
    for d in brute_force_atlas(field, cap):
        H = d.representative
        if H.order == 1 or H.order % field.p == 0:
            continue
        rows.append(MassFormulaRow(d.label.name, H.order, tuple(maximal_cyclic_data(H)), mass_formula_holds(H)))
    return rows


@dataclass(frozen=True)
class DescentRow:
    first: str
    second: str
    conjugate_over_extension: bool


def descent_suite(field: FieldSpec, cap: int = ORACLE_CAP) -> list[DescentRow]:
    """Pairs of non-conjugate p-irregular classes, re-tested over F_{q^2}."""
    big = make_field(field.p, 2 * field.r)
    reps = [d for d in brute_force_atlas(field, cap) if d.order % field.p == 0]
    lifted = [embed_subgroup(d.representative, big) for d in reps]
    rows = []
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            conj = are_conjugate(lifted[i], lifted[j]) is not None
            rows.append(DescentRow(reps[i].label.name, reps[j].label.name, conj))
    return rows
