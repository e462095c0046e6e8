import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from pgl2atlas import construct as cons
from pgl2atlas.addsub import span
from pgl2atlas.atlas import brute_force_atlas
from pgl2atlas.gf import make_field
from pgl2atlas.groups import (
    ClassLabel,
    are_conjugate,
    centralizer,
    closure,
    common_fixed_points,
    conjugate_subgroup,
    full_group,
    is_abelian,
    maximal_cyclic_data,
    mass_formula_holds,
    normalizer,
    order_profile,
    recognize,
    sylow,
)
from pgl2atlas.pgl2 import INF, pgl2


def F_(p, r=1):
    return make_field(p, r)


def test_closure_examples():
    assert closure(F_(5), [(1, 1, 0, 1)]).order == 5
    assert closure(F_(3), []).order == 1
    s, t = cons.icosahedral_generators(F_(3, 2))
    assert closure(F_(3, 2), [s, t]).order == 60


@pytest.mark.parametrize("pr", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2)])
def test_closure_is_closed_and_divides_group_order(pr):
    G = pgl2(F_(*pr))
    H = cons.dihedral(G.field, 2) if pr[0] != 2 else cons.cyclic(G.field, 3)
    codes = H.codes
    prod = G.mul_codes(np.repeat(codes, codes.size), np.tile(codes, codes.size))
    assert np.isin(prod, codes).all()
    assert np.isin(G.inv_codes(codes), codes).all()
    assert G.order_of_group % H.order == 0


def test_closure_cap():
    with pytest.raises(OverflowError):
        closure(F_(7), [(1, 1, 0, 1), (0, 1, 1, 0)], cap=10)


def test_order_profile_examples():
    assert order_profile(cons.dihedral(F_(5), 2)) == {1: 1, 2: 3}
    assert order_profile(cons.tetrahedral(F_(5))) == {1: 1, 2: 3, 3: 8}
    assert order_profile(cons.borel(F_(2, 2), 2)) == {1: 1, 2: 3, 3: 8}


def test_sylow_examples():
    P = sylow(full_group(F_(2, 2)), 2)
    assert P.order == 4
    G = P.group
    # unipotent: trace^2 = 4 det, i.e. trace 0 in characteristic 2
    assert all(G.trace(g) == 0 for g in P.elements if g != G.identity)
    assert len(common_fixed_points(P)) == 1
    assert sylow(cons.octahedral(F_(5)), 3).order == 3
    assert sylow(cons.icosahedral(F_(3, 2)), 5).order == 5
    with pytest.raises(ValueError):
        sylow(cons.cyclic(F_(5), 4), 3)


@pytest.mark.parametrize("pr", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)])
def test_sylow_p_normalizer_is_borel(pr):
    F = F_(*pr)
    Gfull = full_group(F)
    P = sylow(Gfull, F.p)
    assert P.order == F.q
    N = normalizer(Gfull, P)
    assert N.order == F.q * (F.q - 1)
    assert common_fixed_points(N, extension=False) == common_fixed_points(P, extension=False)


def test_normalizer_and_centralizer_basics():
    Gfull = full_group(F_(5))
    triv = cons.trivial(F_(5))
    assert centralizer(Gfull, triv) == Gfull
    assert normalizer(Gfull, Gfull) == Gfull
    with pytest.raises(ValueError):
        normalizer(cons.cyclic(F_(5), 4), cons.cyclic(F_(5), 3))


@pytest.mark.parametrize("pr", [(3, 1), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1)])
def test_maximal_cyclic_normalizer_index_is_one_or_two(pr):
    F = F_(*pr)
    Gfull = full_group(F)
    for n in sorted({d for d in range(2, F.q + 2) if (F.q - 1) % d == 0 or (F.q + 1) % d == 0}):
        if n in (F.q - 1, F.q + 1):
            H = cons.cyclic(F, n)
            assert normalizer(Gfull, H).order // H.order in (1, 2)


def test_are_conjugate_examples():
    F3 = F_(3)
    G = pgl2(F3)
    a = closure(F3, [G.diag(2)])
    assert are_conjugate(a, closure(F3, [G.canonicalize((0, 2, 1, 0))])) is None
    b = closure(F3, [G.canonicalize((0, 1, 1, 0))])
    u = are_conjugate(a, b)
    assert u is not None and conjugate_subgroup(a, u) == b


@pytest.mark.parametrize("pr", [(2, 2), (3, 1), (5, 1), (2, 3)])
def test_sylow_subgroups_of_full_group_are_conjugate(pr):
    F = F_(*pr)
    G = pgl2(F)
    P = sylow(full_group(F), F.p)
    lower = closure(F, [G.canonicalize((1, 0, x, 1)) for x in range(1, F.q)])
    u = are_conjugate(P, lower)
    assert u is not None and conjugate_subgroup(P, u) == lower


def _brute_conjugate(H1, H2):
    G = H1.group
    return any(conjugate_subgroup(H1, G.decode(c)) == H2 for c in G.all_codes)


@pytest.mark.parametrize("pr", [(3, 1), (2, 2), (5, 1)])
def test_are_conjugate_matches_exhaustive_search(pr):
    reps = [d.representative for d in brute_force_atlas(F_(*pr))]
    G = reps[0].group
    rng = np.random.default_rng(5)
    for H in reps:
        moved = conjugate_subgroup(H, G.decode(rng.choice(G.all_codes)))
        for K in reps:
            if K.order != H.order:
                continue
            w = are_conjugate(moved, K)
            assert (w is not None) == _brute_conjugate(moved, K) == (K is H)
            if w is not None:
                assert conjugate_subgroup(moved, w) == K


@settings(max_examples=40)
@given(st.sampled_from([(3, 1), (2, 2), (5, 1), (7, 1), (3, 2)]), st.data())
def test_are_conjugate_is_an_equivalence(pr, data):
    F = F_(*pr)
    G = pgl2(F)
    reps = [d.representative for d in brute_force_atlas(F)]
    H = reps[data.draw(st.integers(0, len(reps) - 1))]
    u = G.decode(G.all_codes[data.draw(st.integers(0, G.all_codes.size - 1))])
    K = conjugate_subgroup(H, u)
    assert are_conjugate(H, H) == G.identity
    w = are_conjugate(H, K)
    back = are_conjugate(K, H)
    assert w is not None and back is not None
    assert conjugate_subgroup(H, w) == K
    assert conjugate_subgroup(K, G.inverse(w)) == H
    # every element maps into K elementwise
    assert all(G.conjugate(w, h) in K for h in H.elements)


def test_recognize_examples():
    F4 = F_(2, 2)
    lab = recognize(cons.borel(F4, 2))
    assert lab.family == "Tetrahedral"
    assert "SemiElementary(2,3,[1,2])" in lab.aliases
    lab = recognize(full_group(F_(3)))
    assert lab == ClassLabel("PGL", (1,)) and "Octahedral" in lab.aliases
    G7 = pgl2(F_(7))
    assert recognize(closure(F_(7), [G7.diag(3)])) == ClassLabel("Cyclic", (6,))
    assert recognize(cons.trivial(F_(7))) == ClassLabel("Trivial")


def test_recognize_coincidence_aliases():
    assert "Tetrahedral" in recognize(cons.psl2_subfield(F_(3), 1)).aliases
    assert "Icosahedral" in recognize(full_group(F_(2, 2))).aliases
    assert recognize(cons.psl2_subfield(F_(5), 1)).family == "PSL"
    assert "Icosahedral" in recognize(cons.psl2_subfield(F_(5), 1)).aliases
    d = recognize(cons.semi_elementary(F_(3, 2), span(F_(3, 2), [1]), 2))
    assert d.family == "SemiElementary" and "Dihedral(3)" in d.aliases


@pytest.mark.parametrize("pr", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)])
def test_recognize_is_conjugation_invariant(pr):
    F = F_(*pr)
    G = pgl2(F)
    rng = np.random.default_rng(7)
    for d in brute_force_atlas(F):
        for c in rng.choice(G.all_codes, 3):
            assert recognize(conjugate_subgroup(d.representative, G.decode(c))) == d.label


# -- abstract isomorphism type from a permutation model ---------------------------------


def _perm_group(H):
    G = H.group
    pts = list(range(G.q)) + [INF]
    index = {z: i for i, z in enumerate(pts)}
    perms = [Permutation([index[G.apply(g, z)] for z in pts]) for g in H.generators]
    return PermutationGroup(perms or [Permutation(list(range(len(pts))))])


def _abstract_type(P):
    """Name from order, abelianness, orders and normal-subgroup census."""
    n = P.order()
    orders = sorted(int(g.order()) for g in P.elements)
    has_n = n in orders
    if n == 1:
        return "Trivial"
    if has_n:
        return f"C{n}"
    if P.is_abelian:
        return f"abelian{n}"
    normal = [K.order() for K in _normal_subgroups(P)]
    return f"nonabelian{n}:{orders.count(2)}:{sorted(normal)}"


def _normal_subgroups(P):
    out = {}
    for g in P.elements:
        K = P.normal_closure(PermutationGroup([g]))
        out[frozenset(K.elements)] = K
    return list(out.values())


# A4 has normal subgroups of orders 1, 4, 12; S4 adds 24; A5 is simple
POLYHEDRAL = {
    "Tetrahedral": "nonabelian12:3:[1, 4, 12]",
    "Octahedral": "nonabelian24:9:[1, 4, 12, 24]",
    "Icosahedral": "nonabelian60:15:[1, 60]",
}


@pytest.mark.parametrize("pr", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_recognize_agrees_with_abstract_type(pr):
    F = F_(*pr)
    for d in brute_force_atlas(F):
        H = d.representative
        P = _perm_group(H)
        assert P.order() == H.order
        kind = _abstract_type(P)
        fam, params = d.label.family, d.label.params
        aliases = set(d.label.aliases) | {d.label.name}
        if fam == "Cyclic":
            assert kind == f"C{params[0]}"
        elif fam == "Trivial":
            assert kind == "Trivial"
        elif fam == "Dihedral":
            n = params[0]
            if n == 2:
                assert kind == "abelian4"
            else:
                assert kind.startswith(f"nonabelian{2 * n}:") and int(kind.split(":")[1]) == n + (n % 2 == 0)
        elif "Tetrahedral" in aliases:
            assert kind == POLYHEDRAL["Tetrahedral"]
        elif "Octahedral" in aliases:
            assert kind == POLYHEDRAL["Octahedral"]
        elif "Icosahedral" in aliases:
            assert kind == POLYHEDRAL["Icosahedral"]
        assert is_abelian(H) == P.is_abelian


# -- Sylow-p fixed point and mass formula ------------------------------------------


@pytest.mark.parametrize("pr", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)])
def test_sylow_p_of_irregular_groups_fixes_one_point(pr):
    F = F_(*pr)
    for d in brute_force_atlas(F):
        if d.order % F.p == 0:
            P = sylow(d.representative, F.p)
            assert len(common_fixed_points(P)) == 1


def test_maximal_cyclic_data_examples():
    assert maximal_cyclic_data(cons.cyclic(F_(7), 6)) == [(6, 1)]
    assert maximal_cyclic_data(cons.dihedral(F_(5), 2)) == [(2, 2), (2, 2), (2, 2)]
    assert maximal_cyclic_data(cons.tetrahedral(F_(5))) == [(2, 2), (3, 1)]
    with pytest.raises(ValueError):
        maximal_cyclic_data(cons.cyclic(F_(5), 5))


def test_mass_formula_examples():
    for H in [cons.cyclic(F_(7), 6), cons.dihedral(F_(7), 4), cons.tetrahedral(F_(7)), cons.octahedral(F_(7))]:
        assert mass_formula_holds(H)
    assert maximal_cyclic_data(cons.tetrahedral(F_(7))) == [(2, 2), (3, 1)]
