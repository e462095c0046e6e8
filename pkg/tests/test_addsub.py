import itertools

import pytest
from hypothesis import given, strategies as st

from pgl2atlas.addsub import (
    EmptyFamilyError,
    enumerate_subspaces,
    gaussian_binomial,
    homothety_canonical,
    homothety_orbit,
    normalized_representative,
    parse_gamma,
    semi_elementary_classes,
    semi_elementary_degree,
    span,
    stabilizer_field,
)
from pgl2atlas.gf import make_field, subfield_embedding
from pgl2atlas.groups import closure
from pgl2atlas.pgl2 import pgl2

UP_TO_16 = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)]


def brute_subspaces(F, m):
    """Every rank-m subspace, found by spanning all m-subsets of F_q."""
    found = set()
    for combo in itertools.combinations(range(1, F.q), m):
        g = span(F, combo)
        if g.rank == m:
            found.add(g)
    return found


def test_span_examples():
    F4 = make_field(2, 2)
    assert span(F4, [1]).elements() == [0, 1]
    assert span(F4, [1, 2]).size == 4
    assert span(make_field(2, 3), [1, 1]).rank == 1
    assert span(F4, []).rank == 0


def test_echelon_form_is_unique():
    F = make_field(3, 2)
    g = span(F, [1, 3])
    for a, b in itertools.permutations([1, 3, 4, 2, 5], 2):
        h = span(F, [a, b])
        assert (h == g) == (set(h.elements()) == set(g.elements()))


def test_stabilizer_field_examples():
    F4 = make_field(2, 2)
    assert stabilizer_field(span(F4, [1, 2])) == 2
    assert stabilizer_field(span(F4, [1])) == 1
    F8 = make_field(2, 3)
    assert stabilizer_field(span(F8, [1, F8.primitive_element])) == 1
    with pytest.raises(ValueError):
        stabilizer_field(span(F4, []))


def test_homothety_canonical_examples():
    F4 = make_field(2, 2)
    assert {homothety_canonical(span(F4, [x])) for x in (1, 2, 3)} == {span(F4, [1])}
    assert homothety_canonical(span(F4, [1, 2])) == span(F4, [1, 2])
    F8 = make_field(2, 3)
    planes = list(enumerate_subspaces(F8, 2))
    assert len(planes) == 7
    assert len({homothety_canonical(g) for g in planes}) == 1


def test_parse_gamma():
    F9 = make_field(3, 2)
    assert parse_gamma(F9, "gamma=1,6") == span(F9, [1, 6])
    # echelon form rescales 2x to x
    assert str(span(F9, [1, 6])) == "1,3"
    with pytest.raises(ValueError):
        parse_gamma(F9, "1,a")


@pytest.mark.parametrize("p,r", UP_TO_16)
def test_subspace_counts_are_gaussian_binomials(p, r):
    F = make_field(p, r)
    for m in range(r + 1):
        listed = list(enumerate_subspaces(F, m))
        assert len(listed) == len(set(listed)) == gaussian_binomial(p, r, m)
        if 0 < m and F.q <= 16:
            assert set(listed) == brute_subspaces(F, m)


@pytest.mark.parametrize("p,r", UP_TO_16)
def test_stabilizer_invariant_under_homothety(p, r):
    F = make_field(p, r)
    for m in range(1, min(r, 2) + 1):
        for g in enumerate_subspaces(F, m):
            ell = stabilizer_field(g)
            assert r % ell == 0
            assert all(stabilizer_field(g.scale(a)) == ell for a in range(1, F.q))
            # maximality: no bigger subfield stabilizes
            for bigger in range(ell + 1, r + 1):
                if r % bigger == 0 and bigger % ell == 0:
                    sub = F.subfield(bigger)
                    assert not all(F.mul(a, b) in g for a in sub for b in g.basis)


@pytest.mark.parametrize("p,r", UP_TO_16)
def test_orbit_size_identity(p, r):
    F = make_field(p, r)
    for m in range(1, r + 1):
        seen = set()
        for g in enumerate_subspaces(F, m):
            if g in seen:
                continue
            orbit = homothety_orbit(g)
            seen |= orbit
            assert len(orbit) * (p ** stabilizer_field(g) - 1) == F.q - 1
            canon = homothety_canonical(g)
            assert homothety_canonical(canon) == canon
            assert all(homothety_canonical(h) == canon for h in orbit)
        assert len(seen) == gaussian_binomial(p, r, m)


def test_semi_elementary_class_examples():
    F4 = make_field(2, 2)
    assert semi_elementary_classes(F4, 2, 3) == (span(F4, [1, 2]),)
    assert len(semi_elementary_classes(make_field(2, 3), 2, 1)) == 1


def test_gf16_planes_split_into_three_orbits():
    F16 = make_field(2, 4)
    planes = list(enumerate_subspaces(F16, 2))
    assert len(planes) == 35
    orbits = []
    for g in planes:
        if not any(g in o for o in orbits):
            orbits.append(homothety_orbit(g))
    assert sorted(len(o) for o in orbits) == [5, 15, 15]
    reps = semi_elementary_classes(F16, 2, 1)
    assert len(reps) == 3
    assert all(1 in g for g in reps)
    assert sorted(len(homothety_orbit(g)) for g in reps) == [5, 15, 15]
    # the F_4-lines: the size-5 orbit contains the embedded F_4
    F4 = subfield_embedding(make_field(2, 2), F16).image()
    assert span(F16, F4) in reps


def test_semi_elementary_degree_and_empty_families():
    assert semi_elementary_degree(make_field(2, 2), 2, 3) == 2
    for args in [(make_field(2, 2), 1, 3), (make_field(3, 2), 1, 3), (make_field(3, 2), 3, 1), (make_field(5), 1, 3)]:
        with pytest.raises(EmptyFamilyError, match="family empty"):
            semi_elementary_classes(*args)


@given(st.sampled_from([(2, 3), (2, 4), (3, 2), (5, 2), (3, 3)]), st.data())
def test_normalized_representative_contains_one_and_is_homothetic(pr, data):
    F = make_field(*pr)
    m = data.draw(st.integers(1, F.r))
    subs = list(enumerate_subspaces(F, m))
    g = subs[data.draw(st.integers(0, len(subs) - 1))]
    rep = normalized_representative(g)
    assert 1 in rep
    assert rep in homothety_orbit(g)
    assert normalized_representative(g.scale(data.draw(st.integers(1, F.q - 1)))) == rep


@pytest.mark.parametrize("p,r", [(2, 4), (3, 2), (5, 2), (2, 6), (3, 4)])
def test_classes_are_modules_over_mu_n_field(p, r):
    F = make_field(p, r)
    for n in [d for d in range(1, F.q) if (F.q - 1) % d == 0]:
        for m in range(1, r + 1):
            try:
                e = semi_elementary_degree(F, m, n)
            except EmptyFamilyError:
                continue
            reps = semi_elementary_classes(F, m, n)
            sub = set(F.subfield(e))
            for g in reps:
                assert stabilizer_field(g) % e == 0
                assert sub <= set(g.elements())
            assert len({homothety_canonical(g) for g in reps}) == len(reps)


def test_non_stable_gamma_containing_subfield_does_not_close():
    # rank-4 Gamma in F_64 containing F_4 but not an F_4-module: adjoining
    # mu_3 to [[1,Gamma],[0,1]] yields a group larger than |Gamma| * 3
    F = make_field(2, 6)
    F4 = F.subfield(2)
    x = 2
    gamma = span(F, list(F4) + [x, F.mul(x, x)])
    assert gamma.rank == 4 and set(F4) <= set(gamma.elements())
    assert stabilizer_field(gamma) == 1
    G = pgl2(F)
    gens = [G.canonicalize((1, b, 0, 1)) for b in gamma.basis] + [G.diag(F.root_of_unity(3))]
    H = closure(F, gens)
    assert H.order > 16 * 3
    stable = [g for g in semi_elementary_classes(F, 4, 3)]
    for g in stable:
        gens = [G.canonicalize((1, b, 0, 1)) for b in g.basis] + [G.diag(F.root_of_unity(3))]
        assert closure(F, gens).order == 48
