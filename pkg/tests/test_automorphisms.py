import pytest
from hypothesis import given, settings, strategies as st

from oracles import group_automorphism_count, half_inverting_exists_bruteforce
from bigrr import catalog as cat
from bigrr.automorphisms import (
    GroupAutomorphism,
    automorphism_group,
    complement_orbit_count,
    complement_orbits,
    find_half_inverting_automorphism,
    generating_sequence,
    hom_from_generators,
    identity_automorphism,
    inner_automorphism,
    invariant_subset_count,
    is_automorphism,
    iter_half_inverting,
)
from bigrr.construct import build_group, cyclic, dicyclic, dihedral
from bigrr.errors import CapExceededError, GroupValidationError, NotInvariantError
from bigrr.groups import closure, index2_subgroups, subgroup_generated

C4 = build_group(cyclic(4))
C8 = build_group(cyclic(8))
D3 = build_group(dihedral(3))
D4 = build_group(dihedral(4))
Q8 = build_group(dicyclic(2))


def _inversion(G):
    return GroupAutomorphism(G, G.inv)


@pytest.mark.parametrize("G,count", [(C4, 2), (D3, 6), (Q8, 24)])
def test_aut_orders_examples(G, count):
    assert len(automorphism_group(G)) == count == group_automorphism_count(G.array)


@pytest.mark.parametrize("entry", cat.catalog(8), ids=lambda e: e.key)
def test_aut_order_matches_bijection_scan(entry):
    auts = automorphism_group(entry.group)
    assert len(auts) == group_automorphism_count(entry.group.array)
    assert len({a.image for a in auts}) == len(auts)


@pytest.mark.parametrize("entry", cat.catalog(16), ids=lambda e: e.key)
def test_aut_members_verified(entry):
    G = entry.group
    auts = automorphism_group(G)
    assert auts[0].is_identity
    for a in auts:
        assert is_automorphism(G, a.image)
    # closed under composition
    images = {a.image for a in auts}
    for a in auts[:5]:
        for b in auts[:5]:
            assert a.then(b).image in images


def test_aut_cap():
    with pytest.raises(CapExceededError):
        automorphism_group(C8, cap=4)
    with pytest.raises(CapExceededError):
        automorphism_group(Q8, limit=3)


def test_not_an_automorphism():
    with pytest.raises(GroupValidationError):
        GroupAutomorphism(C4, (0, 2, 1, 3))
    assert not is_automorphism(C4, (1, 0, 2, 3))


def test_inner_and_fixed_sets():
    x, y = D4.generators
    c = inner_automorphism(D4, y)
    assert c(x) == D4.inv[x]
    assert c.fixed == frozenset(g for g in range(8) if D4.commute(g, y))
    assert identity_automorphism(D4).fixed == frozenset(range(8))
    assert _inversion(C4).inverted == frozenset(range(4))


def test_generating_sequence_greedy():
    gens = generating_sequence(D4)
    assert closure(D4, gens) == list(range(8))
    assert gens == sorted(gens) and len(gens) <= 3


def test_half_inverting_examples():
    M = index2_subgroups(C4)[0]
    phi = find_half_inverting_automorphism(C4, M)
    assert phi is not None and phi.image == C4.inv
    x = D4.generators[0]
    assert find_half_inverting_automorphism(D4, subgroup_generated(D4, [x])) is None
    i = Q8.generators[0]
    assert find_half_inverting_automorphism(Q8, subgroup_generated(Q8, [i])) is not None


@pytest.mark.parametrize("entry", cat.catalog(8), ids=lambda e: e.key)
def test_half_inverting_matches_bijection_scan(entry):
    R = entry.group
    for M in entry.subgroups():
        got = find_half_inverting_automorphism(R, M) is not None
        assert got == half_inverting_exists_bruteforce(R.array, R.inv, M.complement())


@pytest.mark.parametrize("entry", cat.catalog(16, min_order=9), ids=lambda e: e.key)
def test_half_inverting_matches_full_aut_filter(entry):
    R = entry.group
    auts = automorphism_group(R)
    for M in entry.subgroups():
        out = M.complement()
        expect = {
            a.image for a in auts if not a.is_identity and all(a(g) in (g, R.inv[g]) for g in out)
        }
        got = {a.image for a in iter_half_inverting(R, M)}
        assert got == expect
        for a in iter_half_inverting(R, M):
            assert a.preserves(M)


def test_orbit_examples():
    M = index2_subgroups(C4)[0]
    ident = identity_automorphism(C4)
    inv4 = _inversion(C4)
    assert complement_orbit_count(ident, M) == 2 and invariant_subset_count(ident, M) == 4
    assert complement_orbits(inv4, M) == [[1, 3]]
    assert complement_orbit_count(inv4, M) == 1 and invariant_subset_count(inv4, M) == 2
    M8 = index2_subgroups(C8)[0]
    inv8 = _inversion(C8)
    assert complement_orbits(inv8, M8) == [[1, 7], [3, 5]]
    assert invariant_subset_count(inv8, M8) == 4


def test_orbits_need_invariance():
    x, y = D4.generators
    M = subgroup_generated(D4, [y, D4.power(x, 2)])
    # the outer automorphism y -> xy swaps the two Klein subgroups
    c = GroupAutomorphism(D4, hom_from_generators(D4, D4, [x, y], [x, D4.mul(x, y)]))
    assert not c.preserves(M)
    with pytest.raises(NotInvariantError):
        complement_orbit_count(c, M)


SMALL = cat.catalog(16)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_automorphism_respects_products(entry, data):
    G = entry.group
    auts = automorphism_group(G)
    a = data.draw(st.sampled_from(auts))
    g = data.draw(st.integers(0, G.order - 1))
    h = data.draw(st.integers(0, G.order - 1))
    assert a(G.mul(g, h)) == G.mul(a(g), a(h))
    assert G.orders[a(g)] == G.orders[g]
