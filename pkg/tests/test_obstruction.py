import dataclasses

import pytest

from bigrr import catalog as cat
from bigrr.automorphisms import find_half_inverting_automorphism
from bigrr.construct import abelian, build_group, cyclic, dicyclic, dihedral
from bigrr.errors import ConditionNotMetError, GroupValidationError, IdentityResultError
from bigrr.groups import Subgroup, center, closure, index2_subgroups, subgroup_generated
from bigrr.obstruction import (
    COND1,
    COND2,
    COND3,
    build_automorphism,
    build_automorphism_cond1,
    build_automorphism_cond2,
    build_automorphism_cond3,
    center_of,
    check_condition_1,
    check_condition_2,
    check_condition_3,
    coset_representatives,
    derived_subgroup_of,
    obstruction_status,
    theorem11_equivalence,
)

C4 = build_group(cyclic(4))
V4 = build_group(abelian(2, 2))
E8 = build_group(abelian(2, 2, 2))
D4 = build_group(dihedral(4))
Q8 = build_group(dicyclic(2))
C4_M = index2_subgroups(C4)[0]
D4_X = subgroup_generated(D4, [D4.generators[0]])
Q8_I = subgroup_generated(Q8, [Q8.generators[0]])

SD16 = cat.get("16#8")
Q16 = cat.get("16#9")


def _subgroup_like(entry, orders):
    for i, M in enumerate(entry.subgroups()):
        H, _ = M.as_group()
        if sorted(H.orders) == orders:
            return M
    raise LookupError


SD16_D4 = _subgroup_like(SD16, [1, 2, 2, 2, 2, 2, 4, 4])
SD16_Q8 = _subgroup_like(SD16, [1, 2, 4, 4, 4, 4, 4, 4])
Q16_Q8 = _subgroup_like(Q16, [1, 2, 4, 4, 4, 4, 4, 4])


def _half_inverting(R, M, phi):
    return not phi.is_identity and all(phi(g) in (g, R.inv[g]) for g in M.complement())


def test_condition1_examples():
    assert check_condition_1(C4, C4_M)
    assert check_condition_1(Q8, Q8_I)
    assert not check_condition_1(D4, D4_X)


def test_condition2_examples():
    R = Q16.group
    w = check_condition_2(R, Q16_Q8)
    assert w is not None and w.condition == COND2
    H, _ = w.Z.as_group()
    assert H.is_abelian and sorted(H.orders) == [1, 2, 4, 4]
    assert R.orders[w.a] == 4 and R.mul(w.a, w.a) == Q16.word("x^4")
    assert all(check_condition_2(V4, M) is None for M in index2_subgroups(V4))
    assert check_condition_2(D4, D4_X) is None


def test_condition3_examples():
    R = SD16.group
    w = check_condition_3(R, SD16_D4)
    assert w is not None and w.condition == COND3
    assert w.a == SD16.word("a b") and w.m == SD16.word("a^2")
    assert check_condition_3(R, SD16_Q8) is None
    assert check_condition_3(C4, C4_M) is None


def test_status_examples():
    assert obstruction_status(Q8, Q8_I).condition == COND1
    assert all(not obstruction_status(E8, M).obstructed for M in index2_subgroups(E8))
    assert obstruction_status(Q16.group, Q16_Q8).condition == COND2
    s = obstruction_status(SD16.group, SD16_D4)
    assert s.condition == COND2 and COND3 in s.also_holds


def test_requires_index2():
    with pytest.raises(GroupValidationError):
        check_condition_1(C4, Subgroup(C4, (0,)))


def test_builder1_examples():
    phi = build_automorphism_cond1(C4, C4_M)
    assert phi.image == C4.inv
    phi = build_automorphism_cond1(Q8, Q8_I)
    assert not phi.is_identity and all(phi(g) == Q8.inv[g] for g in Q8_I.complement())
    with pytest.raises(IdentityResultError):
        build_automorphism_cond1(D4, D4_X)
    with pytest.raises(ConditionNotMetError):
        build_automorphism_cond1(Q16.group, Q16_Q8)


def test_builder2_examples():
    R = Q16.group
    w = check_condition_2(R, Q16_Q8)
    phi = build_automorphism_cond2(R, Q16_Q8, w)
    assert _half_inverting(R, Q16_Q8, phi)
    am = R.mul(w.a, w.m)
    Zam = {R.mul(z, am) for z in w.Z}
    Za = {R.mul(z, w.a) for z in w.Z}
    assert Zam <= phi.fixed and Za <= phi.inverted
    # a witness whose a squares to 1 is refused
    x, y = D4.generators
    klein = subgroup_generated(D4, [D4.mul(x, x), y])
    bad = dataclasses.replace(w, Z=subgroup_generated(D4, [D4.mul(x, x)]), a=D4.mul(x, y))
    with pytest.raises(ConditionNotMetError):
        build_automorphism_cond2(D4, klein, bad)
    with pytest.raises(ConditionNotMetError):
        build_automorphism_cond2(Q8, Q8_I, dataclasses.replace(w, Z=Subgroup(Q8, (0,)), a=Q8.generators[1]))


def test_builder3_examples():
    R = SD16.group
    w = check_condition_3(R, SD16_D4)
    phi = build_automorphism_cond3(R, SD16_D4, w)
    assert _half_inverting(R, SD16_D4, phi)
    Z = center_of(SD16_D4)
    Za = {R.mul(z, w.a) for z in Z}
    for m in coset_representatives(SD16_D4, Z)[1:]:
        for z in Z:
            g = R.product(z, m, w.a)
            assert g not in Za and phi(g) == R.inv[g]
            if phi(g) == g:
                assert R.orders[g] == 2
    a8 = next(g for g in SD16_D4.complement() if R.orders[g] == 8)
    with pytest.raises(ConditionNotMetError):
        build_automorphism_cond3(R, SD16_D4, dataclasses.replace(w, a=a8))
    # o(a) = 2
    x, y = D4.generators
    klein = subgroup_generated(D4, [D4.mul(x, x), y])
    with pytest.raises(ConditionNotMetError):
        build_automorphism_cond3(D4, klein, dataclasses.replace(w, a=D4.mul(x, y)))


def test_build_automorphism_dispatch():
    with pytest.raises(ConditionNotMetError):
        build_automorphism(E8, index2_subgroups(E8)[0])
    assert build_automorphism(C4, C4_M).image == C4.inv


def test_equivalence_examples():
    assert theorem11_equivalence(C4, C4_M)
    assert theorem11_equivalence(D4, D4_X)


PAIRS = [(e, i) for e, i in cat.catalog_pairs(16)]


@pytest.mark.parametrize("entry,i", PAIRS, ids=[e.pair_label(i) for e, i in PAIRS])
def test_witness_invariants_and_builders(entry, i):
    R, M = entry.group, entry.subgroups()[i]
    inv = R.inv
    w2 = check_condition_2(R, M)
    if w2 is not None:
        Z, a = w2.Z, w2.a
        a2 = R.mul(a, a)
        assert Z.is_abelian and M.order == 2 * Z.order and Z.is_subgroup_of(M)
        assert a not in M and a2 != 0 and a2 in Z and a2 in center(R)
        assert all(R.conj(z, a) == inv[z] for z in Z)
        assert _half_inverting(R, M, build_automorphism_cond2(R, M, w2))
    w3 = check_condition_3(R, M)
    if w3 is not None:
        Z, a, m = w3.Z, w3.a, w3.m
        assert M.order == 4 * Z.order and Z.members == center_of(M).members
        assert a not in M and R.orders[a] == 4
        assert list(derived_subgroup_of(M).members) == closure(R, [R.mul(a, a)])
        assert all(R.conj(z, a) == inv[z] for z in Z)
        assert m in M and m not in Z and R.orders[R.mul(a, m)] != 2
        assert _half_inverting(R, M, build_automorphism_cond3(R, M, w3))
    if check_condition_1(R, M):
        assert _half_inverting(R, M, build_automorphism_cond1(R, M))
    status = obstruction_status(R, M)
    assert status.obstructed == (find_half_inverting_automorphism(R, M) is not None)
    held = [c for c, ok in ((COND1, check_condition_1(R, M)), (COND2, w2 is not None), (COND3, w3 is not None)) if ok]
    assert [status.condition, *status.also_holds] == (held or [None])
    assert status.to_json()["condition"] == status.condition
