import json

import pytest

from oracles import isomorphic
from bigrr import catalog as cat
from bigrr.construct import (
    GroupSpec,
    abelian,
    build_group,
    cyclic,
    dicyclic,
    dihedral,
    direct,
    eval_word,
    gendihedral,
    semidirect,
    spec_order,
    table_file,
)
from bigrr.errors import InvalidSpecError
from bigrr.groups import format_cayley_table, is_generalized_dihedral_on, subgroup_generated


def test_cyclic4():
    G = build_group(cyclic(4))
    assert G.order == 4 and sorted(G.orders) == [1, 2, 4, 4]


def test_gendihedral_c3_is_d3():
    G = build_group(gendihedral(cyclic(3)))
    assert G.order == 6
    A = subgroup_generated(G, [G.generators[0]])
    assert A.order == 3
    assert sum(1 for g in A.complement() if G.orders[g] == 2) == 3
    assert is_generalized_dihedral_on(G, A)
    assert isomorphic(G, build_group(dihedral(3)))


def test_dicyclic2_is_q8():
    G = build_group(dicyclic(2))
    assert sorted(G.orders) == [1, 2, 4, 4, 4, 4, 4, 4]


@pytest.mark.parametrize(
    "spec",
    [
        cyclic(6),
        abelian(2, 4),
        dihedral(5),
        gendihedral(abelian(2, 2)),
        dicyclic(3),
        direct(dihedral(4), cyclic(2)),
        semidirect(abelian(2, 2), cyclic(3), [["b", "a b"]], ["a", "b"]),
    ],
)
def test_spec_json_round_trip(spec):
    obj = json.loads(json.dumps(spec.to_json()))
    back = GroupSpec.from_json(obj)
    assert back == spec
    G = build_group(back)
    assert G.order == spec_order(spec)
    assert build_group(spec).table == G.table


def test_semidirect_a4():
    G = build_group(semidirect(abelian(2, 2), cyclic(3), [["b", "a b"]], ["a", "b"]))
    assert G.order == 12
    assert sorted(G.orders).count(3) == 8 and sorted(G.orders).count(2) == 3


def test_semidirect_direct_when_action_trivial():
    G = build_group(semidirect(cyclic(3), cyclic(2), [["a"]], ["a"]))
    assert G.is_abelian and isomorphic(G, build_group(cyclic(6)))


@pytest.mark.parametrize(
    "obj",
    [
        [],
        {"cyclic": "4"},
        {"abelian": [2, "x"]},
        {"direct": [{"cyclic": 2}]},
        {"semidirect": {"normal": {"cyclic": 3}}},
        {"nonsense": 3},
        {"cyclic": 2, "dihedral": 3},
    ],
)
def test_bad_spec_json(obj):
    with pytest.raises(InvalidSpecError):
        GroupSpec.from_json(obj)


def test_non_homomorphic_action_rejected():
    # x -> x^2 in C3 has order 2, so C3 cannot act through it
    with pytest.raises(InvalidSpecError):
        build_group(semidirect(cyclic(3), cyclic(3), [["a^2"]], ["a"]))
    # x -> x^2 in C4 is not an automorphism at all
    with pytest.raises(InvalidSpecError):
        build_group(semidirect(cyclic(4), cyclic(2), [["a^2"]], ["a"]))


@pytest.mark.parametrize("spec", [cyclic(0), abelian(), dihedral(0), cyclic(5000), direct(cyclic(80), cyclic(80))])
def test_invalid_parameters(spec):
    with pytest.raises(InvalidSpecError):
        build_group(spec)


def test_table_spec(tmp_path):
    p = tmp_path / "d4.txt"
    p.write_text(format_cayley_table(build_group(dihedral(4))))
    G = build_group(table_file(p))
    assert G.order == 8 and spec_order(table_file(p)) == 8


def test_eval_word():
    G = build_group(dihedral(4))
    x, y = G.generators
    env = {"x": x, "y": y}
    assert eval_word(G, "x^2 y", env) == G.product(x, x, y)
    assert eval_word(G, "xy", env) == G.mul(x, y)
    assert eval_word(G, "x^-1", env) == G.inv[x]
    assert eval_word(G, "1", env) == 0
    with pytest.raises(InvalidSpecError):
        eval_word(G, "q", env)
    with pytest.raises(InvalidSpecError):
        eval_word(G, "x^", env)


def test_catalog_groups_pairwise_non_isomorphic():
    by_order: dict[int, list] = {}
    for e in cat.catalog(24):
        by_order.setdefault(e.order, []).append(e.group)
    for groups in by_order.values():
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                assert not isomorphic(groups[i], groups[j])
