import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import digraph_aut_backtrack, digraph_aut_perms_numpy
from bigrr import catalog as cat
from bigrr.cayley import ConnectionSet, build_cayley_digraph, generates_whole_group
from bigrr.construct import build_group, cyclic
from bigrr.errors import SizeExceededError
from bigrr.graphaut import (
    Digraph,
    OrderedPartition,
    automorphism_group_order,
    automorphism_report,
    color_refine,
    has_trivial_stabilizer_compiled,
    is_regular_representation,
    stabilizer_order,
)
from bigrr.groups import index2_subgroups, trivial


def _graph(n, arcs):
    out = [[] for _ in range(n)]
    for v, u in arcs:
        out[v].append(u)
    return Digraph(n, out)


DI4 = _graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
UN4 = _graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 0), (2, 1), (3, 2), (0, 3)])
EMPTY4 = _graph(4, [])
K2 = _graph(2, [(0, 1), (1, 0)])


def test_refine_examples():
    unit = OrderedPartition.unit(4)
    assert color_refine(DI4, unit) == unit
    path = _graph(3, [(0, 1), (1, 2)])
    assert color_refine(path, OrderedPartition.unit(3)).is_discrete
    disc = OrderedPartition.discrete([2, 0, 3, 1])
    assert color_refine(DI4, disc) == disc


def test_stabilizer_examples():
    assert [stabilizer_order(DI4, v).stabilizer_order for v in range(4)] == [1] * 4
    assert [stabilizer_order(UN4, v).stabilizer_order for v in range(4)] == [2] * 4
    assert stabilizer_order(EMPTY4, 0).stabilizer_order == 6
    rep = stabilizer_order(UN4, 0)
    assert rep.witness is not None and rep.witness[0] == 0 and list(rep.witness) != [0, 1, 2, 3]


def test_group_order_examples():
    assert automorphism_group_order(K2) == 2
    assert automorphism_group_order(DI4) == 4
    assert automorphism_group_order(UN4) == 8


def test_regular_representation_examples():
    C4 = build_group(cyclic(4))
    M = index2_subgroups(C4)[0]
    for engine in ("python", "compiled"):
        assert is_regular_representation(C4, M, [1], engine=engine)
        assert not is_regular_representation(C4, M, [1, 3], engine=engine)
    C2 = build_group(cyclic(2))
    assert is_regular_representation(C2, trivial(C2), [1])
    with pytest.raises(ValueError):
        is_regular_representation(C4, M, [1], engine="nauty")


def test_partition_validation():
    with pytest.raises(ValueError):
        OrderedPartition(((0, 1), (1, 2)))
    with pytest.raises(ValueError):
        OrderedPartition(((0,), ()))
    with pytest.raises(ValueError):
        OrderedPartition(((0, 2),))


def test_size_cap():
    big = Digraph(129, [[] for _ in range(129)])
    with pytest.raises(SizeExceededError):
        stabilizer_order(big, 0)


def _random_digraph(rng: random.Random, n: int) -> tuple[Digraph, set]:
    p = rng.choice([0.15, 0.3, 0.5, 0.7])
    arcs = {(v, u) for v in range(n) for u in range(n) if v != u and rng.random() < p}
    if rng.random() < 0.2:
        arcs |= {(v, v) for v in range(n) if rng.random() < 0.3}
    return _graph(n, arcs), arcs


def _check_against_brute_force(n, arcs, g):
    perms = digraph_aut_perms_numpy(n, arcs)
    v = 0
    assert automorphism_group_order(g) == len(perms)
    assert stabilizer_order(g, v).stabilizer_order == int((perms[:, v] == v).sum())
    rep = automorphism_report(g, v)
    assert rep.group_order == len(perms)
    assert rep.stabilizer_order == int((perms[:, v] == v).sum())
    assert has_trivial_stabilizer_compiled(g) == (rep.stabilizer_order == 1)
    if rep.witness is not None:
        assert rep.witness[v] == v and tuple(rep.witness) in {tuple(p) for p in perms}


def test_random_digraphs_match_permutation_scan():
    rng = random.Random(20240601)
    for _ in range(200):
        n = rng.randint(1, 8)
        g, arcs = _random_digraph(rng, n)
        _check_against_brute_force(n, arcs, g)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))))
def test_hypothesis_digraphs(data):
    n, arcs = data
    _check_against_brute_force(n, arcs, _graph(n, arcs))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))))
def test_refinement_idempotent_and_finer(data):
    n, arcs = data
    g = _graph(n, arcs)
    p = color_refine(g, OrderedPartition.unit(n))
    assert color_refine(g, p) == p
    # equitable: same counts into every cell
    for cell in p.cells:
        for other in p.cells:
            oc = {sum(1 for u in g.out[v] if u in other) for v in cell}
            ic = {sum(1 for u in g.inn[v] if u in other) for v in cell}
            assert len(oc) == 1 and len(ic) == 1
    # refining a finer start never merges its cells
    start = OrderedPartition(((0,), tuple(range(1, n)))) if n > 1 else OrderedPartition.unit(1)
    q = color_refine(g, start)
    assert any(c == (0,) for c in q.cells)


def test_larger_digraphs_against_backtracking():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(9, 12)
        g, arcs = _random_digraph(rng, n)
        assert stabilizer_order(g, 0).stabilizer_order == digraph_aut_backtrack(n, arcs, fix=0)


CAYLEY = cat.catalog_pairs(32)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CAYLEY), st.data())
def test_cayley_orbit_stabilizer(pair, data):
    entry, i = pair
    R, M = entry.group, entry.subgroups()[i]
    outside = M.complement()
    S = data.draw(st.lists(st.sampled_from(outside), unique=True))
    g = build_cayley_digraph(R, M, ConnectionSet.from_elements(R, M, S))
    rep = automorphism_report(g, 0)
    assert rep.group_order == R.order * stabilizer_order(g, 0).stabilizer_order
    regular = rep.stabilizer_order == 1
    assert is_regular_representation(R, M, S, engine="python") == regular
    assert is_regular_representation(R, M, S, engine="compiled") == regular


@pytest.mark.parametrize("entry", cat.catalog(16, min_order=4), ids=lambda e: e.key)
def test_regular_implies_generating(entry):
    R = entry.group
    for M in entry.subgroups():
        outside = M.complement()
        k = len(outside)
        for mask in range(1 << k):
            S = [outside[j] for j in range(k) if mask >> j & 1]
            if is_regular_representation(R, M, S):
                assert generates_whole_group(R, S)
