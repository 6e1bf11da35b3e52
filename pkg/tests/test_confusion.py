import itertools
import random

import pytest

from conftest import brute_confusable, make_instance, realizations
from tuicp.config import Caps
from tuicp.confusion import (
    AXES,
    ConfusionGraph,
    blocks,
    build,
    confusable,
    single_sender_graph,
    variant_product_graph,
    verify_block_isomorphism,
    verify_jblock_product_iso,
)
from tuicp.errors import InputError, PreconditionError, ResourceLimitError
from tuicp.graphs import Digraph, UGraph, are_isomorphic, chromatic_number
from tuicp.model import build_fully_participated, pinned_case1_digraphs, random_instance

FIG4_EDGES = {
    ("010", "011"), ("110", "111"), ("000", "001"), ("100", "101"),
    ("000", "100"), ("001", "101"), ("010", "110"), ("011", "111"),
    ("000", "010"), ("100", "110"), ("101", "111"), ("001", "011"),
    ("010", "111"), ("000", "101"), ("110", "011"), ("100", "001"),
    ("010", "001"), ("110", "101"), ("000", "011"), ("100", "111"),
}  # fmt: skip


def pinned(variant, sizes=(1, 1, 1), kinds=("empty",) * 3, t=1):
    subs = [Digraph(n) if k == "empty" else Digraph(n, itertools.permutations(range(n), 2)) for n, k in zip(sizes, kinds)]
    return build_fully_participated(*subs, pinned_case1_digraphs()[variant], t)


def test_confusable_example2(example2):
    assert confusable("010", "111", example2) == 1
    assert confusable("010", "010", example2) is None
    with pytest.raises(InputError):
        confusable("01", "111", example2)


def test_example2_edge_set_matches_figure(example2):
    cg = build(example2)
    assert cg.n_vertices == 8
    drawn = {frozenset((int(a, 2), int(b, 2))) for a, b in FIG4_EDGES}
    assert {frozenset(e) for e in cg.graph.edges} == drawn
    assert cg.graph.num_edges == len(FIG4_EDGES) == 20


def test_edges_match_definition():
    rng = random.Random(1)
    for _ in range(30):
        inst = random_instance(rng, m_max=3, t=rng.choice((1, 2)))
        cg = build(inst)
        reals = realizations(inst)
        for x, y in itertools.combinations(range(len(reals)), 2):
            want = brute_confusable(reals[x], reals[y], inst)
            assert cg.confusable(x, y) == want
            assert cg.graph.has_edge(x, y) == (want is not None)


def test_small_graphs():
    k2 = build(make_instance(1, [], [], [], [1])).graph
    assert k2.edges == UGraph.complete(2).edges
    mutual = build(make_instance(2, [(1, 2), (2, 1)], [], [], [1, 2])).graph
    assert mutual.n == 4 and chromatic_number(mutual)[0] == 2


def test_caps(example2):
    big = make_instance(15, [], [], [], range(1, 16))
    with pytest.raises(ResourceLimitError):
        build(big)
    cg = ConfusionGraph(big)
    assert cg.confusable(0, 1) == 15
    with pytest.raises(ResourceLimitError):
        ConfusionGraph(example2, Caps(predicate_mt=2))


def test_labels_round_trip():
    inst = make_instance(4, [], [3], [1, 4], [2], t=2)
    cg = ConfusionGraph(inst)
    for x in range(cg.n_vertices):
        assert cg.vertex(*cg.label(x)) == x


def test_blocks_example2(example2):
    cg = build(example2)
    dec = blocks(cg, "J")
    assert [len(g) for g in dec.groups] == [4, 4]
    for axis in AXES:
        assert verify_block_isomorphism(cg, axis)
    j0, j1 = dec.induced(cg, 0), dec.induced(cg, 1)
    assert are_isomorphic(j0, j1)[0]
    with pytest.raises(InputError):
        blocks(cg, "Q")


def test_degenerate_axis():
    cg = build(make_instance(2, [], [1], [], [2]))
    dec = blocks(cg, "J")
    assert len(dec.groups) == 1 and len(dec.groups[0]) == 4
    assert verify_block_isomorphism(cg, "J")
    assert list(dec.inter_block_edges(cg)) == []


def test_block_sizes_random():
    rng = random.Random(4)
    for _ in range(50):
        inst = random_instance(rng, m_max=4, t=rng.choice((1, 2)))
        cg = build(inst)
        for i, axis in enumerate(AXES):
            m_axis = inst.part.sizes[i]
            dec = blocks(cg, axis)
            assert len(dec.groups) == 1 << (inst.t * m_axis)
            assert {len(g) for g in dec.groups} == {1 << (inst.t * (inst.m - m_axis))}


def test_lemma6_random_sweep():
    rng = random.Random(8)
    for _ in range(40):
        inst = random_instance(rng, m_max=4, t=rng.choice((1, 2)))
        cg = build(inst)
        for axis in AXES:
            assert verify_block_isomorphism(cg, axis)


def test_jblock_products():
    assert verify_jblock_product_iso(pinned(16), 16)
    assert variant_product_graph(pinned(16), 16).edges == UGraph.complete(4).edges
    assert verify_jblock_product_iso(pinned(18), "H18")
    assert verify_jblock_product_iso(pinned(23), 23)
    inst = pinned(16, sizes=(2, 1, 1))
    product = variant_product_graph(inst, 16)
    assert product.n == 8 and verify_jblock_product_iso(inst, 16)
    with pytest.raises(PreconditionError):
        verify_jblock_product_iso(pinned(18), 16)
    with pytest.raises(PreconditionError):
        verify_jblock_product_iso(pinned(20), 20)


def test_inter_jblock_edges_follow_d2():
    inst = pinned(16, sizes=(1, 2, 1))
    cg = build(inst)
    g2 = single_sender_graph(inst.sub_digraph(2))
    edges = list(blocks(cg, "J").inter_block_edges(cg))
    assert edges
    for x, y in edges:
        j, j2 = cg.part_bits(x, 2), cg.part_bits(y, 2)
        assert j != j2 and g2.has_edge(j, j2)


def test_dot_labels(example2):
    dot = build(example2).to_dot()
    assert '2 [label="(0,1,0)"];' in dot and "2 -- 7;" in dot
