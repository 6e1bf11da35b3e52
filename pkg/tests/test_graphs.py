import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_chromatic
from tuicp.config import Caps
from tuicp.confusion import single_sender_graph
from tuicp.errors import InputError, ResourceLimitError
from tuicp.graphs import (
    Digraph,
    UGraph,
    are_isomorphic,
    ceil_log2,
    chromatic_number,
    clique_number_lb,
    cycle_vertices,
    disj_product,
    induced_subdigraph,
    is_acyclic,
    lex_product,
    max_acyclic_induced,
)

EX2 = Digraph(3, [(0, 1), (1, 0), (1, 2), (2, 0)])


@st.composite
def ugraphs(draw, n_max=6):
    n = draw(st.integers(1, n_max))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return UGraph.from_edges(n, [p for p, k in zip(pairs, keep) if k])


def path3():
    return UGraph.from_edges(3, [(0, 1), (1, 2)])


def test_ceil_log2():
    assert [ceil_log2(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


def test_digraph_rejects_bad_edges():
    with pytest.raises(InputError):
        Digraph(2, [(0, 0)])
    with pytest.raises(InputError):
        Digraph(2, [(0, 2)])


def test_induced_subdigraph_example1():
    d = Digraph(5, [(0, 1), (0, 4), (1, 0), (2, 3), (2, 4), (3, 2), (4, 0), (4, 1)])
    sub = induced_subdigraph(d, [2, 3])
    assert sub.n == 2 and set(sub.edges) == {(0, 1), (1, 0)}
    assert induced_subdigraph(d, range(5)).edges == d.edges
    with pytest.raises(InputError):
        induced_subdigraph(d, [7])


def test_induced_subdigraph_matches_filter():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 6)
        d = Digraph(n, [e for e in itertools.permutations(range(n), 2) if rng.random() < 0.4])
        vs = sorted(rng.sample(range(n), rng.randint(1, n)))
        pos = {v: i for i, v in enumerate(vs)}
        want = {(pos[u], pos[v]) for u, v in d.edges if u in pos and v in pos}
        assert set(induced_subdigraph(d, vs).edges) == want


def test_cycles():
    dag = Digraph(3, [(0, 1), (2, 1)])
    assert is_acyclic(dag) and cycle_vertices(dag) == frozenset()
    assert not is_acyclic(EX2) and cycle_vertices(EX2) == {0, 1, 2}
    tri = Digraph(3, [(0, 1), (1, 2), (2, 0)])
    assert cycle_vertices(tri) == {0, 1, 2}
    tail = Digraph(3, [(0, 1), (1, 0), (1, 2)])
    assert cycle_vertices(tail) == {0, 1}


def test_lex_product_fig1():
    g1, g2 = path3(), UGraph.complete(3)
    lex = lex_product(g1, g2)
    vid = lambda a, b: (a - 1) * 3 + (b - 1)  # noqa: E731
    assert lex.has_edge(vid(1, 1), vid(1, 2))
    assert not any(lex.has_edge(vid(1, x), vid(3, y)) for x in (1, 2, 3) for y in (1, 2, 3))
    for (a, b), (c, d) in itertools.combinations(itertools.product(range(3), range(3)), 2):
        want = g1.has_edge(a, c) or (a == c and g2.has_edge(b, d))
        assert lex.has_edge(a * 3 + b, c * 3 + d) == want


def test_disj_product():
    k2 = UGraph.complete(2)
    assert disj_product(k2, k2).edges == UGraph.complete(4).edges
    g1, g2 = path3(), UGraph.from_edges(3, [(0, 1)])
    disj = disj_product(g1, g2)
    assert disj.has_edge(0 * 3 + 0, 2 * 3 + 1)  # (1,1)-(3,2): second coordinates adjacent


@settings(max_examples=50, deadline=None)
@given(ugraphs(), ugraphs())
def test_lex_subset_of_disj(g1, g2):
    assert lex_product(g1, g2).edges <= disj_product(g1, g2).edges


def test_chromatic_small():
    assert chromatic_number(UGraph.complete(3))[0] == 3
    c5 = UGraph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert chromatic_number(c5)[0] == 3
    assert chromatic_number(single_sender_graph(EX2))[0] == 4
    assert chromatic_number(UGraph.empty(0))[0] == 0


@settings(max_examples=60, deadline=None)
@given(ugraphs())
def test_chromatic_matches_brute_force(g):
    chi, colors = chromatic_number(g)
    assert chi == brute_chromatic(g.n, sorted(g.edges))
    assert g.is_proper_coloring(colors) and max(colors) + 1 == chi


def test_chromatic_cap():
    with pytest.raises(ResourceLimitError) as exc:
        chromatic_number(UGraph.empty(10), Caps(chromatic_vertices=5))
    assert exc.value.cap == 5


def test_clique_number():
    assert clique_number_lb(UGraph.complete(4)) == 4
    assert clique_number_lb(UGraph.from_edges(4, [(0, 2), (1, 3), (0, 3)])) == 2
    g = single_sender_graph(EX2)
    assert clique_number_lb(g) <= 4
    assert clique_number_lb(g) == max(len(c) for c in nx.find_cliques(nx.Graph(list(g.edges))))


@settings(max_examples=40, deadline=None)
@given(ugraphs())
def test_clique_below_chromatic(g):
    assert clique_number_lb(g) <= chromatic_number(g)[0]


def test_isomorphism_basic():
    g = path3()
    ok, f = are_isomorphic(g, g)
    assert ok and list(f) == [0, 1, 2]
    assert not are_isomorphic(UGraph.complete(3), path3())[0]


@settings(max_examples=60, deadline=None)
@given(ugraphs(7), st.randoms(use_true_random=False))
def test_isomorphism_relabel_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    ok, f = are_isomorphic(g, h)
    assert ok
    assert all(h.has_edge(f[u], f[v]) for u, v in g.edges)
    assert are_isomorphic(h, g)[0]


@settings(max_examples=60, deadline=None)
@given(ugraphs(6), ugraphs(6))
def test_isomorphism_matches_networkx(g1, g2):
    def nxg(g):
        x = nx.Graph()
        x.add_nodes_from(range(g.n))
        x.add_edges_from(g.edges)
        return x

    assert are_isomorphic(g1, g2)[0] == nx.is_isomorphic(nxg(g1), nxg(g2))


def test_max_acyclic_induced():
    assert max_acyclic_induced(Digraph(4, [(0, 1), (1, 2), (0, 3)])) == 4
    assert max_acyclic_induced(Digraph(2, [(0, 1), (1, 0)])) == 1
    assert max_acyclic_induced(EX2) == 2
    with pytest.raises(ResourceLimitError):
        max_acyclic_induced(Digraph(21))


def test_dot_export():
    assert "0 -> 1;" in Digraph(2, [(0, 1)]).to_dot()
    assert "0 -- 1;" in UGraph.complete(2).to_dot()
