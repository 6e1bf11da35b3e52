import itertools
import random
from fractions import Fraction

import pytest

from conftest import brute_two_sender_bits, make_instance
from tuicp.codes import code_from_coloring, verify_decodability
from tuicp.coloring import (
    TwoSenderColoring,
    achievable_case1,
    achievable_coloring_case1,
    coloring_from_pairs,
    conjecture_gap,
    lemma_pattern,
    optimal_two_sender_coloring,
    optimal_two_sender_search,
    validate_coloring,
)
from tuicp.confusion import build, single_sender_graph
from tuicp.errors import InputError, PreconditionError, ResourceLimitError, ValidationError
from tuicp.graphs import Digraph, ceil_log2, chromatic_number
from tuicp.model import build_fully_participated, pinned_case1_digraphs, random_instance

R, B = 1, 0

# Example 2 colouring: sender 1 RED iff x1 = x3, sender 2 RED iff x2 = x3
EX2_TABLE1 = [R, B, B, R]  # cells (x1, x3) = 00, 01, 10, 11
EX2_TABLE2 = [R, B, B, R]  # cells (x2, x3)


def singleton(variant, t=1):
    one = Digraph(1)
    return build_fully_participated(one, one, one, pinned_case1_digraphs()[variant], t)


def test_example2_coloring_valid(example2):
    cg = build(example2)
    col = TwoSenderColoring(1, 1, 1, 1, EX2_TABLE1, EX2_TABLE2)
    assert validate_coloring(col, cg)
    assert col.sizes == (2, 2) and col.rate == 2


def test_recoloring_creates_violation(example2):
    cg = build(example2)
    x, y = int("010", 2), int("111", 2)
    t1, t2 = list(EX2_TABLE1), list(EX2_TABLE2)
    t1[cg.cell1(y)] = t1[cg.cell1(x)]
    t2[cg.cell2(y)] = t2[cg.cell2(x)]
    check = validate_coloring(TwoSenderColoring(1, 1, 1, 1, t1, t2), cg)
    assert not check
    hit = [v for v in check.violations if (v.x, v.y) == (x, y)]
    assert hit and hit[0].receiver == 1
    # the pair differs in i and k, so it falls under the differing-k pattern
    assert hit[0].pattern == lemma_pattern(cg, x, y) == "lemma4"


def test_lemma_patterns(example2):
    cg = build(example2)
    assert lemma_pattern(cg, 0b000, 0b100) == "lemma1"
    assert lemma_pattern(cg, 0b000, 0b010) == "lemma2"
    assert lemma_pattern(cg, 0b000, 0b110) == "lemma3"
    assert lemma_pattern(cg, 0b000, 0b001) == "lemma4"


def test_constant_coloring_fails(example2):
    col = TwoSenderColoring(1, 1, 1, 1, [0] * 4, [0] * 4)
    assert not validate_coloring(col, build(example2))


def test_domain_mismatch(example2):
    with pytest.raises(InputError):
        validate_coloring(TwoSenderColoring(2, 0, 1, 1, [0] * 8, [0] * 2), build(example2))
    with pytest.raises(InputError):
        TwoSenderColoring(1, 1, 1, 1, [0, 2, 0, 0], [0] * 4)  # colour 1 unused


def test_pairs_must_factor(example2):
    cg = build(example2)
    good = [(EX2_TABLE1[cg.cell1(x)], EX2_TABLE2[cg.cell2(x)]) for x in range(8)]
    assert validate_coloring(coloring_from_pairs(cg, good), cg)
    bad = list(good)
    bad[0] = (1 - bad[0][0], bad[0][1])
    with pytest.raises(ValidationError):
        coloring_from_pairs(cg, bad)


def test_json_round_trip(example2):
    col, _ = optimal_two_sender_coloring(example2)
    assert TwoSenderColoring.from_json(col.to_json()) == col
    assert set(col.to_dict()["table1"]) == {"0,0", "0,1", "1,0", "1,1"}


def test_optimal_example2(example2):
    res = optimal_two_sender_search(example2)
    assert res.beta == 2 and res.coloring.sizes == (2, 2)
    assert validate_coloring(res.coloring, build(example2))


def test_optimal_no_side_information():
    inst = make_instance(2, [], [1], [2], [])
    res = optimal_two_sender_search(inst)
    assert res.budget == (2, 2) and res.beta == 2


def test_optimal_h16_singleton():
    col, beta = optimal_two_sender_coloring(singleton(16))
    assert beta == 3 == brute_two_sender_bits(singleton(16))


def test_optimal_matches_brute_force():
    rng = random.Random(21)
    for _ in range(25):
        inst = random_instance(rng, m_max=3)
        res = optimal_two_sender_search(inst)
        assert res.beta * inst.t == brute_two_sender_bits(inst)
        assert validate_coloring(res.coloring, build(inst))


def test_optimal_is_deterministic():
    inst = random_instance(random.Random(5), m_max=4)
    assert optimal_two_sender_search(inst) == optimal_two_sender_search(inst)


def test_relaxation_and_upper_bound():
    rng = random.Random(13)
    for _ in range(30):
        inst = random_instance(rng, m_max=4)
        beta = optimal_two_sender_search(inst).beta
        chi = chromatic_number(single_sender_graph(inst.d))[0]
        assert ceil_log2(chi) <= beta * inst.t
        m1, m2, m3 = inst.part.sizes
        injective = TwoSenderColoring(m1, m2, m3, 1, range(1 << (m1 + m3)), range(1 << (m2 + m3)))
        assert beta <= injective.rate


def test_exact_cap():
    with pytest.raises(ResourceLimitError):
        optimal_two_sender_search(make_instance(13, [], [1], [2], range(3, 14)))


def test_pair_pattern_on_i_edges():
    rng = random.Random(17)
    for _ in range(20):
        inst = random_instance(rng, m_max=4)
        cg = build(inst)
        col = optimal_two_sender_search(inst).coloring
        for x, y in cg.edges():
            (_, j, k), (_, j2, k2) = cg.label(x), cg.label(y)
            if (j, k) == (j2, k2):
                (a, b), (a2, b2) = col.pair(cg, x), col.pair(cg, y)
                assert a != a2 and b == b2


@pytest.mark.parametrize("variant", [16, 18, 23, 20, 21, 25])
def test_achievable_singletons(variant):
    inst = singleton(variant)
    col, p_t = achievable_coloring_case1(inst, variant)
    assert p_t == 3
    assert validate_coloring(col, build(inst))


def test_achievable_product_chromatic():
    ach = achievable_case1(singleton(16), 16)
    assert (ach.product_chi, ach.d2_chi) == (4, 2)
    assert achievable_case1(singleton(18), 18).product_chi == 4


def test_achievable_swap_relation():
    base = achievable_case1(singleton(16), 16)
    swapped = achievable_case1(singleton(20), 20)
    assert swapped.coloring == base.coloring.swapped()
    assert swapped.p_t == base.p_t


def test_achievable_wrong_variant():
    with pytest.raises(PreconditionError):
        achievable_case1(singleton(16), 18)
    with pytest.raises(PreconditionError):
        achievable_case1(singleton(16), 17)


def test_conjecture_gap_singleton():
    gap = conjecture_gap(singleton(16))
    assert gap.eps_achievable == 0 and gap.eps_exact == 0 and gap.variant == 16


def test_achievable_epsilon_sweep():
    for variant in (16, 18, 23):
        for sizes in itertools.product((1, 2), repeat=3):
            for kinds in itertools.product(("empty", "clique"), repeat=3):
                subs = [Digraph(n, itertools.permutations(range(n), 2) if k == "clique" else ()) for n, k in zip(sizes, kinds)]
                inst = build_fully_participated(*subs, pinned_case1_digraphs()[variant], 1)
                gap = conjecture_gap(inst)
                assert gap.eps_achievable in (-1, 0)


def test_rates_are_fractions(example2):
    _, beta = optimal_two_sender_coloring(example2.with_t(2))
    assert isinstance(beta, Fraction) and beta * 2 == 4


def test_random_tables_decodable_iff_valid():
    rng = random.Random(31)
    for _ in range(40):
        inst = random_instance(rng, m_max=3)
        m1, m2, m3 = inst.part.sizes
        n1, n2 = 1 << (m1 + m3), 1 << (m2 + m3)
        raw1 = [rng.randrange(2) for _ in range(n1)]
        raw2 = [rng.randrange(2) for _ in range(n2)]
        ids1, ids2 = {}, {}
        col = TwoSenderColoring(
            m1, m2, m3, 1, [ids1.setdefault(c, len(ids1)) for c in raw1], [ids2.setdefault(c, len(ids2)) for c in raw2]
        )
        assert bool(validate_coloring(col, build(inst))) == bool(verify_decodability(code_from_coloring(col), inst))
