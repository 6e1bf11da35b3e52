import random

import pytest

from conftest import make_instance
from tuicp.codes import (
    TwoSenderCode,
    case2e_length_bits,
    code_from_coloring,
    construct_case2e_code,
    single_sender_code,
    slice_bits,
    verify_decodability,
    xor_zero_pad,
)
from tuicp.coloring import TwoSenderColoring, optimal_two_sender_search
from tuicp.confusion import ConfusionGraph
from tuicp.errors import InputError, PreconditionError
from tuicp.graphs import Digraph
from tuicp.model import CaseLabel, InteractionDigraph, build_fully_participated, generate_case_instance, random_instance


def cycle3():
    return generate_case_instance(CaseLabel.II_E, (1, 1, 2), "empty", 0)


def test_xor_zero_pad():
    assert xor_zero_pad("1010", "110") == "0110"
    assert xor_zero_pad("", "101") == "101"
    assert xor_zero_pad("11", "11") == "00"
    with pytest.raises(InputError):
        xor_zero_pad("12", "0")


def test_slice_bits():
    assert slice_bits("1010", 2, 4) == "010"
    assert slice_bits("0110", 3, 3) == "1"
    with pytest.raises(InputError):
        slice_bits("0110", 0, 2)
    with pytest.raises(InputError):
        slice_bits("0110", 3, 5)
    with pytest.raises(InputError):
        slice_bits("0110", 3, 2)


def test_code_from_coloring_widths():
    col = TwoSenderColoring(1, 1, 1, 1, [0, 0, 0, 0], [0, 1, 2, 0])
    code = code_from_coloring(col)
    assert (code.p1, code.p2) == (0, 2)
    assert code.enc2 == ("00", "01", "10", "00")
    assert code.rate == 2


def test_code_validation():
    with pytest.raises(InputError):
        TwoSenderCode(1, 1, 1, 1, ("0",) * 3, ("0",) * 4)
    with pytest.raises(InputError):
        TwoSenderCode(1, 1, 1, 1, ("0", "1", "00", "1"), ("0",) * 4)


def test_example2_code_decodes(example2):
    cg = ConfusionGraph(example2)
    code = code_from_coloring(TwoSenderColoring(1, 1, 1, 1, [1, 0, 0, 1], [1, 0, 0, 1]))
    assert verify_decodability(code, example2)
    assert code.encode(cg, 0b000) == ("1", "1")
    assert code.transmit(cg, 0b011) == "01"


def test_collapsed_code_fails(example2):
    code = TwoSenderCode(1, 1, 1, 1, ("0",) * 4, ("1", "0", "0", "1"))
    check = verify_decodability(code, example2)
    assert not check and check.receiver == 1
    x, y = check.pair
    assert (x ^ y) & 0b100


def test_explicit_decoding_chain(example2):
    # receiver 1 knows x2; from the pair it recovers x1
    cg = ConfusionGraph(example2)
    code = code_from_coloring(TwoSenderColoring(1, 1, 1, 1, [1, 0, 0, 1], [1, 0, 0, 1]))
    for x in range(8):
        x1, x2, x3 = (x >> 2) & 1, (x >> 1) & 1, x & 1
        c1, c2 = code.encode(cg, x)
        got_x3 = x2 if c2 == "1" else 1 - x2
        got_x1 = got_x3 if c1 == "1" else 1 - got_x3
        assert (got_x1, got_x3) == (x1, x3)


def test_decodable_iff_optimal_valid():
    rng = random.Random(7)
    for _ in range(20):
        inst = random_instance(rng, m_max=3)
        code = code_from_coloring(optimal_two_sender_search(inst).coloring)
        assert verify_decodability(code, inst)


def test_perturbing_enc1_breaks_decoding(example2):
    base = code_from_coloring(TwoSenderColoring(1, 1, 1, 1, [1, 0, 0, 1], [1, 0, 0, 1]))
    for cell in range(4):
        enc1 = list(base.enc1)
        enc1[cell] = "1" if enc1[cell] == "0" else "0"
        enc1[(cell + 2) % 4] = enc1[cell]  # same x3, both x1 values share a word
        code = TwoSenderCode(1, 1, 1, 1, enc1, base.enc2)
        assert not verify_decodability(code, example2)


def test_dimension_mismatch(example2):
    code = TwoSenderCode(2, 0, 1, 1, ("0",) * 8, ("",) * 2)
    with pytest.raises(InputError):
        verify_decodability(code, example2)


def test_single_sender_code():
    d = Digraph(3, [(0, 1), (1, 0), (1, 2), (2, 0)])
    code = single_sender_code(d)
    assert code.length == 2
    inst, two = code.as_two_sender()
    assert verify_decodability(two, inst)


def test_case2e_three_cycle():
    inst = cycle3()
    res = construct_case2e_code(inst)
    assert res.lengths == (1, 1, 2) and res.branch == 2
    assert res.total_bits == 3 == case2e_length_bits(*res.lengths)
    assert (res.code.p1, res.code.p2) == (2, 1)
    assert verify_decodability(res.code, inst)


def test_case2e_tail_owner():
    inst = cycle3()
    res = construct_case2e_code(inst, tail_owner=2)
    assert (res.code.p1, res.code.p2) == (1, 2)
    assert verify_decodability(res.code, inst)
    with pytest.raises(InputError):
        construct_case2e_code(inst, tail_owner=3)


def test_case2e_branches_random():
    rng = random.Random(12)
    for trial in range(20):
        sizes = tuple(rng.randint(1, 2) for _ in range(3))
        inst = generate_case_instance(CaseLabel.II_E, sizes, rng.choice(("empty", "clique", "random")), trial)
        res = construct_case2e_code(inst)
        assert res.total_bits == case2e_length_bits(*res.lengths)
        assert verify_decodability(res.code, inst)


def test_case2e_preconditions(example1):
    with pytest.raises(PreconditionError):
        construct_case2e_code(example1)
    one = Digraph(1)
    inst = build_fully_participated(one, one, one, InteractionDigraph.from_edges([(1, 2), (2, 3), (3, 1)]), 1)
    wrong = single_sender_code(Digraph(2))
    with pytest.raises(PreconditionError):
        construct_case2e_code(inst, c1=wrong)
    partial = make_instance(4, [(1, 2), (2, 3), (3, 1)], [1], [2], [3, 4])
    with pytest.raises(PreconditionError):
        construct_case2e_code(partial)
