"""Bit-level codes: zero-padded XOR, slicing, colouring codes and the
three-branch XOR construction for the II-E interaction digraphs.

Codewords are plain strings of ``'0'``/``'1'``, most significant bit first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .coloring import TwoSenderColoring
from .config import Caps, resolve
from .confusion import ConfusionGraph, optimal_single_sender, single_sender_instance
from .errors import InputError, PreconditionError, ResourceLimitError
from .graphs import Digraph, ceil_log2
from .model import CaseLabel, TuicpInstance, classify_case, interaction_digraph, is_fully_participated

Codeword = str


def _check_bits(c: str) -> str:
    if not isinstance(c, str) or set(c) - {"0", "1"}:
        raise InputError(f"codeword must be a string of 0/1, got {c!r}")
    return c


def xor_zero_pad(c1: Codeword, c2: Codeword) -> Codeword:
    """Bitwise XOR after padding the shorter word with trailing zeros."""
    _check_bits(c1)
    _check_bits(c2)
    n = max(len(c1), len(c2))
    a, b = c1.ljust(n, "0"), c2.ljust(n, "0")
    return "".join("1" if x != y else "0" for x, y in zip(a, b))


def slice_bits(c: Codeword, a: int, b: int) -> Codeword:
    """Positions ``a..b`` inclusive, counted from 1 at the most significant bit."""
    _check_bits(c)
    if not 1 <= a <= b <= len(c):
        raise InputError(f"slice [{a}:{b}] outside 1..{len(c)}")
    return c[a - 1 : b]


def _to_word(value: int, width: int) -> Codeword:
    return format(value, f"0{width}b") if width else ""


# ---------------------------------------------------------------- code types


@dataclass(frozen=True)
class TwoSenderCode:
    """Encoders indexed by sender cell: ``(b_P1 << t*m3) | b_P3`` and ``(b_P2 << t*m3) | b_P3``."""

    m1: int
    m2: int
    m3: int
    t: int
    enc1: tuple[str, ...]
    enc2: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "enc1", tuple(self.enc1))
        object.__setattr__(self, "enc2", tuple(self.enc2))
        for name, table, m_excl in (("enc1", self.enc1, self.m1), ("enc2", self.enc2, self.m2)):
            if len(table) != 1 << (self.t * (m_excl + self.m3)):
                raise InputError(f"{name} is not total over its cells")
            if len({len(_check_bits(w)) for w in table}) != 1:
                raise InputError(f"{name} codewords do not share one length")

    @property
    def p1(self) -> int:
        return len(self.enc1[0])

    @property
    def p2(self) -> int:
        return len(self.enc2[0])

    @property
    def rate(self) -> Fraction:
        return Fraction(self.p1 + self.p2, self.t)

    def encode(self, cg: ConfusionGraph, x: int) -> tuple[Codeword, Codeword]:
        return self.enc1[cg.cell1(x)], self.enc2[cg.cell2(x)]

    def transmit(self, cg: ConfusionGraph, x: int) -> Codeword:
        """Broadcast frame: sender 1's word followed by sender 2's."""
        c1, c2 = self.encode(cg, x)
        return c1 + c2

    def to_dict(self) -> dict:
        def label(cell, m_excl):
            w3, w = self.t * self.m3, self.t * m_excl
            return f"{_to_word(cell >> w3, w)},{_to_word(cell & ((1 << w3) - 1), w3)}"

        return {
            "m1": self.m1,
            "m2": self.m2,
            "m3": self.m3,
            "t": self.t,
            "p1": self.p1,
            "p2": self.p2,
            "enc1": {label(c, self.m1): w for c, w in enumerate(self.enc1)},
            "enc2": {label(c, self.m2): w for c, w in enumerate(self.enc2)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class SingleSenderCode:
    """Encoder indexed by the realization of all messages of one digraph."""

    d: Digraph
    t: int
    table: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.table[0])

    def as_two_sender(self) -> tuple[TuicpInstance, TwoSenderCode]:
        inst = single_sender_instance(self.d, self.t)
        return inst, TwoSenderCode(0, 0, self.d.n, self.t, self.table, ("",) * len(self.table))


def single_sender_code(d: Digraph, t: int = 1, caps: Caps | None = None) -> SingleSenderCode:
    """Optimal code: the colour index of an optimal confusion-graph colouring."""
    chi, colors = optimal_single_sender(d, t, caps)
    width = ceil_log2(chi)
    return SingleSenderCode(d, t, tuple(_to_word(c, width) for c in colors))


def code_from_coloring(c: TwoSenderColoring) -> TwoSenderCode:
    a1, a2 = c.sizes
    w1, w2 = ceil_log2(a1), ceil_log2(a2)
    return TwoSenderCode(
        c.m1,
        c.m2,
        c.m3,
        c.t,
        tuple(_to_word(col, w1) for col in c.table1),
        tuple(_to_word(col, w2) for col in c.table2),
    )


# ---------------------------------------------------------------- decodability


@dataclass(frozen=True)
class DecodeCheck:
    ok: bool
    receiver: int | None = None
    pair: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_decodability(code: TwoSenderCode, inst: TuicpInstance, caps: Caps | None = None) -> DecodeCheck:
    """Every receiver can recover its demand from ``(C1, C2)`` and its side information.

    Equivalently no two realizations confusable at a receiver share a
    codeword pair.  The witness is the first colliding pair found scanning
    receivers and then realizations in increasing order.
    """
    caps = resolve(caps)
    if inst.mt > caps.predicate_mt:
        raise ResourceLimitError("decodability check (m*t)", inst.mt, caps.predicate_mt)
    if (code.m1, code.m2, code.m3, code.t) != inst.part.sizes + (inst.t,):
        raise InputError("code dimensions do not match the instance")
    cg = ConfusionGraph(inst, caps)
    cells1, cells2 = cg.cells
    words = [(code.enc1[cells1[x]], code.enc2[cells2[x]]) for x in range(cg.n_vertices)]
    for r in range(inst.m):
        demand, side = cg.demand_masks[r], cg.side_masks[r]
        seen: dict = {}
        for x in range(cg.n_vertices):
            key = (words[x], x & side)
            prev = seen.get(key)
            if prev is None:
                seen[key] = x
            elif (prev ^ x) & demand:
                return DecodeCheck(False, r + 1, (prev, x))
    return DecodeCheck(True)


# ---------------------------------------------------------------- II-E construction


@dataclass(frozen=True)
class Case2ECode:
    code: TwoSenderCode
    branch: int  # index of the part with the smallest code length
    tail_owner: int
    lengths: tuple[int, int, int]

    @property
    def total_bits(self) -> int:
        return self.code.p1 + self.code.p2


def _verified_length(sub: SingleSenderCode, d: Digraph, t: int, caps: Caps, name: str) -> int:
    if sub.d != d or sub.t != t:
        raise PreconditionError(f"{name} is not a code for the matching part digraph")
    inst, as_two = sub.as_two_sender()
    check = verify_decodability(as_two, inst, caps)
    if not check:
        raise PreconditionError(f"{name} is not decodable (receiver {check.receiver})")
    optimum = ceil_log2(optimal_single_sender(d, t, caps)[0])
    if sub.length != optimum:
        raise PreconditionError(f"{name} has length {sub.length}, optimum is {optimum}")
    return sub.length


def construct_case2e_code(
    inst: TuicpInstance,
    c1: SingleSenderCode | None = None,
    c2: SingleSenderCode | None = None,
    c3: SingleSenderCode | None = None,
    tail_owner: int = 1,
    override: bool = False,
    caps: Caps | None = None,
) -> Case2ECode:
    """XOR the part codes so each sender transmits one combined word.

    With ``L_i`` the part code lengths: when ``L3`` is smallest both senders
    XOR their exclusive code with ``C3``; when ``L2`` (or ``L1``) is
    smallest, both XOR with the first ``L2`` (or ``L1``) bits of ``C3`` and
    the remaining bits of ``C3`` go out in the clear from ``tail_owner``.
    Missing part codes are replaced by optimal ones.
    """
    caps = resolve(caps)
    if tail_owner not in (1, 2):
        raise InputError(f"tail owner must be 1 or 2, got {tail_owner}")
    label = classify_case(interaction_digraph(inst))
    if label is not CaseLabel.II_E and not (override and label is CaseLabel.UNRESOLVED):
        raise PreconditionError(f"construction needs a II-E interaction digraph, got {label}")
    if not is_fully_participated(inst):
        raise PreconditionError("construction needs a fully participated instance")
    t = inst.t
    subs = []
    for i, given in enumerate((c1, c2, c3), 1):
        d = inst.sub_digraph(i)
        subs.append(given if given is not None else single_sender_code(d, t, caps))
        _verified_length(subs[-1], d, t, caps, f"part code {i}")
    L1, L2, L3 = (s.length for s in subs)
    if L3 <= min(L1, L2):
        branch, cut = 3, L3
    elif L2 <= min(L1, L3):
        branch, cut = 2, L2
    else:
        branch, cut = 1, L1

    m1, m2, m3 = inst.part.sizes
    w3 = t * m3
    tab1, tab2, tab3 = (s.table for s in subs)

    def sender_table(table_excl, m_excl, owner):
        out = []
        for cell in range(1 << (t * m_excl + w3)):
            b, b3 = cell >> w3, cell & ((1 << w3) - 1)
            word3 = tab3[b3]
            word = xor_zero_pad(table_excl[b], word3[:cut])
            if owner:
                word += word3[cut:]
            out.append(word)
        return tuple(out)

    enc1 = sender_table(tab1, m1, branch != 3 and tail_owner == 1)
    enc2 = sender_table(tab2, m2, branch != 3 and tail_owner == 2)
    code = TwoSenderCode(m1, m2, m3, t, enc1, enc2)
    return Case2ECode(code, branch, tail_owner, (L1, L2, L3))


def case2e_length_bits(l1: int, l2: int, l3: int) -> int:
    return max(l1 + l2, l1 + l3, l2 + l3)

