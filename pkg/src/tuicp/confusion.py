"""Confusion graphs of TUICP instances and their block structure.

A realization of the ``m`` messages is stored as one integer: the
concatenation of ``x_1 .. x_m`` (``t`` bits each), most significant first.
Two realizations are adjacent when some receiver sees different demands but
identical side information.  Because the condition only depends on ``x ^ y``,
the graph is a Cayley graph and the whole edge set follows from the set of
confusable differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .config import Caps, resolve
from .errors import InputError, PreconditionError, ResourceLimitError
from .graphs import Digraph, UGraph, are_isomorphic, chromatic_number, disj_product, lex_product
from .model import (
    MessagePartition,
    TuicpInstance,
    interaction_digraph,
    is_fully_participated,
    pinned_case1_digraphs,
)

AXES = ("I", "J", "K")


def single_sender_instance(d: Digraph, t: int = 1) -> TuicpInstance:
    """Wrap ``d`` as an instance whose messages are all held by one sender."""
    return TuicpInstance(d, MessagePartition((), (), range(1, d.n + 1)), t)


class ConfusionGraph:
    """Confusion graph with a predicate tier and a lazily materialized tier."""

    def __init__(self, inst: TuicpInstance, caps: Caps | None = None):
        self.caps = resolve(caps)
        if inst.mt > self.caps.predicate_mt:
            raise ResourceLimitError("confusion predicate (m*t)", inst.mt, self.caps.predicate_mt)
        self.inst = inst
        self.m, self.t = inst.m, inst.t
        self.n_vertices = 1 << inst.mt
        t, m = self.t, self.m
        seg = (1 << t) - 1
        self._msg_mask = [seg << ((m - i) * t) for i in range(1, m + 1)]
        self.demand_masks = tuple(self._msg_mask)
        self.side_masks = tuple(
            sum(self._msg_mask[j - 1] for j in inst.side_information(r)) for r in range(1, m + 1)
        )
        self.part_sizes = inst.part.sizes
        self._parts = [inst.part.part(i) for i in (1, 2, 3)]

    # ---- predicate tier

    def confusable(self, x: int, y: int) -> int | None:
        """Smallest 1-based receiver that confuses ``x`` and ``y``, or ``None``."""
        return self.receiver_for_difference(x ^ y)

    def receiver_for_difference(self, z: int) -> int | None:
        for r in range(self.m):
            if z & self.demand_masks[r] and not z & self.side_masks[r]:
                return r + 1
        return None

    @cached_property
    def difference_set(self) -> frozenset:
        """All ``z`` such that ``x`` and ``x ^ z`` are adjacent."""
        return frozenset(z for z in range(1, self.n_vertices) if self.receiver_for_difference(z))

    # ---- labels

    def message_value(self, x: int, msg: int) -> int:
        return (x >> ((self.m - msg) * self.t)) & ((1 << self.t) - 1)

    def part_bits(self, x: int, i: int) -> int:
        """Concatenated bits of part ``i`` messages, ascending message order."""
        out = 0
        for msg in self._parts[i - 1]:
            out = (out << self.t) | self.message_value(x, msg)
        return out

    def label(self, x: int) -> tuple[int, int, int]:
        return self.part_bits(x, 1), self.part_bits(x, 2), self.part_bits(x, 3)

    def vertex(self, b1: int, b2: int, b3: int) -> int:
        x = 0
        for i, b in ((1, b1), (2, b2), (3, b3)):
            msgs = self._parts[i - 1]
            for pos, msg in enumerate(reversed(msgs)):
                value = (b >> (pos * self.t)) & ((1 << self.t) - 1)
                x |= value << ((self.m - msg) * self.t)
        return x

    def cell1(self, x: int) -> int:
        b1, _, b3 = self.label(x)
        return (b1 << (self.t * self.part_sizes[2])) | b3

    def cell2(self, x: int) -> int:
        _, b2, b3 = self.label(x)
        return (b2 << (self.t * self.part_sizes[2])) | b3

    @cached_property
    def cells(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Per-vertex sender-1 and sender-2 cell indices."""
        c1, c2 = [], []
        for x in range(self.n_vertices):
            c1.append(self.cell1(x))
            c2.append(self.cell2(x))
        return tuple(c1), tuple(c2)

    def tuple_label(self, x: int) -> str:
        return "(" + ",".join(format(self.message_value(x, i), f"0{self.t}b") for i in range(1, self.m + 1)) + ")"

    # ---- materialized tier

    @cached_property
    def graph(self) -> UGraph:
        cap = self.caps.materialize_mt
        mt = self.m * self.t
        if mt > cap:
            raise ResourceLimitError("confusion graph materialization (m*t)", mt, cap)
        n = self.n_vertices
        base = 0
        for z in self.difference_set:
            base |= 1 << z
        # keep[b]: positions whose bit b is 0; XOR-translating a bitset by 2^b
        # swaps each such block with its neighbour
        keep = []
        for b in range(mt):
            block = (1 << (1 << b)) - 1
            mask = 0
            for start in range(0, n, 1 << (b + 1)):
                mask |= block << start
            keep.append(mask)
        adj = [0] * n
        adj[0] = base
        cur, x = base, 0
        for step in range(1, n):
            b = (step & -step).bit_length() - 1
            w = 1 << b
            cur = ((cur & keep[b]) << w) | ((cur >> w) & keep[b])
            x ^= w
            adj[x] = cur
        return UGraph._trusted(adj)

    def edges(self) -> Iterator[tuple[int, int]]:
        for x in range(self.n_vertices):
            for z in self.difference_set:
                y = x ^ z
                if x < y:
                    yield x, y

    def to_dot(self, name: str = "Gamma") -> str:
        labels = [self.tuple_label(x) for x in range(self.n_vertices)]
        return self.graph.to_dot(name, labels)


def build(inst: TuicpInstance, caps: Caps | None = None) -> ConfusionGraph:
    """Confusion graph with its edge set materialized (subject to the cap)."""
    cg = ConfusionGraph(inst, caps)
    cg.graph
    return cg


def confusable(x: int | str, y: int | str, inst: TuicpInstance) -> int | None:
    """Witness receiver for two realizations given as ints or bit strings."""
    if isinstance(x, str) or isinstance(y, str):
        if not (isinstance(x, str) and isinstance(y, str)):
            raise InputError("mix of bit-string and integer realizations")
        if len(x) != inst.mt or len(y) != inst.mt:
            raise InputError(f"realizations must have {inst.mt} bits, got {len(x)} and {len(y)}")
        x, y = int(x, 2), int(y, 2)
    elif not (0 <= x < 1 << inst.mt and 0 <= y < 1 << inst.mt):
        raise InputError(f"realization outside {inst.mt} bits")
    return ConfusionGraph(inst).confusable(x, y)


def single_sender_graph(d: Digraph, t: int = 1, caps: Caps | None = None) -> UGraph:
    return ConfusionGraph(single_sender_instance(d, t), caps).graph


def optimal_single_sender(d: Digraph, t: int = 1, caps: Caps | None = None) -> tuple[int, tuple[int, ...]]:
    """chi of the confusion graph of ``d`` and a witness colouring."""
    if d.n == 0:
        return 1, (0,)
    return chromatic_number(single_sender_graph(d, t, caps), caps)


# ---------------------------------------------------------------- blocks


@dataclass(frozen=True)
class BlockDecomposition:
    axis: str
    groups: tuple[tuple[int, ...], ...]

    def induced(self, cg: ConfusionGraph, index: int) -> UGraph:
        return cg.graph.induced(self.groups[index])

    def inter_block_edges(self, cg: ConfusionGraph) -> Iterator[tuple[int, int]]:
        owner = {}
        for g, members in enumerate(self.groups):
            for v in members:
                owner[v] = g
        for x, y in cg.edges():
            if owner[x] != owner[y]:
                yield x, y


def blocks(cg: ConfusionGraph, axis: str) -> BlockDecomposition:
    """Vertex groups with a fixed P1 (axis I), P2 (J) or P3 (K) sub-label."""
    if axis not in AXES:
        raise InputError(f"axis must be one of {AXES}, got {axis!r}")
    i = AXES.index(axis) + 1
    groups: dict[int, list[int]] = {}
    for x in range(cg.n_vertices):
        groups.setdefault(cg.part_bits(x, i), []).append(x)
    return BlockDecomposition(axis, tuple(tuple(groups[k]) for k in sorted(groups)))


@dataclass(frozen=True)
class IsoCheck:
    ok: bool
    counterexample: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_block_isomorphism(cg: ConfusionGraph, axis: str) -> IsoCheck:
    """Every block on ``axis`` is isomorphic to the first one."""
    dec = blocks(cg, axis)
    cap = cg.caps.isomorphism_vertices
    size = len(dec.groups[0])
    if size > cap:
        raise ResourceLimitError("block isomorphism", size, cap)
    first = dec.induced(cg, 0)
    for g in range(1, len(dec.groups)):
        ok, _ = are_isomorphic(first, dec.induced(cg, g), cg.caps)
        if not ok:
            return IsoCheck(False, (0, g))
    return IsoCheck(True)


_PRODUCT_OF = {
    16: ("disj", 1, 3),
    18: ("lex", 1, 3),
    23: ("lex", 3, 1),
    20: ("disj", 2, 3),
    21: ("lex", 2, 3),
    25: ("lex", 3, 2),
}


def variant_product_graph(inst: TuicpInstance, variant: int, caps: Caps | None = None) -> UGraph:
    """The product of part confusion graphs named for a pinned Case-I variant."""
    kind, a, b = _PRODUCT_OF[variant]
    ga = single_sender_graph(inst.sub_digraph(a), inst.t, caps)
    gb = single_sender_graph(inst.sub_digraph(b), inst.t, caps)
    return disj_product(ga, gb) if kind == "disj" else lex_product(ga, gb)


def check_pinned_variant(inst: TuicpInstance, variant: int, allowed: tuple[int, ...]) -> None:
    if variant not in allowed:
        raise PreconditionError(f"variant must be one of {allowed}, got {variant}")
    expected = pinned_case1_digraphs()[variant]
    actual = interaction_digraph(inst)
    if actual != expected:
        raise PreconditionError(f"interaction digraph {actual} does not match H{variant} = {expected}")
    if not is_fully_participated(inst):
        raise PreconditionError("instance is not fully participated")


def verify_jblock_product_iso(inst: TuicpInstance, variant: int, caps: Caps | None = None) -> IsoCheck:
    """Every J-block is isomorphic to the variant's product of part confusion graphs."""
    if isinstance(variant, str):
        variant = int(variant.lstrip("H"))
    check_pinned_variant(inst, variant, (16, 18, 23))
    cg = build(inst, caps)
    product = variant_product_graph(inst, variant, caps)
    dec = blocks(cg, "J")
    for g in range(len(dec.groups)):
        ok, _ = are_isomorphic(product, dec.induced(cg, g), cg.caps)
        if not ok:
            return IsoCheck(False, (-1, g))
    return IsoCheck(True)
