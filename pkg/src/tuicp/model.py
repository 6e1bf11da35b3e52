"""TUICP instances, interaction digraphs and case classification.

Messages and receivers are 1-based in the public API (message ``i`` is
demanded by receiver ``i``); the underlying :class:`~tuicp.graphs.Digraph`
uses vertex ``i - 1`` for message ``i``.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Mapping

from .errors import InputError, ValidationError
from .graphs import Digraph, cycle_vertices, induced_subdigraph, is_acyclic

# canonical bit order of the six ordered part pairs
PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2))
_PAIR_BIT = {pair: 1 << b for b, pair in enumerate(PAIRS)}


@dataclass(frozen=True)
class MessagePartition:
    p1: frozenset
    p2: frozenset
    p3: frozenset

    def __init__(self, p1: Iterable[int], p2: Iterable[int], p3: Iterable[int]):
        object.__setattr__(self, "p1", frozenset(p1))
        object.__setattr__(self, "p2", frozenset(p2))
        object.__setattr__(self, "p3", frozenset(p3))

    def part(self, i: int) -> tuple[int, ...]:
        """Messages of part ``i`` in ascending order."""
        return tuple(sorted((self.p1, self.p2, self.p3)[i - 1]))

    @property
    def sizes(self) -> tuple[int, int, int]:
        return len(self.p1), len(self.p2), len(self.p3)

    def part_of(self, msg: int) -> int:
        for i, p in enumerate((self.p1, self.p2, self.p3), 1):
            if msg in p:
                return i
        raise InputError(f"message {msg} is in no part")

    def swapped(self) -> "MessagePartition":
        return MessagePartition(self.p2, self.p1, self.p3)


@dataclass(frozen=True)
class TuicpInstance:
    d: Digraph
    part: MessagePartition
    t: int = 1

    @property
    def m(self) -> int:
        return self.d.n

    @property
    def mt(self) -> int:
        return self.d.n * self.t

    def side_information(self, receiver: int) -> tuple[int, ...]:
        """1-based messages known to ``receiver``."""
        return tuple(v + 1 for v in self.d.successors(receiver - 1))

    def sender_messages(self, s: int) -> frozenset:
        if s == 1:
            return self.part.p1 | self.part.p3
        if s == 2:
            return self.part.p2 | self.part.p3
        raise InputError(f"sender must be 1 or 2, got {s}")

    def sub_digraph(self, i: int) -> Digraph:
        """D_i: the side-information digraph induced by part ``i``."""
        return induced_subdigraph(self.d, [v - 1 for v in self.part.part(i)])

    def with_t(self, t: int) -> "TuicpInstance":
        return TuicpInstance(self.d, self.part, t)

    def with_edge(self, receiver: int, msg: int) -> "TuicpInstance":
        return TuicpInstance(self.d.with_edges([(receiver - 1, msg - 1)]), self.part, self.t)


@dataclass(frozen=True)
class ValidationReport:
    m: int
    m1: int
    m2: int
    m3: int


def validate(inst: TuicpInstance) -> ValidationReport:
    """Check partition and digraph consistency.

    Raises :class:`ValidationError` listing every offending message index.
    """
    problems = []
    p1, p2, p3 = inst.part.p1, inst.part.p2, inst.part.p3
    for a, b, name in ((p1, p2, "P1 and P2"), (p1, p3, "P1 and P3"), (p2, p3, "P2 and P3")):
        for msg in sorted(a & b):
            problems.append(f"message {msg} in two exclusive sets ({name})")
    union = p1 | p2 | p3
    for msg in sorted(set(range(1, inst.m + 1)) - union):
        problems.append(f"message {msg} not covered by the partition")
    for msg in sorted(x for x in union if not 1 <= x <= inst.m):
        problems.append(f"message {msg} outside 1..{inst.m}")
    if not isinstance(inst.t, int) or inst.t < 1:
        problems.append(f"message length t must be a positive integer, got {inst.t!r}")
    if problems:
        raise ValidationError("; ".join(problems), problems)
    m1, m2, m3 = inst.part.sizes
    return ValidationReport(inst.m, m1, m2, m3)


# ---------------------------------------------------------------- interaction digraph


@dataclass(frozen=True, order=True)
class InteractionDigraph:
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < 64:
            raise InputError(f"interaction mask {self.mask} outside 0..63")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]]) -> "InteractionDigraph":
        mask = 0
        for pair in edges:
            pair = tuple(pair)
            if pair not in _PAIR_BIT:
                raise InputError(f"invalid interaction edge {pair}")
            mask |= _PAIR_BIT[pair]
        return cls(mask)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(p for p in PAIRS if self.mask & _PAIR_BIT[p]))

    def has(self, i: int, j: int) -> bool:
        return bool(self.mask & _PAIR_BIT[(i, j)])

    def as_digraph(self) -> Digraph:
        """Three-vertex digraph with vertex ``i - 1`` for part ``i``."""
        return Digraph(3, ((i - 1, j - 1) for i, j in self.edges))

    def swap12(self) -> "InteractionDigraph":
        swap = {1: 2, 2: 1, 3: 3}
        return InteractionDigraph.from_edges((swap[i], swap[j]) for i, j in self.edges)

    def __str__(self) -> str:
        return "{" + ",".join(f"({i},{j})" for i, j in self.edges) + "}"


def interaction_digraph(inst: TuicpInstance) -> InteractionDigraph:
    mask = 0
    for u, v in inst.d.edges:
        i, j = inst.part.part_of(u + 1), inst.part.part_of(v + 1)
        if i != j:
            mask |= _PAIR_BIT[(i, j)]
    return InteractionDigraph(mask)


def fully_participated_map(inst: TuicpInstance) -> dict[tuple[int, int], str]:
    """Map each present interaction ``(i, j)`` to ``"full"`` or ``"partial"``."""
    h = interaction_digraph(inst)
    out = {}
    for i, j in h.edges:
        pi, pj = inst.part.part(i), inst.part.part(j)
        full = all((u - 1, v - 1) in inst.d.edges for u in pi for v in pj)
        out[(i, j)] = "full" if full else "partial"
    return out


def is_fully_participated(inst: TuicpInstance) -> bool:
    return all(kind == "full" for kind in fully_participated_map(inst).values())


# ---------------------------------------------------------------- cases


class CaseLabel(enum.Enum):
    I = "I"
    II_A = "II-A"
    II_B = "II-B"
    II_C = "II-C"
    II_D = "II-D"
    II_E = "II-E"
    UNRESOLVED = "II-B/E-unresolved"

    @property
    def candidates(self) -> tuple["CaseLabel", ...]:
        """Resolved labels this label may stand for."""
        if self is CaseLabel.UNRESOLVED:
            return (CaseLabel.II_B, CaseLabel.II_E)
        return (self,)

    @classmethod
    def parse(cls, text: str) -> "CaseLabel":
        for label in cls:
            if label.value == text:
                return label
        raise InputError(f"unknown case label {text!r}")

    def __str__(self) -> str:
        return self.value


_II_B_MASK = InteractionDigraph.from_edges([(1, 3), (3, 1), (2, 3), (3, 2)]).mask


def classify_case(h: InteractionDigraph) -> CaseLabel:
    d = h.as_digraph()
    if is_acyclic(d):
        return CaseLabel.I
    if 2 not in cycle_vertices(d):
        return CaseLabel.II_A
    loop13 = h.has(1, 3) and h.has(3, 1)
    loop23 = h.has(2, 3) and h.has(3, 2)
    if loop13 and not loop23:
        return CaseLabel.II_C
    if loop23 and not loop13:
        return CaseLabel.II_D
    if h.mask == _II_B_MASK:
        return CaseLabel.II_B
    if not loop13 and not loop23:
        return CaseLabel.II_E
    return CaseLabel.UNRESOLVED


def masks_for_case(label: CaseLabel) -> list[InteractionDigraph]:
    return [h for h in map(InteractionDigraph, range(64)) if classify_case(h) is label]


def pinned_case1_digraphs() -> dict[int, InteractionDigraph]:
    h16 = InteractionDigraph.from_edges([(1, 2), (3, 2)])
    h18 = InteractionDigraph.from_edges([(1, 2), (3, 1), (3, 2)])
    h23 = InteractionDigraph.from_edges([(1, 2), (1, 3), (3, 2)])
    return {16: h16, 18: h18, 20: h16.swap12(), 21: h18.swap12(), 23: h23, 25: h23.swap12()}


def pinned_variant_of(h: InteractionDigraph) -> int | None:
    for k, pinned in pinned_case1_digraphs().items():
        if pinned == h:
            return k
    return None


# ---------------------------------------------------------------- constructions


def build_fully_participated(
    d1: Digraph, d2: Digraph, d3: Digraph, h: InteractionDigraph, t: int = 1
) -> TuicpInstance:
    """Disjoint union of the three parts with every cross edge required by ``h``.

    Messages are numbered part by part: D1's vertices first, then D2's, then D3's.
    """
    offsets = (0, d1.n, d1.n + d2.n)
    parts = (d1, d2, d3)
    edges = set()
    for off, d in zip(offsets, parts):
        edges.update((u + off, v + off) for u, v in d.edges)
    for i, j in h.edges:
        for u in range(parts[i - 1].n):
            for v in range(parts[j - 1].n):
                edges.add((offsets[i - 1] + u, offsets[j - 1] + v))
    ranges = [range(off + 1, off + d.n + 1) for off, d in zip(offsets, parts)]
    n = d1.n + d2.n + d3.n
    return TuicpInstance(Digraph(n, edges), MessagePartition(*ranges), t)


def swap_labels_12(inst: TuicpInstance) -> TuicpInstance:
    return TuicpInstance(inst.d, inst.part.swapped(), inst.t)


def internal_digraph(n: int, kind: str, rng: random.Random | None = None) -> Digraph:
    """Part digraph of the given kind: ``empty``, ``clique`` or ``random``."""
    if kind == "empty":
        return Digraph(n)
    if kind == "clique":
        return Digraph(n, permutations(range(n), 2))
    if kind == "random":
        rng = rng or random.Random(0)
        return Digraph(n, [e for e in permutations(range(n), 2) if rng.random() < 0.5])
    raise InputError(f"unknown internal pattern {kind!r}")


def generate_case_instance(
    label: CaseLabel, sizes: tuple[int, int, int], internal: str = "empty", seed: int = 0, t: int = 1
) -> TuicpInstance:
    """A fully-participated instance whose interaction digraph has ``label``.

    Case I draws from the six pinned digraphs; other cases draw from all masks
    with that label.  The mask is picked as ``seed`` modulo the candidate count.
    """
    if any(s < 1 for s in sizes):
        raise InputError(f"part sizes must be positive, got {sizes}")
    if label is CaseLabel.I:
        pinned = pinned_case1_digraphs()
        choices = [pinned[k] for k in sorted(pinned)]
    else:
        choices = masks_for_case(label)
    if not choices:
        raise InputError(f"no interaction digraph carries label {label}")
    h = choices[seed % len(choices)]
    rng = random.Random(seed)
    subs = [internal_digraph(n, internal, rng) for n in sizes]
    return build_fully_participated(*subs, h, t)


def random_instance(rng: random.Random, m_max: int = 4, t: int = 1, p_edge: float = 0.4) -> TuicpInstance:
    """A random instance with ``1 <= m <= m_max`` messages and a random partition."""
    m = rng.randint(1, m_max)
    edges = [e for e in permutations(range(m), 2) if rng.random() < p_edge]
    parts: list[list[int]] = [[], [], []]
    for msg in range(1, m + 1):
        parts[rng.randrange(3)].append(msg)
    return TuicpInstance(Digraph(m, edges), MessagePartition(*parts), t)


# ---------------------------------------------------------------- JSON


def instance_to_dict(inst: TuicpInstance) -> dict:
    return {
        "m": inst.m,
        "t": inst.t,
        "side_information": {str(r): list(inst.side_information(r)) for r in range(1, inst.m + 1)},
        "partition": {f"P{i}": list(inst.part.part(i)) for i in (1, 2, 3)},
    }


def instance_to_json(inst: TuicpInstance) -> str:
    return json.dumps(instance_to_dict(inst), sort_keys=False)


def instance_from_dict(data: Mapping) -> TuicpInstance:
    try:
        m = int(data["m"])
        t = int(data.get("t", 1))
        side = data.get("side_information", {})
        part = data["partition"]
        edges = []
        for r, known in side.items():
            r = int(r)
            if not 1 <= r <= m:
                raise InputError(f"receiver {r} outside 1..{m}")
            for x in known:
                x = int(x)
                if not 1 <= x <= m:
                    raise InputError(f"receiver {r}: message {x} outside 1..{m}")
                if x == r:
                    raise InputError(f"receiver {r} lists its own demand as side information")
                edges.append((r - 1, x - 1))
        partition = MessagePartition(part.get("P1", []), part.get("P2", []), part.get("P3", []))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed instance: {exc!r}") from exc
    inst = TuicpInstance(Digraph(m, edges), partition, t)
    validate(inst)
    return inst


def instance_from_json(text: str) -> TuicpInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InputError("instance JSON must be an object")
    return instance_from_dict(data)
