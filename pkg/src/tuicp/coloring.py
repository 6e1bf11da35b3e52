"""Two-sender colourings of confusion graphs.

Sender 1 colours ``(b_P1, b_P3)`` cells and sender 2 colours ``(b_P2, b_P3)``
cells; a vertex receives the ordered pair of its two cell colours, and
adjacent vertices need different pairs.  Cell indices are
``(b_P1 << t*m3) | b_P3`` and ``(b_P2 << t*m3) | b_P3``.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .config import Caps, resolve
from .confusion import (
    ConfusionGraph,
    build,
    check_pinned_variant,
    optimal_single_sender,
    variant_product_graph,
)
from .errors import InputError, PreconditionError, ResourceLimitError, ValidationError
from .graphs import UGraph, ceil_log2, chromatic_number, clique_number_lb
from .model import (
    CaseLabel,
    TuicpInstance,
    classify_case,
    interaction_digraph,
    is_fully_participated,
    pinned_variant_of,
    swap_labels_12,
)

SWAPPED_VARIANT = {20: 16, 21: 18, 25: 23}


@dataclass(frozen=True)
class TwoSenderColoring:
    m1: int
    m2: int
    m3: int
    t: int
    table1: tuple[int, ...]
    table2: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table1", tuple(self.table1))
        object.__setattr__(self, "table2", tuple(self.table2))
        n1 = 1 << (self.t * (self.m1 + self.m3))
        n2 = 1 << (self.t * (self.m2 + self.m3))
        if len(self.table1) != n1 or len(self.table2) != n2:
            raise InputError(
                f"table sizes {len(self.table1)}, {len(self.table2)} do not match cell domains {n1}, {n2}"
            )
        for name, table in (("table1", self.table1), ("table2", self.table2)):
            if set(table) != set(range(max(table) + 1)):
                raise InputError(f"{name} colour ids must be 0..k-1 with every colour used")

    @property
    def sizes(self) -> tuple[int, int]:
        return max(self.table1) + 1, max(self.table2) + 1

    @property
    def bits(self) -> int:
        a1, a2 = self.sizes
        return ceil_log2(a1) + ceil_log2(a2)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.bits, self.t)

    def pair(self, cg: ConfusionGraph, x: int) -> tuple[int, int]:
        return self.table1[cg.cell1(x)], self.table2[cg.cell2(x)]

    def swapped(self) -> "TwoSenderColoring":
        return TwoSenderColoring(self.m2, self.m1, self.m3, self.t, self.table2, self.table1)

    # ---- serialization

    def _cell_label(self, cell: int, m_excl: int) -> str:
        w3 = self.t * self.m3
        w = self.t * m_excl
        excl, common = cell >> w3, cell & ((1 << w3) - 1)
        return f"{format(excl, f'0{w}b') if w else ''},{format(common, f'0{w3}b') if w3 else ''}"

    def to_dict(self) -> dict:
        return {
            "m1": self.m1,
            "m2": self.m2,
            "m3": self.m3,
            "t": self.t,
            "table1": {self._cell_label(c, self.m1): col for c, col in enumerate(self.table1)},
            "table2": {self._cell_label(c, self.m2): col for c, col in enumerate(self.table2)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "TwoSenderColoring":
        m1, m2, m3, t = (int(data[k]) for k in ("m1", "m2", "m3", "t"))

        def parse(table: Mapping, m_excl: int) -> list[int]:
            n = 1 << (t * (m_excl + m3))
            out = [-1] * n
            for key, col in table.items():
                excl, _, common = key.partition(",")
                if len(excl) != t * m_excl or len(common) != t * m3:
                    raise InputError(f"cell label {key!r} has the wrong widths")
                cell = (int(excl or "0", 2) << (t * m3)) | int(common or "0", 2)
                out[cell] = int(col)
            if -1 in out:
                raise InputError("colour table is not total over its cells")
            return out

        return cls(m1, m2, m3, t, parse(data["table1"], m1), parse(data["table2"], m2))

    @classmethod
    def from_json(cls, text: str) -> "TwoSenderColoring":
        return cls.from_dict(json.loads(text))


def coloring_from_pairs(cg: ConfusionGraph, pairs: Sequence[tuple[int, int]]) -> TwoSenderColoring:
    """Factorize a per-vertex pair map into the two sender tables.

    Raises :class:`ValidationError` when a sender's colour would depend on
    messages that sender does not hold.
    """
    m1, m2, m3 = cg.part_sizes
    t1 = [None] * (1 << (cg.t * (m1 + m3)))
    t2 = [None] * (1 << (cg.t * (m2 + m3)))
    problems = []
    for x, (c1, c2) in enumerate(pairs):
        for table, cell, col, s in ((t1, cg.cell1(x), c1, 1), (t2, cg.cell2(x), c2, 2)):
            if table[cell] is None:
                table[cell] = col
            elif table[cell] != col:
                problems.append(f"sender {s} colour differs within cell {cell} (vertex {cg.tuple_label(x)})")
    if problems:
        raise ValidationError("pair map does not factor into sender tables", problems)
    return TwoSenderColoring(m1, m2, m3, cg.t, _compact(t1), _compact(t2))


def _compact(table: Sequence) -> list[int]:
    """Relabel colours 0..k-1 in order of first use."""
    ids: dict = {}
    return [ids.setdefault(c, len(ids)) for c in table]


# ---------------------------------------------------------------- validation


LEMMA_PATTERNS = {
    "lemma1": "same j,k; differing i",
    "lemma2": "same i,k; differing j",
    "lemma3": "same k; differing i and j",
    "lemma4": "differing k",
}


def lemma_pattern(cg: ConfusionGraph, x: int, y: int) -> str:
    (i, j, k), (i2, j2, k2) = cg.label(x), cg.label(y)
    if k != k2:
        return "lemma4"
    if i != i2 and j != j2:
        return "lemma3"
    return "lemma1" if i != i2 else "lemma2"


@dataclass(frozen=True)
class Violation:
    x: int
    y: int
    receiver: int
    pattern: str
    pair: tuple[int, int]


@dataclass(frozen=True)
class ColoringCheck:
    ok: bool
    violations: tuple[Violation, ...] = ()

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def __bool__(self) -> bool:
        return self.ok


def validate_coloring(c: TwoSenderColoring, cg: ConfusionGraph) -> ColoringCheck:
    if (c.m1, c.m2, c.m3) != cg.part_sizes or c.t != cg.t:
        raise InputError(
            f"coloring domains (m1,m2,m3,t)={(c.m1, c.m2, c.m3, c.t)} do not match the graph's "
            f"{cg.part_sizes + (cg.t,)}"
        )
    cells1, cells2 = cg.cells
    violations = []
    for x, y in cg.edges():
        px = (c.table1[cells1[x]], c.table2[cells2[x]])
        if px == (c.table1[cells1[y]], c.table2[cells2[y]]):
            violations.append(Violation(x, y, cg.confusable(x, y), lemma_pattern(cg, x, y), px))
    violations.sort(key=lambda v: (v.x, v.y))
    return ColoringCheck(not violations, tuple(violations))


# ---------------------------------------------------------------- exact search


class _Problem:
    """Constraint model over the cells of both tables.

    Variables ``0..n1-1`` are sender-1 cells, ``n1..n1+n2-1`` sender-2 cells.
    Every confusion edge becomes either a binary inequality (when the two
    endpoints share a cell on one side) or a quad constraint
    ``J1(a) != J1(a') or J2(b) != J2(b')``.
    """

    def __init__(self, cg: ConfusionGraph):
        m1, m2, m3 = cg.part_sizes
        self.n1 = 1 << (cg.t * (m1 + m3))
        self.n2 = 1 << (cg.t * (m2 + m3))
        n = self.n1 + self.n2
        cells1, cells2 = cg.cells
        neq = [set() for _ in range(n)]
        quads = set()
        for x, y in cg.edges():
            a, a2 = cells1[x], cells1[y]
            b, b2 = self.n1 + cells2[x], self.n1 + cells2[y]
            if a == a2:
                neq[b].add(b2)
                neq[b2].add(b)
            elif b == b2:
                neq[a].add(a2)
                neq[a2].add(a)
            else:
                if a > a2:
                    a, a2, b, b2 = a2, a, b2, b
                quads.add((a, a2, b, b2))
        self.neq = [sorted(s) for s in neq]
        self.quads = sorted(quads)
        self.quads_of = [[] for _ in range(n)]
        for q in self.quads:
            for v in q:
                self.quads_of[v].append(q)
        self.degree = [len(self.neq[v]) + len(self.quads_of[v]) for v in range(n)]

    def side_graphs(self) -> tuple[UGraph, UGraph]:
        g1 = UGraph.from_edges(self.n1, [(u, v) for u in range(self.n1) for v in self.neq[u] if u < v])
        g2 = UGraph.from_edges(
            self.n2,
            [(u - self.n1, v - self.n1) for u in range(self.n1, self.n1 + self.n2) for v in self.neq[u] if u < v],
        )
        return g1, g2

    def solve(self, a1: int, a2: int, fixed: Sequence[int] = ()) -> list[int] | None:
        """A colouring within budget ``(a1, a2)`` or ``None``.

        ``fixed`` pins the first ``len(fixed)`` variables; it must use colours
        in order of first appearance on each side.  Free variables are picked
        by (fewest candidate colours, highest degree, lowest index) and may
        only open the next unused colour, which removes colour permutations
        without losing solutions.
        """
        n1, n = self.n1, self.n1 + self.n2
        dom = [(1 << a1) - 1] * n1 + [(1 << a2) - 1] * self.n2
        val = [-1] * n
        used = [0, 0]
        trail: list[tuple[int, int]] = []
        neq, quads_of, degree = self.neq, self.quads_of, self.degree
        # act: static inequalities plus those switched on by a quad whose
        # other side already has equal colours; undone through edge_trail
        act = [0] * n
        for v in range(n):
            for w in neq[v]:
                act[v] |= 1 << w
        edge_trail: list[tuple[int, int]] = []
        touched: list[int] = []

        def prune(v, colour):
            # remove colour from v's domain; False on wipe-out
            bit = 1 << colour
            if val[v] >= 0:
                return val[v] != colour
            if dom[v] & bit:
                trail.append((v, dom[v]))
                dom[v] &= ~bit
                return dom[v] != 0
            return True

        def activate(u, w):
            if not act[u] >> w & 1:
                act[u] |= 1 << w
                act[w] |= 1 << u
                edge_trail.append((u, w))
                touched.append(u)
                touched.append(w)

        def propagate(v, colour):
            for w in neq[v]:
                if not prune(w, colour):
                    return False
            for a, a2, b, b2 in quads_of[v]:
                if v == a or v == a2:
                    other, partner = (b, b2), (a2 if v == a else a)
                else:
                    other, partner = (a, a2), (b2 if v == b else b)
                pv = val[partner]
                if pv >= 0:
                    if pv != colour:
                        continue
                    o1, o2 = val[other[0]], val[other[1]]
                    if o1 >= 0 and o2 >= 0:
                        if o1 == o2:
                            return False
                    elif o1 >= 0:
                        if not prune(other[1], o1):
                            return False
                    elif o2 >= 0:
                        if not prune(other[0], o2):
                            return False
                    activate(*other)
                else:
                    o1, o2 = val[other[0]], val[other[1]]
                    if o1 >= 0 and o1 == o2:
                        if not prune(partner, colour):
                            return False
            return True

        def colours_of(v):
            return 1 << val[v] if val[v] >= 0 else dom[v]

        def hall_ok():
            # a clique of the active graph needs as many colours as vertices
            seeds, touched[:] = touched[:], []
            for s in seeds:
                clique, cand, avail = 1, act[s], colours_of(s)
                while cand:
                    best, best_deg, c = -1, -1, cand
                    while c:
                        w = (c & -c).bit_length() - 1
                        c &= c - 1
                        deg = (act[w] & cand).bit_count()
                        if deg > best_deg:
                            best, best_deg = w, deg
                    clique += 1
                    avail |= colours_of(best)
                    cand &= act[best]
                if clique > avail.bit_count():
                    return False
            return True

        def pick():
            best, key = -1, None
            for v in range(n):
                if val[v] < 0:
                    side = 0 if v < n1 else 1
                    allowed = dom[v] & ((2 << used[side]) - 1)
                    k = (allowed.bit_count(), -degree[v], v)
                    if key is None or k < key:
                        best, key = v, k
            return best

        def undo(mark, emark):
            while len(trail) > mark:
                w, d = trail.pop()
                dom[w] = d
            while len(edge_trail) > emark:
                u, w = edge_trail.pop()
                act[u] &= ~(1 << w)
                act[w] &= ~(1 << u)

        def search(depth):
            v = pick()
            if v < 0:
                return True
            side = 0 if v < n1 else 1
            allowed = dom[v] & ((2 << used[side]) - 1)
            prev_used = used[side]
            while allowed:
                colour = (allowed & -allowed).bit_length() - 1
                allowed &= allowed - 1
                mark, emark = len(trail), len(edge_trail)
                val[v] = colour
                if colour == prev_used:
                    used[side] = prev_used + 1
                touched[:] = [v]
                if propagate(v, colour) and hall_ok() and search(depth + 1):
                    return True
                val[v] = -1
                used[side] = prev_used
                undo(mark, emark)
            return False

        for v, colour in enumerate(fixed):
            if not dom[v] >> colour & 1:
                return None
            val[v] = colour
            side = 0 if v < n1 else 1
            used[side] = max(used[side], colour + 1)
            if not propagate(v, colour):
                return None
        touched.extend(range(len(fixed)))
        if not hall_ok():
            return None

        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, n + 500))
        try:
            found = search(0)
        finally:
            sys.setrecursionlimit(limit)
        return list(val) if found else None

    def lexmin(self, a1: int, a2: int) -> list[int] | None:
        """The lexicographically least solution over variables in index order.

        Fix-and-check: each variable takes the smallest colour for which the
        pinned prefix still extends to a full solution.
        """
        current = self.solve(a1, a2)
        if current is None:
            return None
        prefix: list[int] = []
        used = [0, 0]
        for v in range(self.n1 + self.n2):
            side = 0 if v < self.n1 else 1
            for colour in range(min(used[side] + 1, (a1, a2)[side])):
                if colour == current[v]:
                    break
                found = self.solve(a1, a2, prefix + [colour])
                if found is not None:
                    current = found
                    break
            prefix.append(current[v])
            used[side] = max(used[side], current[v] + 1)
        return current


@dataclass(frozen=True)
class OptimalColoring:
    coloring: TwoSenderColoring
    beta: Fraction
    budget: tuple[int, int]
    lower_bound_bits: int


def _candidate_budgets(s, lb1, lb2, lb_pair, n1, n2):
    out = []
    for e1 in range(0, s + 1):
        e2 = s - e1
        lo1 = max(lb1, (1 << (e1 - 1)) + 1 if e1 else 1)
        lo2 = max(lb2, (1 << (e2 - 1)) + 1 if e2 else 1)
        for a1 in range(lo1, min(1 << e1, n1) + 1):
            for a2 in range(lo2, min(1 << e2, n2) + 1):
                if a1 * a2 >= lb_pair:
                    out.append((a1, a2))
    out.sort(key=lambda ab: (ab[0] + ab[1], ab[0]))
    return out


def _chi_lower(g: UGraph, caps: Caps) -> int:
    """chi(g) when the search finishes within caps, else the clique bound."""
    try:
        return chromatic_number(g, caps)[0]
    except ResourceLimitError:
        return clique_number_lb(g, caps)


def optimal_two_sender_coloring(
    inst: TuicpInstance, caps: Caps | None = None
) -> tuple[TwoSenderColoring, Fraction]:
    res = optimal_two_sender_search(inst, caps)
    return res.coloring, res.beta


def optimal_two_sender_search(inst: TuicpInstance, caps: Caps | None = None) -> OptimalColoring:
    """Exact minimum of ``ceil(log2 a1) + ceil(log2 a2)`` over valid colourings.

    Objectives are tried in increasing order.  For a fixed objective only the
    largest budgets ``(2**e1, 2**e2)`` need a feasibility test; once the
    optimum is known, the witness budget is the feasible one with the least
    ``(a1 + a2, a1)`` and the witness is the lexicographically least
    assignment over cells in index order (sender 1 cells first).
    """
    caps = resolve(caps)
    if inst.mt > caps.exact_mt:
        raise ResourceLimitError("exact two-sender search (m*t)", inst.mt, caps.exact_mt)
    cg = build(inst, caps)
    prob = _Problem(cg)
    g1, g2 = prob.side_graphs()
    lb1 = _chi_lower(g1, caps) or 1
    lb2 = _chi_lower(g2, caps) or 1
    if cg.n_vertices <= 256:
        lb_pair = _chi_lower(cg.graph, caps)
    else:
        lb_pair = clique_number_lb(cg.graph, caps)
    e1max, e2max = ceil_log2(prob.n1), ceil_log2(prob.n2)
    lower = max(ceil_log2(lb1) + ceil_log2(lb2), ceil_log2(lb_pair))

    for s in range(lower, e1max + e2max + 1):
        feasible = False
        for e1 in range(max(0, s - e2max), min(s, e1max) + 1):
            a1, a2 = min(1 << e1, prob.n1), min(1 << (s - e1), prob.n2)
            if a1 < lb1 or a2 < lb2 or a1 * a2 < lb_pair:
                continue
            if prob.solve(a1, a2) is not None:
                feasible = True
                break
        if feasible:
            break
    else:  # pragma: no cover - the injective labelling is always feasible
        raise AssertionError("no feasible budget found")

    for a1, a2 in _candidate_budgets(s, lb1, lb2, lb_pair, prob.n1, prob.n2):
        if prob.solve(a1, a2) is not None:
            break
    vals = prob.lexmin(a1, a2)
    m1, m2, m3 = cg.part_sizes
    col = TwoSenderColoring(m1, m2, m3, inst.t, vals[: prob.n1], vals[prob.n1 :])
    return OptimalColoring(col, col.rate, (a1, a2), lower)


# ---------------------------------------------------------------- appendix colourings


@dataclass(frozen=True)
class AchievableColoring:
    coloring: TwoSenderColoring
    p_t: Fraction
    variant: int
    product_chi: int
    d2_chi: int


def achievable_coloring_case1(inst: TuicpInstance, variant: int, caps: Caps | None = None) -> tuple[TwoSenderColoring, Fraction]:
    res = achievable_case1(inst, variant, caps)
    return res.coloring, res.p_t


def achievable_case1(inst: TuicpInstance, variant: int, caps: Caps | None = None) -> AchievableColoring:
    """Colouring for a pinned Case-I digraph built from part confusion graphs.

    Sender 1 colours every J-block identically with an optimal colouring of
    the variant's product graph; sender 2 colours by an optimal colouring of
    the D2 confusion graph, constant over the common bits.  Variants 20, 21
    and 25 swap the sender labels, build 16, 18 or 23, and swap back.
    """
    check_pinned_variant(inst, variant, (16, 18, 20, 21, 23, 25))
    if variant in SWAPPED_VARIANT:
        base = achievable_case1(swap_labels_12(inst), SWAPPED_VARIANT[variant], caps)
        return AchievableColoring(base.coloring.swapped(), base.p_t, variant, base.product_chi, base.d2_chi)

    t = inst.t
    m1, m2, m3 = inst.part.sizes
    product = variant_product_graph(inst, variant, caps)
    chi_p, col_p = chromatic_number(product, caps)
    chi_2, col_2 = optimal_single_sender(inst.sub_digraph(2), t, caps)
    w1, w3 = t * m1, t * m3
    table1 = [0] * (1 << (w1 + w3))
    for b1 in range(1 << w1):
        for b3 in range(1 << w3):
            pid = (b3 << w1) | b1 if variant == 23 else (b1 << w3) | b3
            table1[(b1 << w3) | b3] = col_p[pid]
    table2 = [col_2[cell >> w3] for cell in range(1 << (t * m2 + w3))]
    col = TwoSenderColoring(m1, m2, m3, t, _compact(table1), _compact(table2))
    p_t = Fraction(ceil_log2(chi_p) + ceil_log2(chi_2), t)
    return AchievableColoring(col, p_t, variant, chi_p, chi_2)


# ---------------------------------------------------------------- conjecture gap


def part_rate_bits(inst: TuicpInstance, i: int, caps: Caps | None = None) -> int:
    """``t * beta_t(D_i)``: optimal single-sender code length of part ``i``."""
    return ceil_log2(optimal_single_sender(inst.sub_digraph(i), inst.t, caps)[0])


@dataclass(frozen=True)
class GapReport:
    sum_part_bits: int
    eps_exact: int | None
    eps_achievable: int | None
    variant: int | None


def conjecture_gap(inst: TuicpInstance, caps: Caps | None = None) -> GapReport:
    """``t * (rate - sum of part rates)`` for the exact and appendix rates.

    Only a measurement: nothing here asserts the sign or size of the gap.
    """
    caps = resolve(caps)
    h = interaction_digraph(inst)
    if classify_case(h) is not CaseLabel.I:
        raise PreconditionError(f"conjecture gap needs a Case-I interaction digraph, got {h}")
    if not is_fully_participated(inst):
        raise PreconditionError("conjecture gap needs a fully participated instance")
    total = sum(part_rate_bits(inst, i, caps) for i in (1, 2, 3))
    eps_exact = None
    if inst.mt <= caps.exact_mt:
        eps_exact = int(optimal_two_sender_search(inst, caps).beta * inst.t) - total
    variant = pinned_variant_of(h)
    eps_ach = None
    if variant is not None:
        eps_ach = int(achievable_case1(inst, variant, caps).p_t * inst.t) - total
    return GapReport(total, eps_exact, eps_ach, variant)
