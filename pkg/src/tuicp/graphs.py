"""Directed and undirected graph primitives.

Undirected graphs keep their adjacency as one Python ``int`` bitset per
vertex, which keeps the exact searches (chromatic number, clique number,
isomorphism) compact.  All values are immutable.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .config import Caps, resolve
from .errors import InputError, ResourceLimitError


def ceil_log2(n: int) -> int:
    """Smallest ``e`` with ``2**e >= n`` for ``n >= 1``."""
    if n < 1:
        raise InputError(f"ceil_log2 needs a positive integer, got {n}")
    return (n - 1).bit_length()


def _bits(mask: int):
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Digraph:
    n: int
    edges: frozenset

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        edges = frozenset((int(u), int(v)) for u, v in edges)
        if n < 0:
            raise InputError(f"negative vertex count {n}")
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) out of range for n={n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", edges)

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        out = [0] * self.n
        for u, v in self.edges:
            out[u] |= 1 << v
        return tuple(out)

    def successors(self, u: int) -> list[int]:
        return list(_bits(self.out_masks[u]))

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Digraph":
        return Digraph(self.n, self.edges | frozenset(extra))

    def to_dot(self, name: str = "D", labels: Sequence[str] | None = None) -> str:
        return _dot("digraph", "->", name, self.n, sorted(self.edges), labels)


@dataclass(frozen=True)
class UGraph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise InputError("adjacency length does not match vertex count")
        for v, mask in enumerate(self.adj):
            if mask >> v & 1:
                raise InputError(f"self-loop at vertex {v}")
            if mask >> self.n:
                raise InputError(f"neighbour of {v} out of range")
            for w in _bits(mask):
                if not self.adj[w] >> v & 1:
                    raise InputError(f"asymmetric adjacency between {v} and {w}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "UGraph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def _trusted(cls, adj: Sequence[int]) -> "UGraph":
        # skips the symmetry scan; callers build adjacency symmetrically
        g = object.__new__(cls)
        object.__setattr__(g, "n", len(adj))
        object.__setattr__(g, "adj", tuple(adj))
        return g

    @classmethod
    def complete(cls, n: int) -> "UGraph":
        full = (1 << n) - 1
        return cls._trusted([full ^ (1 << v) for v in range(n)])

    @classmethod
    def empty(cls, n: int) -> "UGraph":
        return cls._trusted([0] * n)

    @cached_property
    def edges(self) -> frozenset:
        return frozenset((u, v) for u in range(self.n) for v in _bits(self.adj[u] >> u << u) if u < v)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(mask.bit_count() for mask in self.adj)

    @property
    def num_edges(self) -> int:
        return sum(self.degrees) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def induced(self, vertices: Sequence[int]) -> "UGraph":
        """Subgraph on ``vertices``, relabelled 0.. in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        adj = []
        for v in vertices:
            mask = 0
            for w in _bits(self.adj[v]):
                i = pos.get(w)
                if i is not None:
                    mask |= 1 << i
            adj.append(mask)
        return UGraph._trusted(adj)

    def relabel(self, perm: Sequence[int]) -> "UGraph":
        """Graph whose vertex ``perm[v]`` plays the role of ``v``."""
        adj = [0] * self.n
        for v in range(self.n):
            mask = 0
            for w in _bits(self.adj[v]):
                mask |= 1 << perm[w]
            adj[perm[v]] = mask
        return UGraph._trusted(adj)

    def is_proper_coloring(self, colors: Sequence[int]) -> bool:
        return all(colors[u] != colors[v] for u, v in self.edges)

    def to_dot(self, name: str = "G", labels: Sequence[str] | None = None) -> str:
        return _dot("graph", "--", name, self.n, sorted(self.edges), labels)


def _dot(kind, arrow, name, n, edges, labels):
    lines = [f"{kind} {name} {{"]
    for v in range(n):
        label = labels[v] if labels is not None else str(v)
        lines.append(f'  {v} [label="{label}"];')
    lines.extend(f"  {u} {arrow} {v};" for u, v in edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- digraphs


def induced_subdigraph(d: Digraph, vs: Sequence[int]) -> Digraph:
    """Sub-digraph on ``vs``; vertex ``vs[i]`` becomes ``i``."""
    vs = list(vs)
    for v in vs:
        if not 0 <= v < d.n:
            raise InputError(f"vertex {v} out of range for n={d.n}")
    if len(set(vs)) != len(vs):
        raise InputError("duplicate vertex in induced vertex list")
    pos = {v: i for i, v in enumerate(vs)}
    return Digraph(len(vs), ((pos[u], pos[v]) for u, v in d.edges if u in pos and v in pos))


def _strong_components(d: Digraph) -> list[list[int]]:
    index, low, on_stack, stack, comps = {}, {}, set(), [], []
    counter = 0

    for root in range(d.n):
        if root in index:
            continue
        work = [(root, iter(d.successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(d.successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def cycle_vertices(d: Digraph) -> frozenset:
    """Vertices lying on at least one directed cycle."""
    return frozenset(v for comp in _strong_components(d) if len(comp) > 1 for v in comp)


def is_acyclic(d: Digraph) -> bool:
    return not cycle_vertices(d)


def max_acyclic_induced(d: Digraph, caps: Caps | None = None) -> int:
    """Size of a largest vertex set inducing an acyclic sub-digraph."""
    cap = resolve(caps).acyclic_subset_vertices
    if d.n > cap:
        raise ResourceLimitError("max_acyclic_induced", d.n, cap)
    out = d.out_masks
    acyclic = bytearray(1 << d.n)
    acyclic[0] = 1
    best = 0
    for s in range(1, 1 << d.n):
        # a set is acyclic iff it has a sink whose removal leaves an acyclic set
        for v in _bits(s):
            if out[v] & s == 0:
                if acyclic[s ^ (1 << v)]:
                    acyclic[s] = 1
                    best = max(best, s.bit_count())
                break
    return best


# ---------------------------------------------------------------- products


def lex_product(g1: UGraph, g2: UGraph) -> UGraph:
    """Lexicographic product; vertex ``(a, b)`` has id ``a * g2.n + b``."""
    n2 = g2.n
    block = (1 << n2) - 1
    adj = []
    for a in range(g1.n):
        outer = 0
        for a2 in _bits(g1.adj[a]):
            outer |= block << (a2 * n2)
        for b in range(n2):
            adj.append(outer | (g2.adj[b] << (a * n2)))
    return UGraph._trusted(adj)


def disj_product(g1: UGraph, g2: UGraph) -> UGraph:
    """Disjunctive (co-normal) product; same vertex ids as :func:`lex_product`."""
    n1, n2 = g1.n, g2.n
    block = (1 << n2) - 1
    spread = [0] * n2
    for b in range(n2):
        mask = 0
        for a in range(n1):
            mask |= g2.adj[b] << (a * n2)
        spread[b] = mask
    adj = []
    for a in range(n1):
        outer = 0
        for a2 in _bits(g1.adj[a]):
            outer |= block << (a2 * n2)
        for b in range(n2):
            adj.append((outer | spread[b]) & ~(1 << (a * n2 + b)))
    return UGraph._trusted(adj)


# ---------------------------------------------------------------- cliques


def _greedy_clique(g: UGraph) -> list[int]:
    best: list[int] = []
    order = sorted(range(g.n), key=lambda v: (-g.degrees[v], v))
    for start in order:
        clique = [start]
        cand = g.adj[start]
        while cand:
            v = max(_bits(cand), key=lambda w: ((g.adj[w] & cand).bit_count(), -w))
            clique.append(v)
            cand &= g.adj[v]
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def _exact_clique(g: UGraph) -> list[int]:
    best = _greedy_clique(g)

    def expand(clique, cand):
        nonlocal best
        # greedy colouring bound on the candidate set
        order, bounds = [], []
        uncolored, color = cand, 0
        while uncolored:
            color += 1
            avail = uncolored
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~g.adj[v] & ~(1 << v)
                uncolored &= ~(1 << v)
                order.append(v)
                bounds.append(color)
        for v, bound in zip(reversed(order), reversed(bounds)):
            if len(clique) + bound <= len(best):
                return
            new_cand = cand & g.adj[v]
            if new_cand:
                expand(clique + [v], new_cand)
            elif len(clique) + 1 > len(best):
                best = sorted(clique + [v])
            cand &= ~(1 << v)

    if g.n:
        expand([], (1 << g.n) - 1)
    return best


def max_clique(g: UGraph, caps: Caps | None = None) -> list[int]:
    """A maximum clique when ``g`` is small enough, else a greedy clique."""
    if g.n <= resolve(caps).exact_clique_vertices:
        return _exact_clique(g)
    return _greedy_clique(g)


def clique_number_lb(g: UGraph, caps: Caps | None = None) -> int:
    """Exact clique number up to the exact-clique cap, a greedy lower bound above."""
    return len(max_clique(g, caps))


# ---------------------------------------------------------------- colouring


def _dsatur_greedy(g: UGraph) -> list[int]:
    n = g.n
    colors = [-1] * n
    nbr_colors = [0] * n
    for _ in range(n):
        v = max(
            (u for u in range(n) if colors[u] < 0),
            key=lambda u: (nbr_colors[u].bit_count(), g.degrees[u], -u),
        )
        c = 0
        while nbr_colors[v] >> c & 1:
            c += 1
        colors[v] = c
        for w in _bits(g.adj[v]):
            nbr_colors[w] |= 1 << c
    return colors


def chromatic_number(g: UGraph, caps: Caps | None = None) -> tuple[int, tuple[int, ...]]:
    """Exact chromatic number and a witness colouring.

    DSATUR branch and bound: a maximum clique is pre-coloured, vertices are
    picked by (saturation, degree, smallest id) and colours are tried in
    increasing order, so the witness is reproducible.
    """
    caps = resolve(caps)
    cap, node_cap = caps.chromatic_vertices, caps.chromatic_nodes
    if g.n > cap:
        raise ResourceLimitError("chromatic_number", g.n, cap)
    n = g.n
    if n == 0:
        return 0, ()
    clique = max_clique(g, caps)
    lower = len(clique)
    best_colors = _dsatur_greedy(g)
    best = max(best_colors) + 1
    if best == lower:
        return best, tuple(best_colors)

    colors = [-1] * n
    nbr_colors = [0] * n
    degrees = g.degrees
    adj = g.adj
    uncolored = set(range(n))

    def assign(v, c):
        colors[v] = c
        uncolored.discard(v)
        changed = []
        bit = 1 << c
        for w in _bits(adj[v]):
            if not nbr_colors[w] & bit:
                nbr_colors[w] |= bit
                changed.append(w)
        return changed

    def unassign(v, c, changed):
        colors[v] = -1
        uncolored.add(v)
        bit = ~(1 << c)
        for w in changed:
            nbr_colors[w] &= bit

    for c, v in enumerate(clique):
        assign(v, c)

    nodes = 0

    def search(used):
        nonlocal best, best_colors, nodes
        nodes += 1
        if nodes > node_cap:
            raise ResourceLimitError("chromatic_number search nodes", nodes, node_cap)
        if not uncolored:
            if used < best:
                best, best_colors = used, list(colors)
            return
        v = max(uncolored, key=lambda u: (nbr_colors[u].bit_count(), degrees[u], -u))
        forbidden = nbr_colors[v]
        for c in range(used):
            if not forbidden >> c & 1:
                changed = assign(v, c)
                search(used)
                unassign(v, c, changed)
                if best == lower:
                    return
        if used + 1 < best:
            changed = assign(v, used)
            search(used + 1)
            unassign(v, used, changed)

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, n + 200))
    try:
        search(lower)
    finally:
        sys.setrecursionlimit(limit)
    return best, tuple(best_colors)


# ---------------------------------------------------------------- isomorphism


def _refine(graphs, colors):
    """Colour refinement run jointly on several graphs so colour ids agree."""
    nbrs = [[list(_bits(mask)) for mask in g.adj] for g in graphs]
    while True:
        sigs = [
            [(col[v], tuple(sorted(col[w] for w in nb[v]))) for v in range(len(col))]
            for col, nb in zip(colors, nbrs)
        ]
        table = {s: i for i, s in enumerate(sorted({s for sig in sigs for s in sig}))}
        new = [[table[s] for s in sig] for sig in sigs]
        if len(table) == len(set(c for col in colors for c in col)):
            return new
        colors = new


def _histogram(col):
    hist: dict[int, int] = {}
    for c in col:
        hist[c] = hist.get(c, 0) + 1
    return hist


def _is_isomorphism(g1: UGraph, g2: UGraph, f: Sequence[int]) -> bool:
    for v in range(g1.n):
        mask = 0
        for w in _bits(g1.adj[v]):
            mask |= 1 << f[w]
        if mask != g2.adj[f[v]]:
            return False
    return True


def are_isomorphic(g1: UGraph, g2: UGraph, caps: Caps | None = None):
    """Return ``(True, f)`` with ``f[v]`` the image of ``v``, or ``(False, None)``.

    Joint colour refinement with individualisation and backtracking.  At each
    node the order-preserving map inside colour classes is tried first.
    """
    cap = resolve(caps).isomorphism_vertices
    size = max(g1.n, g2.n)
    if size > cap:
        raise ResourceLimitError("are_isomorphic", size, cap)
    if g1.n != g2.n or sorted(g1.degrees) != sorted(g2.degrees):
        return False, None
    n = g1.n
    if n == 0:
        return True, ()

    def search(c1, c2):
        c1, c2 = _refine([g1, g2], [c1, c2])
        if _histogram(c1) != _histogram(c2):
            return None
        by_color1: dict[int, list[int]] = {}
        by_color2: dict[int, list[int]] = {}
        for v in range(n):
            by_color1.setdefault(c1[v], []).append(v)
            by_color2.setdefault(c2[v], []).append(v)
        f = [0] * n
        for c, vs in by_color1.items():
            for v, w in zip(vs, by_color2[c]):
                f[v] = w
        if _is_isomorphism(g1, g2, f):
            return f
        if all(len(vs) == 1 for vs in by_color1.values()):
            return None
        target = min((len(vs), c) for c, vs in by_color1.items() if len(vs) > 1)[1]
        v = by_color1[target][0]
        fresh = max(max(c1), max(c2)) + 1
        for w in by_color2[target]:
            n1, n2 = list(c1), list(c2)
            n1[v] = fresh
            n2[w] = fresh
            found = search(n1, n2)
            if found is not None:
                return found
        return None

    f = search(list(g1.degrees), list(g2.degrees))
    if f is None:
        return False, None
    return True, tuple(f)
