import itertools
from pathlib import Path

import pytest

from tuicp.model import MessagePartition, TuicpInstance, instance_from_json
from tuicp.graphs import Digraph

DATA = Path(__file__).parent / "data"


def load(name: str) -> TuicpInstance:
    return instance_from_json((DATA / name).read_text())


@pytest.fixture
def example1() -> TuicpInstance:
    return load("example1.json")


@pytest.fixture
def example2() -> TuicpInstance:
    return load("example2.json")


def make_instance(m, edges_1based, p1, p2, p3, t=1) -> TuicpInstance:
    d = Digraph(m, [(u - 1, v - 1) for u, v in edges_1based])
    return TuicpInstance(d, MessagePartition(p1, p2, p3), t)


# ---------------------------------------------------------------- oracles
# Deliberately naive re-implementations, independent of the package code.


def brute_confusable(x, y, inst: TuicpInstance):
    """Smallest receiver confusing realizations given as tuples of message values."""
    for r in range(1, inst.m + 1):
        if x[r - 1] != y[r - 1] and all(x[j - 1] == y[j - 1] for j in inst.side_information(r)):
            return r
    return None


def realizations(inst: TuicpInstance):
    return list(itertools.product(range(1 << inst.t), repeat=inst.m))


def brute_chromatic(n, edges):
    for k in range(1, n + 1):
        for cols in itertools.product(range(k), repeat=n):
            if all(cols[u] != cols[v] for u, v in edges):
                return k
    return 0


def colourable(n, edges, k) -> bool:
    return any(all(cols[u] != cols[v] for u, v in edges) for cols in itertools.product(range(k), repeat=n))


def brute_two_sender_bits(inst: TuicpInstance) -> int:
    """Exhaustive minimum of ceil(log2 a1) + ceil(log2 a2).

    Every sender-1 table with at most 8 colours is tried; for each, the
    sender-2 cells that must differ form a graph that is coloured by brute
    force with as few bits as would improve the best total so far.
    """
    reals = realizations(inst)
    parts = [inst.part.part(i) for i in (1, 2, 3)]

    def cell(x, excl):
        return tuple(x[i - 1] for i in excl) + tuple(x[i - 1] for i in parts[2])

    cells1 = sorted({cell(x, parts[0]) for x in reals})
    cells2 = sorted({cell(x, parts[1]) for x in reals})
    idx2 = {c: i for i, c in enumerate(cells2)}
    edges = [(x, y) for x, y in itertools.combinations(reals, 2) if brute_confusable(x, y, inst)]
    best = 3 + len(cells2).bit_length()  # exceeds any reachable value
    for e1 in range(0, 4):
        if e1 >= best:
            break
        for t1 in itertools.product(range(1 << e1), repeat=len(cells1)):
            f1 = dict(zip(cells1, t1))
            conflict = set()
            for x, y in edges:
                if f1[cell(x, parts[0])] == f1[cell(y, parts[0])]:
                    a, b = idx2[cell(x, parts[1])], idx2[cell(y, parts[1])]
                    if a == b:
                        break
                    conflict.add((min(a, b), max(a, b)))
            else:
                # does sender 2 fit in fewer than best - e1 bits?
                for e2 in range(0, best - e1):
                    if colourable(len(cells2), conflict, 1 << e2):
                        best = e1 + e2
                        break
    return best


# ---------------------------------------------------------------- acceptance report

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
