"""Seeded property suites behind ``tuicp verify``.

Every trial draws from its own ``random.Random`` seeded by
``(seed, suite, trial index)``, and results are collected in trial order, so
a report does not depend on the number of worker threads.
"""

from __future__ import annotations

import itertools
import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .codes import case2e_length_bits, code_from_coloring, construct_case2e_code, verify_decodability
from .coloring import (
    SWAPPED_VARIANT,
    TwoSenderColoring,
    achievable_case1,
    optimal_two_sender_search,
    validate_coloring,
)
from .config import Caps, resolve
from .confusion import AXES, build, verify_block_isomorphism, verify_jblock_product_iso
from .graphs import UGraph, chromatic_number, disj_product, lex_product
from .model import (
    CaseLabel,
    TuicpInstance,
    build_fully_participated,
    internal_digraph,
    masks_for_case,
    pinned_case1_digraphs,
    random_instance,
    swap_labels_12,
)
from .rates import beta_t_single, formula_table1, formula_table2, part_rates, product_rate

DEFAULT_TRIALS = {
    "coloring-lemmas": 50,
    "blocks": 200,
    "products": 100,
    "thm1-3": None,  # every enumerated instance
    "thm5": None,
    "monotonicity": 100,
    "table2": None,
}
SUITES = ("coloring-lemmas", "blocks", "products", "thm1-3", "thm5", "monotonicity")


@dataclass
class SuiteResult:
    name: str
    trials: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "trials": self.trials,
            "failures": len(self.failures),
            "examples": self.failures[:20],
            "passed": self.ok,
        }


def trial_rng(seed: int, suite: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{index}")


def _run(name: str, trials: int, body: Callable[[int], list[str]], threads: int) -> SuiteResult:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(body, range(trials)))
    else:
        results = [body(i) for i in range(trials)]
    return SuiteResult(name, trials, [msg for msgs in results for msg in msgs])


def _random_graph(rng: random.Random, n_max: int = 7) -> UGraph:
    n = rng.randint(1, n_max)
    p = rng.random()
    return UGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def _desc(inst: TuicpInstance) -> str:
    edges = sorted((u + 1, v + 1) for u, v in inst.d.edges)
    return f"m={inst.m} t={inst.t} P={[list(inst.part.part(i)) for i in (1, 2, 3)]} E={edges}"


def structured_instances(labels, t_values=(1,), max_size: int = 2):
    """Fully-participated instances over every mask of ``labels``.

    Parts range over sizes ``1..max_size`` and are cliques or edgeless.
    """
    out = []
    for label in labels:
        if label is CaseLabel.I:
            masks = [h for _, h in sorted(pinned_case1_digraphs().items())]
        else:
            masks = masks_for_case(label)
        for h in masks:
            for t in t_values:
                for sizes in itertools.product(range(1, max_size + 1), repeat=3):
                    for kinds in itertools.product(("empty", "clique"), repeat=3):
                        subs = [internal_digraph(n, k) for n, k in zip(sizes, kinds)]
                        out.append((label, h, sizes, kinds, build_fully_participated(*subs, h, t)))
    return out


# ---------------------------------------------------------------- suites


def suite_coloring_lemmas(seed: int, trials: int, threads: int, caps: Caps) -> SuiteResult:
    def body(i):
        rng = trial_rng(seed, "coloring-lemmas", i)
        inst = random_instance(rng, m_max=4, t=1)
        fails = []
        res = optimal_two_sender_search(inst, caps)
        cg = build(inst, caps)
        col = res.coloring
        if not validate_coloring(col, cg):
            fails.append(f"optimal colouring invalid: {_desc(inst)}")
        if beta_t_single(inst.d, 1, caps) > res.beta:
            fails.append(f"single-sender relaxation exceeds optimum: {_desc(inst)}")
        for x, y in cg.edges():
            (_, j1, k1), (_, j2, k2) = cg.label(x), cg.label(y)
            if j1 == j2 and k1 == k2:
                p, q = col.pair(cg, x), col.pair(cg, y)
                if not (p[0] != q[0] and p[1] == q[1]):
                    fails.append(f"edge ({x},{y}) same j,k without distinct sender-1 colours: {_desc(inst)}")
        # random tables: decodable code <=> valid colouring
        m1, m2, m3 = inst.part.sizes
        n1, n2 = 1 << (m1 + m3), 1 << (m2 + m3)
        a1, a2 = rng.randint(1, n1), rng.randint(1, n2)
        t1 = _onto(rng, n1, a1)
        t2 = _onto(rng, n2, a2)
        rand = TwoSenderColoring(m1, m2, m3, 1, t1, t2)
        if bool(validate_coloring(rand, cg)) != bool(verify_decodability(code_from_coloring(rand), inst, caps)):
            fails.append(f"validity and decodability disagree: {_desc(inst)}")
        return fails

    return _run("coloring-lemmas", trials, body, threads)


def _onto(rng: random.Random, n: int, a: int) -> list[int]:
    table = list(range(a)) + [rng.randrange(a) for _ in range(n - a)]
    rng.shuffle(table)
    ids: dict = {}
    return [ids.setdefault(c, len(ids)) for c in table]


def suite_blocks(seed: int, trials: int, threads: int, caps: Caps) -> SuiteResult:
    def body(i):
        rng = trial_rng(seed, "blocks", i)
        inst = random_instance(rng, m_max=4, t=rng.choice((1, 2)))
        cg = build(inst, caps)
        fails = []
        for axis in AXES:
            check = verify_block_isomorphism(cg, axis)
            if not check:
                fails.append(f"axis {axis} blocks {check.counterexample} not isomorphic: {_desc(inst)}")
        return fails

    return _run("blocks", trials, body, threads)


def suite_products(seed: int, trials: int, threads: int, caps: Caps) -> SuiteResult:
    def body(i):
        rng = trial_rng(seed, "products", i)
        g1, g2 = _random_graph(rng), _random_graph(rng)
        lex, disj = lex_product(g1, g2), disj_product(g1, g2)
        fails = []
        n2 = g2.n
        for a, b in itertools.product(range(g1.n), range(n2)):
            for c, d in itertools.product(range(g1.n), range(n2)):
                u, v = a * n2 + b, c * n2 + d
                want_lex = g1.has_edge(a, c) or (a == c and g2.has_edge(b, d))
                want_disj = g1.has_edge(a, c) or g2.has_edge(b, d)
                if lex.has_edge(u, v) != want_lex or disj.has_edge(u, v) != want_disj:
                    fails.append(f"trial {i}: membership mismatch at ({a},{b})-({c},{d})")
                if lex.has_edge(u, v) and not disj.has_edge(u, v):
                    fails.append(f"trial {i}: lexicographic edge missing from disjunctive product")
        chi1, chi2 = chromatic_number(g1, caps)[0], chromatic_number(g2, caps)[0]
        if chromatic_number(lex, caps)[0] > chi1 * chi2:
            fails.append(f"trial {i}: chi(G1 o G2) > chi1*chi2")
        if chromatic_number(disj, caps)[0] > chi1 * chi2:
            fails.append(f"trial {i}: chi(G1 * G2) > chi1*chi2")
        return fails[:5]

    return _run("products", trials, body, threads)


def check_case1_instance(inst: TuicpInstance, variant: int, caps: Caps) -> list[str]:
    """The five appendix-construction checks on one pinned Case-I instance."""
    fails = []
    desc = f"H{variant} {_desc(inst)}"
    ach = achievable_case1(inst, variant, caps)
    if not validate_coloring(ach.coloring, build(inst, caps)):
        fails.append(f"(a) appendix colouring invalid: {desc}")
    rates = part_rates(inst, caps)
    table1 = formula_table1(variant, rates, product_rate(inst, variant, caps))
    if ach.p_t != table1:
        fails.append(f"(b) p_t={ach.p_t} differs from table value {table1}: {desc}")
    exact = optimal_two_sender_search(inst, caps).beta
    if exact > ach.p_t:
        fails.append(f"(c) exact {exact} exceeds p_t {ach.p_t}: {desc}")
    if variant in SWAPPED_VARIANT:
        iso = verify_jblock_product_iso(swap_labels_12(inst), SWAPPED_VARIANT[variant], caps)
    else:
        iso = verify_jblock_product_iso(inst, variant, caps)
    if not iso:
        fails.append(f"(d) block {iso.counterexample} not isomorphic to the product: {desc}")
    eps = int((ach.p_t - sum(rates, Fraction(0))) * inst.t)
    if eps not in (-1, 0):
        fails.append(f"(e) epsilon_achievable={eps}: {desc}")
    return fails


def suite_thm13(seed: int, trials: int | None, threads: int, caps: Caps) -> SuiteResult:
    cases = structured_instances([CaseLabel.I])
    variant_of = {h: k for k, h in pinned_case1_digraphs().items()}
    if trials is not None and trials < len(cases):
        cases = random.Random(f"{seed}:thm1-3").sample(cases, trials)

    def body(i):
        _, h, _, _, inst = cases[i]
        return check_case1_instance(inst, variant_of[h], caps)

    return _run("thm1-3", len(cases), body, threads)


def suite_thm5(seed: int, trials: int | None, threads: int, caps: Caps) -> SuiteResult:
    cases = structured_instances([CaseLabel.II_E], t_values=(1, 2))
    if trials is not None and trials < len(cases):
        cases = random.Random(f"{seed}:thm5").sample(cases, trials)

    def body(i):
        _, h, _, _, inst = cases[i]
        built = construct_case2e_code(inst, caps=caps)
        fails = []
        if built.total_bits != case2e_length_bits(*built.lengths):
            fails.append(f"length {built.total_bits} != {case2e_length_bits(*built.lengths)}: {_desc(inst)}")
        check = verify_decodability(built.code, inst, caps)
        if not check:
            fails.append(f"receiver {check.receiver} cannot decode {check.pair}: {_desc(inst)}")
        return fails

    return _run("thm5", len(cases), body, threads)


def suite_monotonicity(seed: int, trials: int, threads: int, caps: Caps) -> SuiteResult:
    def body(i):
        rng = trial_rng(seed, "monotonicity", i)
        inst = random_instance(rng, m_max=4, t=1)
        missing = [(u, v) for u in range(inst.m) for v in range(inst.m) if u != v and (u, v) not in inst.d.edges]
        fails = []
        before = optimal_two_sender_search(inst, caps).beta
        if beta_t_single(inst.d, 1, caps) > before:
            fails.append(f"relaxation violated: {_desc(inst)}")
        if missing:
            u, v = rng.choice(missing)
            after = optimal_two_sender_search(inst.with_edge(u + 1, v + 1), caps).beta
            if after > before:
                fails.append(f"adding ({u + 1},{v + 1}) raised the rate {before} -> {after}: {_desc(inst)}")
        return fails

    return _run("monotonicity", trials, body, threads)


def suite_table2(seed: int, trials: int | None, threads: int, caps: Caps) -> SuiteResult:
    """Exact rate against the instantiated optimal-rate formula (II-C, II-D, II-E)."""
    cases = structured_instances([CaseLabel.II_C, CaseLabel.II_D, CaseLabel.II_E])
    if trials is not None and trials < len(cases):
        cases = random.Random(f"{seed}:table2").sample(cases, trials)

    def body(i):
        label, _, _, _, inst = cases[i]
        exact = optimal_two_sender_search(inst, caps).beta
        expected = formula_table2(label, part_rates(inst, caps))
        if exact != expected:
            return [f"{label}: exact {exact} != formula {expected}: {_desc(inst)}"]
        return []

    return _run("table2", len(cases), body, threads)


_SUITE_FUNCS = {
    "coloring-lemmas": suite_coloring_lemmas,
    "blocks": suite_blocks,
    "products": suite_products,
    "thm1-3": suite_thm13,
    "thm5": suite_thm5,
    "monotonicity": suite_monotonicity,
    "table2": suite_table2,
}


def run_suites(
    name: str, seed: int = 0, trials: int | None = None, threads: int = 1, caps: Caps | None = None
) -> list[SuiteResult]:
    caps = resolve(caps)
    names = SUITES if name == "all" else (name,)
    out = []
    for n in names:
        if n not in _SUITE_FUNCS:
            raise KeyError(n)
        count = trials if trials is not None else DEFAULT_TRIALS[n]
        out.append(_SUITE_FUNCS[n](seed, count, threads, caps))
    return out


def render_report(results: list[SuiteResult], seed: int) -> str:
    data = {
        "seed": seed,
        "suites": [r.to_dict() for r in results],
        "passed": all(r.ok for r in results),
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
