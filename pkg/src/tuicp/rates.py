"""Broadcast rates: single-sender rates, the two summary tables as exact
formulas, lower bounds, and the sandwich report combining them.

Every rate is a :class:`fractions.Fraction` with denominator dividing ``t``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .coloring import achievable_case1, optimal_two_sender_search
from .codes import construct_case2e_code, verify_decodability
from .config import Caps, resolve
from .confusion import optimal_single_sender, single_sender_graph, variant_product_graph
from .errors import ConsistencyError, InputError, ResourceLimitError
from .graphs import Digraph, ceil_log2, chromatic_number, clique_number_lb, induced_subdigraph
from .model import (
    CaseLabel,
    TuicpInstance,
    classify_case,
    interaction_digraph,
    is_fully_participated,
    pinned_variant_of,
)

Value = Union[Fraction, int, str]

PINNED_VARIANTS = (16, 18, 20, 21, 23, 25)
# variant -> (exclusive part whose rate is added, product text)
_TABLE1_ROWS = {
    16: (2, "D1*D3"),
    18: (2, "D1oD3"),
    20: (1, "D2*D3"),
    21: (1, "D2oD3"),
    23: (2, "D3oD1"),
    25: (1, "D3oD2"),
}


def beta_t_single(d: Digraph, t: int = 1, caps: Caps | None = None) -> Fraction:
    """Optimal single-sender rate ``ceil(log2 chi(Gamma_t(d))) / t``."""
    return Fraction(ceil_log2(optimal_single_sender(d, t, caps)[0]), t)


def part_rates(inst: TuicpInstance, caps: Caps | None = None) -> tuple[Fraction, Fraction, Fraction]:
    return tuple(beta_t_single(inst.sub_digraph(i), inst.t, caps) for i in (1, 2, 3))


def product_rate(inst: TuicpInstance, variant: int, caps: Caps | None = None) -> Fraction:
    """Single-sender rate of the variant's product confusion graph."""
    chi = chromatic_number(variant_product_graph(inst, variant, caps), caps)[0]
    return Fraction(ceil_log2(chi), inst.t)


# ---------------------------------------------------------------- formulas


def _is_symbolic(values: Sequence[Value]) -> bool:
    return any(isinstance(v, str) for v in values)


def _fmt(v: Value) -> str:
    return v if isinstance(v, str) else str(Fraction(v))


def _sum(*vals: Value) -> Value:
    if _is_symbolic(vals):
        return "+".join(_fmt(v) for v in vals)
    return sum((Fraction(v) for v in vals), Fraction(0))


def _max(*vals: Value) -> Value:
    if _is_symbolic(vals):
        return "max{" + ", ".join(_fmt(v) for v in vals) + "}"
    return max(Fraction(v) for v in vals)


def formula_table1(case: CaseLabel | int, sub_rates: Sequence[Value], product: Value | None = None) -> Value:
    """Achievable rate row for a pinned Case-I variant or for II-E.

    ``sub_rates`` are the three part rates; pinned variants also need the
    rate of their product digraph.
    """
    b1, b2, b3 = sub_rates
    if case is CaseLabel.II_E or case == "II-E":
        return _max(_sum(b1, b2), _sum(b1, b3), _sum(b2, b3))
    if isinstance(case, int) and case in _TABLE1_ROWS:
        if product is None:
            raise InputError(f"variant {case} needs the product-digraph rate")
        excl = (b1, b2)[_TABLE1_ROWS[case][0] - 1]
        return _sum(excl, product)
    raise InputError(f"no Table-1 row for {case}")


def formula_table2(case: CaseLabel, betas: Sequence[Value]) -> Value | dict:
    """Optimal-rate row instantiated with the part rates.

    Strings among ``betas`` make the result a symbolic expression.  The
    unresolved label returns both candidate rows keyed by label.
    """
    b1, b2, b3 = betas
    if case is CaseLabel.UNRESOLVED:
        return {str(c): formula_table2(c, betas) for c in case.candidates}
    if case in (CaseLabel.I, CaseLabel.II_A):
        return _sum(b1, b2, b3)
    if case is CaseLabel.II_B:
        return _max(b3, _sum(b1, b2))
    if case is CaseLabel.II_C:
        return _sum(b2, _max(b1, b3))
    if case is CaseLabel.II_D:
        return _sum(b1, _max(b2, b3))
    if case is CaseLabel.II_E:
        return _max(_sum(b1, b2), _sum(b1, b3), _sum(b2, b3))
    raise InputError(f"unknown case {case}")


# ---------------------------------------------------------------- bounds


@dataclass(frozen=True)
class Bound:
    value: Fraction
    justification: str


def _single_rate_lower(d: Digraph, t: int, caps: Caps) -> tuple[Fraction, str] | None:
    """``beta_t(d)``, or ``ceil(log2 omega)/t`` when exact colouring is over a cap."""
    if d.n * t > caps.materialize_mt:
        return None
    try:
        return beta_t_single(d, t, caps), ""
    except ResourceLimitError:
        omega = clique_number_lb(single_sender_graph(d, t, caps), caps)
        return Fraction(ceil_log2(omega), t), " (clique bound)"


def lower_bounds(inst: TuicpInstance, caps: Caps | None = None) -> list[Bound]:
    """Lower bounds on the two-sender rate at message length ``t``.

    Bounds whose confusion graphs exceed the materialization cap are left out.
    """
    caps = resolve(caps)
    t = inst.t
    out = []
    whole = _single_rate_lower(inst.d, t, caps)
    if whole is not None:
        out.append(Bound(whole[0], "single-sender relaxation: beta_t(D)" + whole[1]))
    for gone in (1, 2, 3):
        if not inst.part.part(gone):
            continue
        keep = [i for i in (1, 2, 3) if i != gone and inst.part.part(i)]
        if not keep:
            continue
        vs = sorted(v - 1 for i in keep for v in inst.part.part(i))
        found = _single_rate_lower(induced_subdigraph(inst.d, vs), t, caps)
        if found is None:
            continue
        rate, note = found
        names = "".join(str(i) for i in keep)
        one_sender = set(keep) <= {1, 3} or set(keep) <= {2, 3}
        how = "held by one sender" if one_sender else "single-sender relaxation"
        out.append(Bound(rate, f"delete P{gone}: beta_t(D{names}), {how}{note}"))
    rates = [(i, _single_rate_lower(inst.sub_digraph(i), t, caps)) for i in (1, 2, 3) if inst.part.part(i)]
    rates = [(i, r) for i, r in rates if r is not None]
    if rates:
        i, (r, note) = max(rates, key=lambda ir: (ir[1][0], -ir[0]))
        out.append(Bound(r, f"part bound: max_i beta_t(D_i) at D{i}{note}"))
    return out


# ---------------------------------------------------------------- report


def _rational(v: Fraction | None, t: int) -> dict | None:
    if v is None:
        return None
    return {"bits/t": f"{v * t}/{t}", "decimal": f"{float(v):.6f}"}


def _plain(v) -> str:
    if isinstance(v, dict):
        return "; ".join(f"{k}: {_plain(x)}" for k, x in v.items())
    return _fmt(v)


@dataclass
class RateReport:
    t: int
    interaction: str
    case: str
    fully_participated: bool
    part_rates: tuple[Fraction, Fraction, Fraction] | None
    beta_t_exact: Fraction | None
    exact_note: str | None
    upper: list[Bound] = field(default_factory=list)
    bounds: list[Bound] = field(default_factory=list)
    formula_optimal: Value | dict | None = None
    formula_confirmed: bool | None = None
    eps_exact: int | None = None
    eps_achievable: int | None = None

    @property
    def p_t_achievable(self) -> Bound | None:
        constructions = [b for b in self.upper if not b.justification.startswith("exact")]
        return min(constructions, key=lambda b: b.value) if constructions else None

    def to_dict(self) -> dict:
        t = self.t

        def formula(v):
            if isinstance(v, dict):
                return {k: formula(x) for k, x in v.items()}
            if isinstance(v, str) or v is None:
                return v
            return _rational(Fraction(v), t)

        best = self.p_t_achievable
        return {
            "t": t,
            "interaction": self.interaction,
            "case": self.case,
            "fully_participated": self.fully_participated,
            "part_rates": None if self.part_rates is None else [_rational(r, t) for r in self.part_rates],
            "beta_t_exact": _rational(self.beta_t_exact, t),
            "exact_note": self.exact_note,
            "p_t_achievable": None if best is None else {**_rational(best.value, t), "provenance": best.justification},
            "upper_bounds": [{**_rational(b.value, t), "justification": b.justification} for b in self.upper],
            "lower_bounds": [{**_rational(b.value, t), "justification": b.justification} for b in self.bounds],
            "formula_optimal": formula(self.formula_optimal),
            "formula_confirmed": self.formula_confirmed,
            "eps_exact": self.eps_exact,
            "eps_achievable": self.eps_achievable,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_markdown(self) -> str:
        t = self.t
        r = lambda v: "n/a" if v is None else f"{v * t}/{t}"  # noqa: E731
        lines = [
            f"| case | H | fully-participated | beta_t exact | achievable p_t | optimal formula | confirmed at t={t} |",
            "|---|---|---|---|---|---|---|",
        ]
        best = self.p_t_achievable
        lines.append(
            f"| {self.case} | {self.interaction} | {'yes' if self.fully_participated else 'no'} "
            f"| {r(self.beta_t_exact)} | {r(best.value) if best else 'n/a'} "
            f"| {_plain(self.formula_optimal) if self.formula_optimal is not None else 'n/a'} "
            f"| {'n/a' if self.formula_confirmed is None else ('yes' if self.formula_confirmed else 'no')} |"
        )
        lines += ["", "| bound | value | justification |", "|---|---|---|"]
        for b in self.bounds:
            lines.append(f"| lower | {r(b.value)} | {b.justification} |")
        for b in self.upper:
            lines.append(f"| upper | {r(b.value)} | {b.justification} |")
        if self.eps_exact is not None or self.eps_achievable is not None:
            lines += ["", f"epsilon exact: {self.eps_exact}, epsilon achievable: {self.eps_achievable}"]
        return "\n".join(lines) + "\n"


def sandwich_check(
    inst: TuicpInstance,
    caps: Caps | None = None,
    exact: bool = True,
    achievable: bool = True,
    bounds: bool = True,
) -> RateReport:
    """Assemble bounds, constructions and the exact rate, and check they nest.

    Raises :class:`ConsistencyError` if any lower bound exceeds any upper
    bound or the exact rate.
    """
    caps = resolve(caps)
    t = inst.t
    h = interaction_digraph(inst)
    label = classify_case(h)
    full = is_fully_participated(inst)
    try:
        rates = part_rates(inst, caps)
    except ResourceLimitError:
        rates = None
    report = RateReport(t, str(h), str(label), full, rates, None, None)

    if bounds:
        report.bounds = lower_bounds(inst, caps)

    if achievable:
        if rates is not None:
            report.upper.append(Bound(sum(rates, Fraction(0)), "separate coding of the three parts"))
        variant = pinned_variant_of(h)
        if full and variant is not None:
            ach = achievable_case1(inst, variant, caps)
            report.upper.append(Bound(ach.p_t, f"appendix colouring for H{variant}"))
        if full and label is CaseLabel.II_E and inst.mt <= caps.predicate_mt:
            built = construct_case2e_code(inst, caps=caps)
            if verify_decodability(built.code, inst, caps):
                report.upper.append(Bound(Fraction(built.total_bits, t), "XOR construction for II-E"))
            else:
                raise ConsistencyError("II-E construction produced an undecodable code")

    if exact:
        if inst.mt <= caps.exact_mt:
            res = optimal_two_sender_search(inst, caps)
            report.beta_t_exact = res.beta
            report.upper.append(Bound(res.beta, f"exact search witness, budget {res.budget}"))
        else:
            report.exact_note = f"exact search skipped: m*t={inst.mt} exceeds cap {caps.exact_mt}"

    if rates is not None:
        report.formula_optimal = formula_table2(label, rates)
        if report.beta_t_exact is not None and not isinstance(report.formula_optimal, dict):
            report.formula_confirmed = report.beta_t_exact == report.formula_optimal
        if label is CaseLabel.I and full:
            total = sum(rates, Fraction(0))
            if report.beta_t_exact is not None:
                report.eps_exact = int((report.beta_t_exact - total) * t)
            appendix = [b for b in report.upper if b.justification.startswith("appendix")]
            if appendix:
                report.eps_achievable = int((appendix[0].value - total) * t)

    lows = [b.value for b in report.bounds]
    highs = [b.value for b in report.upper]
    if lows and highs and max(lows) > min(highs):
        raise ConsistencyError(f"lower bound {max(lows)} exceeds upper bound {min(highs)}")
    if report.beta_t_exact is not None and lows and max(lows) > report.beta_t_exact:
        raise ConsistencyError(f"lower bound {max(lows)} exceeds exact rate {report.beta_t_exact}")
    return report
