"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 invalid input or failed validation,
3 resource cap exceeded, 4 suite or consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .codes import code_from_coloring, construct_case2e_code, verify_decodability
from .coloring import achievable_case1, optimal_two_sender_search
from .config import RunConfig, load_config
from .confusion import ConfusionGraph
from .errors import ConsistencyError, InputError, PreconditionError, ResourceLimitError, ValidationError
from .model import (
    CaseLabel,
    classify_case,
    fully_participated_map,
    generate_case_instance,
    instance_from_json,
    instance_to_dict,
    interaction_digraph,
    pinned_variant_of,
)
from .rates import formula_table1, formula_table2, sandwich_check
from .suites import SUITES, render_report, run_suites

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_CAP, EXIT_FAILED = 0, 1, 2, 3, 4
SYMBOLS = ("beta1", "beta2", "beta3")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_instance(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return instance_from_json(text)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump(data) -> str:
    return json.dumps(data, indent=2)


def _table_rows(label: CaseLabel, variant: int | None) -> dict:
    rows = {"optimal": formula_table2(label, SYMBOLS)}
    if label is CaseLabel.II_E:
        rows["achievable"] = formula_table1(label, SYMBOLS)
    elif variant is not None:
        rows["achievable"] = formula_table1(variant, SYMBOLS, f"beta(H{variant} product)")
    return rows


def cmd_classify(args, cfg: RunConfig) -> int:
    inst = _read_instance(args.instance)
    h = interaction_digraph(inst)
    label = classify_case(h)
    variant = pinned_variant_of(h)
    data = {
        "interaction": str(h),
        "participation": {f"({i},{j})": v for (i, j), v in fully_participated_map(inst).items()},
        "case": str(label),
        "pinned_variant": None if variant is None else f"H{variant}",
        "table_rows": _table_rows(label, variant),
    }
    if label is CaseLabel.I:
        data["hint"] = "conjecture gap: beta_t(D,P) = beta1 + beta2 + beta3 + eps/t with eps in {-2,-1,0}"
    if label is CaseLabel.UNRESOLVED:
        data["candidates"] = [str(c) for c in label.candidates]
    if cfg.output == "markdown":
        lines = ["| field | value |", "|---|---|"]
        lines += [f"| {k} | {json.dumps(v) if not isinstance(v, str) else v} |" for k, v in data.items()]
        _emit("\n".join(lines))
    else:
        _emit(_dump(data))
    return EXIT_OK


def _render_report(report, cfg: RunConfig) -> str:
    return report.to_markdown() if cfg.output == "markdown" else report.to_json()


def cmd_beta(args, cfg: RunConfig) -> int:
    inst = _read_instance(args.instance)
    modes = {"exact": args.exact, "achievable": args.achievable, "bounds": args.bounds}
    if not any(modes.values()):
        modes = dict.fromkeys(modes, True)
    report = sandwich_check(inst, cfg.caps, **modes)
    _emit(_render_report(report, cfg))
    if modes["exact"] and report.beta_t_exact is None:
        print(f"error: {report.exact_note}", file=sys.stderr)
        return EXIT_CAP
    return EXIT_OK


def cmd_report(args, cfg: RunConfig) -> int:
    inst = _read_instance(args.instance)
    report = sandwich_check(inst, cfg.caps)
    fmt = getattr(args, "output", None) or "markdown"
    _emit(report.to_json() if fmt == "json" else report.to_markdown())
    return EXIT_OK


def cmd_color(args, cfg: RunConfig) -> int:
    inst = _read_instance(args.instance)
    if args.achievable:
        variant = pinned_variant_of(interaction_digraph(inst))
        if variant is None:
            raise PreconditionError("achievable colourings exist only for the six pinned Case-I digraphs")
        col = achievable_case1(inst, variant, cfg.caps).coloring
    else:
        col = optimal_two_sender_search(inst, cfg.caps).coloring
    data = col.to_dict()
    data["rate"] = {"bits/t": f"{col.rate * inst.t}/{inst.t}", "decimal": f"{float(col.rate):.6f}"}
    _emit(_dump(data))
    return EXIT_OK


def cmd_code(args, cfg: RunConfig) -> int:
    inst = _read_instance(args.instance)
    if args.construction == "case2e":
        code = construct_case2e_code(inst, tail_owner=args.tail_owner, caps=cfg.caps).code
    else:
        code = code_from_coloring(optimal_two_sender_search(inst, cfg.caps).coloring)
    check = verify_decodability(code, inst, cfg.caps)
    data = code.to_dict()
    data["decodable"] = check.ok
    _emit(_dump(data))
    return EXIT_OK if check else EXIT_FAILED


def cmd_confusion(args, cfg: RunConfig) -> int:
    inst = _read_instance(args.instance)
    _emit(ConfusionGraph(inst, cfg.caps).to_dot())
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    results = run_suites(args.suite, seed=cfg.seed, trials=args.trials, threads=cfg.threads, caps=cfg.caps)
    sys.stdout.write(render_report(results, cfg.seed))
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAILED


def _sizes(text: str) -> tuple[int, int, int]:
    try:
        sizes = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be three integers a,b,c, got {text!r}")
    if len(sizes) != 3:
        raise argparse.ArgumentTypeError(f"sizes must be three integers a,b,c, got {text!r}")
    return sizes


def cmd_gen(args, cfg: RunConfig) -> int:
    label = CaseLabel.parse(args.case)
    inst = generate_case_instance(label, args.sizes, args.internal, cfg.seed, args.t)
    _emit(json.dumps(instance_to_dict(inst)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads for suites")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed")
    common.add_argument("--cap-mt", type=int, default=argparse.SUPPRESS, help="cap on m*t for the exact search")
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON run config (default: $TUICP_CONFIG)")
    common.add_argument("--format", dest="output", choices=("json", "markdown", "dot"), default=argparse.SUPPRESS)

    parser = _Parser(prog="tuicp", description="Two-sender unicast index coding toolkit.", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, instance=True):
        p = sub.add_parser(name, help=help_text, parents=[common])
        if instance:
            p.add_argument("instance", help="instance JSON file, or - for stdin")
        p.set_defaults(func=func)
        return p

    add("classify", cmd_classify, "interaction digraph, participation and case label")
    p = add("beta", cmd_beta, "exact rate, achievable rates and lower bounds")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--achievable", action="store_true")
    p.add_argument("--bounds", action="store_true")
    p = add("color", cmd_color, "optimal (or appendix) two-sender colouring")
    p.add_argument("--achievable", action="store_true", help="appendix colouring for a pinned Case-I digraph")
    p = add("code", cmd_code, "encoding tables with a decodability check")
    p.add_argument("--construction", choices=("exact", "case2e"), default="exact")
    p.add_argument("--tail-owner", type=int, choices=(1, 2), default=1)
    add("confusion", cmd_confusion, "confusion graph in DOT")
    p = add("verify", cmd_verify, "seeded property suites", instance=False)
    p.add_argument("--suite", choices=SUITES + ("table2", "all"), default="all")
    p.add_argument("--trials", type=int, default=None)
    p = add("gen", cmd_gen, "fully-participated instance for a case", instance=False)
    p.add_argument("--case", required=True, help="I, II-A, II-B, II-C, II-D or II-E")
    p.add_argument("--sizes", type=_sizes, default=(1, 1, 1), help="part sizes a,b,c")
    p.add_argument("--internal", choices=("empty", "clique", "random"), default="empty")
    p.add_argument("--t", type=int, default=1)
    add("report", cmd_report, "full rate report (markdown unless --format json)")
    return parser


def _run_config(args) -> RunConfig:
    opt = vars(args)
    cfg = load_config(opt.get("config"))
    caps = cfg.caps if opt.get("cap_mt") is None else replace(cfg.caps, exact_mt=opt["cap_mt"])
    return cfg.with_overrides(caps=caps, threads=opt.get("threads"), seed=opt.get("seed"), output=opt.get("output"))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _run_config(args)
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: bad configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for problem in exc.problems:
            print(f"  - {problem}", file=sys.stderr)
        return EXIT_INVALID
    except (InputError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
