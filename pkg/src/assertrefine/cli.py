"""Command-line entry point: ``assertrefine {refine,check,mutate,eval,generate}``.

Exit codes: 0 success (or every assertion passed), 1 at least one assertion
failed, 2 the input does not parse, 3 analysis error (qubit cap, unknown
family, non-normalisable state and similar).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .benchmarks import FAMILIES, BenchmarkError, generate_benchmark, parse_sizes
from .pipeline import Config, refine
from .program import ProgramError, flatten, to_source
from .qasm import ParseError, parse, print_program
from .report import EvaluationResult, evaluate_program, run_evaluation, to_csv, to_markdown, write_outputs
from .simulator import SimulationError, run

EXIT_OK = 0
EXIT_ASSERTION_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_ANALYSIS_ERROR = 3

CONFIG_ENV = "ASSERTREFINE_CONFIG"


class AnalysisError(Exception):
    pass


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"cannot serialise {type(value).__name__}")


def dump_json(data) -> str:
    return json.dumps(data, indent=2, default=_json_default) + "\n"


def load_config(args: argparse.Namespace) -> Config:
    """Defaults, then the JSON config file (``--config`` or $ASSERTREFINE_CONFIG),
    then explicit flags."""
    data: dict = {}
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise AnalysisError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise AnalysisError(f"config {path} must hold a JSON object")
    overrides = {
        "equality_eps": getattr(args, "equality_eps", None),
        "separability_tol": getattr(args, "separability_tol", None),
        "diagonal_tol": getattr(args, "diagonal_tol", None),
        "entanglement_tol": getattr(args, "entanglement_tol", None),
        "entanglement_criterion": getattr(args, "entanglement_criterion", None),
        "seed": getattr(args, "seed", None),
        "qubit_cap": getattr(args, "qubit_cap", None),
    }
    if getattr(args, "drop_subsumed", False):
        overrides["drop_subsumed"] = True
    if getattr(args, "annotations", False):
        overrides["annotations"] = True
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Config.from_mapping(data)
    except (TypeError, ValueError) as exc:
        raise AnalysisError(f"invalid configuration: {exc}") from exc


def _load(path: str, config: Config):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise AnalysisError(f"cannot read {path}: {exc}") from exc
    source = parse(text)
    return flatten(source, config.diagonal_tol)


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_refine(args: argparse.Namespace) -> int:
    config = load_config(args)
    flat = _load(args.input, config)
    result = refine(flat, config, add=not args.no_add, move=not args.no_move)
    _write(print_program(to_source(result.program), annotations=config.annotations), args.output)
    if args.report:
        report = {**result.report(), "input": str(args.input), "config": config.to_json()}
        Path(args.report).write_text(dump_json(report))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    config = load_config(args)
    flat = _load(args.input, config)
    verdicts = run(flat, config.seed, config.checker()).verdicts
    if args.json:
        sys.stdout.write(dump_json({"verdicts": [v.to_json() for v in verdicts]}))
    else:
        for v in verdicts:
            ins = flat.instructions[v.assertion_index]
            targets = ", ".join(str(flat.qubit_ref(q)) for q in ins.targets)
            print(f"line {ins.origin:>4}  assert-{v.kind.value:<3}  {targets:<30}  {v.outcome.upper()}")
        failed = sum(not v.passed for v in verdicts)
        print(f"{len(verdicts)} assertion(s), {failed} failed", file=sys.stderr)
    return EXIT_OK if all(v.passed for v in verdicts) else EXIT_ASSERTION_FAILED


def cmd_mutate(args: argparse.Namespace) -> int:
    config = load_config(args)
    flat = _load(args.input, config)
    if not flat.assertions:
        raise AnalysisError("program has no assertions to diagnose with")
    name = Path(args.input).stem
    result = EvaluationResult(seed=config.seed)
    for row in evaluate_program(flat, name, config.seed, args.repetitions, config):
        result.rows.append({"family": name, "qubits": flat.num_qubits, "assertion": "mixed", **row})
    _write(to_csv(result), args.output)
    sys.stderr.write(to_markdown(result))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    config = load_config(args)
    families = list(FAMILIES) if args.family == ["all"] else args.family
    try:
        sizes = parse_sizes(args.sizes)
    except ValueError as exc:
        raise AnalysisError(f"bad --sizes {args.sizes!r}") from exc
    kinds = [k.strip() for k in args.kind.split(",")]
    result = run_evaluation(families, sizes, kinds, config.seed, args.repetitions, config)
    if args.out:
        paths = write_outputs(result, Path(args.out), plot=not args.no_plot)
        for label, path in paths.items():
            print(f"wrote {label}: {path}", file=sys.stderr)
    else:
        sys.stdout.write(to_csv(result))
    print(to_markdown(result), end="", file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    source = generate_benchmark(args.family, args.qubits, args.kind)
    _write(print_program(source), args.output)
    return EXIT_OK


def _add_tolerances(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    p.add_argument("--seed", type=int, help="RNG seed for measurement sampling and mutant draws")
    p.add_argument("--equality-eps", type=float, help="fidelity slack for assert-eq (default 1e-6)")
    p.add_argument("--separability-tol", type=float, help="second-singular-value threshold (default 1e-9)")
    p.add_argument("--diagonal-tol", type=float, help="off-diagonal threshold for gate classes (default 1e-9)")
    p.add_argument("--entanglement-tol", type=float, help="pairwise correlation threshold (default 1e-6)")
    p.add_argument("--entanglement-criterion", choices=("correlation", "ppt"))
    p.add_argument("--qubit-cap", type=int, help="largest register the simulator accepts (default 16)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="assertrefine", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("refine", help="add and move assertions")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="refined program (default: stdout)")
    p.add_argument("--report", help="write the JSON refinement report here")
    p.add_argument("--annotations", action="store_true", help="mark added/moved assertions with comments")
    p.add_argument("--drop-subsumed", action="store_true",
                   help="remove an equality assertion once its qubits are all covered by added ones")
    p.add_argument("--no-add", action="store_true", help="movement only")
    p.add_argument("--no-move", action="store_true", help="addition only")
    _add_tolerances(p)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("check", help="simulate and evaluate every assertion")
    p.add_argument("input")
    p.add_argument("--json", action="store_true")
    _add_tolerances(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("mutate", help="mutation analysis of one program (CSV per mutant)")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="CSV destination (default: stdout)")
    p.add_argument("--repetitions", type=int, default=10)
    _add_tolerances(p)
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("eval", help="benchmark families end to end")
    p.add_argument("--family", nargs="+", default=["all"], help=f"one or more of {', '.join(FAMILIES)} or 'all'")
    p.add_argument("--sizes", default="4..8")
    p.add_argument("--kind", default="ent,eq", help="comma-separated assertion kinds")
    p.add_argument("--repetitions", type=int, default=10)
    p.add_argument("--out", help="directory for mutants.csv, aggregate.{md,json} and reduction.png")
    p.add_argument("--no-plot", action="store_true")
    _add_tolerances(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("generate", help="emit one benchmark program")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--kind", default="ent", choices=("ent", "eq", "sup"))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"{getattr(args, 'input', '<input>')}: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except (AnalysisError, ProgramError, SimulationError, BenchmarkError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS_ERROR


if __name__ == "__main__":
    sys.exit(main())
