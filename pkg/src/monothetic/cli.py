"""Command-line surface.

Every subcommand emits deterministic JSON on stdout (rationals as "p/q"
strings).  Exit codes: 0 success / suites pass, 1 suite violation or failed
infeasibility hypothesis, 2 usage or input error, 3 table too shallow (the
required depth is printed).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .construction import build_anchor_table
from .counterexample import counterexample_certificate, counterexample_scan
from .errors import (
    DomainError,
    ExtendTableError,
    HypothesisNotMetError,
    ShapeError,
    TableFormatError,
)
from .evaluator import density_witness, evaluate, extend_family
from .rat import parse_fraction
from .serialize import (
    contradiction_to_json,
    density_witness_to_json,
    descriptor_from_json,
    dumps_stable,
    eval_result_to_json,
    ext_element_from_json,
    load_table,
    norm_spec_from_json,
    save_table,
    scan_summary_to_json,
    suite_report_to_json,
    table_to_json,
)
from .verification import (
    ALL_SUITES,
    verify_density,
    verify_extension,
    verify_norm_axioms,
    verify_truncation,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_EXTEND = 3


def _worker_count() -> int:
    raw = os.environ.get("MONO_THREADS", "1")
    try:
        workers = int(raw)
    except ValueError as exc:
        raise DomainError(f"MONO_THREADS must be an integer, got {raw!r}") from exc
    if workers < 1:
        raise DomainError("MONO_THREADS must be >= 1")
    return workers


def _parse_json(label: str, text: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"parse error in --{label}: {exc}") from exc


def _cmd_build(args) -> int:
    descriptor = descriptor_from_json(_parse_json("group", args.group))
    spec = norm_spec_from_json(_parse_json("norm", args.norm))
    table = build_anchor_table(descriptor, spec, args.depth)
    save_table(table, args.out)
    print(dumps_stable({
        "table": str(args.out),
        "depth": table.depth,
        "k_last": table.powers[-1],
    }))
    return EXIT_OK


def _cmd_eval(args) -> int:
    table = load_table(args.table)
    element = ext_element_from_json(table.descriptor, _parse_json("element", args.element))
    result = evaluate(table, element, parse_fraction(args.epsilon))
    print(dumps_stable(eval_result_to_json(result)))
    return EXIT_OK


def _cmd_density(args) -> int:
    table = load_table(args.table)
    witness = density_witness(table, args.m, args.j, parse_fraction(args.epsilon))
    print(dumps_stable(density_witness_to_json(witness)))
    return EXIT_OK if witness.certified else EXIT_VIOLATION


def _cmd_verify(args) -> int:
    table = load_table(args.table)
    epsilon = parse_fraction(args.epsilon)
    workers = _worker_count()
    wanted = ALL_SUITES if args.suite == "all" else (args.suite,)
    reports = []
    for suite in wanted:
        if suite == "extension":
            reports.append(verify_extension(table, args.samples, args.seed, workers=workers))
        elif suite == "axioms":
            reports.append(verify_norm_axioms(
                table, args.samples, args.seed, epsilon, workers=workers))
        elif suite == "density":
            reports.append(verify_density(table, args.max_m, args.max_j, epsilon))
        elif suite == "truncation":
            reports.append(verify_truncation(table, args.samples, args.seed, workers=workers))
    print(dumps_stable([suite_report_to_json(r) for r in reports]))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


def _cmd_counterexample(args) -> int:
    if args.grid is not None:
        summary = counterexample_scan(args.grid)
        if args.out:
            with open(args.out, "w") as handle:
                for certificate in summary.certificates:
                    handle.write(dumps_stable(contradiction_to_json(certificate)) + "\n")
        print(dumps_stable(scan_summary_to_json(summary)))
        return EXIT_OK
    if args.n is None or args.m is None or args.v1 is None or args.v2 is None:
        raise DomainError("single-certificate mode needs --n, --m, --v1, and --v2")
    report = counterexample_certificate(
        args.n, args.m, parse_fraction(args.v1), parse_fraction(args.v2)
    )
    print(dumps_stable(contradiction_to_json(report)))
    return EXIT_OK


def _cmd_family(args) -> int:
    descriptor = descriptor_from_json(_parse_json("group", args.group))
    specs_payload = _parse_json("norms", args.norms)
    if not isinstance(specs_payload, list) or not specs_payload:
        raise DomainError("--norms must be a non-empty JSON array of norm specs")
    specs = [norm_spec_from_json(p) for p in specs_payload]
    tables = extend_family(descriptor, specs, args.depth)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for i, table in enumerate(tables):
            save_table(table, out_dir / f"family_{i}.json")
    shared = [
        {"n": a.index, "m": a.target_index, "j": a.precision_index, "k": a.power}
        for a in tables[0].anchors
    ]
    print(dumps_stable({
        "depth": args.depth,
        "members": [table_to_json(t)["spec"] for t in tables],
        "shared_anchors": shared,
    }))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monothetic",
        description="Dense-cyclic norm extensions: build tables, evaluate, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build and persist an anchor table")
    p_build.add_argument("--group", required=True, help="group descriptor JSON")
    p_build.add_argument("--norm", required=True, help="norm spec JSON")
    p_build.add_argument("--depth", type=int, default=50)
    p_build.add_argument("--out", required=True, help="output table path")
    p_build.set_defaults(handler=_cmd_build)

    p_eval = sub.add_parser("eval", help="certified evaluation of the extended norm")
    p_eval.add_argument("--table", required=True)
    p_eval.add_argument("--element", required=True, help='element JSON {"h": [...], "k": int}')
    p_eval.add_argument("--epsilon", default="1/1024")
    p_eval.set_defaults(handler=_cmd_eval)

    p_density = sub.add_parser("density", help="certify one density witness")
    p_density.add_argument("--table", required=True)
    p_density.add_argument("--m", type=int, required=True, help="target enumeration index")
    p_density.add_argument("--j", type=int, required=True, help="precision index")
    p_density.add_argument("--epsilon", default="1/1024")
    p_density.set_defaults(handler=_cmd_density)

    p_verify = sub.add_parser("verify", help="run property suites")
    p_verify.add_argument("--table", required=True)
    p_verify.add_argument("--suite", choices=ALL_SUITES + ("all",), default="all")
    p_verify.add_argument("--samples", type=int, default=500)
    p_verify.add_argument("--seed", type=int, default=42)
    p_verify.add_argument("--epsilon", default="1/1024")
    p_verify.add_argument("--max-m", type=int, default=5, dest="max_m")
    p_verify.add_argument("--max-j", type=int, default=5, dest="max_j")
    p_verify.set_defaults(handler=_cmd_verify)

    p_counter = sub.add_parser(
        "counterexample", help="infeasibility certificates for the unbounded norm"
    )
    p_counter.add_argument("--grid", type=int, default=None, help="scan [1,grid]^2")
    p_counter.add_argument("--out", default=None, help="write certificates as JSON lines")
    p_counter.add_argument("--n", type=int, default=None)
    p_counter.add_argument("--m", type=int, default=None)
    p_counter.add_argument("--v1", default=None, help='assumed value "p/q" < 1/2')
    p_counter.add_argument("--v2", default=None, help='assumed value "p/q" < 1/2')
    p_counter.set_defaults(handler=_cmd_counterexample)

    p_family = sub.add_parser("family", help="extend a finite family over shared data")
    p_family.add_argument("--group", required=True)
    p_family.add_argument("--norms", required=True, help="JSON array of norm specs")
    p_family.add_argument("--depth", type=int, default=50)
    p_family.add_argument("--out-dir", default=None, dest="out_dir")
    p_family.set_defaults(handler=_cmd_family)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except ExtendTableError as exc:
        print(dumps_stable({"error": "extend table", "required_depth": exc.required_depth}))
        return EXIT_EXTEND
    except HypothesisNotMetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (DomainError, ShapeError, TableFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
