"""Command-line front end.

All results go to stdout as JSON (deterministic for a fixed config and
seed); a human-readable summary goes to stderr unless ``--json-only``.
Exit codes: 0 pass, 1 check failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import format_element
from .autos import extract_params, isomorphism_by_scaling, tabulate_automorphism
from .bider import extract_inner_coefficient
from .derivations import TableDerivation, decompose_degree_zero, tabulate
from .errors import ConfigError, ExprSyntaxError, LhvError, UnknownSuite
from .parsing import parse_expression
from .reports import Report
from .serialize import (
    basis_index_from_json,
    bilinear_from_json,
    decomposition_to_json,
    derivation_to_json,
    element_from_json,
    element_to_json,
    load_config,
    params_from_json,
    params_to_json,
    twolocal_from_json,
)
from .suites import SUITE_NAMES, run_all, run_suite
from .twolocal import certification_residuals, certify_two_local


def _load_json_arg(value: str):
    if value.lstrip().startswith(("{", "[")):
        return json.loads(value)
    with open(value, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(payload: dict, summary: str | None, args) -> None:
    print(json.dumps(payload, sort_keys=True))
    if summary and not args.json_only:
        print(summary, file=sys.stderr)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lhv",
        description="Exact verification toolkit for the loop Heisenberg-Virasoro algebra.",
    )
    parser.add_argument("--json-only", action="store_true", help="suppress the stderr summary")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bracket", help="evaluate an element expression")
    p.add_argument("--config", required=True)
    p.add_argument("--expr", required=True)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITE_NAMES + ["all"])
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--timings", action="store_true", help="include wall times in the JSON")

    p = sub.add_parser("derivation", help="derivation operations")
    dsub = p.add_subparsers(dest="subcommand", required=True)
    d = dsub.add_parser("decompose", help="recover the four family parameters from a table")
    d.add_argument("--config", required=True)
    d.add_argument("--table", required=True)

    p = sub.add_parser("bider", help="biderivation operations")
    bsub = p.add_subparsers(dest="subcommand", required=True)
    b = bsub.add_parser("extract", help="extract the inner coefficient of a bilinear table")
    b.add_argument("--config", required=True)
    b.add_argument("--table", required=True)

    p = sub.add_parser("aut", help="automorphism operations")
    asub = p.add_subparsers(dest="subcommand", required=True)
    a = asub.add_parser("compose", help="compose two parameter tuples")
    a.add_argument("--config", required=True)
    a.add_argument("--params", required=True)
    a.add_argument("--params2", required=True)
    a = asub.add_parser("apply", help="apply parameters to an expression")
    a.add_argument("--config", required=True)
    a.add_argument("--params", required=True)
    a.add_argument("--expr", required=True)
    a = asub.add_parser("invert", help="invert a parameter tuple")
    a.add_argument("--config", required=True)
    a.add_argument("--params", required=True)
    a = asub.add_parser("extract", help="extract parameters from a basis-image table")
    a.add_argument("--config", required=True)
    a.add_argument("--table", required=True)

    p = sub.add_parser("gamma", help="lattice operations")
    gsub = p.add_subparsers(dest="subcommand", required=True)
    g = gsub.add_parser("scaling", help="find a scalar carrying one lattice onto another")
    g.add_argument("--config", required=True)
    g.add_argument("--other", required=True)

    p = sub.add_parser("twolocal", help="two-local derivation operations")
    tsub = p.add_subparsers(dest="subcommand", required=True)
    t = tsub.add_parser("certify", help="certify a two-local table as a derivation")
    t.add_argument("--config", required=True)
    t.add_argument("--table", required=True)

    return parser


def _cmd_bracket(args) -> int:
    session = load_config(args.config)
    element = parse_expression(args.expr, session.cfg)
    _emit(element_to_json(element), f"= {format_element(element)}", args)
    return 0


def _cmd_verify(args) -> int:
    session = load_config(args.config)
    if args.suite == "all":
        reports = run_all(session, args.seed)
        payload = {
            "passed": all(r.passed for r in reports),
            "reports": [r.to_json_dict(args.timings) for r in reports],
        }
        print(json.dumps(payload, sort_keys=True))
        if not args.json_only:
            for r in reports:
                print(r.summary(), file=sys.stderr)
            total = sum(r.wall_time_s or 0 for r in reports)
            print(f"total: {total:.2f}s", file=sys.stderr)
        return 0 if payload["passed"] else 1
    report = run_suite(args.suite, session, args.seed)
    print(json.dumps(report.to_json_dict(args.timings), sort_keys=True))
    if not args.json_only:
        print(report.summary(), file=sys.stderr)
    return 0 if report.passed else 1


def _cmd_derivation_decompose(args) -> int:
    session = load_config(args.config)
    payload = _load_json_arg(args.table)
    if isinstance(payload, dict) and "table" in payload:
        payload = payload["table"]
    values = {
        basis_index_from_json(entry): element_from_json(session.cfg, entry["value"])
        for entry in payload.get("entries", ())
    }
    table = TableDerivation(session.cfg, session.box, values)
    result = decompose_degree_zero(table, session.box)
    _emit(decomposition_to_json(result), "decomposition: residual is zero", args)
    return 0


def _cmd_bider_extract(args) -> int:
    session = load_config(args.config)
    table = bilinear_from_json(session.cfg, session.box, _load_json_arg(args.table))
    lam = extract_inner_coefficient(table, session.box, session.lambda_reference)
    _emit(
        {"lambda": session.field.format(lam)},
        f"inner coefficient: {session.field.format(lam)}",
        args,
    )
    return 0


def _cmd_aut(args) -> int:
    session = load_config(args.config)
    cfg = session.cfg
    if args.subcommand == "compose":
        p1 = params_from_json(cfg, _load_json_arg(args.params))
        p2 = params_from_json(cfg, _load_json_arg(args.params2))
        result = p1.compose(p2)
        _emit(params_to_json(result), f"composed: {result!r}", args)
        return 0
    if args.subcommand == "apply":
        p = params_from_json(cfg, _load_json_arg(args.params))
        element = parse_expression(args.expr, cfg)
        image = p.apply(element)
        _emit(element_to_json(image), f"= {format_element(image)}", args)
        return 0
    if args.subcommand == "invert":
        p = params_from_json(cfg, _load_json_arg(args.params))
        result = p.invert()
        _emit(params_to_json(result), f"inverse: {result!r}", args)
        return 0
    payload = _load_json_arg(args.table)
    if isinstance(payload, dict) and "table" in payload:
        payload = payload["table"]
    theta = {
        basis_index_from_json(entry): element_from_json(cfg, entry["value"])
        for entry in payload.get("entries", ())
    }
    params = extract_params(theta, cfg, session.box)
    _emit(params_to_json(params), f"extracted: {params!r}", args)
    return 0


def _cmd_gamma_scaling(args) -> int:
    session = load_config(args.config)
    other = load_config(args.other)
    if session.field != other.field:
        raise ConfigError("the two configs use different scalar backends")
    iso = isomorphism_by_scaling(session.cfg, other.cfg)
    if iso is None:
        _emit({"scaling": None}, "no scaling relates the two lattices", args)
        return 0
    report = iso.verify(session.box)
    payload = {"scaling": session.field.format(iso.a), "verified": report.passed}
    _emit(payload, f"scaling {payload['scaling']}: bracket-preserving={report.passed}", args)
    return 0 if report.passed else 1


def _cmd_twolocal_certify(args) -> int:
    session = load_config(args.config)
    table = twolocal_from_json(session.cfg, _load_json_arg(args.table))
    derivation = certify_two_local(table, session.box, session.anchors)
    payload = {
        "derivation": derivation_to_json(tabulate(derivation, session.box)),
        "residuals": certification_residuals(table, derivation),
    }
    _emit(payload, "certified: table agrees with one derivation on all samples", args)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bracket":
            return _cmd_bracket(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "derivation":
            return _cmd_derivation_decompose(args)
        if args.command == "bider":
            return _cmd_bider_extract(args)
        if args.command == "aut":
            return _cmd_aut(args)
        if args.command == "gamma":
            return _cmd_gamma_scaling(args)
        if args.command == "twolocal":
            return _cmd_twolocal_certify(args)
        parser.error(f"unknown command {args.command!r}")
    except (ConfigError, UnknownSuite, ExprSyntaxError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LhvError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
