"""Command-line front door.

Subcommands: vm-run, search, table, analyze, gen, cert-issue, cert-verify,
bound. Exit codes: 0 success, 1 domain error (structured JSON on stdout),
2 usage error. Reports are deterministic: JSON keys are sorted and worker
count never changes bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import certlab, complexity, dovetail, generators, randomness, tbvm
from .tbvm import DEFAULT_LIMITS, RunLimits

DOMAIN_ERRORS = (
    certlab.WitnessExists,
    certlab.NotFoundWithinBudget,
    complexity.UncertifiableAtBudget,
    randomness.EmptyInputError,
    generators.SourceError,
    ValueError,
)


# ---------------------------------------------------------------------------
# argument types: every option is validated before any computation runs

def _bits_arg(text: str) -> str:
    if not tbvm.is_bits(text):
        raise argparse.ArgumentTypeError(f"{text!r} is not a bit string")
    return text


def _positive_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 1:
        raise argparse.ArgumentTypeError("value must be >= 1")
    return value


def _nonneg_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if value < 0:
        raise argparse.ArgumentTypeError("value must be >= 0")
    return value


def _source_arg(text: str):
    try:
        return text, generators.parse_source_uri(text)
    except generators.SourceURIError as err:
        raise argparse.ArgumentTypeError(str(err))


def _default_workers() -> int:
    raw = os.environ.get("KOLMO_WORKERS", "")
    return int(raw) if raw.isdigit() and int(raw) >= 1 else 1


def _add_limit_flags(sub, step_budget: bool = True):
    if step_budget:
        sub.add_argument("--step-budget", type=_positive_arg,
                         default=DEFAULT_LIMITS.step_budget,
                         help="per-run step budget")
    sub.add_argument("--output-cap", type=_positive_arg,
                     default=DEFAULT_LIMITS.output_cap,
                     help="max emitted bits per run")
    sub.add_argument("--reg-cap", type=_positive_arg,
                     default=DEFAULT_LIMITS.reg_cap,
                     help="register saturation value")
    sub.add_argument("--state-cap", type=_positive_arg,
                     default=DEFAULT_LIMITS.tracked_state_cap,
                     help="max states tracked for divergence detection")


def _add_workers_flag(sub):
    sub.add_argument("--workers", type=_positive_arg,
                     default=_default_workers(),
                     help="parallel shards (KOLMO_WORKERS); never changes output")


def _limits_from(args, step_budget: int | None = None) -> RunLimits:
    return RunLimits(
        step_budget=step_budget if step_budget is not None else args.step_budget,
        output_cap=args.output_cap,
        reg_cap=args.reg_cap,
        tracked_state_cap=args.state_cap)


def _limits_dict(limits: RunLimits) -> dict:
    return {"step_budget": limits.step_budget,
            "output_cap": limits.output_cap,
            "reg_cap": limits.reg_cap,
            "tracked_state_cap": limits.tracked_state_cap}


def _limits_comment(limits: RunLimits, **extra) -> str:
    fields = {**_limits_dict(limits), **extra}
    body = ",".join(f"{key}={value}" for key, value in fields.items())
    return f"# {body}"


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _fail(kind: str, detail: str, **extra) -> int:
    _print_json({"error": {"kind": kind, "detail": detail, **extra}})
    return 1


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_vm_run(args) -> int:
    limits = _limits_from(args)
    try:
        program = tbvm.parse(args.program)
    except tbvm.ParseError as err:
        outcome = tbvm.MachineOutcome(status=tbvm.PARSE_ERROR, output="",
                                      steps_used=0)
        report = {"program": args.program, "n": args.n,
                  "status": outcome.status, "output": outcome.output,
                  "steps": outcome.steps_used, "reason": err.reason,
                  "limits": _limits_dict(limits)}
        _print_json(report)
        return 0
    outcome = tbvm.run(program, args.n, limits)
    _print_json({"program": args.program, "n": args.n,
                 "status": outcome.status, "output": outcome.output,
                 "steps": outcome.steps_used, "limits": _limits_dict(limits)})
    return 0


def _cmd_search(args) -> int:
    limits = _limits_from(args)
    found = dovetail.find_descriptions(args.x, len(args.x), args.max_stage,
                                       limits=limits, workers=args.workers)
    if args.format == "csv":
        print(_limits_comment(limits, max_stage=args.max_stage))
        sys.stdout.write(dovetail.discoveries_to_csv(found))
        return 0
    _print_json({
        "x": args.x,
        "max_stage": args.max_stage,
        "limits": _limits_dict(limits),
        "discoveries": [
            {"stage": d.stage_found, "program_bits": d.program.code,
             "program_length": len(d.program.code), "steps_used": d.steps_used}
            for d in found],
    })
    return 0


def _cmd_table(args) -> int:
    limits = _limits_from(args)
    table = complexity.build_table(args.n, limits=limits, workers=args.workers)
    if args.format == "csv":
        print(_limits_comment(limits))
        sys.stdout.write(complexity.table_to_csv(table))
        return 0
    payload = complexity.table_to_dict(table)
    payload["limits"] = _limits_dict(limits)
    _print_json(payload)
    return 0


def _cmd_analyze(args) -> int:
    uri, spec = args.source
    limits = _limits_from(args)
    bits = generators.bits_from_source(spec, args.bits)
    table = None
    if args.block <= complexity.DEFAULT_TABLE_MAX_N:
        table = complexity.build_table(args.block, limits=limits,
                                       workers=args.workers)
    report = randomness.analyze_stream(bits, args.block, c=args.c,
                                       max_stage=args.max_stage, limits=limits,
                                       table=table, workers=args.workers)
    if args.format == "csv":
        print(_limits_comment(limits, max_stage=args.max_stage,
                              source=uri, c=args.c))
        print("block_index,verdict,deficiency,witness_bits")
        for i, verdict in enumerate(report.verdicts):
            deficiency = "" if verdict.deficiency is None else verdict.deficiency
            witness = verdict.witness_bits or ""
            print(f"{i},{verdict.kind},{deficiency},{witness}")
        return 0
    payload = randomness.report_to_dict(report)
    payload["source"] = uri
    payload["max_stage"] = args.max_stage
    payload["limits"] = _limits_dict(limits)
    _print_json(payload)
    return 0


def _cmd_gen(args) -> int:
    uri, spec = args.source
    bits = generators.bits_from_source(spec, args.bits)
    if args.format == "text":
        print(bits)
        return 0
    _print_json({"source": uri, "count": args.bits, "bits": bits})
    return 0


def _cmd_cert_issue(args) -> int:
    limits = _limits_from(args, step_budget=args.s)
    cert = certlab.issue(args.x, len(args.x), args.m, args.s, limits=limits,
                         workers=args.workers)
    doc = certlab.cert_to_dict(cert)
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text + "\n")
    print(text)
    return 0


def _cmd_cert_verify(args) -> int:
    try:
        with open(args.cert, "r", encoding="ascii") as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as err:
        report = certlab.VerificationReport(
            accepted=False, reason=certlab.REASON_MALFORMED, detail=str(err))
    else:
        report = certlab.verify_document(doc, workers=args.workers)
    payload = {"accepted": report.accepted}
    if report.reason is not None:
        payload["reason"] = report.reason
        payload["detail"] = report.detail
    if report.witness_bits is not None:
        payload["witness_bits"] = report.witness_bits
    _print_json(payload)
    return 0 if report.accepted else 1


def _cmd_bound(args) -> int:
    gap = certlab.chaitin_gap(args.c)
    if args.format == "text":
        print(gap)
        return 0
    _print_json({"c": args.c, "gap": gap})
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kolmolab",
        description="Conditional complexity and randomness-deficiency lab "
                    "on a fixed toy universal machine.")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("vm-run", help="run one program on input n")
    sub.add_argument("--program", type=_bits_arg, required=True)
    sub.add_argument("--n", type=_nonneg_arg, required=True)
    _add_limit_flags(sub)
    sub.add_argument("--format", choices=["json"], default="json")
    sub.set_defaults(func=_cmd_vm_run)

    sub = subs.add_parser("search", help="dovetail for descriptions of x")
    sub.add_argument("--x", type=_bits_arg, required=True)
    sub.add_argument("--max-stage", type=_positive_arg, default=16,
                     help="dovetail depth; cost doubles per unit")
    _add_limit_flags(sub)
    _add_workers_flag(sub)
    sub.add_argument("--format", choices=["csv", "json"], default="csv")
    sub.set_defaults(func=_cmd_search)

    sub = subs.add_parser("table", help="exact C(x|n) for all 2^n sequences")
    sub.add_argument("--n", type=_nonneg_arg, required=True)
    _add_limit_flags(sub)
    _add_workers_flag(sub)
    sub.add_argument("--format", choices=["csv", "json"], default="csv")
    sub.set_defaults(func=_cmd_table)

    sub = subs.add_parser("analyze", help="c-randomness verdicts per block")
    sub.add_argument("--source", type=_source_arg, required=True,
                     help="sha1:<hex> | pi: | const0: | const1: | alt: | "
                          "counter: | file:<path>?format=raw|ascii01|hex")
    sub.add_argument("--bits", type=_nonneg_arg, required=True)
    sub.add_argument("--block", type=_positive_arg, default=20)
    sub.add_argument("--c", type=int, default=0, help="deficiency tolerance")
    sub.add_argument("--max-stage", type=_positive_arg,
                     default=randomness.DEFAULT_MAX_STAGE)
    _add_limit_flags(sub)
    _add_workers_flag(sub)
    sub.add_argument("--format", choices=["json", "csv"], default="json")
    sub.set_defaults(func=_cmd_analyze)

    sub = subs.add_parser("gen", help="emit bits from a reference source")
    sub.add_argument("--source", type=_source_arg, required=True)
    sub.add_argument("--bits", type=_nonneg_arg, required=True)
    sub.add_argument("--format", choices=["text", "json"], default="text")
    sub.set_defaults(func=_cmd_gen)

    sub = subs.add_parser("cert-issue",
                          help="certify C^s(x|l(x)) >= m by exhaustion")
    sub.add_argument("--x", type=_bits_arg, required=True)
    sub.add_argument("--m", type=_positive_arg, required=True)
    sub.add_argument("--s", type=_positive_arg, required=True,
                     help="per-program step budget (part of the claim)")
    _add_limit_flags(sub, step_budget=False)
    _add_workers_flag(sub)
    sub.add_argument("--out", help="also write the certificate to this file")
    sub.set_defaults(func=_cmd_cert_issue)

    sub = subs.add_parser("cert-verify", help="re-check a certificate file")
    sub.add_argument("--cert", required=True, help="certificate JSON path")
    _add_workers_flag(sub)
    sub.set_defaults(func=_cmd_cert_verify)

    sub = subs.add_parser("bound",
                          help="largest N with N <= log2(N) + c")
    sub.add_argument("--c", type=_nonneg_arg, required=True)
    sub.add_argument("--format", choices=["text", "json"], default="text")
    sub.set_defaults(func=_cmd_bound)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except certlab.WitnessExists as err:
        return _fail("WitnessExists", str(err),
                     witness_bits=err.program.code)
    except complexity.UncertifiableAtBudget as err:
        return _fail("UncertifiableAtBudget", err.detail,
                     best_value=err.estimate.value)
    except DOMAIN_ERRORS as err:
        return _fail(type(err).__name__, str(err))


if __name__ == "__main__":
    sys.exit(main())
