"""Command-line front end: run verifications, dump objects, self-test.

Exit codes: 0 every selected verdict is certified (HConstant or
CaseImpossible) with no discrepancies; 2 verdicts hold but discrepancies
were recorded; 3 some verdict is inconclusive or only probabilistic;
4 internal error or unknown selector.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import textio
from .proofscripts import (
    SCENARIO_CASES,
    ProofReport,
    RunConfig,
    UnknownFixture,
    load_fixture_text,
    run_case,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2, which collides
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(4)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="idealcmc",
                     description="exact verifier for the constant-mean-"
                                 "curvature scenarios of ideal "
                                 "biconservative hypersurfaces")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification pipelines")
    v.add_argument("--scenario", default="all",
                   choices=["delta2", "delta3", "delta4", "all"])
    v.add_argument("--case", default="all")
    v.add_argument("--budget", type=int, default=None,
                   help="seconds per sub-chain (scenario default if omitted)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", default=None, metavar="PATH|-",
                   help="write the JSON report(s) to PATH, or - for stdout")
    v.add_argument("--fixtures", default=None, metavar="DIR")
    v.add_argument("--trace", default="off", choices=["off", "steps", "full"])

    d = sub.add_parser("dump", help="dump a context, fixture, or run step")
    d.add_argument("what", choices=["context", "fixture", "step"])
    d.add_argument("selector")
    d.add_argument("output", nargs="?", default=None)

    s = sub.add_parser("selftest", help="run the property suites")
    s.add_argument("level", nargs="?", default="quick",
                   choices=["quick", "full"])
    return parser


def _parse_selector(scenario: str, case: str) -> List:
    jobs = []
    scenarios = [scenario] if scenario != "all" else list(SCENARIO_CASES)
    for s in scenarios:
        if case == "all":
            jobs.extend((s, c) for c in SCENARIO_CASES[s])
        elif case in SCENARIO_CASES[s]:
            jobs.append((s, case))
        elif scenario != "all":
            raise KeyError(f"scenario {s} has no case {case!r}")
    if not jobs:
        raise KeyError(f"no case {case!r} in the selected scenarios")
    return jobs


def _verdict_line(report: ProofReport) -> str:
    v = report.verdict
    extra = ""
    if report.discrepancies:
        extra = f", {len(report.discrepancies)} discrepancy record(s)"
    return (f"{report.scenario}/{report.case}: {v.kind} ({v.certification}, "
            f"{len(report.steps)} steps{extra})")


def cmd_verify(args) -> int:
    try:
        jobs = _parse_selector(args.scenario, args.case)
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    config = RunConfig(budget=args.budget, seed=args.seed, trace=args.trace,
                       fixtures_dir=args.fixtures)
    reports = []
    worst = 0
    for scenario, case in jobs:
        try:
            report = run_case(scenario, case, config)
        except Exception as exc:  # noqa: BLE001 - reported via exit code
            print(f"{scenario}/{case}: internal error: {exc}",
                  file=sys.stderr)
            return 4
        reports.append(report)
        print(_verdict_line(report))
        if args.trace in ("steps", "full"):
            for s in report.steps:
                print(f"    [{s.kind}] {s.name}: {s.quote}")
        ok_kind = report.verdict.kind in ("HConstant", "CaseImpossible")
        closed = all(b.closed for b in report.verdict.branches)
        if not ok_kind or not closed:
            worst = max(worst, 3)
        elif report.verdict.certification != "certified":
            worst = max(worst, 3)
        elif report.discrepancies:
            worst = max(worst, 2)
    if args.json is not None:
        if len(reports) == 1:
            payload = textio.emit_report_json(reports[0])
        else:
            payload = "[\n" + ",\n".join(
                textio.emit_report_json(r) for r in reports) + "\n]"
        if args.json == "-":
            print(payload)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
    return worst


def _dump_context(selector: str) -> str:
    from .frame import build_context

    for scenario in SCENARIO_CASES:
        for case in SCENARIO_CASES[scenario]:
            if selector in (f"{scenario}{case}", f"{scenario}/{case}"):
                ctx = build_context(scenario, case)
                lines = [f"context {ctx.tag}", "", "variables:"]
                lines.append("  " + " ".join(ctx.table.names))
                lines.append("")
                lines.append("definitions:")
                for name, rf, note in ctx.definitions:
                    lines.append(f"  {name} = {textio.serialize_ratfunc(rf)}")
                    lines.append(f"      {note}")
                lines.append("")
                lines.append("derivation:")
                for name in ctx.table.names:
                    rule = ctx.derivation.get(name)
                    if rule is not None:
                        lines.append(
                            f"  {name} -> {textio.serialize_ratfunc(rule)}")
                for name, rule in ctx.formal_overrides.items():
                    lines.append(f"  {name} -> "
                                 f"{textio.serialize_ratfunc(rule)} (formal)")
                lines.append("")
                lines.append("relations:")
                for rel in ctx.relations:
                    lines.append(f"  {rel.name}: "
                                 f"{textio.serialize_poly(rel.poly)} = 0")
                    lines.append(f"      {rel.note}")
                lines.append("")
                lines.append("assumptions (nonvanishing):")
                for poly, note in ctx.assumptions:
                    lines.append(f"  {textio.serialize_poly(poly)}")
                    lines.append(f"      {note}")
                return "\n".join(lines) + "\n"
    raise KeyError(f"unknown context selector {selector!r}")


def cmd_dump(args) -> int:
    try:
        if args.what == "context":
            payload = _dump_context(args.selector)
        elif args.what == "fixture":
            payload = load_fixture_text(args.selector)
        else:  # step
            if "/" not in args.selector:
                raise KeyError("step selector must look like delta4B/name")
            where, name = args.selector.split("/", 1)
            for scenario in SCENARIO_CASES:
                for case in SCENARIO_CASES[scenario]:
                    if where in (f"{scenario}{case}", f"{scenario}/{case}"):
                        report = run_case(scenario, case, RunConfig())
                        if name not in report.step_outputs:
                            known = ", ".join(sorted(report.step_outputs))
                            raise KeyError(
                                f"no recorded polynomial for step {name!r}; "
                                f"known: {known}")
                        payload = textio.serialize_poly(
                            report.step_outputs[name]) + "\n"
                        break
                else:
                    continue
                break
            else:
                raise KeyError(f"unknown run selector {where!r}")
    except (KeyError, UnknownFixture) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    ok, lines = run_selftest(args.level)
    for line in lines:
        print(line)
    return 0 if ok else 1


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    if args.command == "dump":
        return cmd_dump(args)
    return cmd_selftest(args)


if __name__ == "__main__":
    sys.exit(main())
