"""Command line front end: run, validate, catalog, replay.

Exit codes: 0 all checks as expected, 1 a check failed or a replay did not
verify, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

from . import certs
from .cases import NAMED_RINGS, CaseError, load_case, named_ring, resolve_case_path, shipped_case_paths
from .catalog import DEFAULT_BUDGET, BudgetExceeded, enumerate_modules_up_to
from .verify import Settings, run_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _outcome(rep: dict, expect: str, expect_summary: dict, strict: bool) -> tuple:
    mismatched = {k: {"expected": v, "observed": rep["summary"].get(k)}
                  for k, v in expect_summary.items() if rep["summary"].get(k) != v}
    if mismatched:
        return "unexpected", mismatched
    if rep["verdict"] == expect:
        return "ok", None
    if rep["verdict"] == "skipped" and expect == "pass" and not strict:
        return "skipped", None
    return "unexpected", {"verdict": {"expected": expect, "observed": rep["verdict"]}}


def _run_one(path: str, index: int, settings: Settings) -> dict:
    case = load_case(path)
    spec = case.checks[index]
    rep = run_check(spec.check, case.resolved_args(spec), settings)
    return rep.to_json()


def run_case(path: str, *, cap: Optional[int] = None, cutoff: int = 6, seed: Optional[int] = None,
             budget: Optional[int] = None, strict: bool = False, jobs: int = 1) -> dict:
    case = load_case(path)
    settings = Settings(cap=cap or 4, cutoff=cutoff, seed=case.seed if seed is None else seed,
                        budget=case.budget if budget is None else budget)
    if jobs > 1 and len(case.checks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_one, path, s.index, settings) for s in case.checks]
            results = [f.result() for f in futures]
    else:
        results = [run_check(s.check, case.resolved_args(s), settings).to_json() for s in case.checks]
    entries = []
    for spec, rep in zip(case.checks, results):
        outcome, mismatch = _outcome(rep, spec.expect, spec.expect_summary, strict)
        rep = dict(rep, expect=spec.expect, outcome=outcome)
        if mismatch:
            rep["mismatch"] = mismatch
        entries.append(rep)
    report = {
        "registry_version": certs.REGISTRY_VERSION,
        "case": case.name,
        "objects": case.object_digests(),
        "settings": {"cap": settings.cap, "cutoff": settings.cutoff, "seed": settings.seed,
                     "budget": settings.budget, "strict_hypotheses": strict},
        "checks": entries,
        "totals": {k: sum(1 for e in entries if e["outcome"] == k) for k in ("ok", "skipped", "unexpected")},
    }
    report["digest"] = certs.report_digest(report)
    return report


def summary_text(report: dict) -> str:
    lines = [f"case {report['case']}  (cap {report['settings']['cap']}, seed {report['settings']['seed']})"]
    for e in report["checks"]:
        extra = f"  [{e['reason']}]" if e.get("reason") else ""
        lines.append(f"  {e['outcome']:<10} {e['check']:<20} verdict={e['verdict']:<8} "
                     f"certs={len(e['certificates'])} {e['millis']}ms{extra}")
    t = report["totals"]
    lines.append(f"  ok={t['ok']} skipped={t['skipped']} unexpected={t['unexpected']}")
    return "\n".join(lines)


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def cmd_run(args) -> int:
    paths = shipped_case_paths() if args.shipped else [resolve_case_path(c) for c in args.cases]
    if not paths:
        print("no case files given", file=sys.stderr)
        return EXIT_USAGE
    status = EXIT_OK
    out_dir = Path(args.out)
    for path in paths:
        report = run_case(path, cap=args.cap, cutoff=args.cutoff, seed=args.seed, budget=args.budget,
                          strict=args.strict_hypotheses, jobs=args.jobs)
        body = certs.strip_timing(report) if args.no_timing else report
        stem = Path(path).stem
        _write(out_dir / f"{stem}.report.json", json.dumps(body, sort_keys=True, indent=1) + "\n")
        text = summary_text(report)
        _write(out_dir / f"{stem}.summary.txt", text + "\n")
        print(text)
        if report["totals"]["unexpected"]:
            status = EXIT_FAIL
    return status


def cmd_validate(args) -> int:
    for c in args.cases:
        case = load_case(resolve_case_path(c))
        print(f"ok {case.name}: {len(case.objects)} objects, {len(case.checks)} checks")
    return EXIT_OK


def cmd_catalog(args) -> int:
    try:
        ring = named_ring(args.ring)
    except KeyError:
        print(f"unknown ring {args.ring!r}; known: {', '.join(NAMED_RINGS)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cat = enumerate_modules_up_to(ring, args.cap, args.budget)
    except BudgetExceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    dump = dict(cat.to_json(), ring=args.ring, classes=len(cat.modules))
    if args.out:
        _write(Path(args.out), json.dumps(dump, sort_keys=True) + "\n")
    dims = sorted(m.dim for m in cat.indecomposables)
    print(f"{args.ring}: {len(cat.modules)} classes up to dimension {args.cap}, "
          f"{len(cat.indecomposables)} indecomposable (dims {dims})")
    return EXIT_OK


def cmd_replay(args) -> int:
    report = json.loads(Path(args.report).read_text(encoding="utf-8"))
    result = certs.replay_report(report)
    print("replay ok" if result["ok"] else f"replay failed: {json.dumps(result['failures'])}")
    return EXIT_OK if result["ok"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="torsionfree", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute the checks of case files")
    run.add_argument("cases", nargs="*", help="case file paths or shipped case names")
    run.add_argument("--shipped", action="store_true", help="run every shipped case")
    run.add_argument("--cap", type=int, default=4)
    run.add_argument("--cutoff", type=int, default=6)
    run.add_argument("--seed", type=int, default=None, help="overrides the case seed")
    run.add_argument("--budget", type=int, default=None, help=f"catalog budget (case value or {DEFAULT_BUDGET})")
    run.add_argument("--strict-hypotheses", action="store_true", help="count skipped checks as failures")
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--out", default="reports")
    run.add_argument("--no-timing", action="store_true", help="omit millis fields from the written report")
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="parse case files and build their objects")
    val.add_argument("cases", nargs="+")
    val.set_defaults(func=cmd_validate)

    cat = sub.add_parser("catalog", help="enumerate modules of a named ring")
    cat.add_argument("ring", help=", ".join(NAMED_RINGS))
    cat.add_argument("--cap", type=int, default=4)
    cat.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    cat.add_argument("--out", default=None)
    cat.set_defaults(func=cmd_catalog)

    rep = sub.add_parser("replay", help="revalidate the certificates of a report")
    rep.add_argument("report")
    rep.set_defaults(func=cmd_replay)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CaseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
