"""``verify`` command: list and run scenarios, emit JSON or text reports.

Exit codes: 0 when every check met its expected verdict, 1 on any mismatch,
2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from . import __version__
from .errors import ConfigError, UnknownScenario, VerificationError
from .suites import SCENARIOS, ScenarioResult, SuiteConfig, config_dict, get_scenario, run_scenario

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="verify", description="Seeded numerical checks of reciprocity and descent identities.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("list", help="list scenario ids with anchors and parameters")
    sub.add_parser("schema", help="print the JSON report schema")
    run = sub.add_parser("run", help="run scenarios")
    run.add_argument("--scenario", action="append", default=None,
                     help="scenario id, repeatable, or 'all' (default: all)")
    run.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                     help="scenario parameter, e.g. l=3 or alpha=sqrt(2)")
    run.add_argument("--seed", type=int, default=None, help="64-bit seed (fallback: $VERIFY_SEED, then 42)")
    run.add_argument("--samples", type=int, default=200)
    run.add_argument("--fd-step", type=float, default=1e-5)
    run.add_argument("--pass-tol", type=float, default=1e-6)
    run.add_argument("--fail-tol", type=float, default=1e-3)
    run.add_argument("--report", default=None, help="write the report here (format per --format)")
    run.add_argument("--format", choices=("json", "text"), default="text")
    run.add_argument("-v", "--verbose", action="store_true", help="print each check as it finishes")
    return p


def load_schema() -> dict:
    return json.loads(resources.files("frobrecip").joinpath("report_schema.json").read_text())


def _parse_params(items: list[str]) -> dict[str, str]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--param expects KEY=VALUE, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("VERIFY_SEED")
    if env is None or env == "":
        return 42
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"VERIFY_SEED must be an integer, got {env!r}") from None


def _select(ids: list[str] | None) -> list[str]:
    if not ids or "all" in ids:
        return list(SCENARIOS)
    for sid in ids:
        get_scenario(sid)
    return list(dict.fromkeys(ids))


def build_document(config: SuiteConfig, results: list[ScenarioResult]) -> dict:
    matched = sum(o.matched for r in results for o in r.outcomes)
    total = sum(len(r.outcomes) for r in results)
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "frobrecip", "version": __version__},
        "config": dict(config_dict(config), scenarios=[r.scenario for r in results]),
        "scenarios": [r.to_dict() for r in results],
        "overall": "PASS" if matched == total else "FAIL",
        "matched": matched,
        "total": total,
    }


def dump_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def format_text(doc: dict) -> str:
    lines = [f"frobrecip {doc['tool']['version']}  seed={doc['config']['seed']}  "
             f"samples={doc['config']['samples']}  fd_step={doc['config']['fd_step']:g}"]
    for sc in doc["scenarios"]:
        params = ", ".join(f"{k}={v}" for k, v in sc["params"].items())
        lines.append(f"\n[{sc['id']}]{' ' + params if params else ''}")
        for c in sc["checks"]:
            mark = "ok " if c["matched"] else "XX "
            res = c["residual_max"]
            res = "nan" if res is None else f"{res:.3e}"
            lines.append(f"  {mark}{c['label']:<44} {c['verdict']:<12} expected {c['expected']:<7} max {res}")
    lines.append(f"\noverall {doc['overall']}: {doc['matched']}/{doc['total']} checks matched")
    return "\n".join(lines) + "\n"


def _cmd_list() -> int:
    for s in SCENARIOS.values():
        params = " ".join(f"{p.name}={p.default}" for p in s.params) or "-"
        print(f"{s.id:<26} {s.doc:<28} {params:<22} {s.summary}")
    return EXIT_OK


def _cmd_run(args) -> int:
    config = SuiteConfig(seed=_resolve_seed(args.seed), samples=args.samples, fd_step=args.fd_step,
                         pass_tol=args.pass_tol, fail_tol=args.fail_tol)
    ids = _select(args.scenario)
    params = _parse_params(args.param)
    declared = {p.name for sid in ids for p in SCENARIOS[sid].params}
    unknown = set(params) - declared
    if unknown:
        raise ConfigError(f"no selected scenario takes parameter(s) {sorted(unknown)}")
    # validate every parameter before any check runs
    per = {sid: {k: v for k, v in params.items() if k in {p.name for p in SCENARIOS[sid].params}} for sid in ids}
    for sid in ids:
        SCENARIOS[sid].parse_params(per[sid])

    def progress(out):
        if args.verbose:
            print(f"  {out.label}: {out.report.verdict} (expected {out.expected})", file=sys.stderr, flush=True)

    results = []
    for sid in ids:
        if args.verbose:
            print(f"[{sid}]", file=sys.stderr, flush=True)
        results.append(run_scenario(sid, config, per[sid], progress))
    doc = build_document(config, results)
    text = dump_json(doc) if args.format == "json" else format_text(doc)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(format_text(doc) if args.format == "json" else text, end="")
    else:
        print(text, end="")
    return EXIT_OK if doc["overall"] == "PASS" else EXIT_MISMATCH


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "list":
            return _cmd_list()
        if args.command == "schema":
            print(json.dumps(load_schema(), indent=2, sort_keys=True))
            return EXIT_OK
        return _cmd_run(args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (ConfigError, UnknownScenario) as exc:
        print(f"verify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"verify: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as exc:
        print(f"verify: check aborted: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
