"""Command-line front end.  Every command is a thin wrapper over ``records``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .errors import InputError, ResourceError
from .records import (
    CACHE_ENV,
    SCAN_FIELDS,
    SUITES,
    ResultCache,
    compute_record,
    resolve_subject,
    run_verification,
    scan_catalog,
    write_catalog,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


def _add_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--named", help="uniform:R:N, boolean:N, fano, nonfano, graphic:K4, ...")
    src.add_argument("--file", help="matroid or poset JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matroid-zeta", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute the zeta function of one input")
    _add_input(c)
    c.add_argument("--building-set", default="minimal", help="minimal, full or @labels.json")
    c.add_argument("--out", help="write the JSON record here (and a .tex snippet beside it)")
    c.add_argument("--format", choices=("json", "csv", "latex"), default="json")
    c.add_argument("--cache-dir", help=f"result cache directory (else ${CACHE_ENV})")
    c.add_argument("--include-chi", action="store_true", help="store the chi tables too")
    c.add_argument("--assert-iterated-blowup", action="store_true",
                   help="also check iterated blowups against the nested-set complex")

    v = sub.add_parser("verify", help="run verification suites on one input")
    _add_input(v)
    v.add_argument("--suite", action="append", choices=(*SUITES, "all"),
                   help="repeatable; default all")
    v.add_argument("--out", help="write the JSON report here")
    v.add_argument("--assert-iterated-blowup", action="store_true")
    v.add_argument("--corrupt-chi", action="store_true",
                   help="debug: perturb every chi table (the run must fail)")

    s = sub.add_parser("scan", help="Taylor scan over a directory of matroid JSON files")
    s.add_argument("catalog")
    s.add_argument("--out", help="report path stem; writes .json and .csv")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--format", choices=("json", "csv"), default="json")

    w = sub.add_parser("catalog", help="write the standard reference catalog")
    w.add_argument("directory")
    return parser


def _cache(arg: str | None) -> ResultCache | None:
    root = arg or os.environ.get(CACHE_ENV)
    return ResultCache(root) if root else None


def _emit(text: str, out=None) -> None:
    (out or sys.stdout).write(text if text.endswith("\n") else text + "\n")


def cmd_compute(args) -> int:
    subject = resolve_subject(args.named, args.file)
    record, hit = compute_record(subject, args.building_set, include_chi=args.include_chi,
                                 assert_blowup=args.assert_iterated_blowup,
                                 cache=_cache(args.cache_dir))
    logging.info("cache %s", "hit" if hit else "miss")
    payload = record.to_json()
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
        out.with_suffix(".tex").write_text(payload["latex"], encoding="utf-8")
    if args.format == "json":
        _emit(json.dumps(payload, indent=2, sort_keys=True))
    elif args.format == "latex":
        _emit(payload["latex"])
    else:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["hash", "name", "building_set", "zeta", "z_at_0", "dz_at_0"])
        w.writerow([payload["matroid_hash"], payload["name"], payload["building_set"]["choice"],
                    payload["zeta_text"], payload["taylor"]["z_at_0"],
                    payload["taylor"]["dz_at_0"]])
        _emit(buf.getvalue())
    return EXIT_OK if payload["verification"]["passed"] else EXIT_FAIL


def cmd_verify(args) -> int:
    subject = resolve_subject(args.named, args.file)
    report = run_verification(subject, args.suite or ["all"], corrupt=args.corrupt_chi,
                              assert_blowup=args.assert_iterated_blowup)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    _emit(text)
    for name, rep in report["suites"].items():
        status = "ok" if rep["ok"] else f"FAILED ({len(rep['mismatches'])} mismatches)"
        print(f"{name}: {rep['checked']} checks, {status}", file=sys.stderr)
    return EXIT_OK if report["ok"] else EXIT_FAIL


def cmd_scan(args) -> int:
    result = scan_catalog(args.catalog, jobs=max(1, args.jobs))
    if args.out:
        jpath, cpath = result.write(args.out)
        logging.info("wrote %s and %s", jpath, cpath)
    if args.format == "json":
        _emit(json.dumps(result.to_json(), indent=2, sort_keys=True))
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=SCAN_FIELDS, extrasaction="ignore")
        w.writeheader()
        w.writerows(result.rows)
        _emit(buf.getvalue())
    summary = result.summary
    for name in summary["findings"]:
        print(f"FINDING: {name} breaks Z(0)=1 or Z'(0)=-|ground|", file=sys.stderr)
    print(f"scanned {summary['entries']}: {summary['computed']} computed, "
          f"{summary['skipped']} skipped", file=sys.stderr)
    return EXIT_OK


def cmd_catalog(args) -> int:
    for p in write_catalog(args.directory):
        print(p)
    return EXIT_OK


COMMANDS = {"compute": cmd_compute, "verify": cmd_verify, "scan": cmd_scan, "catalog": cmd_catalog}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {exc.witness!r}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
