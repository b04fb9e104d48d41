"""Command-line entry point.

Subcommands: classify one datum, enumerate cuspidals, verify the property
battery over a grid, list distinguished lifts, certify the GL(2) oracle.
Flags mirror the JSON field names one-for-one.  Fully deterministic; exit
status 0 means no property failure and no error, 1 means a verification
failure, 2 malformed input, 3 a violated invariant.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys

from . import __version__
from .arith import QuadExtension
from .battery import (
    ALL_PROPERTIES,
    GridSpec,
    ResultsCache,
    _classify_with_kappa,
    battery_counts,
    char0_cuspidal_exponents,
    emit_report,
    modular_cuspidal_exponents,
    run_battery,
)
from .angles import RationalAngle
from .characters import CyclicCharacter, frobenius_orbit
from .cuspidal import CuspidalRep, block_swap_sign, enumerate_distinguished_lifts
from .errors import InputFormatError, InvariantViolation
from .gl2 import DEFAULT_MAX_Q, certify_table
from .level0 import LevelZeroCuspidalDatum, datum_from_json

CACHE_ENV = "CUSPDIST_CACHE"


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x)
    except ValueError as exc:
        raise InputFormatError(f"expected a comma-separated integer list: {text!r}") from exc


def _add_datum_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", help="JSON file with a datum (or a classify bundle)")
    parser.add_argument("--q0", type=int, help="base residue cardinality")
    ram = parser.add_mutually_exclusive_group()
    ram.add_argument("--ramified", dest="ramified", action="store_true", default=None)
    ram.add_argument("--unramified", dest="ramified", action="store_false")
    parser.add_argument("--n", type=int, help="rank")
    parser.add_argument("--l", type=int, default=None,
                        help="coefficient characteristic (omit for characteristic 0)")
    parser.add_argument("--exponent", type=int, help="canonical parameter exponent")
    parser.add_argument("--central-angle", default="0",
                        help="central character value at the uniformizer, as num/den")


def _datum_from_args(args) -> LevelZeroCuspidalDatum:
    if args.input:
        if any(v is not None for v in (args.q0, args.n, args.exponent, args.ramified)):
            raise InputFormatError("--input excludes the inline datum flags")
        try:
            with open(args.input, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise InputFormatError(f"cannot read {args.input}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputFormatError(
                f"malformed JSON in {args.input} at line {exc.lineno}, column {exc.colno}"
            ) from exc
        if "datum" in doc:
            doc = doc["datum"]
        return datum_from_json(doc)
    missing = [
        flag
        for flag, value in (("--q0", args.q0), ("--n", args.n), ("--exponent", args.exponent))
        if value is None
    ]
    if missing or args.ramified is None:
        if args.ramified is None:
            missing.append("--ramified/--unramified")
        raise InputFormatError(f"missing datum flags: {', '.join(missing)}")
    ext = QuadExtension(args.q0, args.ramified)
    param = CuspidalRep.from_parameter(
        CyclicCharacter(ext.q, args.n, args.exponent, args.l)
    )
    return LevelZeroCuspidalDatum(ext, param, RationalAngle.parse(args.central_angle))


def _print_doc(doc: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(doc, indent=2))
        return
    for key, value in doc.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        print(f"{key:>24}: {value}")


def _cmd_classify(args) -> int:
    dat = _datum_from_args(args)
    bundle = dict(_classify_with_kappa(dat))
    cache_path = args.cache or os.environ.get(CACHE_ENV)
    if cache_path:
        cache = ResultsCache(cache_path)
        doc = bundle["datum"]
        cache.put(ResultsCache.key_for(doc), doc, bundle)
    _print_doc(bundle, args.format)
    return 0


def _cmd_enumerate(args) -> int:
    q, n, ell = args.q, args.n, args.l
    QuadExtension(q, True)  # validates q
    if ell is None:
        exponents = char0_cuspidal_exponents(q, n)
    else:
        exponents = modular_cuspidal_exponents(q, n, ell)
    doc = {
        "q": q,
        "n": n,
        "coeff": "zero" if ell is None else {"l": ell},
        "count": len(exponents),
        "exponents": exponents,
    }
    _print_doc(doc, args.format)
    return 0


def _cmd_lifts(args) -> int:
    dat = _datum_from_args(args)
    if dat.ell is None:
        raise InvariantViolation("lift enumeration needs a modular datum (--l)")
    found = enumerate_distinguished_lifts(dat.finite_param, dat.ext)
    items = []
    for rep in found:
        item: dict = {"exponent": rep.parameter.exponent,
                      "orbit": list(frobenius_orbit(rep.parameter))}
        if dat.ext.ramified and rep.n % 2 == 0:
            item["swap_sign"] = block_swap_sign(rep, dat.ext).as_sign()
        items.append(item)
    doc = {"datum": dat.to_json(), "count": len(found), "lifts": items}
    _print_doc(doc, args.format)
    return 0


def _cmd_verify(args) -> int:
    spec = GridSpec(
        q0_values=_int_list(args.q0),
        n_max=args.n_max,
        ell_values=_int_list(args.l),
        extensions=tuple(args.extensions.split(",")),
        oracle=not args.no_oracle,
    )
    properties = tuple(args.properties.split(",")) if args.properties else ALL_PROPERTIES
    cache_path = args.cache or os.environ.get(CACHE_ENV)
    cache = ResultsCache(cache_path) if cache_path else None
    reports = run_battery(spec, properties=properties, cache=cache)
    timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    fmt = "csv" if args.format == "csv" else "json"
    document = emit_report(reports, fmt=fmt, spec=spec, timestamp=timestamp)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(document)
        except OSError as exc:
            raise InputFormatError(f"cannot write {args.output}: {exc}") from exc
    if args.format == "table":
        counts = battery_counts(reports)
        for pid, row in counts["per_property"].items():
            print(f"{pid:>4}: pass={row['pass']} fail={row['fail']} skipped={row['skipped']}")
        total = counts["total"]
        print(f"total: pass={total['pass']} fail={total['fail']} skipped={total['skipped']}")
        for r in reports:
            if r.status == "fail":
                print(f"FAIL {r.property_id} {json.dumps(r.cell)} witness={json.dumps(r.witness)}")
    else:
        print(document)
    return 1 if any(r.status == "fail" for r in reports) else 0


def _cmd_oracle(args) -> int:
    report = certify_table(args.q, max_q=args.max_q)
    _print_doc(report.to_json(), args.format)
    return 0 if report.all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuspdist",
        description="Exact classification of selfdual and distinguished "
        "cuspidal representations, with brute-force verification.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="full verdict bundle for one datum")
    _add_datum_flags(p_classify)
    p_classify.add_argument("--format", choices=("table", "json"), default="table")
    p_classify.add_argument("--cache", help=f"verdict cache path (or ${CACHE_ENV})")
    p_classify.set_defaults(func=_cmd_classify)

    p_enum = sub.add_parser("enumerate", help="list cuspidal parameters for one cell")
    p_enum.add_argument("--q", type=int, required=True)
    p_enum.add_argument("--n", type=int, required=True)
    p_enum.add_argument("--l", type=int, default=None)
    p_enum.add_argument("--format", choices=("table", "json"), default="table")
    p_enum.set_defaults(func=_cmd_enumerate)

    p_verify = sub.add_parser("verify", help="run the property battery on a grid")
    p_verify.add_argument("--q0", default="3,5,7,9")
    p_verify.add_argument("--n-max", type=int, default=6)
    p_verify.add_argument("--l", default="2,3,5,7,13")
    p_verify.add_argument("--extensions", default="ramified,unramified")
    p_verify.add_argument("--no-oracle", action="store_true")
    p_verify.add_argument("--properties", default="",
                          help="comma-separated subset of P1..P12")
    p_verify.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p_verify.add_argument("--output", help="also write the report document here")
    p_verify.add_argument("--cache", help=f"verdict cache path (or ${CACHE_ENV})")
    p_verify.set_defaults(func=_cmd_verify)

    p_lifts = sub.add_parser("lifts", help="enumerate distinguished lifts of a modular datum")
    _add_datum_flags(p_lifts)
    p_lifts.add_argument("--format", choices=("table", "json"), default="table")
    p_lifts.set_defaults(func=_cmd_lifts)

    p_oracle = sub.add_parser("oracle", help="certify the GL(2) character table")
    p_oracle.add_argument("--q", type=int, required=True)
    p_oracle.add_argument("--max-q", type=int, default=DEFAULT_MAX_Q)
    p_oracle.add_argument("--format", choices=("table", "json"), default="table")
    p_oracle.set_defaults(func=_cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
