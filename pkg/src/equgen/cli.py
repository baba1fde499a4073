"""Command-line front end.

Exit codes: 0 success, 1 negative verdict or failed replay, 2 unsupported
size, 3 budget exceeded, 4 unreadable file or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import constructions as cons
from . import script as sc
from .closure import (DEFAULT_MAX_ELEMENTS, BudgetExceeded, ClosureError, generate_sublattice,
                      verify_generates_equ, verify_generates_quo)
from .partition import LimitExceededError, Partition, PartitionError, bell, read_partition_set

EXIT_OK, EXIT_FAIL, EXIT_UNSUPPORTED, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3, 4


def _show(p: Partition) -> str:
    if p.n <= 9:
        return f"{p.format():<28} {p.format_eq()}"
    return p.format()


def _emit(args, doc: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _engine(args) -> dict:
    return {"max_elements": args.max_elements, "time_limit": args.time_limit, "workers": args.workers}


def _cert_doc(cert, timing: bool) -> dict:
    doc = json.loads(cert.to_json(timing=timing))
    doc.pop("derivation", None)
    return doc


def _verify_set(gs, mode: str, args):
    if mode == "none":
        return None
    hints = cons.cycle_hints(gs) if mode == "certificate" else ()
    return verify_generates_equ(list(gs.generators), mode, names=list(gs.names), hints=hints,
                                **_engine(args))


def _generator_lines(gs) -> list[str]:
    lines = [f"n = {gs.n}"]
    if gs.block_counts is not None:
        lines.append("block counts: " + " ".join(map(str, gs.block_counts)))
    for name, g in zip(gs.names, gs.generators):
        lines.append(f"  {name:<6} {_show(g) if isinstance(g, Partition) else g}")
    return lines


def cmd_construct(args) -> int:
    gs = cons.construct_consecutive(args.n)
    if args.out:
        Path(args.out).write_text(gs.format())
    cert = _verify_set(gs, args.verify, args)
    doc = gs.to_dict()
    lines = _generator_lines(gs)
    lines.append("consecutive block counts: " + ("yes" if gs.consecutive else "NO"))
    if cert is not None:
        doc["verification"] = _cert_doc(cert, not args.no_timing)
        lines.append(f"{cert.mode}: generated {cert.generated_count} elements, "
                     f"verdict {'generating' if cert.verdict else 'NOT generating'}")
    _emit(args, doc, lines)
    return EXIT_OK if cert is None or cert.verdict else EXIT_FAIL


def _read_generators(path: str) -> list[Partition]:
    parts = read_partition_set(Path(path).read_text())
    if not parts:
        raise PartitionError("no partitions in file")
    return parts


def cmd_verify(args) -> int:
    parts = _read_generators(args.generators)
    cert = verify_generates_equ(parts, args.mode, **_engine(args))
    lines = [f"{cert.mode}: generated {cert.generated_count} elements",
             "verdict: " + ("generating" if cert.verdict else "NOT generating")]
    _emit(args, _cert_doc(cert, not args.no_timing), lines)
    return EXIT_OK if cert.verdict else EXIT_FAIL


def cmd_closure(args) -> int:
    parts = _read_generators(args.generators)
    cert = generate_sublattice(parts, **_engine(args))
    doc = {"n": cert.n, "generated_count": cert.generated_count,
           "full_lattice": cert.verdict if cert.n <= 11 else None}
    lines = [f"generated sublattice: {cert.generated_count} elements"]
    if cert.n <= 11:
        lines.append(f"bell({cert.n}) = {bell(cert.n)}; whole lattice: {cert.verdict}")
    if args.stats:
        stats = dict(cert.stats)
        if args.no_timing:
            stats.pop("elapsed", None)
        doc["stats"] = stats
        lines += [f"  {k}: {v}" for k, v in sorted(stats.items())]
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_replay(args) -> int:
    script = sc.parse_script(sc.resolve_fixture(args.script).read_text())
    report = sc.replay(script)
    lines = []
    for st in report.steps:
        mark = "ok  " if st.passed else "FAIL"
        lines.append(f"{mark} {st.name} = {st.computed}" + (f"  ({st.note})" if st.note else ""))
    if report.cycle_ok is not None:
        lines.append("cycle atoms derived: " + ("yes" if report.cycle_ok else "NO"))
    lines.append(f"{len(report.steps) - len(report.failures)}/{len(report.steps)} steps pass")
    _emit(args, report.to_dict(), lines)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_zadori(args) -> int:
    try:
        gs = cons.zadori(args.n)
    except cons.ConstructionError as exc:
        raise cons.UnsupportedSize(str(exc)) from None
    cert = _verify_set(gs, args.verify, args)
    doc = gs.to_dict()
    doc["identities_hold"] = cons.check_identities(args.n)
    lines = _generator_lines(gs) + [f"sequence identities hold: {doc['identities_hold']}"]
    if cert is not None:
        doc["verification"] = _cert_doc(cert, not args.no_timing)
        lines.append(f"{cert.mode}: generated {cert.generated_count} elements, "
                     f"verdict {'generating' if cert.verdict else 'NOT generating'}")
    _emit(args, doc, lines)
    return EXIT_OK if doc["identities_hold"] and (cert is None or cert.verdict) else EXIT_FAIL


def cmd_search(args) -> int:
    if not 3 <= args.n <= cons.search.SEARCH_LIMIT:
        raise cons.UnsupportedSize(f"search needs 3 <= n <= {cons.search.SEARCH_LIMIT}")
    report = cons.search_consecutive(args.n, time_limit=args.time_limit)
    doc = report.to_dict()
    if args.no_timing:
        doc.pop("elapsed_s")
    if report.found:
        lines = [f"{len(report.found)} generating set(s) up to relabelling "
                 f"({'exhaustive' if report.exhaustive else 'partial'}):"]
        for gs in report.found:
            lines.append("  " + "  ".join(p.format() for p in gs.generators))
    else:
        lines = ["no generating set; " + ("exhaustive" if report.exhaustive else "partial search")]
    lines.append(f"{report.representatives} representatives, {report.pruned} pruned, "
                 f"{report.closures} closures")
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_bell(args) -> int:
    value = bell(args.n)
    _emit(args, {"n": args.n, "bell": value}, [str(value)])
    return EXIT_OK


def cmd_quo_demo(args) -> int:
    six = cons.mc95_system()
    report = sc.replay(six.script)
    cyc = verify_generates_quo(list(six.generators), "cycle", names=list(six.names),
                               hints=cons.quo_cycle_hints(six), **_engine(args))
    four = cons.quo_four_gen()
    kul = verify_generates_quo(list(four.generators), "kulin", names=list(four.names),
                               hints=cons.quo_cycle_hints(four), **_engine(args))
    doc = {
        "six_generator_replay": report.passed,
        "six_generator_cycle_certificate": cyc.verdict,
        "four_generator_kulin_certificate": kul.verdict,
    }
    lines = [
        f"six oriented-ladder quasiorders, n=19: script replay "
        f"{'passes' if report.passed else 'FAILS'} ({len(report.steps)} steps)",
        f"  directed cycle certificate: {cyc.verdict} ({cyc.generated_count} elements stored)",
        f"four quasiorders with a one-way delta edge: kulin certificate {kul.verdict} "
        f"({kul.generated_count} elements stored)",
    ]
    _emit(args, doc, lines)
    ok = report.passed and cyc.verdict and kul.verdict
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equgen",
                                     description="Four-element generating sets of partition lattices")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, engine=True):
        p.add_argument("--json", action="store_true", help="structured output")
        p.add_argument("--no-timing", action="store_true", help="omit timing fields from output")
        if engine:
            p.add_argument("--workers", type=int, default=1, help="threads for the closure engine")
            p.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS)
            p.add_argument("--time-limit", type=float, default=None, help="seconds")
        return p

    p = common(sub.add_parser("construct", help="generators with consecutive block counts"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verify", choices=["none", "full", "certificate"], default="none")
    p.add_argument("--out", help="write the generator set to this file")
    p.set_defaults(func=cmd_construct)

    p = common(sub.add_parser("verify", help="decide whether a partition file generates"))
    p.add_argument("--generators", required=True)
    p.add_argument("--mode", choices=["full", "certificate"], default="full")
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("closure", help="size of the generated sublattice"))
    p.add_argument("--generators", required=True)
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_closure)

    p = common(sub.add_parser("replay", help="check a derivation script"), engine=False)
    p.add_argument("--script", required=True, help="path, or the name of a shipped fixture")
    p.set_defaults(func=cmd_replay)

    p = common(sub.add_parser("zadori", help="the two-row ladder generators, odd n"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verify", choices=["none", "full", "certificate"], default="none")
    p.set_defaults(func=cmd_zadori)

    p = common(sub.add_parser("search", help="exhaustive search for n <= 7"), engine=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--time-limit", type=float, default=None, help="seconds")
    p.set_defaults(func=cmd_search)

    p = common(sub.add_parser("bell", help="number of partitions of an n-set"), engine=False)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bell)

    p = common(sub.add_parser("quo-demo", help="quasiorder generating systems on 19 elements"))
    p.set_defaults(func=cmd_quo_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except cons.UnsupportedSize as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except LimitExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (OSError, PartitionError, sc.ScriptError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ClosureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
