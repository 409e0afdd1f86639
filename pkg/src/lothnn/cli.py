"""Command-line entry point: ``lothnn <command> [options] [FILE|-]``.

Every command builds one document; ``--format structured`` prints it as
JSON and ``--format human`` renders the same fields as indented text.
Exit status is 0 on success, 1 on a domain error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .lot import LotError, parse
from .words import format_word

SCHEMA = 1
COMMANDS = ("validate", "info", "present", "hnn", "derive", "decompose", "enum", "conjecture")
ENUM_CHECKS = ("lemma-I", "lemma-T", "corollary-IT", "sequences", "certificates", "structure", "freeness",
               "psi", "conjecture-consistency", "decomposition")


def _lot_doc(lot) -> list[list[str]]:
    return [[e.iota, e.tau, e.label] for e in lot.edges]


def _read(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise LotError(f"cannot read {path}: {exc.strerror}") from exc
    return parse(text)


def _graph_doc(lot, g) -> dict:
    from .derived import all_simple_cycles

    return {
        "components": [sorted(c) for c in g.components()],
        "arcs": [[a.src, a.dst, lot.edge_name(a.edge)] for a in g.arcs],
        "cycles": [{"vertices": list(c.vertices), "edges": [lot.edge_name(e) for e in c.edges],
                    "directed": c.is_directed} for c in all_simple_cycles(g)],
    }


def cmd_validate(lot, args) -> dict:
    from .lot import is_reduced

    ok, violations = is_reduced(lot)
    return {"valid": True, "vertices": list(lot.vertices), "edges": len(lot.edges), "lot": _lot_doc(lot),
            "reduced": ok, "violations": [v.describe(lot) for v in violations]}


def cmd_info(lot, args) -> dict:
    from .derived import INITIAL, TERMINAL, build
    from .lot import diameter, is_minimal, is_reduced, spanning_classification

    reduced, violations = is_reduced(lot)
    minimal, witness = is_minimal(lot)
    try:
        sp = spanning_classification(lot)
        spanning = {"u": sp.u, "v": sp.v, "case": sp.case, "spanned_by_two": sp.spanned_by_two,
                    "pair": list(sp.pair) if sp.pair else None, "a": sp.a, "spanned_by_auv": sp.spanned_by_auv}
    except LotError as exc:
        spanning = {"not_applicable": str(exc)}
    return {
        "lot": _lot_doc(lot),
        "diameter": diameter(lot),
        "reduced": reduced,
        "violations": [v.describe(lot) for v in violations],
        "minimal": minimal,
        "minimality_witness": None if witness is None else sorted(witness.vertices),
        "spanning": spanning,
        "I": _graph_doc(lot, build(lot, INITIAL)),
        "T": _graph_doc(lot, build(lot, TERMINAL)),
    }


def cmd_present(lot, args) -> dict:
    from .lot import abelianization, presentation

    pres = presentation(lot)
    return {"generators": list(pres.generators), "relators": [format_word(r) for r in pres.relators],
            "abelianization": abelianization(pres)}


def cmd_hnn(lot, args) -> dict:
    from .hnn import assemble

    return assemble(lot).to_dict()


def cmd_derive(lot, args) -> dict:
    from .conjecture import general_cover
    from .covers import BACKWARD, FORWARD, iterate, seed_word, verify_certificate
    from .derived import all_simple_cycles

    cov = general_cover(lot)
    g, direction = (cov.I, FORWARD) if args.seed == "I" else (cov.T, BACKWARD)
    cycles = all_simple_cycles(g)
    if not cycles:
        raise LotError(f"{args.seed}(G) has no cycle to seed a derivative")
    seed, edges = seed_word(cycles[0], direction)
    items, stopped = iterate(cov, seed, edges, direction, args.steps)
    trace, prev = [], seed
    for k, it in enumerate(items, start=1):
        ok, msg = verify_certificate(lot, prev, it.certificate, it.word)
        trace.append({"index": k, "word": format_word(it.word), "lift": format_word(it.lift.lifted),
                      "lifts": it.lift.lifts, "certificate_ok": ok, "certificate_error": msg,
                      "certificate": it.certificate.to_dict(lot)})
        prev = it.word
    return {"lot": _lot_doc(lot), "seed_graph": args.seed, "direction": direction,
            "cycle": list(cycles[0].vertices), "seed": format_word(seed), "steps_requested": args.steps,
            "stopped_at_lift_failure": stopped, "trace": trace}


def cmd_decompose(lot, args) -> dict:
    from .decomposition import classify

    return classify(lot).to_dict()


def cmd_conjecture(lot, args) -> dict:
    from .conjecture import explore

    return explore(lot, args.max_iterations).to_dict()


def cmd_enum(args) -> dict:
    import os
    from collections import Counter

    from .enumerator import MAX_VERTICES, EnumerationSpec, enumerate_lots, run_property_suite

    filters = [f.strip() for f in (args.filter or "").split(",") if f.strip()]
    try:
        spec = EnumerationSpec(args.max_vertices, frozenset(filters), args.dedupe)
    except ValueError as exc:
        raise LotError(str(exc)) from exc
    counts: Counter = Counter()

    def counted():
        for lot in enumerate_lots(spec):
            counts[lot.n] += 1
            yield lot

    checks = list(ENUM_CHECKS) + (["minimal-oracle"] if args.max_vertices <= 5 else [])
    workers = min(os.cpu_count() or 1, 8)
    summary = run_property_suite(spec, checks, lots=counted(), workers=workers)
    return {"max_vertices": spec.max_vertices, "cap": MAX_VERTICES, "filters": sorted(spec.filters),
            "dedupe": spec.dedupe, "counts": {str(n): counts[n] for n in sorted(counts)},
            "total": sum(counts.values()), "checks": [s.to_dict() for s in summary]}


HANDLERS = {"validate": cmd_validate, "info": cmd_info, "present": cmd_present, "hnn": cmd_hnn,
            "derive": cmd_derive, "decompose": cmd_decompose, "conjecture": cmd_conjecture}


def render_human(value, indent: int = 0) -> str:
    """Indented plain-text rendering of a JSON-like document."""
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, dict) and v:
                body = render_human(v, indent + 1).splitlines()
                lines.append(f"{pad}- {body[0].strip()}")
                lines.extend(body[1:])
            elif isinstance(v, list) and v and all(not isinstance(x, (dict, list)) for x in v):
                lines.append(f"{pad}- " + " ".join(_scalar(x) for x in v))
            elif isinstance(v, list) and v:
                lines.append(f"{pad}-")
                lines.append(render_human(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return "\n".join(lines)


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, dict)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lothnn", description="Labelled oriented trees and HNN bases.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", nargs="?", default=None, help="LOT file, or - for standard input")
    parser.add_argument("--format", choices=("human", "structured"), default="human")
    parser.add_argument("--seed", choices=("I", "T"), default="I")
    parser.add_argument("--steps", type=_nonneg, default=3)
    parser.add_argument("--max-vertices", type=_positive, default=4)
    parser.add_argument("--filter", default="")
    parser.add_argument("--dedupe", action="store_true")
    parser.add_argument("--max-iterations", type=_nonneg, default=8)
    return parser


def _nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command != "enum" and args.input is None:
        print(f"lothnn: error: {args.command} needs an input file or -", file=stderr)
        return 2
    if args.command == "enum" and args.input is not None:
        print("lothnn: error: enum takes no input file", file=stderr)
        return 2
    try:
        if args.command == "enum":
            body = cmd_enum(args)
        else:
            body = HANDLERS[args.command](_read(args.input), args)
    except LotError as exc:
        print(f"lothnn: {args.command}: {exc}", file=stderr)
        return 1
    doc = {"schema": SCHEMA, "command": args.command, "result": body}
    if args.format == "structured":
        stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        stdout.write(render_human(doc) + "\n")
    return 0


def main() -> None:
    sys.exit(run())
