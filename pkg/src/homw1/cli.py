"""Command-line front end.

Every subcommand prints one JSON report (canonical key order, no timing
unless ``--timing`` is given) so identical invocations produce identical
bytes.  Exit codes: 0 success, 1 verification failure, 2 usage or guard
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Any

from . import __version__
from .charclass import (
    DEFAULT_SIMPLEX_GUARD,
    CoverError,
    build_double_cover,
    chromatic_lower_bound,
    make_test_graph,
    w1_power_vanishes,
    w1_report,
)
from .gf2alg import GF2ChainComplex, betti
from .graphs import GraphError, GuardExceeded, chromatic_number, edge_swap, flip_automorphism, load_graph
from .homcomplex import (
    DEFAULT_ELEMENT_GUARD,
    check_f_equivariance,
    check_freeness,
    hom_poset,
    induced_involution,
    verify_f_lemmas,
)
from .posets import ComplexError, ComplexInvolution, QuotientError, read_complex, write_complex
from .products import verify_section3

TOOL = "homw1"
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def serialize_report(report: dict[str, Any]) -> str:
    """Canonical JSON text for a report, with tool metadata added."""
    doc = dict(report)
    doc["meta"] = {"tool": TOOL, "version": __version__}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _threads() -> int:
    raw = os.environ.get("HOMW1_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"HOMW1_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"HOMW1_THREADS must be a positive integer, got {raw!r}")
    return value


def _involution_for(hp, g):
    """Element involution from the edge flip of K_2 or an odd cycle, else None."""
    try:
        a = edge_swap(g) if g.vertex_count == 2 else flip_automorphism(g)
    except GraphError:
        return None
    return induced_involution(hp, a)


# -- subcommands --------------------------------------------------------------


def cmd_build_hom(args) -> tuple[dict, int]:
    g, h = load_graph(args.g), load_graph(args.h)
    hp = hom_poset(g, h, args.guard_elems)
    oc = hp.order_complex(args.guard_simplices)
    report = {
        "elements": len(hp),
        "minimal_elements": len(hp.minimal_elements()),
        "f_vector": oc.f_vector(),
        "euler_characteristic": oc.euler_characteristic(),
    }
    tau = _involution_for(hp, g)
    if tau is not None:
        report["freeness"] = check_freeness(hp, tau).as_dict()
    return report, EXIT_OK


def _load_complex_arg(args):
    if args.complex:
        return read_complex(args.complex)
    if not (args.g and args.h):
        raise UsageError("give --g and --h, or --complex FILE")
    g, h = load_graph(args.g), load_graph(args.h)
    hp = hom_poset(g, h, args.guard_elems)
    c = hp.order_complex(args.guard_simplices)
    tau = _involution_for(hp, g)
    return c, (ComplexInvolution(tau) if tau is not None else None)


def _check_simplices(c, args) -> None:
    total = sum(c.f_vector())
    if total > args.guard_simplices:
        raise GuardExceeded(f"complex has {total} simplices > --guard-simplices {args.guard_simplices}")


def cmd_betti(args) -> tuple[dict, int]:
    c, _ = _load_complex_arg(args)
    _check_simplices(c, args)
    return {"f_vector": c.f_vector(), "betti": betti(GF2ChainComplex(c))}, EXIT_OK


def cmd_w1(args) -> tuple[dict, int]:
    c, t = _load_complex_arg(args)
    if t is None:
        raise UsageError("w1 needs a free involution: --g must be complete:2 or an odd cycle, or the file must carry one")
    dc = build_double_cover(c, t)
    report: dict[str, Any] = {"w1": w1_report(dc).as_dict()}
    if args.power is not None:
        vanishes = w1_power_vanishes(dc, args.power)
        report["verdicts"] = [
            {"operation": "w1_power_vanishes", "params": {"power": args.power}, "vanishes": vanishes}
        ]
    return report, EXIT_OK


def cmd_bound(args) -> tuple[dict, int]:
    g = load_graph(args.target)
    make_test_graph(args.test)
    cert = chromatic_lower_bound(g, args.test, args.guard_elems, args.guard_simplices)
    report: dict[str, Any] = {"certificate": cert.as_dict()}
    code = EXIT_OK
    if g.vertex_count <= args.chi_guard:
        chi = chromatic_number(g, args.chi_guard)
        sound = cert.bound <= chi
        report["chromatic_number"] = chi
        report["verdicts"] = [
            {
                "operation": "chromatic_lower_bound",
                "params": {"target": args.target, "test": args.test},
                "bound_le_chromatic_number": sound,
            }
        ]
        code = EXIT_OK if sound else EXIT_FAILED
    return report, code


def cmd_verify_lemmas(args) -> tuple[dict, int]:
    lemmas = verify_f_lemmas(args.r, args.n, args.guard_elems)
    report: dict[str, Any] = {"lemmas": lemmas.as_dict()}
    passed = lemmas.passed
    if not args.skip_equivariance:
        eq = check_f_equivariance(args.r, args.n, args.guard_elems)
        report["equivariance"] = eq
        passed = passed and eq["passed"]
    report["verdicts"] = [
        {"operation": "verify_f_lemmas", "params": {"r": args.r, "n": args.n}, "passed": passed}
    ]
    return report, EXIT_OK if passed else EXIT_FAILED


def cmd_verify_product(args) -> tuple[dict, int]:
    result = verify_section3(args.r, args.n)
    result["verdicts"] = [
        {"operation": "verify_section3", "params": {"r": args.r, "n": args.n}, "passed": result["passed"]}
    ]
    return result, EXIT_OK if result["passed"] else EXIT_FAILED


def cmd_export(args) -> tuple[dict, int]:
    if not args.complex:
        raise UsageError("export needs --complex FILE as destination")
    c, t = _load_complex_arg(argparse.Namespace(**{**vars(args), "complex": None}))
    write_complex(args.complex, c, t)
    return {"written": str(args.complex), "f_vector": c.f_vector(), "involution": t is not None}, EXIT_OK


def cmd_import(args) -> tuple[dict, int]:
    if not args.complex:
        raise UsageError("import needs --complex FILE")
    c, t = read_complex(args.complex)
    _check_simplices(c, args)
    report: dict[str, Any] = {"f_vector": c.f_vector(), "betti": betti(GF2ChainComplex(c))}
    if t is not None:
        report["w1"] = w1_report(build_double_cover(c, t)).as_dict()
    return report, EXIT_OK


COMMANDS = {
    "build-hom": cmd_build_hom,
    "betti": cmd_betti,
    "w1": cmd_w1,
    "bound": cmd_bound,
    "verify-lemmas": cmd_verify_lemmas,
    "verify-product": cmd_verify_product,
    "export": cmd_export,
    "import": cmd_import,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--human", action="store_true", help="print a readable summary instead of JSON")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    common.add_argument("--guard-elems", type=int, default=DEFAULT_ELEMENT_GUARD)
    common.add_argument("--guard-simplices", type=int, default=DEFAULT_SIMPLEX_GUARD)

    parser = argparse.ArgumentParser(prog=TOOL, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def graphs(p, required=True):
        p.add_argument("--g", required=required, help="source graph spec or file")
        p.add_argument("--h", required=required, help="target graph spec or file")

    graphs(sub.add_parser("build-hom", parents=[common]))
    for name in ("betti", "w1", "export"):
        p = sub.add_parser(name, parents=[common])
        graphs(p, required=False)
        p.add_argument("--complex", type=Path, help="complex file (JSON)")
        if name == "w1":
            p.add_argument("--power", type=int)
    p = sub.add_parser("bound", parents=[common])
    p.add_argument("--target", required=True, help="graph spec or file")
    p.add_argument("--test", default="k2", help="k2 or c:ODD")
    p.add_argument("--chi-guard", type=int, default=12, help="max vertices for the brute-force chromatic number")
    p = sub.add_parser("verify-lemmas", parents=[common])
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--skip-equivariance", action="store_true")
    p = sub.add_parser("verify-product", parents=[common])
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p = sub.add_parser("import", parents=[common])
    p.add_argument("--complex", type=Path, required=True)
    return parser


def _human(report: dict[str, Any], indent: str = "") -> str:
    lines = []
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_human(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for item in value:
                lines.append(f"{indent}  - " + ", ".join(f"{k}={item[k]}" for k in sorted(item)))
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(lines)


def dispatch(argv: list[str] | None = None) -> tuple[int, dict]:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        _threads()
        body, code = COMMANDS[args.command](args)
    except (UsageError, GraphError, GuardExceeded, ComplexError, QuotientError, CoverError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return EXIT_USAGE, {}
    report = {
        "command": args.command,
        "argv": list(argv if argv is not None else sys.argv[1:]),
        **body,
    }
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - started, 6)
    text = _human(report) + "\n" if args.human else serialize_report(report)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code, report


def main(argv: list[str] | None = None) -> int:
    code, _ = dispatch(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
