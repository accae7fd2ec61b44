"""Command-line entry point: ``prymstrata <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from .errors import PrymError
from .graph import WeightedGraph, validate_graph
from .harmonic import HarmonicMorphism, validate_harmonic
from .modforms import GAMMA1_2, SL2Z, CurveData, cusp_dim, eichler_shimura_dim, eisenstein_dim, first_nonzero_cusp_weight
from .prym import PrymStructure, enumerate_prym_structures, specializations, validate_prym
from .pullback import normal_bundle_c1, normal_bundle_ctop, pullback_boundary_class
from .strata import build_gluing, enumerate_strata, nontaut_bound, stratum_factors

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    """Unreadable or malformed input file; mapped to the usage exit status."""


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _load_graph(path: str) -> WeightedGraph:
    try:
        return WeightedGraph.from_dict(_load_json(path))
    except PrymError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_morphism(path: str) -> HarmonicMorphism:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    try:
        return HarmonicMorphism.from_dict(data)
    except PrymError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_structure(path: str) -> PrymStructure:
    phi = _load_morphism(path)
    report = validate_prym(phi)
    if not report.ok:
        raise ValueError(f"{path} is not a Prym structure:\n{report}")
    return PrymStructure.from_morphism(phi)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _structure_row(i: int, phi: PrymStructure) -> str:
    c = phi.classification
    return (f"{i:>4}  codim={phi.codim}  target_genera={list(phi.target.genera)}  "
            f"source_genera={list(phi.source.genera)}  exc={list(c.exc)}  tr={list(c.tr)}  ntr={list(c.ntr)}")


def _emit_structures(items: list[PrymStructure], fmt: str):
    if fmt == "json":
        print(_dump([p.to_dict() for p in items]))
    else:
        print(f"{len(items)} structures")
        for i, p in enumerate(items):
            print(_structure_row(i, p))


# -- subcommands -------------------------------------------------------------


def cmd_validate_graph(args) -> int:
    G = _load_graph(args.file)
    report = validate_graph(G, connected=not args.allow_disconnected)
    print(report)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_validate_harmonic(args) -> int:
    report = validate_harmonic(_load_morphism(args.file), args.degree)
    print(report)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_validate_prym(args) -> int:
    report = validate_prym(_load_morphism(args.file), args.ramified)
    print(report)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_enumerate_covers(args) -> int:
    G = _load_graph(args.file)
    ramified = args.ramified if args.ramified is not None else any(l.startswith("ram:") for _, l in G.leg_labels)
    _emit_structures(enumerate_prym_structures(G, ramified, args.ordered_fibers), args.format)
    return EXIT_OK


def cmd_enumerate_strata(args) -> int:
    strata = enumerate_strata(args.genus, args.legs, args.max_codim, jobs=args.jobs)
    if args.format == "json":
        print(_dump([d.to_dict() for d in strata]))
    else:
        print(f"{len(strata)} strata")
        for i, d in enumerate(strata):
            factors = " x ".join(f.symbol() for f in d.factors)
            print(f"{_structure_row(i, d.structure)}  dim={d.dimension}  factors={factors}")
    return EXIT_OK


def cmd_specialize(args) -> int:
    phi = _load_structure(args.file)
    _emit_structures(specializations(phi, args.max_extra), args.format)
    return EXIT_OK


def cmd_pullback(args) -> int:
    result = pullback_boundary_class(_load_structure(args.phi1), _load_structure(args.phi2))
    if args.format == "json":
        print(_dump(result.to_dict()))
    elif args.format == "latex":
        print(result.latex())
    else:
        print(f"{len(result.terms)} terms")
        for i, t in enumerate(result.terms):
            print(f"{_structure_row(i, t.structure)}  colors={list(t.pair.node_colors)}  "
                  f"aut={t.pair.automorphisms}  expr={t.expression}")
    return EXIT_OK


def cmd_normal_bundle(args) -> int:
    phi = _load_structure(args.file)
    expr = normal_bundle_ctop(phi) if args.top else normal_bundle_c1(phi)
    if args.format == "json":
        print(_dump({"expression": expr.to_json(), "text": str(expr)}))
    elif args.format == "latex":
        print(expr.latex())
    else:
        print(expr)
    return EXIT_OK


def cmd_build_gluing(args) -> int:
    phi = build_gluing(args.kind, args.genus, i=args.i, r=args.r, m=args.m, x=args.x, p=args.p)
    if args.format == "json":
        print(_dump(phi.to_dict()))
    else:
        d = stratum_factors(phi)
        print(_structure_row(0, phi) + "  factors=" + " x ".join(f.symbol() for f in d.factors))
    return EXIT_OK


def cmd_bounds(args) -> int:
    print(nontaut_bound(args.genus))
    return EXIT_OK


def cmd_modforms(args) -> int:
    if args.level == "gamma1-2":
        data = GAMMA1_2
    elif args.level == "sl2z":
        data = SL2Z
    else:
        data = CurveData(args.genus, args.eps2, args.eps3, args.cusps)
    if args.what == "first-cusp":
        print(first_nonzero_cusp_weight(data))
        return EXIT_OK
    if args.weight is None:
        raise InputError("--weight is required unless --what first-cusp")
    table: dict[str, Callable[[], int]] = {
        "cusp": lambda: cusp_dim(data, args.weight),
        "eisenstein": lambda: eisenstein_dim(data, args.weight),
        "eichler-shimura": lambda: eichler_shimura_dim(args.weight, data),
    }
    print(table[args.what]())
    return EXIT_OK


def cmd_repro(args) -> int:
    from .repro import run_all

    return EXIT_OK if run_all(sys.stdout) else EXIT_INVALID


# -- parser ------------------------------------------------------------------


def _ramified_flag(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--ramified", dest="ramified", action="store_true", default=None,
                   help="allow ram:-labelled legs (default: on iff such legs exist)")
    g.add_argument("--no-ramified", dest="ramified", action="store_false")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prymstrata", description="Boundary calculus of pointed Prym moduli spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-graph", help="check a weighted graph record")
    p.add_argument("file")
    p.add_argument("--allow-disconnected", action="store_true")
    p.set_defaults(func=cmd_validate_graph)

    p = sub.add_parser("validate-harmonic", help="check a harmonic morphism record")
    p.add_argument("file")
    p.add_argument("--degree", type=int, default=None)
    p.set_defaults(func=cmd_validate_harmonic)

    p = sub.add_parser("validate-prym", help="check a Prym structure record")
    p.add_argument("file")
    _ramified_flag(p)
    p.set_defaults(func=cmd_validate_prym)

    p = sub.add_parser("enumerate-covers", help="all Prym structures over a base graph")
    p.add_argument("file")
    _ramified_flag(p)
    p.add_argument("--ordered-fibers", action="store_true")
    p.add_argument("--format", choices=["json", "table"], default="table")
    p.set_defaults(func=cmd_enumerate_covers)

    p = sub.add_parser("enumerate-strata", help="all strata of given genus and markings")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--legs", type=int, default=0)
    p.add_argument("--max-codim", type=int, default=1)
    p.add_argument("--format", choices=["json", "table"], default="table")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_enumerate_strata)

    p = sub.add_parser("specialize", help="specialisations of a Prym structure")
    p.add_argument("file")
    p.add_argument("--max-extra", type=int, default=1)
    p.add_argument("--format", choices=["json", "table"], default="table")
    p.set_defaults(func=cmd_specialize)

    p = sub.add_parser("pullback", help="pull back the stratum of phi2 along the gluing map of phi1")
    p.add_argument("phi1")
    p.add_argument("phi2")
    p.add_argument("--format", choices=["json", "latex", "table"], default="table")
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("normal-bundle", help="Chern class of the normal bundle of a gluing map")
    p.add_argument("file")
    p.add_argument("--top", action="store_true", help="top Chern class instead of the first")
    p.add_argument("--format", choices=["json", "latex", "table"], default="table")
    p.set_defaults(func=cmd_normal_bundle)

    p = sub.add_parser("build-gluing", help="one of the six boundary gluings")
    p.add_argument("--kind", type=int, required=True, choices=range(1, 7))
    p.add_argument("--genus", type=int, required=True)
    for name in ("i", "r", "m", "x", "p"):
        p.add_argument(f"--{name}", type=int, default=0)
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.set_defaults(func=cmd_build_gluing)

    p = sub.add_parser("bounds", help="marking bound above which non-tautological classes are known")
    p.add_argument("--genus", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("modforms", help="dimensions of modular form spaces")
    p.add_argument("--level", choices=["gamma1-2", "sl2z"], default=None)
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--eps2", type=int, default=0)
    p.add_argument("--eps3", type=int, default=0)
    p.add_argument("--cusps", type=int, default=1)
    p.add_argument("--weight", type=int, default=None)
    p.add_argument("--what", choices=["cusp", "eisenstein", "eichler-shimura", "first-cusp"], default="cusp")
    p.set_defaults(func=cmd_modforms)

    p = sub.add_parser("repro", help="re-check every reference value")
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(str(exc))
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
