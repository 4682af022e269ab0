"""Command-line entry point: ``adgraphs <command> ...``.

Results go to stdout (JSON by default), diagnostics to stderr.  Exit status
is 0 on success, 1 when a required claim fails, and 2 on usage errors such as
an unknown subcommand or a malformed graph spec.

Environment overrides: ADGRAPHS_SEED, ADGRAPHS_WORKERS, ADGRAPHS_CACHE_DIR.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from dataclasses import dataclass

from adgraphs.adgraph import AdGraph, Side, VertexRef, parse_graph_spec
from adgraphs.cache import ResultCache
from adgraphs.ff import FieldError, field_of_order
from adgraphs.metrics import (GraphDisconnected, census_from_csv, count_components, diameter,
                              distance, girth, has_4cycle, r3_census)
from adgraphs.poly import is_pp_bruteforce, is_pp_hermite_dickson, parse_poly, poly_variables, value_set
from adgraphs.rng import DEFAULT_SEED, stream
from adgraphs.symmetry import SearchLimitExceeded, are_isomorphic, aut_group
from adgraphs.verify import VerifyOptions, any_blocking_failure, select_claims, verify_all

log = logging.getLogger("adgraphs")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int
    workers: int
    cache: ResultCache
    output_format: str
    timings: bool


def _int_auto(text: str) -> int:
    return int(text, 0)


def _q_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


_VERTEX = re.compile(r"^\s*([\(\[])\s*([-\d\s,]+)\s*([\)\]])\s*$")


def parse_vertex(text: str) -> VertexRef:
    """``(a,b,c)`` is a point, ``[a,b,c]`` a line; coordinates are element codes."""
    m = _VERTEX.match(text)
    if not m or {m.group(1), m.group(3)} not in ({"(", ")"}, {"[", "]"}):
        raise UsageError(f"malformed vertex {text!r}; use (a,b,c) for points or [a,b,c] for lines")
    coords = tuple(int(x) for x in m.group(2).split(","))
    return VertexRef(Side.POINT if m.group(1) == "(" else Side.LINE, coords)


def _graph(args) -> AdGraph:
    try:
        return parse_graph_spec(args.spec, args.q, args.e)
    except (ValueError, FieldError) as exc:
        raise UsageError(f"bad graph spec: {exc}") from None


def _emit(cfg: RunConfig, payload, plain: str | None = None, csv_text: str | None = None) -> None:
    if cfg.output_format == "csv" and csv_text is not None:
        sys.stdout.write(csv_text)
    elif cfg.output_format == "plain" and plain is not None:
        print(plain)
    else:
        print(json.dumps(payload))


# -- graph ----------------------------------------------------------------------------

def _graph_header(g: AdGraph, cfg: RunConfig) -> dict:
    return {"spec": g.name, "q": g.q, "seed": cfg.seed}


def cmd_graph(args, cfg: RunConfig) -> int:
    g = _graph(args)
    head = _graph_header(g, cfg)
    what = args.graph_command
    if what == "stats":
        out = {**head, "dim": g.dim, "vertices": g.vertex_count, "degree": g.q,
               "components": count_components(g.table), "has_4cycle": has_4cycle(g)}
        _emit(cfg, out, "\n".join(f"{k}: {v}" for k, v in out.items()))
    elif what == "census":
        if g.dim != 3:
            raise UsageError("census needs a three-dimensional graph")
        key = cfg.cache.key(op="census", spec=args.spec, q=g.q, e=args.e, seed=cfg.seed)
        text = cfg.cache.fetch(key, lambda: r3_census(g, rng=stream(cfg.seed, "census", g.q)).to_csv())
        rows = census_from_csv(text)
        ranked = sorted(rows.items(), key=lambda kv: (-kv[1], kv[0]))
        out = {**head, "classes": len(rows),
               "max": {"class": _class_json(ranked[0][0]), "r3": ranked[0][1]},
               "values": [{"class": _class_json(k), "r3": v} for k, v in sorted(rows.items())]}
        plain = "\n".join(f"{_class_json(k)} {v}" for k, v in ranked)
        _emit(cfg, out, plain, csv_text=text)
    elif what == "girth":
        out = {**head, "girth": girth(g)}
        _emit(cfg, out, str(out["girth"]))
    elif what == "diameter":
        try:
            out = {**head, "diameter": diameter(g)}
        except GraphDisconnected as exc:
            out = {**head, "diameter": None, "components": exc.components}
        _emit(cfg, out, str(out["diameter"]))
    elif what == "distance":
        try:
            u, v = g.vertex_id(parse_vertex(args.source)), g.vertex_id(parse_vertex(args.target))
        except (ValueError, IndexError) as exc:
            raise UsageError(str(exc)) from None
        d = distance(g, u, v)
        out = {**head, "from": args.source, "to": args.target, "distance": d}
        _emit(cfg, out, "infinity" if d is None else str(d))
    return EXIT_OK


def _class_json(key) -> str:
    side, a, b = key
    return f"({a},{b},0)" if side == Side.POINT else f"[{a},{b},0]"


# -- aut / iso ----------------------------------------------------------------------------

def cmd_aut(args, cfg: RunConfig) -> int:
    g = _graph(args)
    try:
        rep = aut_group(g, args.node_limit)
    except SearchLimitExceeded as exc:
        log.error("%s; partial orbit sizes %s, %d generators", exc, exc.orbit_sizes, len(exc.generators))
        return EXIT_FAIL
    head = _graph_header(g, cfg)
    if args.aut_command == "order":
        out = {**head, **rep.to_json()}
        _emit(cfg, out, out["order"])
    else:
        gens = [m.images.tolist() for m in rep.generators]
        out = {**head, "order": str(rep.order), "generators": gens}
        _emit(cfg, out, "\n".join(" ".join(map(str, g_)) for g_ in gens))
    return EXIT_OK


def cmd_iso(args, cfg: RunConfig) -> int:
    g1 = _graph(args)
    try:
        g2 = parse_graph_spec(args.other, args.q or g1.q)
    except (ValueError, FieldError) as exc:
        raise UsageError(f"bad graph spec: {exc}") from None
    ok, witness = are_isomorphic(g1, g2, args.node_limit)
    out = {"spec": g1.name, "other": g2.name, "q": g1.q, "isomorphic": ok}
    if ok and args.witness:
        out["witness"] = witness.images.tolist()
    _emit(cfg, out, "isomorphic" if ok else "not isomorphic")
    return EXIT_OK


# -- pp ---------------------------------------------------------------------------------------

def cmd_pp(args, cfg: RunConfig) -> int:
    try:
        F = field_of_order(args.q)
        names = poly_variables(args.poly)
        if len(names) > 1:
            raise ValueError(f"expected a univariate polynomial, found variables {sorted(names)}")
        poly = parse_poly(args.poly, F, tuple(names) or ("x",))
    except (ValueError, FieldError, SyntaxError) as exc:
        raise UsageError(str(exc)) from None
    rep = value_set(poly, F)
    if args.pp_command == "test":
        out = {"pp": rep.is_pp, "valueset": rep.size}
        if args.method == "hd":
            if poly.degree() < 1:
                raise UsageError("the Hermite-Dickson test needs a nonconstant polynomial")
            out["pp"] = is_pp_hermite_dickson(poly, F)
        elif args.method == "both":
            out["hermite_dickson"] = is_pp_hermite_dickson(poly, F) if poly.degree() >= 1 else None
            out["bruteforce"] = is_pp_bruteforce(poly, F)
        _emit(cfg, out, f"pp={out['pp']} valueset={rep.size}")
    else:
        out = {"size": rep.size, "values": sorted(rep.values), "pp": rep.is_pp}
        _emit(cfg, out, " ".join(map(str, out["values"])))
    return EXIT_OK


# -- verify -------------------------------------------------------------------------------------

def cmd_verify(args, cfg: RunConfig) -> int:
    try:
        claims = select_claims(args.claims or ["all"])
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    opts = VerifyOptions(seed=cfg.seed, samples=args.samples, any_residue=args.any_residue,
                         node_limit=args.node_limit)
    results = verify_all(args.q, claims, cfg.seed, opts, workers=cfg.workers)
    docs = [r.to_json(cfg.timings) for r in results]
    if cfg.output_format == "plain":
        for r in results:
            print(f"{r.claim_id} q={r.q} {r.status.upper()} ({r.severity})")
    elif cfg.output_format == "csv":
        print("claim_id,q,status,severity")
        for r in results:
            print(f"{r.claim_id},{r.q},{r.status},{r.severity}")
    else:
        print(json.dumps(docs[0] if len(docs) == 1 else docs))
    for r in results:
        if r.status == "error":
            log.error("%s q=%d: %s", r.claim_id, r.q, r.reason)
    return EXIT_FAIL if any_blocking_failure(results) else EXIT_OK


# -- parser -------------------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv", "plain"), default=argparse.SUPPRESS)
    p.add_argument("--seed", type=_int_auto, default=argparse.SUPPRESS)
    p.add_argument("--workers", type=int, default=argparse.SUPPRESS)
    p.add_argument("--cache-dir", default=argparse.SUPPRESS)
    p.add_argument("--timings", action="store_true", default=argparse.SUPPRESS)


def _graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", required=True, help="alias (R, GQ, PL) or 'q=..;f=..;g=..'")
    p.add_argument("--q", type=int, help="field order (prime power, or prime together with --e)")
    p.add_argument("--e", type=int, help="extension degree when --q is a prime")
    _common(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adgraphs",
                                     description="Algebraically defined graphs over finite fields")
    _common(parser)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    graph = sub.add_parser("graph", help="metric invariants")
    gsub = graph.add_subparsers(dest="graph_command", required=True)
    for name in ("stats", "census", "girth", "diameter", "distance"):
        p = gsub.add_parser(name)
        _graph_args(p)
        if name == "distance":
            p.add_argument("--from", dest="source", required=True, help="(a,b,c) or [a,b,c]")
            p.add_argument("--to", dest="target", required=True)

    aut = sub.add_parser("aut", help="automorphism group")
    asub = aut.add_subparsers(dest="aut_command", required=True)
    for name in ("order", "generators"):
        p = asub.add_parser(name)
        _graph_args(p)
        p.add_argument("--node-limit", type=int, default=200_000)

    iso = sub.add_parser("iso", help="isomorphism test")
    _graph_args(iso)
    iso.add_argument("--other", required=True, help="second graph spec")
    iso.add_argument("--witness", action="store_true", help="include the witness map")
    iso.add_argument("--node-limit", type=int, default=200_000)

    pp = sub.add_parser("pp", help="permutation polynomials")
    psub = pp.add_subparsers(dest="pp_command", required=True)
    for name in ("test", "valueset"):
        p = psub.add_parser(name)
        p.add_argument("--poly", required=True, help='univariate polynomial, e.g. "x^3+2*x"')
        p.add_argument("--q", type=int, required=True)
        if name == "test":
            p.add_argument("--method", choices=("bruteforce", "hd", "both"), default="bruteforce")
        _common(p)

    ver = sub.add_parser("verify", help="recompute claims")
    ver.add_argument("claims", nargs="*", help="claim ids or prefixes (default: all)")
    ver.add_argument("--q", type=_q_list, required=True, help="comma-separated field orders")
    ver.add_argument("--samples", type=int, help="override sample counts of sampled claims")
    ver.add_argument("--any-residue", action="store_true",
                     help="also run residue-restricted claims at other q, as evidence")
    ver.add_argument("--node-limit", type=int, default=200_000)
    _common(ver)
    return parser


def _config(args) -> RunConfig:
    env = os.environ
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = _int_auto(env["ADGRAPHS_SEED"]) if env.get("ADGRAPHS_SEED") else DEFAULT_SEED
    workers = getattr(args, "workers", None)
    if workers is None:
        workers = int(env["ADGRAPHS_WORKERS"]) if env.get("ADGRAPHS_WORKERS") else (os.cpu_count() or 1)
    cache_dir = getattr(args, "cache_dir", None) or env.get("ADGRAPHS_CACHE_DIR") or None
    return RunConfig(args.command, seed, max(1, workers), ResultCache(cache_dir),
                     getattr(args, "format", "json"), getattr(args, "timings", False))


COMMANDS = {"graph": cmd_graph, "aut": cmd_aut, "iso": cmd_iso, "pp": cmd_pp, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"adgraphs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
