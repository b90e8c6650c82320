"""Command-line interface.

Exit status: 0 on success, 1 when a check fails, 2 on invalid input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

from . import catalog
from .cusp_numerics import (
    CuspProfile,
    GrammarError,
    ProfileError,
    ProximityError,
    block_decompose,
    embedded_sequence,
    euclid_sequence,
    genus_zero_check,
    is_admissible,
    nu_emb,
    nu_tilde,
    section_obstruction,
    verify_euclid_identities,
)
from .erasability import (
    DEFAULT_DEPTH,
    PairError,
    contract,
    contractible_vertices,
    ell_bounded,
    format_chain_pair,
    normalize,
    pair_blow_ups,
    pair_from_json,
    pair_to_json,
    parse_chain_pair,
)
from .linear_systems import (
    CurveError,
    HomogeneousForm,
    LocalCurve,
    SeriesPrecisionError,
    map_degree_probe,
    multiplicity_sequence_from_param,
)
from .pencil_resolution import (
    PlanError,
    dicriticals,
    plan,
    resolve_report,
)
from .weighted_graph import (
    WeightedGraph,
    WeightedGraphError,
    blow_down,
    blow_up_at_edge,
    blow_up_at_vertex,
    blow_up_free,
    equiv_empty,
    graph_from_json,
    graph_to_json,
    lattice_invariants,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def load_json(text: str, what: str) -> Any:
    """Parse JSON given inline, as ``@path``, as an existing file path, or ``-`` for stdin."""
    source = what
    if text == "-":
        text, source = sys.stdin.read(), f"{what} (stdin)"
    elif text.startswith("@") or (not text.lstrip().startswith(("{", "[")) and os.path.isfile(text)):
        path = text[1:] if text.startswith("@") else text
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"{what}: cannot read {path!r}: {exc.strerror}") from None
        source = f"{what} ({path})"
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _graph_arg(args) -> WeightedGraph:
    if getattr(args, "chain", None):
        doc = {"chain": load_json(args.chain, "--chain")}
    elif getattr(args, "graph", None):
        doc = load_json(args.graph, "--graph")
    else:
        raise InputError("provide --graph JSON or --chain '[w1,w2,...]'")
    if not isinstance(doc, dict):
        raise InputError("graph document must be a JSON object")
    return graph_from_json(doc)


def _pair_arg(args):
    if getattr(args, "chain", None):
        return parse_chain_pair(args.chain)
    if getattr(args, "pair", None):
        doc = load_json(args.pair, "--pair")
        if not isinstance(doc, dict):
            raise InputError("pair document must be a JSON object")
        return pair_from_json(doc)
    raise InputError("provide --pair JSON or --chain '[w1,w2*,...]'")


def _vertex(g: WeightedGraph, text: str):
    for v in g.vertices:
        if str(v) == text:
            return v
    raise InputError(f"vertex {text!r} is not in the graph")


def _profile_arg(args) -> CuspProfile:
    doc = load_json(args.profile, "--profile")
    return CuspProfile.from_json(doc)


def _curve_arg(args) -> LocalCurve:
    K = getattr(args, "truncation", None)
    if getattr(args, "catalog", None):
        try:
            entry = catalog.get(args.catalog)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
        return entry.curve(K)
    if getattr(args, "curve", None):
        doc = load_json(args.curve, "--curve")
        if not isinstance(doc, dict):
            raise InputError("curve document must be a JSON object")
        return LocalCurve.from_json(doc, K)
    raise InputError("provide --curve JSON or --catalog NAME")


def _seq_arg(text: str) -> tuple[int, ...]:
    seq = load_json(text, "--seq")
    if not isinstance(seq, list) or not all(isinstance(x, int) for x in seq):
        raise InputError("--seq must be a JSON list of integers")
    return tuple(seq)


# ---------------------------------------------------------------------------
# command handlers: each returns (payload, exit_code)
# ---------------------------------------------------------------------------

def cmd_graph(args):
    g = _graph_arg(args)
    if args.action == "blowup":
        if args.free:
            h, e = blow_up_free(g)
        elif args.edge:
            a, b = (s.strip() for s in args.edge.split(","))
            h, e = blow_up_at_edge(g, (_vertex(g, a), _vertex(g, b)))
        elif args.at is not None:
            h, e = blow_up_at_vertex(g, _vertex(g, args.at))
        else:
            raise InputError("blowup needs --at VERTEX, --edge A,B or --free")
        return {"graph": graph_to_json(h), "new": e}, EXIT_OK
    if args.action == "blowdown":
        if args.at is None:
            raise InputError("blowdown needs --at VERTEX")
        return {"graph": graph_to_json(blow_down(g, _vertex(g, args.at)))}, EXIT_OK
    if args.action == "equiv-empty":
        depth = args.depth if args.depth is not None else 2
        return equiv_empty(g, depth=depth).as_dict(), EXIT_OK
    if args.action == "invariants":
        return lattice_invariants(g).as_dict(), EXIT_OK
    raise InputError(f"unknown graph action {args.action}")


def _pair_out(p) -> dict:
    d = pair_to_json(p)
    chain = format_chain_pair(p)
    if chain is not None:
        d["chain_pair"] = chain
    return d


def cmd_pair(args):
    p = _pair_arg(args)
    if args.action == "successors":
        return {"successors": [_pair_out(q) for q in pair_blow_ups(p)]}, EXIT_OK
    if args.action == "contract":
        if args.at is None:
            q, done = normalize(p)
            return {"pair": _pair_out(q), "contracted": done}, EXIT_OK
        w = _vertex(p.graph, args.at)
        if w not in contractible_vertices(p):
            raise InputError(f"vertex {args.at!r} is not contractible")
        return {"pair": _pair_out(contract(p, w))}, EXIT_OK
    if args.action == "erasability":
        depth = args.depth if args.depth is not None else DEFAULT_DEPTH
        return ell_bounded(p, depth=depth).as_dict(), EXIT_OK
    raise InputError(f"unknown pair action {args.action}")


def cmd_cusp(args):
    a = args.action
    if a == "euclid":
        if args.a is None or args.b is None:
            raise InputError("euclid needs --a and --b")
        if args.a < 1 or args.b < 1:
            raise InputError("--a and --b must be positive")
        total, sq, _ = verify_euclid_identities(args.a, args.b)
        return {"sequence": list(euclid_sequence(args.a, args.b)), "sum": total, "sum_sq": sq}, EXIT_OK
    if a in ("nu", "genus"):
        prof = _profile_arg(args)
        if a == "nu":
            out = {"nu_tilde": nu_tilde(prof), "nu_emb": nu_emb(prof), "n": prof.n, "N": prof.N}
            if prof.singular:
                out["embedded"] = list(embedded_sequence(prof))
            return out, EXIT_OK
        ok = genus_zero_check(prof)
        d = prof.degree
        return {"genus_zero": ok, "lhs": (d - 1) * (d - 2),
                "rhs": sum(r * (r - 1) for r in prof.multiplicities),
                "admissible": is_admissible(prof)}, EXIT_OK if ok else EXIT_FAIL
    if a == "blocks":
        if not args.seq:
            raise InputError("blocks needs --seq '[r1,r2,...]'")
        bd = block_decompose(_seq_arg(args.seq))
        return dict(bd.as_dict(), h=bd.h), EXIT_OK
    if a == "obstruction":
        if args.d is None:
            raise InputError("obstruction needs --d")
        bound = args.bound if args.bound is not None else 14
        rep = section_obstruction(args.d, bound=bound, require_r1_bound=not args.no_r1_bound)
        return rep.as_dict(), EXIT_OK
    raise InputError(f"unknown cusp action {a}")


def cmd_pencil(args):
    prof = _profile_arg(args)
    if args.action == "resolve":
        rep = resolve_report(prof)
        return rep, EXIT_FAIL if rep["diagnostics"] else EXIT_OK
    if args.action == "dicriticals":
        rep = dicriticals(plan(prof))
        out = {"count": rep.count, "degrees": [rep.degrees[i] for i in rep.indices],
               "degree_one": rep.has_degree_one, "indices": rep.indices}
        if rep.diagnostics:
            out["diagnostics"] = rep.diagnostics
        return out, EXIT_FAIL if rep.diagnostics else EXIT_OK
    if args.action == "verify":
        rep = resolve_report(prof)
        checks = dict(rep["checks"])
        failed = [k for k in ("degree_one", "contracts", "tree") if checks.get(k) is False]
        if checks["count"] not in (1, 2):
            failed.append("count")
        failed += ["diagnostics"] if rep["diagnostics"] else []
        return {"ok": not failed, "failed": failed, "checks": checks}, EXIT_FAIL if failed else EXIT_OK
    raise InputError(f"unknown pencil action {args.action}")


def cmd_linsys(args):
    c = _curve_arg(args)
    a = args.action
    if a == "dim":
        ell = args.l if args.l is not None else c.d
        if args.j is None:
            raise InputError("dim needs --j")
        return {"l": ell, "j": args.j, "dim": c.dim_X(ell, args.j)}, EXIT_OK
    if a == "semigroup":
        w = c.semigroup_window()
        return {"bound": c.d * c.d, "window": w, "size": len(w)}, EXIT_OK
    if a == "pencil-basis":
        F, G = c.pencil_basis()
        return {"forms": [str(F), str(G)], "contact": [str(c.contact_order(F)), c.contact_order(G)],
                "json": [F.to_json(), G.to_json()]}, EXIT_OK
    if a == "net-basis":
        forms = c.net_basis()
        return {"forms": [str(f) for f in forms],
                "contact": [str(c.contact_order(forms[0]))] + [c.contact_order(f) for f in forms[1:]],
                "json": [f.to_json() for f in forms]}, EXIT_OK
    if a == "multiplicities":
        r = multiplicity_sequence_from_param(c.x, c.y)
        return {"minimal": list(r.minimal), "embedded": list(r.embedded)}, EXIT_OK
    if a == "map-degree":
        if args.net:
            terms = load_json(args.net, "--net")
            if not isinstance(terms, list) or len(terms) != 3:
                raise InputError("--net must be a JSON list of three forms")
            net = [HomogeneousForm.from_json(t) for t in terms]
        else:
            net = list(c.net_basis())
        rep = map_degree_probe(net, trials=args.trials, seed=args.seed)
        return rep, EXIT_OK
    raise InputError(f"unknown linsys action {a}")


def cmd_catalog(args):
    if args.action == "list":
        return {"entries": [{"name": e.name, "degree": e.degree, "description": e.description}
                            for e in catalog.CATALOG.values()]}, EXIT_OK
    if not args.name:
        raise InputError("catalog show needs a NAME")
    try:
        entry = catalog.get(args.name)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    out = entry.summary()
    out["curve"] = entry.to_curve_json()
    return out, EXIT_OK


def cmd_verify_all(args):
    from .verification import run_all

    only = {int(x) for x in args.only.split(",")} if args.only else None
    results = run_all(only)
    payload = {"checks": [r.as_dict() for r in results],
               "passed": sum(r.status == "pass" for r in results),
               "total": len(results)}
    return payload, EXIT_OK if all(r.status == "pass" for r in results) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    # accepted before or after the subcommand; SUPPRESS keeps the top-level defaults
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["json", "text"], default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--truncation", type=int, default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="cusppencil", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=["json", "text"], default="json")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--truncation", type=int, default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", parents=[common], help="weighted graph calculus")
    g.add_argument("action", choices=["blowup", "blowdown", "equiv-empty", "invariants"])
    g.add_argument("--graph")
    g.add_argument("--chain")
    g.add_argument("--at")
    g.add_argument("--edge")
    g.add_argument("--free", action="store_true")
    g.add_argument("--depth", type=int)
    g.set_defaults(func=cmd_graph)

    p = sub.add_parser("pair", parents=[common], help="weighted pairs and erasability")
    p.add_argument("action", choices=["successors", "contract", "erasability"])
    p.add_argument("--pair")
    p.add_argument("--chain")
    p.add_argument("--at")
    p.add_argument("--depth", type=int)
    p.set_defaults(func=cmd_pair)

    c = sub.add_parser("cusp", parents=[common], help="multiplicity-sequence arithmetic")
    c.add_argument("action", choices=["euclid", "nu", "genus", "blocks", "obstruction"])
    c.add_argument("--a", type=int)
    c.add_argument("--b", type=int)
    c.add_argument("--profile")
    c.add_argument("--seq")
    c.add_argument("--d", type=int)
    c.add_argument("--bound", type=int)
    c.add_argument("--no-r1-bound", action="store_true")
    c.set_defaults(func=cmd_cusp)

    pe = sub.add_parser("pencil", parents=[common], help="resolution of the pencil and its dicriticals")
    pe.add_argument("action", choices=["resolve", "dicriticals", "verify"])
    pe.add_argument("--profile", required=True)
    pe.set_defaults(func=cmd_pencil)

    ls = sub.add_parser("linsys", parents=[common], help="linear systems with contact conditions")
    ls.add_argument("action", choices=["dim", "semigroup", "pencil-basis", "net-basis", "multiplicities", "map-degree"])
    ls.add_argument("--curve")
    ls.add_argument("--catalog")
    ls.add_argument("--l", type=int)
    ls.add_argument("--j", type=int)
    ls.add_argument("--net")
    ls.add_argument("--trials", type=int, default=10)
    ls.set_defaults(func=cmd_linsys)

    ca = sub.add_parser("catalog", parents=[common], help="built-in curves")
    ca.add_argument("action", choices=["list", "show"])
    ca.add_argument("name", nargs="?")
    ca.set_defaults(func=cmd_catalog)

    va = sub.add_parser("verify-all", parents=[common], help="run every acceptance check")
    va.add_argument("--only", help="comma-separated check numbers")
    va.set_defaults(func=cmd_verify_all)
    return parser


def _text(payload, indent: str = "") -> str:
    lines = []
    if isinstance(payload, dict):
        for k, v in payload.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in
                                                        (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{indent}{k}:")
                lines.append(_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {json.dumps(v)}")
    elif isinstance(payload, list):
        for item in payload:
            if isinstance(item, dict):
                lines.append(_text(item, indent + "  ").replace(indent + "  ", indent + "- ", 1))
            else:
                lines.append(f"{indent}- {json.dumps(item)}")
    else:
        lines.append(f"{indent}{payload}")
    return "\n".join(lines)


def emit(payload, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "text":
        stream.write(_text(payload) + "\n")
    else:
        stream.write(json.dumps(payload, separators=(",", ":")) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        payload, code = args.func(args)
    except (InputError, WeightedGraphError, PairError, ProfileError, ProximityError, GrammarError,
            PlanError, CurveError, SeriesPrecisionError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"error: {args.command}: {exc}\n")
        return EXIT_INPUT
    emit(payload, args.format)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
