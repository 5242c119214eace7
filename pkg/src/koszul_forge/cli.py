"""Command-line interface.

Every command builds a report dictionary (stable keys ``verdict``,
``certificate``, ``series``, ``dual``, ``ext_table``, ``warnings``), prints
it as JSON or as an aligned text table, and exits with

* 0 on success,
* 2 on malformed input,
* 3 when a computation budget is exhausted (a partial report is printed),
* 4 on an internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from pydantic import ValidationError

from . import graphs, groups, koszul, quadratic, rewriting
from .errors import CompletionBudgetExceeded, InternalInvariantError, WeightExceedsBound
from .free_algebra import MonomialOrder, format_poly, format_word
from .schema import AlgebraPayload, CombinePayload, GraphPayload, PresentationPayload, dump

EXIT_SCHEMA = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4

SEED_ENV = "KOSZUL_FORGE_SEED"


class SchemaError(ValueError):
    pass


class BudgetError(Exception):
    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def load_json(source: str):
    """Inline JSON, a file path, or ``-`` for stdin."""
    if source == "-":
        return json.load(sys.stdin)
    text = source.strip()
    if text.startswith("{") or text.startswith("["):
        return json.loads(text)
    return json.loads(Path(source).read_text())


def _payload(args, model):
    try:
        if args.input:
            return model.model_validate(load_json(args.input))
        if args.p is None or args.d is None:
            raise SchemaError("give --input or both --p and --d")
        return model(p=args.p, d=args.d, relators=args.rel or [])
    except ValidationError as exc:
        raise SchemaError(str(exc)) from exc
    except (json.JSONDecodeError, OSError) as exc:
        raise SchemaError(f"cannot read input: {exc}") from exc


def algebra_from_args(args) -> quadratic.QuadraticAlgebra:
    return _payload(args, AlgebraPayload).build()


def presentation_from_args(args) -> groups.GroupPresentation:
    return _payload(args, PresentationPayload).build()


def order_from_args(args, d: int) -> MonomialOrder | None:
    if not getattr(args, "order", None):
        return None
    perm = tuple(int(x) for x in args.order.replace(" ", "").split(","))
    if len(perm) != d:
        raise SchemaError(f"--order must list all {d} generators")
    return MonomialOrder(perm)


def resolve_seed(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise SchemaError(f"{SEED_ENV} must be an integer") from exc
    return 0


def algebra_json(A: quadratic.QuadraticAlgebra) -> dict:
    return dump(AlgebraPayload.of(A))


def base_report(command: str, params: dict) -> dict:
    return {
        "command": command,
        "params": params,
        "verdict": None,
        "certificate": None,
        "series": None,
        "dual": None,
        "ext_table": None,
        "warnings": [],
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_dual(args) -> dict:
    A = algebra_from_args(args)
    rep = base_report("dual", {})
    rep["algebra"] = algebra_json(A)
    rep["dual"] = algebra_json(quadratic.dual(A))
    return rep


def cmd_combine(args) -> dict:
    try:
        payload = CombinePayload.model_validate(load_json(args.input))
    except ValidationError as exc:
        raise SchemaError(str(exc)) from exc
    A, B = payload.left.build(), payload.right.build()
    C = quadratic.combine(A, B, args.kind)
    rep = base_report("combine", {"kind": args.kind})
    rep["algebra"] = algebra_json(C)
    rep["dual"] = algebra_json(quadratic.dual(C))
    return rep


def _complete_or_budget(command, params, fn):
    try:
        return fn()
    except CompletionBudgetExceeded as exc:
        rep = base_report(command, params)
        sysm = exc.system
        if sysm is not None:
            # exact only through complete_up_to
            rep["series"] = rewriting.counts_from_system(sysm, sysm.complete_up_to)
            rep["partial"] = {
                "complete_up_to": sysm.complete_up_to,
                "rules": len(sysm.rules),
                "series": rewriting.counts_from_system(sysm, sysm.complete_up_to),
            }
        raise BudgetError(str(exc), rep) from exc


def cmd_hilbert(args) -> dict:
    P = _payload(args, AlgebraPayload)
    rels = P.polys()
    order = order_from_args(args, P.d)
    params = {"nmax": args.nmax}
    rep = base_report("hilbert", params)
    rep["series"] = _complete_or_budget(
        "hilbert", params, lambda: rewriting.hilbert_coeffs(rels, order, P.p, P.d, args.nmax)
    )
    return rep


def cmd_gb(args) -> dict:
    P = _payload(args, AlgebraPayload)
    rels = P.polys()
    order = order_from_args(args, P.d) or MonomialOrder.default(P.d)
    params = {"nmax": args.nmax, "order": list(order.variables)}
    R = _complete_or_budget(
        "gb", params, lambda: rewriting.complete(rels, order, P.p, P.d, args.nmax, args.max_rules)
    )
    rep = base_report("gb", params)
    rep["rules"] = [{"lead": format_word(r.lead), "tail": format_poly(r.tail)} for r in R.rules]
    rep["complete_up_to"] = R.complete_up_to
    rep["finite"] = R.finite
    rep["obstruction_degree"] = R.obstruction_degree
    quadratic_input = all(f.degree() == 2 for f in rels if f)
    rep["pbw"] = rewriting.pbw_certificate(R) if quadratic_input and R.complete_up_to >= 3 else None
    rep["series"] = rewriting.counts_from_system(R, args.nmax)
    return rep


def cmd_koszul(args) -> dict:
    A = algebra_from_args(args)
    seed = resolve_seed(args.seed)
    params = {"nmax": args.nmax, "budget": args.budget, "seed": seed}
    v = _complete_or_budget("koszul", params, lambda: koszul.koszul_verdict(A, args.nmax, args.budget, seed))
    rep = base_report("koszul", params)
    rep.update(v.to_dict())
    rep["series"] = rewriting.algebra_hilbert(A, args.nmax)
    rep["dual"] = algebra_json(quadratic.dual(A))
    rep["series_identity"] = koszul.series_identity_check(A, args.nmax).label()
    return rep


def cmd_ext(args) -> dict:
    A = algebra_from_args(args)
    params = {"imax": args.imax, "jmax": args.jmax}
    T = _complete_or_budget("ext", params, lambda: koszul.ext_table(A, args.imax, args.jmax))
    rep = base_report("ext", params)
    rep["ext_table"] = T.rows()
    rep["diagonal"] = T.diagonal()
    rep["off_diagonal"] = [list(x) for x in T.off_diagonal()]
    if T.off_diagonal():
        i, j, _ = T.off_diagonal()[0]
        rep["verdict"] = koszul.REFUTED
        rep["refutation"] = {"kind": "OffDiagonalExt", "i": i, "j": j}
    else:
        rep["verdict"] = koszul.CONSISTENT
        rep["upto"] = args.jmax
    return rep


def _dmax(args, p: int) -> int:
    return args.dmax if args.dmax is not None else groups.default_dmax(p)


def cmd_mild(args) -> dict:
    G = presentation_from_args(args)
    dmax = _dmax(args, G.p)
    seed = resolve_seed(args.seed)
    params = {"nmax": args.nmax, "Dmax": dmax, "budget": args.budget, "seed": seed}
    if args.search_orders:
        v, order = groups.mildness_search(G, dmax, args.nmax, budget=args.budget, seed=seed)
    else:
        order = order_from_args(args, G.d) or MonomialOrder.default(G.d)
        v = groups.mildness_check(G, order, dmax, args.nmax, args.budget, seed)
    gr = groups.gr_presentation(G, dmax)
    rep = base_report("mild", params)
    rep.update(v.to_dict())
    rep["order"] = list(order.variables)
    rep["initial_forms"] = gr.relator_strings()
    rep["weights"] = gr.weights
    rep["warnings"] = [n for n in v.notes if "p != 2" in n or "order" in n]
    return rep


def verdict_json(v):
    return None if v is None else v.to_dict()


def cmd_group_analyze(args) -> dict:
    G = presentation_from_args(args)
    dmax = _dmax(args, G.p)
    seed = resolve_seed(args.seed)
    params = {"nmax": args.nmax, "Dmax": dmax, "budget": args.budget, "seed": seed}
    order = order_from_args(args, G.d)
    r = _complete_or_budget(
        "group analyze",
        params,
        lambda: groups.analyze(G, order, dmax, args.nmax, args.budget, seed, args.search_orders),
    )
    rep = base_report("group analyze", params)
    rep["presentation"] = dump(PresentationPayload.of(G))
    rep["minimal"] = r.minimal
    rep["h1"], rep["h2"], rep["independent"] = r.h1, r.h2, r.independent
    rep["weights"] = r.weights
    rep["initial_forms"] = r.gr.relator_strings() if r.gr else None
    rep["order"] = list(r.order.variables) if r.order else None
    rep["mild"] = verdict_json(r.mildness)
    rep["condition_a"], rep["condition_b"] = r.condition_a, r.condition_b
    rep["gr"] = algebra_json(r.gr_algebra) if r.gr_algebra else None
    rep["dual"] = algebra_json(r.cohomology) if r.cohomology else None
    rep["koszul"] = {"gr": verdict_json(r.gr_koszul), "cohomology": verdict_json(r.cohomology_koszul)}
    rep["series"] = {"gr": r.gr_series, "cohomology": r.cohomology_series}
    rep["series_identity"] = r.series_identity
    rep["conclusion"] = r.conclusion
    if r.mildness is not None:
        rep["verdict"] = r.mildness.status
        rep["certificate"] = r.mildness.certificate
    rep["warnings"] = r.warnings
    return rep


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        a, dash, b = key.partition("-")
        if not sep or not dash:
            raise SchemaError(f"bad parameter {item!r}; expected i-j=value")
        out[(int(a), int(b))] = int(val)
    return out


def cmd_graph(args) -> dict:
    try:
        G = graphs.Graph.parse(load_json_text(args.graph))
    except (ValueError, KeyError) as exc:
        raise SchemaError(f"bad graph: {exc}") from exc
    rep = base_report(f"graph {args.kind}", {"p": args.p})
    rep["graph"] = dump(GraphPayload.of(G))
    tf, tri = graphs.triangle_free(G)
    rep["triangle_free"] = tf
    if tri:
        rep["triangle"] = list(tri)
    if args.kind == "raag":
        A = graphs.raag_algebra(G, args.p)
        rep["algebra"] = algebra_json(A)
        rep["dual"] = algebra_json(quadratic.dual(A))
    elif args.kind == "sr":
        A = graphs.stanley_reisner(G, args.p)
        rep["algebra"] = algebra_json(A)
        rep["dual"] = algebra_json(quadratic.dual(A))
        rep["series"] = graphs.clique_series(G, G.n + 1)
    else:
        P = graphs.gen_raag_group(G, args.p, _parse_params(args.lam), _parse_params(args.mu))
        rep["presentation"] = dump(PresentationPayload.of(P))
        if tf:
            rep["warnings"].append("triangle-free: the graph group is mild with H = Lambda(graph)")
        else:
            rep["warnings"].append("graph has a triangle; no mildness conclusion is drawn")
    return rep


def load_json_text(text: str) -> str:
    if text == "-":
        return sys.stdin.read()
    if os.path.exists(text):
        return Path(text).read_text()
    return text


def cmd_demushkin(args) -> dict:
    f = quadratic.demushkin_relator(args.p, args.d, args.kind)
    A = quadratic.make_quadratic(args.p, args.d, [f])
    G = groups.demushkin_group(args.p, args.d, args.kind)
    rep = base_report("demushkin", {"p": args.p, "d": args.d, "kind": args.kind})
    rep["relator"] = format_poly(f)
    rep["algebra"] = algebra_json(A)
    rep["dual"] = algebra_json(quadratic.dual(A))
    rep["presentation"] = dump(PresentationPayload.of(G))
    return rep


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def render_text(rep: dict) -> str:
    lines = []
    scalars = [(k, v) for k, v in rep.items() if not isinstance(v, (dict, list)) or k == "params"]
    width = max((len(k) for k, _ in scalars), default=0)
    for k, v in scalars:
        if k == "params":
            v = ", ".join(f"{a}={b}" for a, b in v.items())
        lines.append(f"{k.ljust(width)}  {v}")
    for k, v in rep.items():
        if k == "params" or not isinstance(v, (dict, list)):
            continue
        if k == "ext_table" and v:
            lines.append("ext_table (rows i, columns j):")
            cell = max(len(str(x)) for row in v for x in row)
            lines.append("    " + " ".join(str(j).rjust(cell) for j in range(len(v[0]))))
            for i, row in enumerate(v):
                lines.append(f"{str(i).rjust(3)} " + " ".join(str(x).rjust(cell) for x in row))
        elif isinstance(v, list) and not v:
            lines.append(f"{k}: -")
        elif isinstance(v, list) and all(isinstance(x, (int, float)) for x in v):
            lines.append(f"{k}: " + " ".join(map(str, v)))
        elif isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
            lines.append(f"{k}:")
            lines.extend(f"  - {x}" for x in v)
        else:
            lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
    return "\n".join(lines)


def emit(rep: dict, fmt: str) -> None:
    if fmt == "text":
        print(render_text(rep))
    else:
        print(json.dumps(rep, indent=2, sort_keys=False))
    for w in rep.get("warnings") or []:
        print(f"warning: {w}", file=sys.stderr)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _algebra_inputs(sp, rel_help="relator text, repeatable"):
    sp.add_argument("--input", "-i", help="JSON payload: inline, a path, or - for stdin")
    sp.add_argument("--p", type=int, help="prime modulus")
    sp.add_argument("--d", type=int, help="number of generators")
    sp.add_argument("--rel", action="append", help=rel_help)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="koszul-forge", description=__doc__.splitlines()[0])
    ap.add_argument("--format", choices=["json", "text"], default="json")
    # also accepted after the subcommand; SUPPRESS keeps the global default
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("dual", parents=[common], help="quadratic dual")
    _algebra_inputs(sp)
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("combine", parents=[common], help="direct sum, free, tensor or wedge product")
    sp.add_argument("--kind", choices=[k.value for k in quadratic.Combine], required=True)
    sp.add_argument("--input", "-i", required=True, help='{"left": algebra, "right": algebra}')
    sp.set_defaults(func=cmd_combine)

    sp = sub.add_parser("hilbert", parents=[common], help="Hilbert series coefficients")
    _algebra_inputs(sp)
    sp.add_argument("--nmax", type=int, default=rewriting.DEFAULT_NMAX)
    sp.add_argument("--order", help="variable order, smallest first, e.g. 2,1,3")
    sp.set_defaults(func=cmd_hilbert)

    sp = sub.add_parser("gb", parents=[common], help="bounded Groebner basis")
    _algebra_inputs(sp)
    sp.add_argument("--nmax", type=int, default=rewriting.DEFAULT_NMAX)
    sp.add_argument("--order")
    sp.add_argument("--max-rules", type=int, default=rewriting.DEFAULT_MAX_RULES)
    sp.set_defaults(func=cmd_gb)

    sp = sub.add_parser("koszul", parents=[common], help="aggregate Koszulity verdict")
    _algebra_inputs(sp)
    sp.add_argument("--nmax", type=int, default=rewriting.DEFAULT_NMAX)
    sp.add_argument("--budget", type=int, default=koszul.DEFAULT_UW_BUDGET)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_koszul)

    sp = sub.add_parser("ext", parents=[common], help="bigraded Ext dimensions")
    _algebra_inputs(sp)
    sp.add_argument("--imax", type=int, default=4)
    sp.add_argument("--jmax", type=int, default=6)
    sp.set_defaults(func=cmd_ext)

    sp = sub.add_parser("mild", parents=[common], help="strong freeness of a presentation's initial forms")
    _algebra_inputs(sp, "relator like [x1,x2]*x3^-2, repeatable")
    sp.add_argument("--nmax", type=int, default=rewriting.DEFAULT_NMAX)
    sp.add_argument("--dmax", type=int)
    sp.add_argument("--order")
    sp.add_argument("--search-orders", action="store_true", help="retry all variable orders (d <= 6)")
    sp.add_argument("--budget", type=int, default=koszul.DEFAULT_UW_BUDGET)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_mild)

    sp = sub.add_parser("group", parents=[common], help="pro-p group commands")
    gsub = sp.add_subparsers(dest="group_command", required=True)
    ga = gsub.add_parser("analyze", parents=[common], help="full mildness / quadraticity / Koszul report")
    _algebra_inputs(ga, "relator like [x1,x2]*x3^-2, repeatable")
    ga.add_argument("--nmax", type=int, default=rewriting.DEFAULT_NMAX)
    ga.add_argument("--dmax", type=int)
    ga.add_argument("--budget", type=int, default=koszul.DEFAULT_UW_BUDGET)
    ga.add_argument("--seed", type=int)
    ga.add_argument("--order")
    ga.add_argument("--search-orders", action="store_true")
    ga.set_defaults(func=cmd_group_analyze)

    sp = sub.add_parser("graph", parents=[common], help="graph algebras and groups")
    sp.add_argument("kind", choices=["raag", "sr", "genraag"])
    sp.add_argument("--graph", required=True, help='"n; i-j, k-l", adjacency JSON, or a path')
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", action="append", help="i-j=value (genraag)")
    sp.add_argument("--mu", action="append", help="i-j=value (genraag)")
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("demushkin", parents=[common], help="Demushkin relator, algebra and dual")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--kind", choices=["a", "b", "c"])
    sp.set_defaults(func=cmd_demushkin)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        rep = args.func(args)
    except BudgetError as exc:
        exc.report["warnings"].append(str(exc))
        emit(exc.report, args.format)
        return EXIT_BUDGET
    except WeightExceedsBound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (SchemaError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    emit(rep, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
