"""Command-line entry point.

Exit codes: 0 yes/success, 1 no (sound negative), 2 input error,
3 budget exceeded, 4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import arrangement as arr
from . import sat24
from .cover import (Budget, BudgetExceeded, CoverInputError, check_cover, enumerate_covers,
                    parse_coloring, parse_map, serialize_coloring, serialize_map, solve_cover,
                    solve_dumbbell)
from .gadgets import (CatalogInconsistency, GadgetContract, GadgetError, load_catalog, synthesize_gadget,
                      verify_contract)
from .graph import GraphError, ResourceError, named, parse_graph, planarity_check, serialize_graph, to_dot
from .reductions import (ReductionOutput, extract_assignment, extract_coloring, lift_assignment, lift_coloring,
                         reduce_sat, reduce_segments, serialize_output)

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3, 4
SCHEMA = Path(__file__).with_name("schema") / "cli-output.schema.json"


class Outcome(Exception):
    def __init__(self, code: int, status: str, result=None, message: str = "", text: str = ""):
        super().__init__(message)
        self.code, self.status, self.result, self.message, self.text = code, status, result, message, text


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise Outcome(EXIT_INPUT, "error", message=f"cannot read {path}: {exc}") from exc


def _write(path: str | None, text: str):
    if path:
        Path(path).write_text(text)


def _graph(spec: str):
    """A file path, or ``name:K4`` for a built-in graph."""
    if spec.startswith("name:"):
        return named(spec[5:])
    return parse_graph(_read(spec))


def _budget(a) -> Budget:
    kw = {}
    if a.budget_nodes is not None:
        kw["nodes"] = a.budget_nodes
    if a.budget_secs is not None:
        kw["secs"] = a.budget_secs
    return Budget(**kw)


def _search(res, yes_text):
    if res.status == "yes":
        raise Outcome(EXIT_YES, "yes", {"nodes": res.nodes, "witness": res.witness}, text=yes_text(res.witness))
    if res.status == "no":
        raise Outcome(EXIT_NO, "no", {"nodes": res.nodes}, res.reason, text=f"no ({res.reason})\n")
    raise Outcome(EXIT_BUDGET, "budget", {"nodes": res.nodes}, res.reason, text=f"budget exceeded after {res.nodes} nodes\n")


def _reduction(a) -> ReductionOutput:
    prov = json.loads(_read(a.provenance))
    g = parse_graph(_read(a.g))
    return ReductionOutput(g, prov["host"], prov)


# -- handlers ----------------------------------------------------------------------------

def cmd_cover(a):
    g = _graph(a.g)
    if a.action == "dumbbell":
        _search(solve_dumbbell(g, _budget(a)), serialize_coloring)
    h = _graph(a.h)
    if a.action == "check":
        f = parse_map(_read(a.map))
        r = check_cover(g, h, f)
        if r:
            raise Outcome(EXIT_YES, "yes", {"valid": True}, text="valid cover\n")
        raise Outcome(EXIT_NO, "no", {"valid": False, "reason": r.reason}, r.reason, text=f"not a cover: {r.reason}\n")
    if a.action == "solve":
        _search(solve_cover(g, h, _budget(a)), serialize_map)
    if a.action == "enumerate":
        en = enumerate_covers(g, h, a.limit, _budget(a))
        if en.status == "budget":
            raise Outcome(EXIT_BUDGET, "budget", {"count": len(en.covers), "maps": en.covers},
                          "budget exceeded during enumeration")
        text = f"{len(en.covers)} covers{' (limit reached)' if en.truncated else ''}\n"
        text += "".join(" ".join(map(str, f)) + "\n" for f in en.covers)
        code = EXIT_YES if en.covers else EXIT_NO
        raise Outcome(code, "yes" if en.covers else "no", {"count": len(en.covers), "truncated": en.truncated,
                                                        "maps": en.covers}, text=text)


def cmd_planar(a):
    g = _graph(a.g)
    r = planarity_check(g)
    if r.planar:
        rot = {str(v): r.rotation[v] for v in range(g.n)}
        raise Outcome(EXIT_YES, "yes", {"planar": True, "rotation": rot}, text="planar\n")
    raise Outcome(EXIT_NO, "no", {"planar": False, "witness": [list(e) for e in r.witness.edges]},
                  text="not planar; witness " + " ".join(f"{u}-{v}" for u, v in r.witness.edges) + "\n")


def cmd_arrange(a):
    ar = arr.parse_arrangement(_read(a.input))
    if a.action == "validate":
        bad = arr.validate_general_position(ar)
        if bad:
            raise Outcome(EXIT_NO, "no", {"violations": [str(v) for v in bad]},
                          text="".join(f"{v}\n" for v in bad))
        raise Outcome(EXIT_YES, "yes", {"violations": []}, text="ok\n")
    try:
        cs = arr.compute_crossings(ar)
    except arr.ArrangementError as exc:
        raise Outcome(EXIT_INPUT, "error", message=str(exc)) from exc
    ids = [s.id for s in ar.segments]
    if a.action == "crossings":
        rows = [{"segments": [ids[i], ids[j]], "point": [str(c.point[0]), str(c.point[1])]}
                for c in cs.crossings for i, j in [c.id]]
        text = "".join(f"x {r['segments'][0]} {r['segments'][1]} {r['point'][0]} {r['point'][1]}\n" for r in rows)
        raise Outcome(EXIT_YES, "yes", {"crossings": rows,
                                        "subsegments": {ids[i]: cs.subsegments(i) for i in range(len(ids))}},
                      text=text)
    g = arr.intersection_graph(ar)
    _write(a.out, serialize_graph(g))
    raise Outcome(EXIT_YES, "yes", {"n": g.n, "edges": [list(e) for e in g.edges]}, text=serialize_graph(g))


def cmd_color(a):
    g = _graph(a.g)
    try:
        col = arr.brute_force_coloring(g, a.k)
    except ResourceError as exc:
        raise Outcome(EXIT_BUDGET, "budget", message=str(exc)) from exc
    if col is None:
        raise Outcome(EXIT_NO, "no", {"coloring": None}, text=f"not {a.k}-colorable\n")
    raise Outcome(EXIT_YES, "yes", {"coloring": col}, text=" ".join(map(str, col)) + "\n")


def cmd_sat(a):
    if a.action == "gen":
        fs = sat24.generate_instances(a.seed, a.count, a.max_clauses, a.max_vars)
        if a.out_dir:
            d = Path(a.out_dir)
            d.mkdir(parents=True, exist_ok=True)
            for i, f in enumerate(fs):
                (d / f"inst{i:03d}.f24").write_text(sat24.serialize_formula(f))
        text = "".join(sat24.serialize_formula(f) + "\n" for f in fs)
        raise Outcome(EXIT_YES, "yes", {"instances": [json.loads(sat24.formula_to_json(f)) for f in fs]}, text=text)
    f = sat24.parse_formula(_read(a.input))
    if a.action == "validate":
        bad = sat24.validate_formula(f)
        if bad:
            raise Outcome(EXIT_NO, "no", {"violations": bad}, text="".join(b + "\n" for b in bad))
        raise Outcome(EXIT_YES, "yes", {"violations": []}, text="ok\n")
    try:
        sol = sat24.brute_force_sat(f)
    except ResourceError as exc:
        raise Outcome(EXIT_BUDGET, "budget", message=str(exc)) from exc
    if sol is None:
        raise Outcome(EXIT_NO, "no", {"assignment": None}, text="unsatisfiable\n")
    raise Outcome(EXIT_YES, "yes", {"assignment": sol}, text=" ".join(str(int(x)) for x in sol) + "\n")


def cmd_reduce(a):
    cat = load_catalog(a.catalog) if a.catalog else None
    try:
        if a.kind == "seg":
            out = reduce_segments(arr.parse_arrangement(_read(a.input)), a.target, cat)
        else:
            out = reduce_sat(sat24.parse_formula(_read(a.input)), cat)
    except GadgetError as exc:
        # the inputs were fine; the catalog cannot serve this reduction
        raise Outcome(EXIT_INTERNAL, "inconsistent", message=str(exc)) from exc
    gtext, ptext = serialize_output(out)
    _write(a.out, gtext)
    _write(a.provenance, ptext)
    raise Outcome(EXIT_YES, "yes", {"n": out.graph.n, "m": out.graph.m, "host": out.host_name,
                                    "warnings": out.provenance["warnings"]},
                  text=gtext if not a.out else f"wrote {out.graph.n} vertices to {a.out}\n")


def cmd_extract(a):
    out = _reduction(a)
    if a.what == "coloring":
        colors = extract_coloring(out, parse_map(_read(a.witness)))
        raise Outcome(EXIT_YES, "yes", {"coloring": colors},
                      text="".join(f"{k} {v}\n" for k, v in colors.items()))
    values = extract_assignment(out, parse_coloring(_read(a.witness)))
    raise Outcome(EXIT_YES, "yes", {"assignment": values}, text=" ".join(str(int(x)) for x in values) + "\n")


def cmd_lift(a):
    out = _reduction(a)
    raw = json.loads(_read(a.witness))
    if a.what == "coloring":
        f = lift_coloring(out, {str(k): int(v) for k, v in raw.items()}, _budget(a))
        _write(a.out, serialize_map(f))
        raise Outcome(EXIT_YES, "yes", {"map": f}, text=serialize_map(f))
    col = lift_assignment(out, [bool(x) for x in raw], _budget(a))
    _write(a.out, serialize_coloring(col))
    raise Outcome(EXIT_YES, "yes", {"coloring": col}, text=serialize_coloring(col))


def cmd_gadget(a):
    cat = load_catalog(a.catalog)
    if a.action == "list":
        rows = [{"name": g.name, "host": g.host, "role": g.role, "vertices": g.body.n, "source": g.source}
                for g in cat.values()]
        text = "".join(f"{r['name']:28} {r['host']:8} {r['role']:18} {r['vertices']:4}  {r['source']}\n" for r in rows)
        raise Outcome(EXIT_YES, "yes", {"gadgets": rows}, text=text)
    if a.action == "verify":
        names = [a.name] if a.name else sorted(cat)
        reports = []
        for nm in names:
            if nm not in cat:
                raise Outcome(EXIT_INPUT, "error", message=f"no gadget named {nm!r}")
            reports.append(verify_contract(cat[nm], budget=_budget(a)))
        text = "".join("\n".join(r.lines()) + "\n" for r in reports)
        res = {"reports": [r.to_json() for r in reports]}
        if any(r.status != "ok" for r in reports):
            raise Outcome(EXIT_BUDGET, "budget", res, text=text)
        ok = all(r.passed for r in reports)
        raise Outcome(EXIT_YES if ok else EXIT_NO, "yes" if ok else "no", res, text=text)
    # synth: contract taken from an existing entry or a contract JSON file
    if a.like:
        if a.like not in cat:
            raise Outcome(EXIT_INPUT, "error", message=f"no gadget named {a.like!r}")
        src = cat[a.like]
        contract, host, bsize = src.contract, src.host, len(src.boundary)
    else:
        d = json.loads(_read(a.contract))
        host = d["host"]
        contract = GadgetContract.from_json(d["contract"], host)
        bsize = int(d["boundary_size"])
    res = synthesize_gadget(contract, host, bsize, a.max_vertices, budget=_budget(a))
    rows = [{"vertices": g.body.n, "edges": [list(e) for e in g.body.edges], "boundary": [list(b) for b in g.boundary]}
            for g in res.gadgets]
    text = f"{len(rows)} candidates ({'exhausted' if res.exhausted else 'truncated'})\n"
    text += "".join(f"{r['vertices']} {r['edges']} {r['boundary']}\n" for r in rows)
    if res.truncated:
        raise Outcome(EXIT_BUDGET, "budget", {"candidates": rows, "exhausted": False}, text=text)
    raise Outcome(EXIT_YES if rows else EXIT_NO, "yes" if rows else "no",
                  {"candidates": rows, "exhausted": res.exhausted}, text=text)


def cmd_export(a):
    g = _graph(a.g)
    colors = None
    if a.map:
        colors = dict(enumerate(parse_map(_read(a.map))))
    elif a.coloring:
        colors = {v: ("black" if c == 0 else "white") for v, c in enumerate(parse_coloring(_read(a.coloring)))}
    dot = to_dot(g, colors)
    _write(a.out, dot)
    raise Outcome(EXIT_YES, "yes", {"dot": dot}, text=dot if not a.out else f"wrote {a.out}\n")


# -- parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--budget-nodes", type=int, default=None)
    common.add_argument("--budget-secs", type=float, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--catalog", default=None, help="gadget catalog directory")

    p = argparse.ArgumentParser(prog="artifact", description="Planar cover toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    cov = sub.add_parser("cover").add_subparsers(dest="action", required=True)
    for act in ("check", "solve", "enumerate", "dumbbell"):
        q = cov.add_parser(act, parents=[common])
        q.add_argument("--g", required=True, help="graph file or name:<graph>")
        if act != "dumbbell":
            q.add_argument("--h", required=True)
        if act == "check":
            q.add_argument("--map", required=True)
        if act == "enumerate":
            q.add_argument("--limit", type=int, default=None)
        q.set_defaults(func=cmd_cover, action=act)

    q = sub.add_parser("planar", parents=[common])
    q.add_argument("--g", required=True)
    q.set_defaults(func=cmd_planar)

    ar = sub.add_parser("arrange").add_subparsers(dest="action", required=True)
    for act in ("validate", "crossings", "igraph"):
        q = ar.add_parser(act, parents=[common])
        q.add_argument("--in", dest="input", required=True)
        q.add_argument("--out", default=None)
        q.set_defaults(func=cmd_arrange, action=act)

    q = sub.add_parser("color", parents=[common])
    q.add_argument("--g", required=True)
    q.add_argument("--k", type=int, required=True)
    q.set_defaults(func=cmd_color)

    st = sub.add_parser("sat").add_subparsers(dest="action", required=True)
    for act in ("validate", "solve"):
        q = st.add_parser(act, parents=[common])
        q.add_argument("--in", dest="input", required=True)
        q.set_defaults(func=cmd_sat, action=act)
    q = st.add_parser("gen", parents=[common])
    q.add_argument("--count", type=int, default=10)
    q.add_argument("--max-clauses", type=int, default=5)
    q.add_argument("--max-vars", type=int, default=8)
    q.add_argument("--out-dir", default=None)
    q.set_defaults(func=cmd_sat, action="gen")

    rd = sub.add_parser("reduce").add_subparsers(dest="kind", required=True)
    q = rd.add_parser("seg", parents=[common])
    q.add_argument("--target", required=True, choices=["K4", "K5", "K6", "K4plus", "K5minus"])
    rd_sat = rd.add_parser("sat", parents=[common])
    for q2 in (q, rd_sat):
        q2.add_argument("--in", dest="input", required=True)
        q2.add_argument("--out", default=None, help="graph output file")
        q2.add_argument("--provenance", default=None, help="provenance JSON output file")
        q2.set_defaults(func=cmd_reduce)

    for name, func in (("extract", cmd_extract), ("lift", cmd_lift)):
        grp = sub.add_parser(name).add_subparsers(dest="what", required=True)
        for what in ("coloring", "assignment"):
            q = grp.add_parser(what, parents=[common])
            q.add_argument("--g", required=True, help="reduced graph")
            q.add_argument("--provenance", required=True)
            if name == "extract":
                q.add_argument("--witness", required=True,
                               help="cover map" if what == "coloring" else "dumbbell coloring")
            else:
                q.add_argument("--witness", required=True,
                               help='JSON {"segment id": color}' if what == "coloring" else "JSON list of booleans")
                q.add_argument("--out", default=None)
            q.set_defaults(func=func, what=what)

    gd = sub.add_parser("gadget").add_subparsers(dest="action", required=True)
    q = gd.add_parser("verify", parents=[common])
    q.add_argument("--name", default=None, help="one gadget (default: all)")
    q.set_defaults(func=cmd_gadget, action="verify")
    q = gd.add_parser("list", parents=[common])
    q.set_defaults(func=cmd_gadget, action="list")
    q = gd.add_parser("synth", parents=[common])
    q.add_argument("--like", default=None, help="use the contract of this catalog entry")
    q.add_argument("--contract", default=None, help='JSON {"host", "boundary_size", "contract"}')
    q.add_argument("--max-vertices", type=int, default=6)
    q.set_defaults(func=cmd_gadget, action="synth")

    ex = sub.add_parser("export").add_subparsers(dest="what", required=True)
    q = ex.add_parser("dot", parents=[common])
    q.add_argument("--g", required=True)
    q.add_argument("--map", default=None)
    q.add_argument("--coloring", default=None)
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_export)
    return p


def _command_name(argv) -> str:
    return " ".join(x for x in argv[:2] if not x.startswith("-"))


def run(argv=None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_YES if exc.code == 0 else EXIT_INPUT
    random.seed(a.seed)
    try:
        a.func(a)
        raise Outcome(EXIT_INTERNAL, "inconsistent", message="command produced no outcome")
    except Outcome as o:
        out = o
    except BudgetExceeded:
        out = Outcome(EXIT_BUDGET, "budget", message="budget exceeded")
    except CatalogInconsistency as exc:
        out = Outcome(EXIT_INTERNAL, "inconsistent", message=str(exc))
    except (GraphError, CoverInputError, GadgetError, arr.ArrangementError, ValueError, KeyError) as exc:
        out = Outcome(EXIT_INPUT, "error", message=str(exc))
    except ResourceError as exc:
        out = Outcome(EXIT_BUDGET, "budget", message=str(exc))
    if a.json:
        doc = {"command": _command_name(argv), "status": out.status, "exit_code": out.code,
               "result": out.result if out.result is not None else {}, "message": out.message}
        stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        if out.text:
            stdout.write(out.text)
        if out.message and out.code in (EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL):
            print(f"{out.status}: {out.message}", file=sys.stderr)
    return out.code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
