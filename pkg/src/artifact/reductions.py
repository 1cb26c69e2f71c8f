"""Segment-coloring and 2-in-4 SAT reductions to planar cover problems.

Both pipelines keep a provenance map from source objects to the vertices that
implement them, so witnesses can be moved in either direction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Mapping, Sequence

from .arrangement import SegmentArrangement, compute_crossings
from .cover import (BLACK, WHITE, Budget, BudgetExceeded, CoverCSP, CoverInputError, DumbbellCSP,
                    check_cover, is_dumbbell_coloring)
from .gadgets import (DUMBBELL, CatalogInconsistency, Gadget, GadgetError, host_graph, load_catalog,
                      variable_gadget, verify_contract)
from .graph import Graph, graph_from_json, graph_to_json, planarity_check, serialize_graph
from .sat24 import Formula24, satisfies, validate_formula

SEGMENT_TARGETS = ("K4", "K5", "K6", "K4plus", "K5minus")


@dataclass(frozen=True)
class ReductionOutput:
    graph: Graph
    host_name: str
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"host": self.host_name, "graph": graph_to_json(self.graph), "provenance": self.provenance}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, d: Mapping) -> "ReductionOutput":
        return cls(graph_from_json(d["graph"]), d["host"], dict(d["provenance"]))

    @property
    def kind(self) -> str:
        return self.provenance.get("kind", "")


# -- catalog access -----------------------------------------------------------------

_VERIFIED: dict[tuple, bool] = {}


def _pick(catalog: Mapping[str, Gadget] | None, role: str, host: str, verify: bool) -> Gadget:
    catalog = load_catalog() if catalog is None else catalog
    found = sorted((g for g in catalog.values() if g.role == role and g.host == host), key=lambda g: g.name)
    if not found:
        raise GadgetError(f"catalog has no {role} gadget for host {host}")
    g = found[0]
    if verify:
        key = (g.name, json.dumps(sorted(map(list, g.body.edges))), g.boundary)
        if key not in _VERIFIED:
            _VERIFIED[key] = verify_contract(g).passed
        if not _VERIFIED[key]:
            raise CatalogInconsistency(f"gadget {g.name} fails its contract")
    return g


# -- segments ---------------------------------------------------------------------------

def _half(d) -> int:
    return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1


def _ccw_cmp(a, b) -> int:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    cr = a[0] * b[1] - a[1] * b[0]
    return -1 if cr > 0 else (1 if cr < 0 else 0)


def side_order(a: SegmentArrangement, i: int, j: int) -> list[tuple[int, int]]:
    """The four rays at the crossing of segments i < j in clockwise order.

    A ray is ``(segment, +1 toward q / -1 toward p)``; the list starts with
    ``(i, -1)``, so opposite positions belong to the same segment.
    """
    rays = []
    for s in (i, j):
        seg = a.segments[s]
        d = (seg.q[0] - seg.p[0], seg.q[1] - seg.p[1])
        rays.append(((s, 1), d))
        rays.append(((s, -1), (-d[0], -d[1])))
    rays.sort(key=cmp_to_key(lambda x, y: _ccw_cmp(x[1], y[1])))
    cw = [r for r, _ in reversed(rays)]
    k = cw.index((i, -1))
    cw = cw[k:] + cw[:k]
    assert cw[2] == (i, 1) and {cw[1][0], cw[3][0]} == {j}, "rays of one segment must be opposite"
    return cw


def reduce_segments(a: SegmentArrangement, target: str, catalog: Mapping[str, Gadget] | None = None,
                    verify: bool = True) -> ReductionOutput:
    """One crossing gadget per crossing; subsegments become parallel edge pairs."""
    if target not in SEGMENT_TARGETS:
        raise CoverInputError(f"unknown target {target!r}; expected one of {', '.join(SEGMENT_TARGETS)}")
    gad = _pick(catalog, "crossing", target, verify)
    cs = compute_crossings(a)
    size = gad.body.n
    if gad.meta.get("vertices_per_crossing", size) != size:
        raise CatalogInconsistency(f"{gad.name}: recorded vertex constant differs from body size")
    sides = gad.meta["sides"]
    bverts = gad.boundary_vertices
    index = {c.id: k for k, c in enumerate(cs.crossings)}
    edges = []
    crossings = {}
    # port[(crossing, segment, direction)] = (color vertex, non-color vertex)
    port = {}
    for k, c in enumerate(cs.crossings):
        off = k * size
        edges += [(u + off, v + off) for u, v in gad.body.edges]
        rays = side_order(a, *c.id)
        info = {}
        for s, (seg, dirn) in enumerate(rays):
            cv, nv = (bverts[x] + off for x in sides[s])
            port[(k, seg, dirn)] = (cv, nv)
            info["ABCD"[s]] = {"segment": a.segments[seg].id, "toward": "q" if dirn > 0 else "p",
                               "color": cv, "noncolor": nv}
        crossings[f"{c.id[0]}-{c.id[1]}"] = {"vertices": [off, off + size], "sides": info,
                                             "segments": [a.segments[x].id for x in c.id]}
    segments = {}
    warnings = []
    for s, seg in enumerate(a.segments):
        along = [index[cid] for cid in cs.along[s]]
        if not along:
            warnings.append(f"segment {seg.id} has no crossings and was left out")
            continue
        col, non = [], []
        subs = []
        first = port[(along[0], s, -1)]
        edges.append(first)
        subs.append({"kind": "terminal", "edges": [list(first)]})
        for k1, k2 in zip(along, along[1:]):
            c1, n1 = port[(k1, s, 1)]
            c2, n2 = port[(k2, s, -1)]
            edges += [(c1, n2), (n1, c2)]
            subs.append({"kind": "inner", "edges": [[c1, n2], [n1, c2]]})
        last = port[(along[-1], s, 1)]
        edges.append(last)
        subs.append({"kind": "terminal", "edges": [list(last)]})
        for k in along:
            for d in (-1, 1):
                cv, nv = port[(k, s, d)]
                col.append(cv)
                non.append(nv)
        segments[seg.id] = {"color_vertices": col, "noncolor_vertices": non,
                            "crossings": [f"{cs.crossings[k].id[0]}-{cs.crossings[k].id[1]}" for k in along],
                            "subsegments": subs}
    n = size * len(cs.crossings)
    g = Graph.from_edges(n, edges)
    if not planarity_check(g):
        raise CatalogInconsistency("reduction output is not planar")
    m_per = gad.meta.get("edges_per_crossing", gad.body.m + 4)
    if g.n != size * len(cs.crossings) or g.m != m_per * len(cs.crossings):
        raise CatalogInconsistency("reduction output size differs from the catalog constants")
    prov = {"kind": "segments", "target": target, "gadget": gad.name,
            "segment_ids": [s.id for s in a.segments],
            "edges": [[a.segments[i].id, a.segments[j].id] for i, j in (c.id for c in cs.crossings)],
            "colors": list(gad.meta["colors"]),
            "constants": {"vertices_per_crossing": size, "edges_per_crossing": m_per},
            "crossings": crossings, "segments": segments, "warnings": warnings}
    return ReductionOutput(g, target, prov)


def extract_coloring(out: ReductionOutput, f: Sequence[int]) -> dict[str, int]:
    """Segment colors read off the color vertices of a cover."""
    h = host_graph(out.host_name)
    chk = check_cover(out.graph, h, f)
    if not chk:
        raise CoverInputError(f"not a cover: {chk.reason}")
    prov = out.provenance
    colors = {}
    for sid in prov["segment_ids"]:
        info = prov["segments"].get(sid)
        if info is None:
            colors[sid] = prov["colors"][0]
            continue
        seen = {f[v] for v in info["color_vertices"]}
        if len(seen) != 1:
            raise CatalogInconsistency(f"segment {sid}: color vertices carry {sorted(seen)}")
        colors[sid] = seen.pop()
    for s, t in prov["edges"]:
        if colors[s] == colors[t]:
            raise CatalogInconsistency(f"crossing segments {s} and {t} share color {colors[s]}")
    return colors


def lift_coloring(out: ReductionOutput, coloring: Mapping[str, int],
                  budget: Budget | None = None) -> list[int]:
    """A cover of G' whose color vertices follow ``coloring``."""
    prov = out.provenance
    allowed = set(prov["colors"])
    for sid in prov["segment_ids"]:
        if sid not in coloring:
            raise CoverInputError(f"segment {sid} has no color")
        if coloring[sid] not in allowed:
            raise CoverInputError(f"segment {sid}: color {coloring[sid]} not in {sorted(allowed)}")
    for s, t in prov["edges"]:
        if coloring[s] == coloring[t]:
            raise CoverInputError(f"improper coloring: crossing segments {s} and {t} share color {coloring[s]}")
    fixed = {}
    for sid, info in prov["segments"].items():
        for v in info["color_vertices"]:
            fixed[v] = coloring[sid]
    csp = CoverCSP(out.graph, host_graph(out.host_name))
    try:
        for sol in csp.solutions(budget, fixed=fixed):
            return sol
    except BudgetExceeded:
        raise
    raise CatalogInconsistency("the coloring does not extend to a cover; the crossing gadget is inconsistent")


# -- 2-in-4 SAT -----------------------------------------------------------------------------

def reduce_sat(f: Formula24, catalog: Mapping[str, Gadget] | None = None, verify: bool = True) -> ReductionOutput:
    """Variable cycles and clause gadgets wired along a planar embedding of the incidence graph."""
    bad = validate_formula(f)
    if bad:
        raise CoverInputError("invalid formula: " + "; ".join(bad))
    clause = _pick(catalog, "clause", DUMBBELL, verify)
    if len(clause.boundary) != 4:
        raise CatalogInconsistency(f"{clause.name} must have four ports")
    per_var = _per_occurrence(catalog)
    V = f.variable_count
    rot = planarity_check(f.incidence_graph()).rotation
    occ = f.occurrences()
    edges = []
    n = 0
    variables, clauses, warnings = {}, {}, []
    attach = {}  # (variable, clause) -> attachment vertex of the variable gadget
    for x in range(V):
        k = len(occ[x])
        if k == 0:
            warnings.append(f"variable {x} does not occur and was left out")
            continue
        vg = variable_gadget(k)
        if vg.body.n != per_var * k:
            raise CatalogInconsistency("variable gadget size differs from the catalog constant")
        edges += [(u + n, v + n) for u, v in vg.body.edges]
        order = [c - V for c in rot[x]]
        ports = [v + n for v in vg.boundary_vertices]
        for j, u in zip(order, ports):
            attach[(x, j)] = u
        variables[str(x)] = {"cycle": [v + n for v in vg.meta["cycle"]], "attachments": ports,
                             "clauses": order, "vertices": [n, n + vg.body.n]}
        n += vg.body.n
    cports = clause.boundary_vertices
    for j, c in enumerate(f.clauses):
        order = list(rot[V + j])
        edges += [(u + n, v + n) for u, v in clause.body.edges]
        ports = [p + n for p in cports]
        for p, x in zip(ports, order):
            edges.append((p, attach[(x, j)]))
        clauses[str(j)] = {"vertices": [n, n + clause.body.n], "ports": ports, "variables": order,
                           "attached": [attach[(x, j)] for x in order]}
        n += clause.body.n
    g = Graph.from_edges(n, edges)
    if any(g.degree(v) != 3 for v in range(n)):
        raise CatalogInconsistency("reduction output is not cubic")
    if not planarity_check(g):
        raise CatalogInconsistency("reduction output is not planar")
    total = sum(len(o) for o in occ)
    if n != per_var * total + clause.body.n * len(f.clauses):
        raise CatalogInconsistency("reduction output size differs from the catalog constants")
    prov = {"kind": "sat", "gadget": clause.name, "variable_count": V,
            "formula": [list(c) for c in f.clauses],
            "constants": {"vertices_per_occurrence": per_var, "vertices_per_clause": clause.body.n},
            "variables": variables, "clauses": clauses, "warnings": warnings}
    return ReductionOutput(g, DUMBBELL, prov)


def _per_occurrence(catalog) -> int:
    catalog = load_catalog() if catalog is None else catalog
    vals = {g.meta.get("vertices_per_occurrence") for g in catalog.values() if g.role == "variable"}
    vals.discard(None)
    if len(vals) != 1:
        raise GadgetError("catalog needs variable gadget entries with one per-occurrence size")
    return vals.pop()


def _formula(out: ReductionOutput) -> Formula24:
    return Formula24.make(out.provenance["variable_count"], out.provenance["formula"])


def extract_assignment(out: ReductionOutput, coloring: Sequence[int]) -> list[bool]:
    """True exactly when the variable cycle is black."""
    chk = is_dumbbell_coloring(out.graph, coloring)
    if not chk:
        raise CoverInputError(f"not a dumbbell coloring: {chk.reason}")
    V = out.provenance["variable_count"]
    values = [False] * V
    for x, info in out.provenance["variables"].items():
        seen = {coloring[v] for v in info["cycle"]}
        if len(seen) != 1:
            raise CatalogInconsistency(f"variable {x}: cycle is not monochromatic")
        values[int(x)] = seen.pop() == BLACK
    if not satisfies(_formula(out), values):
        raise CatalogInconsistency("extracted assignment does not satisfy the formula")
    return values


def lift_assignment(out: ReductionOutput, values: Sequence[bool], budget: Budget | None = None) -> list[int]:
    f = _formula(out)
    if len(values) != f.variable_count:
        raise CoverInputError(f"expected {f.variable_count} values, got {len(values)}")
    if not satisfies(f, values):
        raise CoverInputError("assignment does not satisfy the formula")
    fixed = {}
    for x, info in out.provenance["variables"].items():
        for v in info["cycle"]:
            fixed[v] = BLACK if values[int(x)] else WHITE
    for sol in DumbbellCSP(out.graph).solutions(budget, fixed=fixed):
        return sol
    raise CatalogInconsistency("assignment does not extend to a coloring; the clause gadget is inconsistent")


def serialize_output(out: ReductionOutput) -> tuple[str, str]:
    """Graph text and provenance JSON, both deterministic."""
    prov = dict(out.provenance, host=out.host_name)
    return serialize_graph(out.graph), json.dumps(prov, sort_keys=True, indent=1) + "\n"
