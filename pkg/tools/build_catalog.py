"""Regenerate the JSON gadget catalog from the constructions below.

Run from the repository root:  python tools/build_catalog.py [outdir]

Behavior sets are produced by exhaustive enumeration and frozen into the
files; the semantic properties in each contract are re-checked on load by
``verify_contract``.
"""

import sys
from pathlib import Path

import networkx as nx

from artifact.cover import Budget
from artifact.gadgets import (DUMBBELL, Gadget, GadgetContract, assemble, enumerate_boundary_behaviors,
                              save_gadget, validate_gadget, variable_gadget, verify_contract)
from artifact.graph import Graph


def from_nx(G, boundary_nodes):
    """Number the boundary first (in order), then the rest sorted by repr."""
    rest = sorted((v for v in G if v not in boundary_nodes), key=repr)
    order = list(boundary_nodes) + rest
    idx = {v: i for i, v in enumerate(order)}
    return Graph.from_edges(len(order), [(idx[u], idx[v]) for u, v in G.edges()]), idx


def freeze(name, host, role, body, boundary, rigid, props, source, meta):
    g = Gadget(name, host, role, body, tuple(boundary), GadgetContract(frozenset()), source, meta)
    behs = enumerate_boundary_behaviors(g, Budget(secs=600))
    contract = GadgetContract.from_behaviors(host, behs, rigid, props)
    return Gadget(name, host, role, body, tuple(boundary), contract, source, meta)


# -- K6 auxiliary: icosahedron minus the three vertices of one face ------------------------

AUX_EDGES = [(0, 1), (2, 3), (2, 5), (2, 7), (2, 8), (3, 0), (3, 4), (3, 5), (3, 8), (4, 0), (4, 1),
             (4, 5), (6, 0), (6, 1), (6, 7), (6, 8), (7, 8), (8, 0)]
AUX_HEX = [2, 5, 4, 1, 6, 7]


def k6_auxiliary():
    G = nx.Graph(AUX_EDGES)
    body, idx = from_nx(G, AUX_HEX)
    bnd = [(idx[v], 5 - G.degree(v)) for v in AUX_HEX]
    return freeze("k6-auxiliary", "K6", "auxiliary", body, bnd, True, ["antipodal"],
                  "icosahedron minus one triangular face (reconstructed)", {})


# -- crossing gadgets for K4+ and K5- -----------------------------------------------------

def _crossing(G, sides, name, host, colors, noncolors, source):
    B = G.copy()
    for c, n in sides:
        B.remove_edge(c, n)
    order = [x for s in sides for x in s]
    body, idx = from_nx(B, order)
    bnd = [(idx[v], 1) for v in order]
    meta = {"sides": [[2 * s, 2 * s + 1] for s in range(4)], "colors": colors,
            "noncolors": noncolors, "freedom": "uniform", "vertices_per_crossing": body.n,
            "edges_per_crossing": body.m + 4}
    return freeze(name, host, "crossing", body, bnd, False, ["crossing"], source, meta)


def k4plus_crossing():
    L = 18
    G = nx.cycle_graph(L)
    sides = []
    for k, c in enumerate([0, 4, 9, 13]):
        n = ("n", k)
        G.add_edges_from([(n, c + 1), (n, c + 2), (c, n), (n, ("leaf", k))])
        sides.append((c, n))
    for i, t in enumerate([(3, 7, 8), (12, 16, 17)]):
        G.add_edges_from((("z", i), p) for p in t)
        G.add_edge(("z", i), ("zleaf", i))
    return _crossing(G, sides, "k4plus-crossing", "K4plus", [1, 2, 3], [0],
                     "synthesized ring construction")


def k5minus_crossing():
    G = nx.cycle_graph(18)
    C = {"A": 1, "B": 6, "C": 10, "D": 15}
    qs = {"A": (2, 3), "B": (7, 8), "C": (11, 12), "D": (16, 17)}
    hubs = [(4, 5, 6), (13, 14, 15), (0, 4, 5), (1, 2, 3), (7, 8, 9), (9, 13, 14), (10, 11, 12), (16, 17, 0)]
    sides = []
    for k in "ABCD":
        n = ("n", k)
        a, b = qs[k]
        G.add_edges_from([(n, a), (n, b), (C[k], n)])
        sides.append((C[k], n))
    for i, t in enumerate(hubs):
        G.add_edges_from((("d", i), p) for p in t)
    return _crossing(G, sides, "k5minus-crossing", "K5minus", [1, 2, 3], [0, 4],
                     "synthesized ring construction")


# -- dumbbell pieces ------------------------------------------------------------------------

TAP_EDGES = [(8, 9), (7, 8), (6, 7), (5, 6), (5, 9), (4, 5), (3, 4), (3, 9), (2, 3), (1, 2), (1, 4),
             (1, 6), (0, 2)]
NEG_EDGES = [(0, 3), (0, 6), (0, 9), (1, 8), (1, 9), (1, 10), (2, 7), (2, 8), (2, 10), (3, 5), (3, 10),
             (4, 5), (4, 6), (4, 11), (5, 7), (7, 11), (8, 11)]


def dumbbell_pieces():
    cube = nx.hypercube_graph(3)
    body, _ = from_nx(cube, [])
    block = freeze("dumbbell-basic-block", DUMBBELL, "basic_block", body, [], False, ["extensions"],
                   "cube graph Q3", {"external": "free", "extensions": 6})
    tapG = nx.Graph(TAP_EDGES)
    body, idx = from_nx(tapG, [0, 8, 7])
    tap = freeze("dumbbell-tap", DUMBBELL, "dumbbell_auxiliary", body,
                 [(idx[0], 2), (idx[8], 1), (idx[7], 1)], False, [], "synthesized", {"external": "free"})
    negG = nx.Graph(NEG_EDGES)
    body, idx = from_nx(negG, [6, 9])
    neg = freeze("dumbbell-inverter", DUMBBELL, "dumbbell_auxiliary", body, [(idx[6], 1), (idx[9], 1)],
                 False, [], "synthesized", {"external": "free"})
    face = freeze("dumbbell-cube-face", DUMBBELL, "dumbbell_auxiliary", Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
                  [(i, 1) for i in range(4)], False, [], "one face of Q3", {"external": "free"})
    return block, tap, neg, face


CLAUSE_RECIPE = {
    "parts": ["dumbbell-cube-face", "dumbbell-tap", "dumbbell-tap", "dumbbell-tap", "dumbbell-tap",
              "dumbbell-inverter", "dumbbell-inverter"],
    "links": ([[[1 + i, 1], [1 + (i + 1) % 4, 0]] for i in range(4)]
              + [[[1 + i, 0], [0, i]] for i in range(4)]
              + [[[2, 2], [5, 0]], [[4, 2], [6, 0]]]),
    "boundary": [[1, 2], [5, 1], [3, 2], [6, 1]],
}


def clause(pieces):
    by = {g.name: g for g in pieces}
    a = assemble([by[p] for p in CLAUSE_RECIPE["parts"]], CLAUSE_RECIPE["links"], CLAUSE_RECIPE["boundary"])
    return freeze("dumbbell-clause", DUMBBELL, "clause", a.body, list(a.boundary), True, ["exactly_two"],
                  "Q3 with tapped outer face, two ports inverted (synthesized)",
                  {"external": "opposite", "assembly": CLAUSE_RECIPE, "vertices_per_clause": a.body.n})


def auxiliary(cl):
    """The clause body on its own: free external colors, still exactly two black."""
    meta = {"external": "free", "assembly": CLAUSE_RECIPE}
    return freeze("dumbbell-auxiliary", DUMBBELL, "dumbbell_auxiliary", cl.body, list(cl.boundary), True,
                  ["exactly_two"], cl.source, meta)


def variables(ks=(1, 2, 3)):
    out = []
    for k in ks:
        v = variable_gadget(k)
        meta = dict(v.meta, vertices_per_occurrence=7)
        out.append(freeze(v.name, DUMBBELL, "variable", v.body, list(v.boundary), True, ["monochrome"],
                          v.source, meta))
    return out


def main(out):
    out.mkdir(parents=True, exist_ok=True)
    pieces = list(dumbbell_pieces())
    cl = clause(pieces)
    gadgets = [k6_auxiliary(), k4plus_crossing(), k5minus_crossing(), *pieces, cl, auxiliary(cl), *variables()]
    for g in gadgets:
        bad = validate_gadget(g)
        rep = verify_contract(g)
        print("\n".join(rep.lines()), bad or "")
        assert rep.passed and not bad, g.name
        save_gadget(g, out)


if __name__ == "__main__":
    main(Path(sys.argv[1] if len(sys.argv) > 1 else "src/artifact/catalog"))
