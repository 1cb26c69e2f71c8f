"""Gadgets as catalog data, and exhaustive checks of their boundary contracts.

A gadget is a body graph plus an ordered boundary; each boundary vertex has a
residual degree, the number of edges it will receive from outside.  For a
host ``H`` a *behavior* records, per boundary vertex, its image and the set
of host neighbours that the body leaves unused (exactly ``r`` of them).  For
the dumbbell host the behavior is just the boundary colors.

Behavior sets are closed under host automorphisms, so contracts store one
canonical representative per orbit.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .cover import BLACK, Budget, BudgetExceeded, CoverCSP, DumbbellCSP
from .graph import (Graph, GraphError, automorphisms, graph_from_json, graph_to_json, named,
                    on_face_in_order, planarity_check)

DUMBBELL = "D"
ROLES = ("auxiliary", "crossing", "basic_block", "dumbbell_auxiliary", "variable", "clause")


class GadgetError(ValueError):
    """Malformed gadget, contract or catalog entry."""


class CatalogInconsistency(RuntimeError):
    """A catalog gadget failed to do what its contract promises."""


# -- hosts -----------------------------------------------------------------------

def host_graph(name: str) -> Graph | None:
    """The host graph, or None for the dumbbell (handled by the coloring engine)."""
    if name == DUMBBELL:
        return None
    return named(name)


_AUTS: dict[str, list[tuple[int, ...]]] = {}


def host_automorphisms(name: str) -> list[tuple[int, ...]]:
    if name not in _AUTS:
        if name == DUMBBELL:
            _AUTS[name] = [(0, 1), (1, 0)]
        else:
            _AUTS[name] = automorphisms(named(name))
    return _AUTS[name]


def _act(beh, p, host: str):
    if host == DUMBBELL:
        return tuple(p[c] for c in beh)
    return tuple((p[x], tuple(sorted(p[y] for y in miss))) for x, miss in beh)


def canonical(beh, host: str):
    """Least image of a behavior under the host automorphisms."""
    return min(_act(beh, p, host) for p in host_automorphisms(host))


def orbit(beh, host: str) -> set:
    return {_act(beh, p, host) for p in host_automorphisms(host)}


def _beh_from_json(x, host: str):
    if host == DUMBBELL:
        return tuple(int(c) for c in x)
    return tuple((int(a), tuple(sorted(int(y) for y in m))) for a, m in x)


def _beh_to_json(b, host: str):
    if host == DUMBBELL:
        return list(b)
    return [[a, list(m)] for a, m in b]


# -- data types --------------------------------------------------------------------

@dataclass(frozen=True)
class GadgetContract:
    behaviors: frozenset          # canonical representatives
    rigid: bool = False
    properties: tuple[str, ...] = ()

    @classmethod
    def from_behaviors(cls, host: str, behaviors: Iterable, rigid: bool = False,
                       properties: Sequence[str] = ()) -> "GadgetContract":
        """Build from a full behavior set; it must be closed under Aut(host)."""
        full = set(behaviors)
        for b in full:
            if not orbit(b, host) <= full:
                raise GadgetError(f"behavior set is not closed under Aut({host}): orbit of {b} leaves it")
        return cls(frozenset(canonical(b, host) for b in full), rigid, tuple(properties))

    def to_json(self, host: str) -> dict:
        d = {"behaviors": [_beh_to_json(b, host) for b in sorted(self.behaviors)], "rigid": self.rigid}
        if self.properties:
            d["properties"] = list(self.properties)
        return d

    @classmethod
    def from_json(cls, d: Mapping, host: str) -> "GadgetContract":
        bs = [_beh_from_json(x, host) for x in d.get("behaviors", [])]
        for b in bs:
            if canonical(b, host) != b:
                raise GadgetError(f"stored behavior {b} is not a canonical orbit representative")
        return cls(frozenset(bs), bool(d.get("rigid", False)), tuple(d.get("properties", ())))


@dataclass(frozen=True)
class Gadget:
    name: str
    host: str
    role: str
    body: Graph
    boundary: tuple[tuple[int, int], ...]
    contract: GadgetContract
    source: str = "synthesized"
    meta: Mapping = field(default_factory=dict)

    @property
    def residual(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for v, r in self.boundary:
            out[v] = out.get(v, 0) + r
        return out

    @property
    def boundary_vertices(self) -> list[int]:
        return [v for v, _ in self.boundary]

    @property
    def external(self) -> str:
        """Dumbbell only: 'free' or 'opposite' colors on the external neighbours."""
        return self.meta.get("external", "free")


def validate_gadget(g: Gadget) -> list[str]:
    """Structural invariants; empty when fine."""
    out = []
    if g.role not in ROLES:
        out.append(f"unknown role {g.role!r}")
    vs = g.boundary_vertices
    if len(set(vs)) != len(vs):
        out.append("boundary lists a vertex twice")
    for v, r in g.boundary:
        if not 0 <= v < g.body.n:
            out.append(f"boundary vertex {v} out of range")
        if r < 1:
            out.append(f"boundary vertex {v} has residual {r}")
    if out:
        return out
    if not planarity_check(g.body):
        out.append("body is not planar")
    elif vs and not on_face_in_order(g.body, vs):
        out.append("boundary vertices are not on one face in the listed order")
    res = g.residual
    if g.host == DUMBBELL:
        degs = {3}
    else:
        h = host_graph(g.host)
        degs = {h.degree(x) for x in range(h.n)}
    for v in range(g.body.n):
        d = g.body.degree(v) + res.get(v, 0)
        if d not in degs:
            out.append(f"vertex {v}: body degree {g.body.degree(v)} + residual {res.get(v, 0)} matches no host degree")
    return out


# -- enumeration -----------------------------------------------------------------------

def enumerate_boundary_behaviors(g: Gadget, budget: Budget | None = None) -> dict:
    """Every extendable boundary behavior with its number of body extensions."""
    if g.host != DUMBBELL and host_graph(g.host).n > 6:
        raise GadgetError("hosts with more than 6 vertices are out of scope")
    out: dict = {}
    vs = g.boundary_vertices
    if g.host == DUMBBELL:
        res = g.residual
        strict = g.external == "opposite"
        for col in DumbbellCSP(g.body, res).solutions(budget):
            if strict and any(r != 1 or any(col[u] != col[v] for u in g.body.adj[v]) for v, r in res.items()):
                continue
            b = tuple(col[v] for v in vs)
            out[b] = out.get(b, 0) + 1
        return out
    h = host_graph(g.host)
    for f in CoverCSP(g.body, h, g.residual).solutions(budget):
        b = tuple((f[v], tuple(sorted(h.adj[f[v]] - {f[u] for u in g.body.adj[v]}))) for v in vs)
        out[b] = out.get(b, 0) + 1
    return out


# -- properties ------------------------------------------------------------------------

def _prop_antipodal(g: Gadget, behs) -> str | None:
    for b in behs:
        img = [x for x, _ in b]
        if len(img) != 6:
            return "needs six boundary vertices"
        if any(img[i] != img[i + 3] for i in range(3)) or len(set(img[:3])) != 3:
            return f"outer images {img} break f(u_i) = f(u_i+3) with three distinct values"
    return None


def _prop_crossing(g: Gadget, behs) -> str | None:
    sides = g.meta["sides"]
    colors, noncolors = g.meta["colors"], g.meta["noncolors"]
    ideal = set()
    for b in behs:
        cs = [b[c] for c, _ in sides]
        ns = [b[n] for _, n in sides]
        for s in range(4):
            if ns[s][1] != (cs[s][0],):
                return f"side {s}: non-color vertex misses {ns[s][1]}, color vertex has image {cs[s][0]}"
        x = [c[0] for c in cs]
        if x[0] != x[2] or x[1] != x[3]:
            return f"opposite subsegments differ: {x}"
        if x[0] == x[1]:
            return f"crossing segments share color {x[0]}"
        if any(x[s] not in colors for s in range(4)):
            return f"color vertex image outside {colors}: {x}"
        if all(cs[s][1] == (ns[s][0],) for s in range(4)):
            ideal.add((x[0], x[1]) + tuple(n[0] for n in ns))
    mode = g.meta.get("freedom", "uniform")
    for x1, x2 in itertools.permutations(colors, 2):
        if mode == "uniform":
            wants = [(y,) * 4 for y in noncolors if y not in (x1, x2)]
        else:
            pool = [y for y in noncolors if y not in (x1, x2)]
            wants = list(itertools.product(pool, repeat=4))
        for ys in wants:
            if (x1, x2) + ys not in ideal:
                return f"non-color freedom fails for colors {(x1, x2)} and non-color images {ys}"
    return None


def _prop_monochrome(g: Gadget, behs) -> str | None:
    seen = set()
    for b in behs:
        if len(set(b)) > 1:
            return f"boundary colors {b} not uniform"
        seen.add(b[0] if b else None)
    return None if len(seen) == 2 or not g.boundary else f"only colors {seen} occur"


def _prop_exactly_two(g: Gadget, behs) -> str | None:
    for b in behs:
        if sum(c == BLACK for c in b) != 2:
            return f"boundary colors {b} do not have exactly two black"
    return None if len(set(behs)) == 6 else f"{len(set(behs))} of the 6 two-black patterns occur"


def _prop_extensions(g: Gadget, behs, counts=None) -> str | None:
    want = g.meta.get("extensions")
    if want is None:
        return "meta lacks an 'extensions' count"
    total = sum(counts.values()) if counts else 0
    return None if total == want else f"{total} extensions, expected {want}"


PROPERTIES = {
    "antipodal": _prop_antipodal,
    "extensions": _prop_extensions,
    "crossing": _prop_crossing,
    "monochrome": _prop_monochrome,
    "exactly_two": _prop_exactly_two,
}


# -- verification ------------------------------------------------------------------------

@dataclass
class ContractReport:
    name: str
    passed: bool
    behaviors: int = 0
    extensions: int = 0
    missing: list = field(default_factory=list)
    extra: list = field(default_factory=list)
    rigidity: list = field(default_factory=list)
    properties: dict = field(default_factory=dict)
    seconds: float = 0.0
    status: str = "ok"

    def lines(self) -> list[str]:
        out = [f"{self.name}: {'PASS' if self.passed else 'FAIL'} "
               f"({self.behaviors} behaviors, {self.extensions} extensions, {self.seconds:.2f}s)"]
        if self.status != "ok":
            out.append(f"  status: {self.status}")
        for b in self.missing[:5]:
            out.append(f"  missing behavior {b}")
        for b in self.extra[:5]:
            out.append(f"  extra behavior {b}")
        for b, c in self.rigidity[:5]:
            out.append(f"  behavior {b} extends {c} ways")
        for p, why in self.properties.items():
            out.append(f"  property {p}: {'ok' if why is None else why}")
        return out

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "behaviors": self.behaviors,
                "extensions": self.extensions, "missing": [repr(b) for b in self.missing],
                "extra": [repr(b) for b in self.extra],
                "rigidity": [[repr(b), c] for b, c in self.rigidity],
                "properties": {k: v for k, v in self.properties.items()},
                "seconds": round(self.seconds, 3), "status": self.status}


def verify_contract(g: Gadget, contract: GadgetContract | None = None,
                    budget: Budget | None = None) -> ContractReport:
    contract = contract or g.contract
    t0 = time.monotonic()
    rep = ContractReport(g.name, False)
    try:
        found = enumerate_boundary_behaviors(g, budget)
    except BudgetExceeded:
        rep.status = "budget exceeded"
        rep.seconds = time.monotonic() - t0
        return rep
    rep.behaviors = len(found)
    rep.extensions = sum(found.values())
    canon = {canonical(b, g.host) for b in found}
    rep.missing = sorted(contract.behaviors - canon)
    rep.extra = sorted(canon - contract.behaviors)
    if contract.rigid:
        rep.rigidity = sorted((b, c) for b, c in found.items() if c != 1)
    for p in contract.properties:
        if p not in PROPERTIES:
            raise GadgetError(f"unknown contract property {p!r}")
        if p == "extensions":
            rep.properties[p] = _prop_extensions(g, list(found), found)
        else:
            rep.properties[p] = PROPERTIES[p](g, list(found))
    rep.passed = not (rep.missing or rep.extra or rep.rigidity) and all(
        v is None for v in rep.properties.values())
    rep.seconds = time.monotonic() - t0
    return rep


# -- catalog I/O -------------------------------------------------------------------------

def gadget_to_json(g: Gadget) -> dict:
    d = {"name": g.name, "host": g.host, "role": g.role, "body": graph_to_json(g.body),
         "boundary": [[v, r] for v, r in g.boundary], "contract": g.contract.to_json(g.host),
         "source": g.source}
    d.update({k: v for k, v in g.meta.items()})
    return d


_CORE = {"name", "host", "role", "body", "boundary", "contract", "source"}


def gadget_from_json(d: Mapping) -> Gadget:
    try:
        host = d["host"]
        g = Gadget(d["name"], host, d["role"], graph_from_json(d["body"]),
                   tuple((int(v), int(r)) for v, r in d["boundary"]),
                   GadgetContract.from_json(d["contract"], host), d.get("source", "synthesized"),
                   {k: v for k, v in d.items() if k not in _CORE})
    except (KeyError, TypeError, ValueError, GraphError) as exc:
        raise GadgetError(f"bad gadget entry: {exc}") from exc
    return g


def default_catalog() -> Path:
    return Path(str(resources.files("artifact") / "catalog"))


def load_catalog(directory: str | Path | None = None) -> dict[str, Gadget]:
    d = Path(directory) if directory else default_catalog()
    if not d.is_dir():
        raise GadgetError(f"catalog directory {d} not found")
    out = {}
    for p in sorted(d.glob("*.json")):
        g = gadget_from_json(json.loads(p.read_text()))
        out[g.name] = g
    return out


def save_gadget(g: Gadget, directory: str | Path) -> Path:
    p = Path(directory) / f"{g.name}.json"
    p.write_text(json.dumps(gadget_to_json(g), sort_keys=True) + "\n")
    return p


# -- assembly ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Assembly:
    body: Graph
    offsets: tuple[int, ...]
    boundary: tuple[tuple[int, int], ...]


def assemble(parts: Sequence[Gadget], links: Iterable, boundary: Sequence,
             extra_edges: Iterable = ()) -> Assembly:
    """Disjoint union of gadget bodies joined by edges between boundary slots.

    A slot ``(p, i)`` is boundary entry ``i`` of part ``p``.  Every link uses
    one unit of residual at both ends.  ``boundary`` lists the slots left for
    the outside, each with its remaining residual.
    """
    offsets = []
    n = 0
    for g in parts:
        offsets.append(n)
        n += g.body.n
    edges = [(u + off, v + off) for g, off in zip(parts, offsets) for u, v in g.body.edges]
    left = {(p, i): r for p, g in enumerate(parts) for i, (_, r) in enumerate(g.boundary)}

    def vertex(slot):
        p, i = slot
        return parts[p].boundary[i][0] + offsets[p]

    for a, b in links:
        a, b = tuple(a), tuple(b)
        for s in (a, b):
            if left.get(s, 0) < 1:
                raise GadgetError(f"slot {s} has no residual left")
            left[s] -= 1
        edges.append((vertex(a), vertex(b)))
    edges += [tuple(e) for e in extra_edges]
    bnd = []
    for s in boundary:
        s = tuple(s)
        if left.get(s, 0) < 1:
            raise GadgetError(f"boundary slot {s} is already used up")
        bnd.append((vertex(s), left[s]))
        left[s] = 0
    dangling = [s for s, r in left.items() if r]
    if dangling:
        raise GadgetError(f"slots with unused residual: {dangling[:4]}")
    if len({tuple(sorted(e)) for e in edges}) != len(edges):
        raise GadgetError("assembly creates a repeated edge")
    return Assembly(Graph.from_edges(n, edges), tuple(offsets), tuple(bnd))


# -- dumbbell families ---------------------------------------------------------------------

def variable_gadget(k: int) -> Gadget:
    """Cycle C_4k; vertex 4i goes to a clause, each run 4i+1..4i+3 hangs on a triangle."""
    if k < 1:
        raise GadgetError("a variable gadget needs at least one occurrence")
    n = 4 * k
    edges = [(i, (i + 1) % n) for i in range(n)]
    for i in range(k):
        t = n + 3 * i
        edges += [(t, t + 1), (t + 1, t + 2), (t, t + 2)]
        edges += [(4 * i + 1 + j, t + j) for j in range(3)]
    body = Graph.from_edges(7 * k, edges)
    boundary = tuple((4 * i, 1) for i in range(k))
    contract = GadgetContract(frozenset({(BLACK,) * k}), rigid=True, properties=("monochrome",))
    return Gadget(f"dumbbell-variable-{k}", DUMBBELL, "variable", body, boundary, contract,
                  "cycle with triangles, built by code", {"external": "free", "cycle": list(range(n))})


# -- synthesis ------------------------------------------------------------------------------

@dataclass
class SynthesisResult:
    gadgets: list
    exhausted: bool
    truncated: bool = False
    examined: int = 0


def synthesize_gadget(contract: GadgetContract, host: str, boundary_size: int,
                      max_vertices: int = 7, role: str = "auxiliary", external: str = "free",
                      budget: Budget | None = None, limit: int | None = None) -> SynthesisResult:
    """Search all planar bodies up to ``max_vertices`` (isomorph-free atlas) for the contract.

    Hosts must be regular (or the dumbbell) so residual degrees are forced by
    the body degrees.  The atlas covers up to seven vertices.
    """
    if max_vertices > 7:
        raise GadgetError("the graph atlas only reaches seven vertices")
    closed = set()
    for b in contract.behaviors:
        closed |= orbit(b, host)
    for b in contract.behaviors:
        if canonical(b, host) != b:
            raise GadgetError("contract behaviors must be canonical representatives")
    if host == DUMBBELL:
        hdeg = 3
    else:
        h = host_graph(host)
        degs = {h.degree(x) for x in range(h.n)}
        if len(degs) != 1:
            raise GadgetError("synthesis needs a regular host")
        hdeg = degs.pop()
    budget = budget or Budget()
    t0 = time.monotonic()
    found: list[Gadget] = []
    examined = 0
    for G in nx.graph_atlas_g():
        n = G.number_of_nodes()
        if n < max(boundary_size, 1) or n > max_vertices:
            continue
        if not nx.is_connected(G):
            continue
        if max(dict(G.degree()).values(), default=0) > hdeg:
            continue
        if time.monotonic() - t0 > budget.secs:
            return SynthesisResult(found, False, True, examined)
        body = Graph.from_nx(G)
        if not planarity_check(body):
            continue
        short = [v for v in range(n) if body.degree(v) < hdeg]
        if len(short) != boundary_size:
            continue
        for order in itertools.permutations(short):
            if boundary_size > 1 and order[0] != min(order):
                continue  # cyclic rotations give the same gadget
            examined += 1
            bnd = tuple((v, hdeg - body.degree(v)) for v in order)
            g = Gadget(f"synth-{len(found)}", host, role, body, bnd, contract, "synthesized",
                       {"external": external})
            if boundary_size > 3 and not on_face_in_order(body, list(order)):
                continue
            try:
                rep = verify_contract(g, contract, budget)
            except BudgetExceeded:
                return SynthesisResult(found, False, True, examined)
            if rep.passed:
                found.append(g)
                if limit and len(found) >= limit:
                    return SynthesisResult(found, False, True, examined)
                break
    return SynthesisResult(found, True, False, examined)
