"""Simple undirected graphs, planarity, automorphisms and the text formats.

Vertices are the integers ``0..n-1``.  Labels live in a side table and never
take part in equality of structure, only in serialization.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import networkx as nx


class GraphError(ValueError):
    """Malformed graph input.  Carries a 1-based line and column when known."""

    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + msg)


class ResourceError(RuntimeError):
    """An operation refused to run because the instance is over its size limit."""


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    labels: Mapping[int, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("negative vertex count")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {u}-{v} out of range for n={self.n}")
            e = _norm_edge(u, v)
            if e in seen:
                raise GraphError(f"duplicate edge {e[0]}-{e[1]}")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        for v in self.labels:
            if not 0 <= v < self.n:
                raise GraphError(f"label on missing vertex {v}")
        object.__setattr__(self, "labels", dict(sorted(self.labels.items())))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        return cls(n, tuple(tuple(e) for e in edges), dict(labels or {}))

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        nb = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(frozenset(s) for s in nb)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    @property
    def m(self) -> int:
        return len(self.edges)

    def closed_nbhd(self, v: int) -> frozenset[int]:
        return self.adj[v] | {v}

    def to_nx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges)
        return G

    @classmethod
    def from_nx(cls, G: nx.Graph) -> "Graph":
        """Relabel ``G`` to ``0..n-1`` in sorted node order (repr order for mixed types)."""
        try:
            nodes = sorted(G.nodes())
        except TypeError:
            nodes = sorted(G.nodes(), key=repr)
        idx = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), tuple((idx[u], idx[v]) for u, v in G.edges()))

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp, stack = [], [s]
            seen[s] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in self.adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        stack.append(u)
            out.append(sorted(comp))
        return out

    def induced(self, vs: Iterable[int]) -> "Graph":
        vs = sorted(vs)
        idx = {v: i for i, v in enumerate(vs)}
        es = [(idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx]
        labels = {idx[v]: t for v, t in self.labels.items() if v in idx}
        return Graph.from_edges(len(vs), es, labels)

    def relabel(self, perm: list[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        es = [(perm[u], perm[v]) for u, v in self.edges]
        return Graph.from_edges(self.n, es, {perm[v]: t for v, t in self.labels.items()})


# -- named graphs -----------------------------------------------------------

def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cube() -> Graph:
    return Graph.from_edges(8, [(v, v ^ (1 << k)) for v in range(8) for k in range(3) if v < v ^ (1 << k)])


def prism(k: int = 3) -> Graph:
    es = [(i, (i + 1) % k) for i in range(k)]
    es += [(k + i, k + (i + 1) % k) for i in range(k)]
    es += [(i, k + i) for i in range(k)]
    return Graph.from_edges(2 * k, es)


def k4_plus() -> Graph:
    """K4 with a leaf on vertex 0.  Vertices 0..3 are the clique, 4 is the leaf."""
    return Graph.from_edges(5, list(complete(4).edges) + [(0, 4)], {0: "0", 1: "1", 2: "2", 3: "3", 4: "+"})


def k5_minus() -> Graph:
    """K5 without the edge 0-4.  Vertex 4 plays the role of the minus vertex."""
    es = [e for e in complete(5).edges if e != (0, 4)]
    return Graph.from_edges(5, es, {0: "0", 1: "1", 2: "2", 3: "3", 4: "-"})


def wheel(k: int) -> Graph:
    es = [(i, (i + 1) % k) for i in range(k)] + [(i, k) for i in range(k)]
    return Graph.from_edges(k + 1, es)


def icosahedron() -> Graph:
    return Graph.from_nx(nx.icosahedral_graph())


def petersen() -> Graph:
    return Graph.from_nx(nx.petersen_graph())


NAMED = {
    "K2": lambda: complete(2),
    "K3": lambda: complete(3),
    "K4": lambda: complete(4),
    "K5": lambda: complete(5),
    "K6": lambda: complete(6),
    "C3": lambda: cycle(3),
    "C4": lambda: cycle(4),
    "K4plus": k4_plus,
    "K5minus": k5_minus,
    "W4": lambda: wheel(4),
    "Q3": cube,
    "cube": cube,
    "prism": prism,
    "icosahedron": icosahedron,
    "petersen": petersen,
}


_FAMILIES = [
    (re.compile(r"K(\d+),(\d+)$"), lambda m: complete_bipartite(int(m[1]), int(m[2]))),
    (re.compile(r"K(\d+)$"), lambda m: complete(int(m[1]))),
    (re.compile(r"C(\d+)$"), lambda m: cycle(int(m[1]))),
    (re.compile(r"P(\d+)$"), lambda m: path(int(m[1]))),
    (re.compile(r"W(\d+)$"), lambda m: wheel(int(m[1]))),
    (re.compile(r"prism(\d+)$"), lambda m: prism(int(m[1]))),
]


def named(name: str) -> Graph:
    """Built-in graphs: the fixed names above plus K<n>, K<a>,<b>, C<n>, P<n>, W<n>, prism<k>."""
    if name in NAMED:
        return NAMED[name]()
    for pat, make in _FAMILIES:
        m = pat.match(name)
        if m:
            return make(m)
    raise GraphError(f"unknown graph name {name!r}")


# -- text formats -------------------------------------------------------------

def serialize_graph(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines += [f"e {u} {v}" for u, v in g.edges]
    lines += [f"l {v} {t}" for v, t in g.labels.items()]
    return "\n".join(lines) + "\n"


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges],
            "labels": {str(v): t for v, t in g.labels.items()}}


def graph_from_json(d: Mapping) -> Graph:
    try:
        n = int(d["n"])
        edges = [(int(u), int(v)) for u, v in d.get("edges", [])]
        labels = {int(v): str(t) for v, t in d.get("labels", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"bad graph JSON: {exc}") from None
    return Graph.from_edges(n, edges, labels)


def _int_at(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphError(f"expected integer, got {tok!r}", line, col) from None


def _parse_pairs(text: str) -> Graph:
    # compact "0-1,1-2" edge list; n is one more than the largest endpoint
    edges = []
    col = 1
    for chunk in text.split(","):
        tok = chunk.strip()
        if tok:
            if "-" not in tok:
                raise GraphError(f"expected u-v, got {tok!r}", 1, col)
            a, b = tok.split("-", 1)
            u, v = _int_at(a, 1, col), _int_at(b, 1, col)
            if u == v:
                raise GraphError(f"loop {u}-{v}", 1, col)
            edges.append((u, v))
        col += len(chunk) + 1
    n = 1 + max((max(e) for e in edges), default=-1)
    seen = set()
    for u, v in edges:
        if _norm_edge(u, v) in seen:
            raise GraphError(f"duplicate edge {u}-{v}", 1, 1)
        seen.add(_norm_edge(u, v))
    return Graph.from_edges(n, edges)


def parse_graph(text: str) -> Graph:
    """Parse the line format, its JSON mirror, or a compact ``u-v,...`` edge list."""
    s = text.strip()
    if s.startswith("{"):
        try:
            return graph_from_json(json.loads(s))
        except json.JSONDecodeError as exc:
            raise GraphError(exc.msg, exc.lineno, exc.colno) from None
    if s and s[0].isdigit():
        return _parse_pairs(s)
    n = None
    edges: list[tuple[int, int]] = []
    labels: dict[int, str] = {}
    seen: set[tuple[int, int]] = set()
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kind = toks[0]
        col2 = raw.find(toks[1]) + 1 if len(toks) > 1 else len(raw) + 1
        if kind == "n":
            if n is not None:
                raise GraphError("repeated n line", ln, 1)
            if len(toks) != 2:
                raise GraphError("expected 'n <count>'", ln, 1)
            n = _int_at(toks[1], ln, col2)
            if n < 0:
                raise GraphError("negative vertex count", ln, col2)
        elif kind == "e":
            if n is None:
                raise GraphError("edge before n line", ln, 1)
            if len(toks) != 3:
                raise GraphError("expected 'e <u> <v>'", ln, 1)
            u, v = _int_at(toks[1], ln, col2), _int_at(toks[2], ln, col2 + len(toks[1]) + 1)
            if u == v:
                raise GraphError(f"loop at vertex {u}", ln, col2)
            for w in (u, v):
                if not 0 <= w < n:
                    raise GraphError(f"endpoint {w} out of range for n={n}", ln, col2)
            e = _norm_edge(u, v)
            if e in seen:
                raise GraphError(f"duplicate edge {u}-{v}", ln, col2)
            seen.add(e)
            edges.append(e)
        elif kind == "l":
            if n is None:
                raise GraphError("label before n line", ln, 1)
            if len(toks) < 3:
                raise GraphError("expected 'l <v> <tag>'", ln, 1)
            v = _int_at(toks[1], ln, col2)
            if not 0 <= v < n:
                raise GraphError(f"label on missing vertex {v}", ln, col2)
            labels[v] = " ".join(toks[2:])
        else:
            raise GraphError(f"unknown record {kind!r}", ln, 1)
    if n is None:
        raise GraphError("missing n line", 1, 1)
    return Graph.from_edges(n, edges, labels)


def to_dot(g: Graph, colors: Mapping[int, object] | None = None, name: str = "G") -> str:
    palette = ["black", "white", "red", "blue", "green", "orange", "purple", "gold"]
    out = [f"graph {name} {{", "  node [style=filled];"]
    for v in range(g.n):
        attrs = []
        tag = g.labels.get(v)
        attrs.append(f'label="{v}' + (f"\\n{tag}" if tag else "") + '"')
        if colors is not None and v in colors:
            c = colors[v]
            if isinstance(c, str):
                fill = c
            else:
                fill = palette[int(c) % len(palette)]
            attrs.append(f'fillcolor="{fill}"')
            if fill == "black":
                attrs.append('fontcolor="white"')
        out.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in g.edges:
        out.append(f"  {u} -- {v};")
    out.append("}")
    return "\n".join(out) + "\n"


# -- planarity ------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarityResult:
    planar: bool
    rotation: dict[int, list[int]] | None = None  # clockwise neighbour order
    witness: Graph | None = None                  # Kuratowski subgraph, original vertex ids

    def __bool__(self):
        return self.planar


def planarity_check(g: Graph) -> PlanarityResult:
    if g.n >= 3 and g.m > 3 * g.n - 6:
        # Euler bound; still extract a witness from the full test
        pass
    ok, cert = nx.check_planarity(g.to_nx(), counterexample=True)
    if ok:
        data = cert.get_data()
        return PlanarityResult(True, rotation={v: list(data.get(v, [])) for v in range(g.n)})
    es = [_norm_edge(u, v) for u, v in cert.edges()]
    return PlanarityResult(False, witness=Graph(g.n, tuple(es)))


def faces(g: Graph, rotation: Mapping[int, list[int]]) -> list[list[int]]:
    """Face boundary walks of a rotation system (clockwise order at each vertex)."""
    pos = {v: {u: i for i, u in enumerate(rot)} for v, rot in rotation.items()}
    seen = set()
    out = []
    for u, v in g.edges:
        for a, b in ((u, v), (v, u)):
            if (a, b) in seen:
                continue
            walk = []
            x, y = a, b
            while (x, y) not in seen:
                seen.add((x, y))
                walk.append(x)
                rot = rotation[y]
                # next dart: from y, the neighbour following x counterclockwise
                x, y = y, rot[(pos[y][x] - 1) % len(rot)]
            out.append(walk)
    return out


def euler_ok(g: Graph, rotation: Mapping[int, list[int]]) -> bool:
    """n - m + f == 2 on every component with at least one edge (isolated vertices: 1 face)."""
    fs = faces(g, rotation)
    comp_of = {}
    for i, comp in enumerate(g.components()):
        for v in comp:
            comp_of[v] = i
    counts: dict[int, list[int]] = {}
    for i, comp in enumerate(g.components()):
        counts[i] = [len(comp), 0, 0]
    for u, v in g.edges:
        counts[comp_of[u]][1] += 1
    for f in fs:
        counts[comp_of[f[0]]][2] += 1
    for nv, ne, nf in counts.values():
        if ne == 0:
            continue
        if nv - ne + nf != 2:
            return False
    return True


def on_common_face(g: Graph, vs: Iterable[int]) -> bool:
    """True iff some planar embedding of ``g`` has all of ``vs`` on one face.

    Tested by adding an apex adjacent to every listed vertex.
    """
    vs = list(vs)
    if not vs:
        return bool(planarity_check(g))
    apex = g.n
    es = list(g.edges) + [(v, apex) for v in vs]
    return bool(planarity_check(Graph.from_edges(g.n + 1, es)))


def on_face_in_order(g: Graph, vs: list[int]) -> bool:
    """Common face with the vertices met in the given cyclic order.

    Adds a wheel: a cycle through new vertices, one per listed vertex, plus an
    apex on that cycle.  Planarity of the result forces both face and order.
    """
    k = len(vs)
    if k <= 3:
        return on_common_face(g, vs)
    n = g.n
    es = list(g.edges)
    for i, v in enumerate(vs):
        es.append((v, n + i))
        es.append((n + i, n + (i + 1) % k))
        es.append((n + i, n + k))
    return bool(planarity_check(Graph.from_edges(n + k + 1, es)))


# -- automorphisms ------------------------------------------------------------------

def automorphisms(g: Graph, max_vertices: int = 16, vertex_classes: list[int] | None = None) -> list[tuple[int, ...]]:
    """All adjacency-preserving permutations, found by backtracking.

    Candidates for each vertex are pruned by degree (and by ``vertex_classes``
    when given, e.g. labels that must be preserved).  Output is sorted.
    """
    if g.n > max_vertices:
        raise ResourceError(f"automorphism search limited to {max_vertices} vertices, got {g.n}")
    n = g.n
    cls = [(g.degree(v), vertex_classes[v] if vertex_classes else 0) for v in range(n)]
    # branch in BFS order so that each new vertex has mapped neighbours
    order: list[int] = []
    seen = set()
    for comp in g.components():
        start = max(comp, key=lambda v: (g.degree(v), -v))
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(g.adj[v]):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    img = [-1] * n
    used = [False] * n
    out = []

    def rec(i):
        if i == n:
            out.append(tuple(img))
            return
        v = order[i]
        for w in range(n):
            if used[w] or cls[w] != cls[v]:
                continue
            ok = True
            for u in order[:i]:
                if (u in g.adj[v]) != (img[u] in g.adj[w]):
                    ok = False
                    break
            if ok:
                img[v] = w
                used[w] = True
                rec(i + 1)
                used[w] = False
        img[v] = -1

    rec(0)
    return sorted(out)


def is_permutation(p) -> bool:
    return sorted(p) == list(range(len(p)))
