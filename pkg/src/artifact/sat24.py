"""2-in-4 monotone planar SAT: model, checks, exhaustive solver, generator."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .graph import Graph, GraphError, ResourceError, planarity_check


@dataclass(frozen=True)
class Formula24:
    variable_count: int
    clauses: tuple[tuple[int, ...], ...] = field(default_factory=tuple)

    @classmethod
    def make(cls, nvars: int, clauses) -> "Formula24":
        return cls(nvars, tuple(tuple(c) for c in clauses))

    def incidence_graph(self) -> Graph:
        """Variables are ``0..V-1``, clause ``j`` is vertex ``V + j``."""
        edges = set()
        for j, c in enumerate(self.clauses):
            for x in c:
                edges.add((x, self.variable_count + j))
        return Graph.from_edges(self.variable_count + len(self.clauses), edges)

    def occurrences(self) -> list[list[int]]:
        occ: list[list[int]] = [[] for _ in range(self.variable_count)]
        for j, c in enumerate(self.clauses):
            for x in c:
                occ[x].append(j)
        return occ


def satisfies(f: Formula24, values: Sequence[bool]) -> bool:
    return all(sum(bool(values[x]) for x in c) == 2 for c in f.clauses)


def validate_formula(f: Formula24) -> list[str]:
    """Violations as readable strings; empty when valid."""
    out = []
    for j, c in enumerate(f.clauses):
        if len(c) != 4:
            out.append(f"clause {j}: arity {len(c)}, expected 4")
        if len(set(c)) != len(c):
            out.append(f"clause {j}: repeated variable")
        for x in c:
            if not 0 <= x < f.variable_count:
                out.append(f"clause {j}: variable {x} out of range")
    if out:
        return out
    res = planarity_check(f.incidence_graph())
    if not res.planar:
        out.append("incidence graph not planar; witness edges " + " ".join(f"{u}-{v}" for u, v in res.witness.edges))
    return out


def brute_force_sat(f: Formula24, max_vars: int = 24) -> list[bool] | None:
    """First satisfying assignment in a clause-guided DFS, or None."""
    if f.variable_count > max_vars:
        raise ResourceError(f"{f.variable_count} variables exceeds bound {max_vars}")
    occ = f.occurrences()
    val: list[int] = [-1] * f.variable_count

    def clause_ok(c):
        t = sum(1 for x in c if val[x] == 1)
        u = sum(1 for x in c if val[x] < 0)
        return t <= 2 <= t + u

    def go(x):
        if x == f.variable_count:
            return True
        for b in (1, 0):
            val[x] = b
            if all(clause_ok(f.clauses[j]) for j in occ[x]) and go(x + 1):
                return True
        val[x] = -1
        return False

    return [bool(v) for v in val] if go(0) else None


def count_models(f: Formula24) -> int:
    """Plain enumeration over all assignments; the second oracle."""
    if f.variable_count > 20:
        raise ResourceError("too many variables for plain enumeration")
    return sum(satisfies(f, vs) for vs in product((False, True), repeat=f.variable_count))


# --- formats ----------------------------------------------------------------

def serialize_formula(f: Formula24) -> str:
    lines = [f"p 24sat {f.variable_count} {len(f.clauses)}"]
    lines += ["c " + " ".join(map(str, c)) for c in f.clauses]
    return "\n".join(lines) + "\n"


def formula_to_json(f: Formula24) -> str:
    return json.dumps({"variables": f.variable_count, "clauses": [list(c) for c in f.clauses]})


def parse_formula(text: str) -> Formula24:
    if text.lstrip().startswith("{"):
        try:
            d = json.loads(text)
            return Formula24.make(int(d["variables"]), d["clauses"])
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"bad formula JSON: {exc}") from exc
    header = None
    clauses = []
    for ln, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "#":
            continue
        try:
            if parts[0] == "p":
                if parts[1:2] != ["24sat"] or len(parts) != 4:
                    raise GraphError("expected 'p 24sat <vars> <clauses>'", ln, 1)
                header = (int(parts[2]), int(parts[3]))
            elif parts[0] == "c":
                if header is None:
                    raise GraphError("clause before header", ln, 1)
                clauses.append(tuple(int(x) for x in parts[1:]))
            else:
                raise GraphError(f"unknown line tag {parts[0]!r}", ln, 1)
        except ValueError as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"bad integer: {exc}", ln, 1) from exc
    if header is None:
        raise GraphError("missing header")
    if header[1] != len(clauses):
        raise GraphError(f"header says {header[1]} clauses, found {len(clauses)}")
    return Formula24.make(header[0], clauses)


# --- generation ---------------------------------------------------------------

def _grow(rng: random.Random, nclauses: int, max_vars: int, greedy: bool = False) -> Formula24 | None:
    """Grow a plane bipartite incidence graph clause by clause.

    Faces are kept as cyclic vertex lists.  A new clause is placed inside a
    face and attached to four distinct variables on its boundary (in the
    face's cyclic order, so no edges cross); missing variables are created as
    fresh vertices inside the same face.  Planarity holds by construction.
    ``greedy`` grows inside the face with the most variables, which packs
    clauses tightly and makes unsatisfiable instances far more likely.
    """
    nv = 0
    clauses: list[tuple[int, ...]] = []
    faces: list[list[tuple[str, int]]] = []  # boundary walk, nodes ('v', i) / ('c', j)
    for j in range(nclauses):
        if not faces:
            vs = list(range(4))
            nv = 4
            clauses.append(tuple(vs))
            c = ("c", 0)
            # star: one face whose walk goes c v0 c v1 c v2 c v3
            walk = []
            for v in vs:
                walk += [c, ("v", v)]
            faces = [walk]
            continue
        if greedy:
            fi = max(range(len(faces)), key=lambda i: (len({x for k, x in faces[i] if k == "v"}), rng.random()))
        else:
            fi = rng.randrange(len(faces))
        walk = faces[fi]
        # distinct variable positions on this walk, first occurrence only
        pos = []
        seen = set()
        for i, (kind, x) in enumerate(walk):
            if kind == "v" and x not in seen:
                seen.add(x)
                pos.append(i)
        take = sorted(rng.sample(pos, min(len(pos), rng.choice((1, 2, 3, 3, 4, 4, 4)))))
        fresh = 4 - len(take)
        if nv + fresh > max_vars:
            return None
        c = ("c", j)
        # split the face along the attachments; fresh variables hang in the first piece
        new_faces = []
        k = len(take)
        for a in range(k):
            i0, i1 = take[a], take[(a + 1) % k]
            seg = walk[i0:i1 + 1] if i1 > i0 else walk[i0:] + walk[:i1 + 1]
            if k == 1:
                seg = walk[i0:] + walk[:i0 + 1]
            new_faces.append(seg + [c])
        members = [walk[i][1] for i in take]
        hang = []
        for _ in range(fresh):
            members.append(nv)
            hang.append(nv)
            nv += 1
        if hang:
            # pendant fresh variables sit in the face after the last attachment
            f = new_faces[-1]
            extra = []
            for v in hang:
                extra += [("v", v), c]
            new_faces[-1] = f + extra
        faces[fi:fi + 1] = new_faces
        clauses.append(tuple(members))
    return Formula24.make(nv, clauses)


def generate_instances(seed: int, count: int, max_clauses: int = 5, max_vars: int = 8,
                       min_clauses: int = 1, mixed: bool = True, tries: int = 10 ** 6) -> list[Formula24]:
    """Deterministic corpus.  With ``mixed`` and ``count >= 2`` it holds at
    least one satisfiable and one unsatisfiable instance; the missing kind is
    resampled with greedy growth and replaces the last slot."""
    rng = random.Random(seed)
    out: list[Formula24] = []
    while len(out) < count:
        f = _grow(rng, rng.randint(min_clauses, max_clauses), max_vars)
        if f is None or validate_formula(f):
            continue
        out.append(f)
    if not mixed or count < 2:
        return out
    sat = [brute_force_sat(f) is not None for f in out]
    if any(sat) and not all(sat):
        return out
    want_sat = not sat[0]
    for _ in range(tries):
        f = _grow(rng, rng.randint(min_clauses, max_clauses), max_vars, greedy=True)
        if f is None or validate_formula(f):
            continue
        if (brute_force_sat(f) is not None) == want_sat:
            out[-1] = f
            return out
    raise ResourceError("could not sample both satisfiable and unsatisfiable instances in this profile")


SAMPLE_FORMULA = Formula24.make(6, [(0, 1, 3, 4), (1, 2, 4, 5)])
