"""Segment arrangements with exact rational geometry.

Every predicate works on :class:`fractions.Fraction`; floats are rejected at
the door so that general position is decided exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .graph import Graph, GraphError, ResourceError

Point = tuple[Fraction, Fraction]


class ArrangementError(ValueError):
    """Bad arrangement input, or a degenerate one where a generic one was required."""


def _q(x) -> Fraction:
    if isinstance(x, float):
        raise ArrangementError(f"float coordinate {x!r}; use integers or 'a/b' strings")
    if isinstance(x, Fraction):
        return x
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ArrangementError(f"bad coordinate {x!r}") from exc


@dataclass(frozen=True)
class Segment:
    id: str
    p: Point
    q: Point

    @classmethod
    def make(cls, sid, p, q) -> "Segment":
        return cls(str(sid), (_q(p[0]), _q(p[1])), (_q(q[0]), _q(q[1])))


@dataclass(frozen=True)
class SegmentArrangement:
    segments: tuple[Segment, ...]

    def __post_init__(self):
        ids = [s.id for s in self.segments]
        if len(set(ids)) != len(ids):
            raise ArrangementError("duplicate segment id")
        for s in self.segments:
            if s.p == s.q:
                raise ArrangementError(f"segment {s.id} has zero length")

    @classmethod
    def from_coords(cls, segs: Iterable[Sequence]) -> "SegmentArrangement":
        """From ``(px, py, qx, qy)`` tuples; ids become ``0, 1, ...``."""
        return cls(tuple(Segment.make(i, s[:2], s[2:]) for i, s in enumerate(segs)))

    def index(self, sid: str) -> int:
        for i, s in enumerate(self.segments):
            if s.id == sid:
                return i
        raise KeyError(sid)

    def scaled(self, factor) -> "SegmentArrangement":
        k = _q(factor)
        return SegmentArrangement(tuple(
            Segment(s.id, (s.p[0] * k, s.p[1] * k), (s.q[0] * k, s.q[1] * k)) for s in self.segments))

    def __len__(self):
        return len(self.segments)


# --- predicates -----------------------------------------------------------

def orient(a: Point, b: Point, c: Point) -> int:
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def _on_segment(p: Point, s: Segment) -> bool:
    if orient(s.p, s.q, p) != 0:
        return False
    return (min(s.p[0], s.q[0]) <= p[0] <= max(s.p[0], s.q[0])
            and min(s.p[1], s.q[1]) <= p[1] <= max(s.p[1], s.q[1]))


def proper_crossing(s: Segment, t: Segment) -> bool:
    """Interiors cross in a single point with no endpoint involved."""
    o1, o2 = orient(s.p, s.q, t.p), orient(s.p, s.q, t.q)
    o3, o4 = orient(t.p, t.q, s.p), orient(t.p, t.q, s.q)
    return o1 * o2 < 0 and o3 * o4 < 0


def intersection_point(s: Segment, t: Segment) -> Point:
    (x1, y1), (x2, y2) = s.p, s.q
    (x3, y3), (x4, y4) = t.p, t.q
    den = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4)
    if den == 0:
        raise ArrangementError(f"segments {s.id} and {t.id} are parallel")
    a = x1 * y2 - y1 * x2
    b = x3 * y4 - y3 * x4
    return ((a * (x3 - x4) - (x1 - x2) * b) / den, (a * (y3 - y4) - (y1 - y2) * b) / den)


def param(s: Segment, p: Point) -> Fraction:
    """Position of ``p`` along ``s`` as a fraction of its length (0 at p, 1 at q)."""
    dx, dy = s.q[0] - s.p[0], s.q[1] - s.p[1]
    if dx != 0:
        return (p[0] - s.p[0]) / dx
    return (p[1] - s.p[1]) / dy


@dataclass(frozen=True)
class Violation:
    kind: str
    segments: tuple[str, ...]

    def __str__(self):
        return f"{self.kind}: {', '.join(self.segments)}"


def validate_general_position(a: SegmentArrangement) -> list[Violation]:
    """Empty list when the arrangement is generic."""
    out: list[Violation] = []
    segs = a.segments
    ends = {}
    for s in segs:
        for p in (s.p, s.q):
            if p in ends:
                out.append(Violation("shared endpoint", (ends[p], s.id)))
            else:
                ends[p] = s.id
    points: dict[Point, set[str]] = {}
    for s, t in combinations(segs, 2):
        if orient(s.p, s.q, t.p) == 0 and orient(s.p, s.q, t.q) == 0:
            if _on_segment(t.p, s) or _on_segment(t.q, s) or _on_segment(s.p, t) or _on_segment(s.q, t):
                out.append(Violation("collinear overlap", (s.id, t.id)))
            continue
        for x, y in ((s, t), (t, s)):
            for p in (y.p, y.q):
                if _on_segment(p, x) and p not in (x.p, x.q):
                    out.append(Violation("endpoint on segment", (y.id, x.id)))
        if proper_crossing(s, t):
            points.setdefault(intersection_point(s, t), set()).update((s.id, t.id))
    for p, ids in points.items():
        if len(ids) > 2:
            out.append(Violation("triple point", tuple(sorted(ids))))
    return out


# --- crossings ------------------------------------------------------------

@dataclass(frozen=True)
class Crossing:
    id: tuple[int, int]  # sorted segment indices
    point: Point

    def other(self, i: int) -> int:
        return self.id[1] if self.id[0] == i else self.id[0]


@dataclass(frozen=True)
class CrossingStructure:
    crossings: tuple[Crossing, ...]
    along: tuple[tuple[tuple[int, int], ...], ...]  # per segment, crossing ids ordered from p to q

    def subsegments(self, i: int) -> int:
        return len(self.along[i]) + 1

    def crossing(self, cid) -> Crossing:
        for c in self.crossings:
            if c.id == cid:
                return c
        raise KeyError(cid)


def compute_crossings(a: SegmentArrangement) -> CrossingStructure:
    bad = validate_general_position(a)
    if bad:
        raise ArrangementError("degenerate arrangement: " + "; ".join(map(str, bad)))
    segs = a.segments
    crossings = []
    on: list[list[tuple[Fraction, tuple[int, int]]]] = [[] for _ in segs]
    for i, j in combinations(range(len(segs)), 2):
        if proper_crossing(segs[i], segs[j]):
            pt = intersection_point(segs[i], segs[j])
            crossings.append(Crossing((i, j), pt))
            on[i].append((param(segs[i], pt), (i, j)))
            on[j].append((param(segs[j], pt), (i, j)))
    along = tuple(tuple(cid for _, cid in sorted(lst)) for lst in on)
    return CrossingStructure(tuple(crossings), along)


def intersection_graph(a: SegmentArrangement) -> Graph:
    cs = compute_crossings(a)
    return Graph.from_edges(len(a), [c.id for c in cs.crossings])


def brute_force_coloring(g: Graph, k: int, max_vertices: int = 24) -> list[int] | None:
    """A proper k-coloring or None.  Plain backtracking with symmetry breaking."""
    if g.n > max_vertices:
        raise ResourceError(f"{g.n} vertices exceeds the coloring oracle bound {max_vertices}")
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    col = [-1] * g.n

    def go(i, used):
        if i == len(order):
            return True
        v = order[i]
        taken = {col[u] for u in g.adj[v]}
        # a fresh color is interchangeable with any other fresh one
        for c in range(min(k, used + 1)):
            if c not in taken:
                col[v] = c
                if go(i + 1, max(used, c + 1)):
                    return True
        col[v] = -1
        return False

    return list(col) if go(0, 0) else None


# --- formats --------------------------------------------------------------

def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def serialize_arrangement(a: SegmentArrangement) -> str:
    return "".join(f"s {s.id} {_fmt(s.p[0])} {_fmt(s.p[1])} {_fmt(s.q[0])} {_fmt(s.q[1])}\n"
                   for s in a.segments)


def arrangement_to_json(a: SegmentArrangement) -> str:
    return json.dumps({"segments": [{"id": s.id, "p": [_fmt(s.p[0]), _fmt(s.p[1])],
                                     "q": [_fmt(s.q[0]), _fmt(s.q[1])]} for s in a.segments]})


def parse_arrangement(text: str) -> SegmentArrangement:
    if text.lstrip().startswith("{"):
        try:
            d = json.loads(text)
            return SegmentArrangement(tuple(Segment.make(s["id"], s["p"], s["q"]) for s in d["segments"]))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ArrangementError(f"bad arrangement JSON: {exc}") from exc
    segs = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "s" or len(parts) != 6:
            raise GraphError("expected 's <id> <px> <py> <qx> <qy>'", ln, 1)
        try:
            segs.append(Segment.make(parts[1], parts[2:4], parts[4:6]))
        except ArrangementError as exc:
            raise GraphError(str(exc), ln, 1) from exc
    return SegmentArrangement(tuple(segs))


# --- random corpus ----------------------------------------------------------

def _chord(rng, span: int) -> tuple[int, int, int, int]:
    """Endpoints on two different sides of the box."""
    a, b = rng.sample(range(4), 2)
    out = ()
    for side in (a, b):
        t = rng.randint(1, span - 1)
        out += ((t, 0), (t, span), (0, t), (span, t))[side]
    return out


def random_arrangement(rng, count: int, span: int = 40, tries: int = 1000,
                       chords: bool = False) -> SegmentArrangement:
    """``count`` segments with integer endpoints in a box, resampled until generic.

    With ``chords`` the endpoints lie on the box boundary, which gives many
    more crossings per segment.
    """
    for _ in range(tries):
        if chords:
            segs = [_chord(rng, span) for _ in range(count)]
        else:
            segs = [tuple(rng.randint(0, span) for _ in range(4)) for _ in range(count)]
        if any(s[:2] == s[2:] for s in segs):
            continue
        a = SegmentArrangement.from_coords(segs)
        if not validate_general_position(a):
            return a
    raise ArrangementError("could not sample a generic arrangement")
