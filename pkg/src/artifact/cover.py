"""Covers (locally bijective homomorphisms) and the dumbbell coloring.

The search treats a cover as a constraint problem over vertex images:

* images are filtered by degree,
* adjacent vertices go to adjacent host vertices,
* vertices at distance at most two get distinct images,
* at every fully constrained vertex the neighbours must hit each host
  neighbour of its image exactly once (a matching condition).

Together these are equivalent to closed-neighbourhood bijectivity.  The same
engine also handles gadget bodies, where a boundary vertex with residual
degree ``r`` only needs injectivity plus ``r`` unused host neighbours.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .graph import Graph

DEFAULT_NODES = 10 ** 8
DEFAULT_SECS = 300.0


@dataclass(frozen=True)
class Budget:
    nodes: int = DEFAULT_NODES
    secs: float = DEFAULT_SECS


class BudgetExceeded(Exception):
    pass


class CoverInputError(ValueError):
    pass


@dataclass
class SearchResult:
    status: str                      # "yes", "no" or "budget"
    witness: list | None = None
    nodes: int = 0
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.status == "yes"


@dataclass
class CheckResult:
    ok: bool
    reason: str = ""
    vertex: int | None = None
    edge: tuple[int, int] | None = None

    def __bool__(self):
        return self.ok


# -- checking ------------------------------------------------------------------

def check_cover(g: Graph, h: Graph, f: Sequence[int]) -> CheckResult:
    if len(f) != g.n:
        raise CoverInputError(f"map has {len(f)} entries, graph has {g.n} vertices")
    for v, x in enumerate(f):
        if not isinstance(x, int) or not 0 <= x < h.n:
            raise CoverInputError(f"image {x!r} of vertex {v} is not a host vertex")
    for u, v in g.edges:
        if not h.has_edge(f[u], f[v]):
            return CheckResult(False, f"edge {u}-{v} maps to non-edge {f[u]}-{f[v]}", edge=(u, v))
    for v in range(g.n):
        imgs = [f[u] for u in g.closed_nbhd(v)]
        target = h.closed_nbhd(f[v])
        if len(imgs) != len(set(imgs)):
            return CheckResult(False, f"closed neighbourhood of {v} is not mapped injectively", vertex=v)
        if set(imgs) != target:
            return CheckResult(False, f"closed neighbourhood of {v} misses {sorted(target - set(imgs))} "
                                      f"(|N[v]|={len(imgs)}, |N[f(v)]|={len(target)})", vertex=v)
    return CheckResult(True)


def precheck_cover(g: Graph, h: Graph) -> CheckResult:
    """Cheap necessary conditions.  ``False`` means no cover can exist."""
    if h.n == 0:
        return CheckResult(g.n == 0, "empty host" if g.n else "")
    hdeg = {h.degree(x) for x in range(h.n)}
    for v in range(g.n):
        if g.degree(v) not in hdeg:
            return CheckResult(False, f"vertex {v} has degree {g.degree(v)}, no host vertex has that degree", vertex=v)
    hcomps = h.components()
    for comp in g.components():
        fits = []
        for hc in hcomps:
            if len(comp) % len(hc):
                continue
            # every host vertex of hc has len(comp)/len(hc) preimages, so the
            # degree multisets must agree up to that factor
            k = len(comp) // len(hc)
            gd = sorted(g.degree(v) for v in comp)
            hd = sorted(h.degree(x) for x in hc for _ in range(k))
            if gd == hd:
                fits.append(hc)
        if not fits:
            sizes = sorted({len(hc) for hc in hcomps})
            if all(len(comp) % s for s in sizes):
                why = f"component of size {len(comp)} not divisible by any host component size {sizes}"
            else:
                why = f"degree multiset of component containing {comp[0]} matches no host component"
            return CheckResult(False, why, vertex=comp[0])
    return CheckResult(True)


# -- the constraint engine --------------------------------------------------------

def _popcount(x: int) -> int:
    return bin(x).count("1")


def _low(x: int) -> int:
    return (x & -x).bit_length() - 1


def _bits(x: int) -> Iterator[int]:
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


class _Contradiction(Exception):
    pass


class CoverCSP:
    """Compiled cover problem for ``g -> h``.

    ``residual`` maps boundary vertices of ``g`` to their residual degree; the
    default (empty) is an ordinary cover.  ``allowed`` optionally restricts
    images per vertex (bit mask over host vertices).
    """

    def __init__(self, g: Graph, h: Graph, residual: Mapping[int, int] | None = None,
                 allowed: Mapping[int, int] | None = None):
        self.g, self.h = g, h
        self.residual = dict(residual or {})
        n = g.n
        self.nbrs = [tuple(sorted(g.adj[v])) for v in range(n)]
        d2 = []
        for v in range(n):
            s = set(g.adj[v])
            for u in g.adj[v]:
                s |= g.adj[u]
            s.discard(v)
            d2.append(tuple(sorted(s)))
        self.d2 = d2
        self.hadj = [sum(1 << y for y in h.adj[x]) for x in range(h.n)]
        self.exact = [v not in self.residual for v in range(n)]
        full = (1 << h.n) - 1
        dom = []
        for v in range(n):
            want = g.degree(v) + self.residual.get(v, 0)
            m = sum(1 << x for x in range(h.n) if h.degree(x) == want)
            if allowed is not None and v in allowed:
                m &= allowed[v]
            dom.append(m & full)
        self.initial = dom
        # sup[m]: host vertices adjacent to some member of m
        # okcov[m]: host vertices whose whole neighbourhood lies inside m
        self.sup = [0] * (1 << h.n)
        self.okcov = [0] * (1 << h.n)
        for m in range(1 << h.n):
            for x in range(h.n):
                if m >> x & 1:
                    self.sup[m] |= self.hadj[x]
                if self.hadj[x] & ~m == 0:
                    self.okcov[m] |= 1 << x
        self.weight = [0] * n

    # propagation works on a list of masks in place
    def _fix(self, dom, v, queue):
        x = _low(dom[v])
        for u in self.nbrs[v]:
            nd = dom[u] & self.hadj[x]
            if nd != dom[u]:
                if not nd:
                    raise _Contradiction
                dom[u] = nd
                queue.append(u)
        bit = 1 << x
        for w in self.d2[v]:
            if dom[w] & bit:
                nd = dom[w] & ~bit
                if not nd:
                    raise _Contradiction
                dom[w] = nd
                queue.append(w)

    def _match(self, dom, v, queue):
        # neighbours of a fixed vertex must realize every host neighbour once
        if not self.exact[v] or _popcount(dom[v]) != 1:
            return
        x = _low(dom[v])
        for y in _bits(self.hadj[x]):
            bit = 1 << y
            holder = -1
            for u in self.nbrs[v]:
                if dom[u] & bit:
                    if holder >= 0:
                        holder = -2
                        break
                    holder = u
            if holder == -1:
                raise _Contradiction
            if holder >= 0 and dom[holder] != bit:
                dom[holder] = bit
                queue.append(holder)

    def propagate(self, dom, queue, done):
        nbrs, exact, sup, okcov = self.nbrs, self.exact, self.sup, self.okcov
        while queue:
            u = queue.pop()
            try:
                if not dom[u]:
                    raise _Contradiction
                if not done[u] and _popcount(dom[u]) == 1:
                    done[u] = True
                    self._fix(dom, u, queue)
                    self._match(dom, u, queue)
                s = sup[dom[u]]
                for v in nbrs[u]:
                    if done[v]:
                        self._match(dom, v, queue)
                        continue
                    # edge support, and for interior vertices a covering neighbourhood
                    nd = dom[v] & s
                    if exact[v]:
                        cov = 0
                        for w in nbrs[v]:
                            cov |= dom[w]
                        nd &= okcov[cov]
                    if nd != dom[v]:
                        if not nd:
                            raise _Contradiction
                        dom[v] = nd
                        queue.append(v)
            except _Contradiction:
                self.weight[u] += 1
                raise

    def start(self, fixed: Mapping[int, int] | None = None):
        dom = list(self.initial)
        if any(m == 0 for m in dom):
            return None
        done = [False] * len(dom)
        queue = list(range(len(dom)))
        try:
            for v, x in (fixed or {}).items():
                if not dom[v] >> x & 1:
                    return None
                dom[v] = 1 << x
                queue.append(v)
            self.propagate(dom, queue, done)
        except _Contradiction:
            return None
        return dom, done

    def solutions(self, budget: Budget | None = None, fixed: Mapping[int, int] | None = None,
                  order: str = "wdeg", counter: list | None = None,
                  first: Sequence[int] = ()) -> Iterator[list[int]]:
        """Yield complete assignments.

        ``order='wdeg'`` (default) branches on the smallest domain relative to
        the failure weight around a vertex, ``'mrv'`` on the smallest domain,
        ``'index'`` in vertex order (lexicographic output).

        ``first`` names vertices to branch on before all others (smallest
        domain among them first); reductions pass their color vertices.
        """
        budget = budget or Budget()
        counter = counter if counter is not None else [0]
        t0 = time.monotonic()
        st = self.start(fixed)
        if st is None:
            return
        n = len(self.initial)
        self.weight = [0] * n
        wt, nbrs = self.weight, self.nbrs
        stack = [st]
        while stack:
            dom, done = stack.pop()
            counter[0] += 1
            if counter[0] > budget.nodes or (counter[0] & 1023) == 0 and time.monotonic() - t0 > budget.secs:
                raise BudgetExceeded
            best, bc = -1, 1 << 30
            for v in first:
                if not done[v]:
                    c = _popcount(dom[v])
                    if c < bc:
                        best, bc = v, c
            if best >= 0:
                pass
            elif order == "index":
                for v in range(n):
                    if not done[v]:
                        best = v
                        break
            elif order == "wdeg":
                bs = 1e18
                for v in range(n):
                    if not done[v]:
                        w = wt[v]
                        for u in nbrs[v]:
                            w += wt[u]
                        sc = _popcount(dom[v]) / (1 + w)
                        if sc < bs:
                            best, bs = v, sc
            else:
                for v in range(n):
                    if not done[v]:
                        c = _popcount(dom[v])
                        if c < bc:
                            best, bc = v, c
                            if c == 2:
                                break
            if best < 0:
                yield [_low(m) for m in dom]
                continue
            # push in reverse so that smaller images are explored first
            branches = []
            for x in _bits(dom[best]):
                nd = list(dom)
                nd[best] = 1 << x
                ndone = list(done)
                try:
                    self.propagate(nd, [best], ndone)
                except _Contradiction:
                    continue
                branches.append((nd, ndone))
            stack.extend(reversed(branches))


def solve_cover(g: Graph, h: Graph, budget: Budget | None = None, first: Sequence[int] = ()) -> SearchResult:
    pre = precheck_cover(g, h)
    if not pre:
        return SearchResult("no", reason=pre.reason)
    csp = CoverCSP(g, h)
    counter = [0]
    try:
        for sol in csp.solutions(budget, counter=counter, first=first):
            return SearchResult("yes", sol, counter[0])
    except BudgetExceeded:
        return SearchResult("budget", None, counter[0], "search budget exhausted")
    return SearchResult("no", None, counter[0], "search space exhausted")


@dataclass
class Enumeration:
    covers: list[list[int]] = field(default_factory=list)
    truncated: bool = False
    status: str = "complete"          # or "budget"


def enumerate_covers(g: Graph, h: Graph, limit: int | None = None, budget: Budget | None = None) -> Enumeration:
    out = Enumeration()
    if not precheck_cover(g, h):
        return out
    csp = CoverCSP(g, h)
    try:
        for sol in csp.solutions(budget, order="index"):
            if limit is not None and len(out.covers) >= limit:
                out.truncated = True
                break
            out.covers.append(sol)
    except BudgetExceeded:
        out.status = "budget"
        out.truncated = True
    return out


# -- the dumbbell ---------------------------------------------------------------------

BLACK, WHITE = 0, 1


def is_dumbbell_coloring(g: Graph, color: Sequence[int]) -> CheckResult:
    if len(color) != g.n:
        raise CoverInputError("coloring length differs from vertex count")
    for v in range(g.n):
        if color[v] not in (BLACK, WHITE):
            raise CoverInputError(f"vertex {v} has color {color[v]!r}")
        if g.degree(v) != 3:
            return CheckResult(False, f"vertex {v} has degree {g.degree(v)}", vertex=v)
        same = sum(color[u] == color[v] for u in g.adj[v])
        if same != 2:
            return CheckResult(False, f"vertex {v} has {same} same-colored neighbours", vertex=v)
    return CheckResult(True)


class DumbbellCSP:
    """Two-coloring where every vertex has two same and one opposite neighbour.

    ``free`` maps boundary vertices to the number of external neighbours whose
    colors are unconstrained; such a vertex needs at most two same-colored and
    at most one opposite-colored body neighbour, with totals summing to three.
    """

    def __init__(self, g: Graph, free: Mapping[int, int] | None = None):
        self.g = g
        self.free = dict(free or {})
        self.nbrs = [tuple(sorted(g.adj[v])) for v in range(g.n)]

    def _ok_degree(self):
        return all(len(self.nbrs[v]) + self.free.get(v, 0) == 3 for v in range(self.g.n))

    def propagate(self, col, queue):
        """Unit rules to a fixpoint; returns False on contradiction.  Mutates ``col``."""
        while queue:
            v = queue.pop()
            for w in (v,) + self.nbrs[v]:
                if not self._rule(col, w, queue):
                    return False
        return True

    def _rule(self, col, v, queue):
        cnt = [0, 0]
        unk = []
        for u in self.nbrs[v]:
            if col[u] < 0:
                unk.append(u)
            else:
                cnt[col[u]] += 1
        c = col[v]
        if c < 0:
            # external neighbours are free, so only the upper bounds bite
            poss = [k for k in (BLACK, WHITE) if cnt[k] <= 2 and cnt[1 - k] <= 1]
            if not poss:
                return False
            if len(poss) == 1:
                col[v] = poss[0]
                queue.append(v)
            return True
        same, opp = cnt[c], cnt[1 - c]
        if same > 2 or opp > 1:
            return False
        if unk and (same == 2 or opp == 1):
            fill = 1 - c if same == 2 else c
            for u in unk:
                col[u] = fill
                queue.append(u)
        return True

    def solutions(self, budget: Budget | None = None, counter: list | None = None,
                  fixed: Mapping[int, int] | None = None) -> Iterator[list[int]]:
        budget = budget or Budget()
        counter = counter if counter is not None else [0]
        if not self._ok_degree():
            return
        t0 = time.monotonic()
        n = self.g.n
        col = [-1] * n
        for v, c in (fixed or {}).items():
            col[v] = c
        if not self.propagate(col, list(range(n))):
            return
        stack = [col]
        while stack:
            col = stack.pop()
            counter[0] += 1
            if counter[0] > budget.nodes or (counter[0] & 1023) == 0 and time.monotonic() - t0 > budget.secs:
                raise BudgetExceeded
            try:
                v = col.index(-1)
            except ValueError:
                if all(self._final(col, v) for v in range(n)):
                    yield list(col)
                continue
            branches = []
            for c in (BLACK, WHITE):
                nc = list(col)
                nc[v] = c
                if self.propagate(nc, [v]):
                    branches.append(nc)
            stack.extend(reversed(branches))

    def _final(self, col, v):
        same = sum(col[u] == col[v] for u in self.nbrs[v])
        opp = len(self.nbrs[v]) - same
        free = self.free.get(v, 0)
        return same <= 2 and opp <= 1 and same + opp + free == 3


def solve_dumbbell(g: Graph, budget: Budget | None = None) -> SearchResult:
    for v in range(g.n):
        if g.degree(v) != 3:
            return SearchResult("no", reason=f"not cubic: vertex {v} has degree {g.degree(v)}")
    counter = [0]
    csp = DumbbellCSP(g)
    try:
        for sol in csp.solutions(budget, counter):
            return SearchResult("yes", sol, counter[0])
    except BudgetExceeded:
        return SearchResult("budget", None, counter[0], "search budget exhausted")
    return SearchResult("no", None, counter[0], "search space exhausted")


def swap_colors(color: Sequence[int]) -> list[int]:
    return [1 - c for c in color]


# -- witness formats ----------------------------------------------------------------

def serialize_map(f: Sequence[int]) -> str:
    return "".join(f"m {v} {x}\n" for v, x in enumerate(f))


def _parse_pairs_tagged(text: str, tag: str, key: str) -> list[int]:
    s = text.strip()
    if s.startswith("{"):
        try:
            vals = json.loads(s)[key]
            return [int(x) for x in vals]
        except (ValueError, KeyError, TypeError) as exc:
            raise CoverInputError(f"bad JSON {key}: {exc}") from exc
    got: dict[int, int] = {}
    for ln, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if not toks or toks[0].startswith("#"):
            continue
        if len(toks) != 3 or toks[0] != tag:
            raise CoverInputError(f"line {ln}: expected '{tag} <v> <value>'")
        try:
            v, x = int(toks[1]), int(toks[2])
        except ValueError as exc:
            raise CoverInputError(f"line {ln}: {exc}") from exc
        if v in got:
            raise CoverInputError(f"line {ln}: vertex {v} listed twice")
        got[v] = x
    if sorted(got) != list(range(len(got))):
        raise CoverInputError("vertices must be 0..n-1 without gaps")
    return [got[v] for v in range(len(got))]


def parse_map(text: str) -> list[int]:
    """``m <v> <f(v)>`` lines, or ``{"map": [...]}``."""
    return _parse_pairs_tagged(text, "m", "map")


def serialize_coloring(col: Sequence[int]) -> str:
    return "".join(f"c {v} {x}\n" for v, x in enumerate(col))


def parse_coloring(text: str) -> list[int]:
    """``c <v> <0|1>`` lines (0 black, 1 white), or ``{"coloring": [...]}``."""
    col = _parse_pairs_tagged(text, "c", "coloring")
    if any(c not in (BLACK, WHITE) for c in col):
        raise CoverInputError("dumbbell colors must be 0 (black) or 1 (white)")
    return col
