"""Shared corpora and brute-force oracles for the test suite."""

import itertools
import random

import pytest

from artifact.arrangement import SegmentArrangement, random_arrangement
from artifact.graph import Graph
from artifact.sat24 import Formula24

# four lines y = m x + c, pairwise crossing inside x in [-20, 20]
FOUR_LINES = [(0, 0), (1, 1), (-1, 2), (3, -1)]
UNSAT_CLAUSES = [(0, 1, 3, 4), (1, 2, 6, 7), (1, 2, 5, 7), (0, 1, 3, 5), (1, 4, 5, 6)]

ACCEPTANCE: dict[int, list[tuple[str, bool]]] = {}


def record(criterion: int, label: str, ok: bool):
    ACCEPTANCE.setdefault(criterion, []).append((label, ok))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow; pass --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        rows = ACCEPTANCE[k]
        bad = [label for label, ok in rows if not ok]
        verdict = "PASS" if not bad else "FAIL (" + ", ".join(bad) + ")"
        terminalreporter.write_line(f"criterion {k}: {verdict}")


def four_crossing() -> SegmentArrangement:
    return SegmentArrangement.from_coords([(-20, -20 * m + c, 20, 20 * m + c) for m, c in FOUR_LINES])


def chord_corpus(count=20, lo=3, hi=6):
    out = []
    for seed in range(count):
        rng = random.Random(seed)
        out.append(random_arrangement(rng, rng.randint(lo, hi), chords=True))
    return out


def unsat_fixture() -> Formula24:
    return Formula24(8, tuple(UNSAT_CLAUSES))


def naive_covers(g: Graph, h: Graph, limit=None):
    """Plain DFS over vertex images, checked only against already placed neighbours."""
    order = list(range(g.n))
    f = [-1] * g.n
    found = []

    def ok_local(v):
        # images of placed neighbours of v must be distinct neighbours of f(v)
        seen = set()
        for u in g.adj[v]:
            if f[u] < 0:
                continue
            if f[u] not in h.adj[f[v]] or f[u] in seen:
                return False
            seen.add(f[u])
        return True

    def complete(v):
        return all(f[u] >= 0 for u in g.adj[v])

    def go(i):
        if limit is not None and len(found) >= limit:
            return
        if i == g.n:
            if all({f[u] for u in g.adj[v]} == set(h.adj[f[v]]) and len(g.adj[v]) == len(h.adj[f[v]])
                   for v in range(g.n)):
                found.append(list(f))
            return
        v = order[i]
        for x in range(h.n):
            f[v] = x
            if ok_local(v) and all(ok_local(u) for u in g.adj[v] if f[u] >= 0):
                if all(len(g.adj[u]) == len(h.adj[f[u]]) for u in g.adj[v] if f[u] >= 0 and complete(u)):
                    go(i + 1)
            f[v] = -1

    go(0)
    return found


def random_lift(h: Graph, k: int, rng: random.Random) -> Graph:
    """A random k-fold cover of h (permutation voltages), vertices relabelled randomly."""
    perm = list(range(h.n * k))
    rng.shuffle(perm)
    es = set()
    for u, v in h.edges:
        sigma = list(range(k))
        rng.shuffle(sigma)
        for i in range(k):
            a, b = perm[u * k + i], perm[v * k + sigma[i]]
            es.add((min(a, b), max(a, b)))
    return Graph.from_edges(h.n * k, sorted(es))


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


@pytest.fixture(scope="session")
def catalog():
    from artifact.gadgets import load_catalog
    return load_catalog()
