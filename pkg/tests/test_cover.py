import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from artifact.cover import (Budget, CoverInputError, check_cover, enumerate_covers, is_dumbbell_coloring,
                            parse_coloring, parse_map, precheck_cover, serialize_coloring, serialize_map,
                            solve_cover, solve_dumbbell, swap_colors)
from artifact.graph import Graph, named
from conftest import naive_covers, random_lift


def naive_dumbbell(g):
    for col in itertools.product((0, 1), repeat=g.n):
        if all(g.degree(v) == 3 and sum(col[u] == col[v] for u in g.adj[v]) == 2 for v in range(g.n)):
            return list(col)
    return None


def test_check_cover_accepts_identity_and_names_failures():
    k4 = named("K4")
    assert check_cover(k4, k4, [0, 1, 2, 3])
    bad = check_cover(named("C6"), named("C3"), [0, 1, 2, 0, 1, 1])
    assert not bad and bad.reason


def test_check_cover_input_errors():
    with pytest.raises(CoverInputError):
        check_cover(named("K3"), named("K3"), [0, 1])
    with pytest.raises(CoverInputError):
        check_cover(named("K3"), named("K3"), [0, 1, 7])


def test_precheck_rejects_degree_mismatch():
    assert not precheck_cover(named("C4"), named("K2"))
    assert not precheck_cover(named("C5"), named("C3"))
    assert precheck_cover(named("C6"), named("C3"))


@pytest.mark.parametrize("g, h, count", [
    ("C6", "C3", 6),
    ("Q3", "K4", 24),
    ("K4", "K4", 24),
    ("C4", "K2", 0),
    ("K3,3", "K4", 0),
    ("icosahedron", "K6", 720),
])
def test_cover_counts_match_oracle(g, h, count):
    en = enumerate_covers(named(g), named(h))
    assert len(en.covers) == count
    assert all(check_cover(named(g), named(h), f) for f in en.covers)
    if named(g).n <= 8:
        assert sorted(map(tuple, en.covers)) == sorted(map(tuple, naive_covers(named(g), named(h))))


def test_enumeration_limit_truncates():
    en = enumerate_covers(named("Q3"), named("K4"), limit=5)
    assert len(en.covers) == 5 and en.truncated


def test_budget_is_reported_not_conflated():
    r = solve_cover(named("icosahedron"), named("K6"), Budget(nodes=1))
    assert r.status == "budget"
    r = solve_cover(named("K3,3"), named("K4"), Budget(nodes=1))
    assert r.status == "no"      # settled by the precheck, no search needed


def test_first_order_hint_does_not_change_answer():
    r = solve_cover(named("Q3"), named("K4"), first=[7, 6])
    assert r.status == "yes" and check_cover(named("Q3"), named("K4"), r.witness)


@pytest.mark.parametrize("name, expect", [("prism", True), ("K4", False), ("K3,3", False), ("Q3", True)])
def test_dumbbell_small_facts(name, expect):
    g = named(name)
    r = solve_dumbbell(g)
    assert (r.status == "yes") == expect == (naive_dumbbell(g) is not None)
    if expect:
        assert is_dumbbell_coloring(g, r.witness)
        assert is_dumbbell_coloring(g, swap_colors(r.witness))


def test_dumbbell_rejects_non_cubic():
    assert solve_dumbbell(named("C6")).status == "no"


def test_witness_formats_roundtrip():
    f = [0, 2, 1, 3]
    assert parse_map(serialize_map(f)) == f
    assert parse_map('{"map": [0, 2, 1, 3]}') == f
    assert parse_coloring(serialize_coloring([0, 1, 1])) == [0, 1, 1]
    with pytest.raises(CoverInputError):
        parse_coloring("c 0 2\n")
    with pytest.raises(CoverInputError):
        parse_map("m 0 1\nm 0 2\n")
    with pytest.raises(CoverInputError):
        parse_map("m 1 1\n")


@given(st.sampled_from(["K2", "K3", "K4", "C4", "K4plus", "K5minus"]), st.integers(1, 3), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_random_lifts_are_found(hname, k, seed):
    h = named(hname)
    g = random_lift(h, k, random.Random(seed))
    r = solve_cover(g, h)
    assert r.status == "yes"
    assert check_cover(g, h, r.witness)


@given(st.integers(2, 8), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_solver_matches_naive_on_random_graphs(n, seed):
    rng = random.Random(seed)
    g = Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.5])
    for h in ("K2", "K3", "C4"):
        assert (solve_cover(g, named(h)).status == "yes") == bool(naive_covers(g, named(h), limit=1))
