import json

import pytest

from artifact.arrangement import SegmentArrangement
from artifact.cover import Budget, CoverInputError, check_cover, is_dumbbell_coloring, solve_cover, solve_dumbbell
from artifact.gadgets import CatalogInconsistency, GadgetError, load_catalog
from artifact.graph import named, planarity_check
from artifact.reductions import (ReductionOutput, extract_assignment, extract_coloring, lift_assignment,
                                 lift_coloring, reduce_sat, reduce_segments, serialize_output, side_order)
from artifact.sat24 import SAMPLE_FORMULA, Formula24, satisfies
from conftest import unsat_fixture

TRIANGLE = SegmentArrangement.from_coords([(-20, 0, 20, 1), (-20, -20, 20, 20), (20, -21, -20, 22)])


def test_side_order_alternates_segments_with_opposite_rays():
    rays = side_order(TRIANGLE, 0, 1)
    assert [r[0] for r in rays] in ([0, 1, 0, 1], [1, 0, 1, 0])
    assert rays[0][1] == -rays[2][1] and rays[1][1] == -rays[3][1]


@pytest.mark.parametrize("target", ["K4plus", "K5minus"])
def test_segment_reduction_round_trip(target):
    out = reduce_segments(TRIANGLE, target)
    cat = load_catalog()
    per = cat[f"{target.lower()}-crossing"].meta["vertices_per_crossing"]
    assert out.graph.n == 3 * per
    assert planarity_check(out.graph).planar
    coloring = {"0": 1, "1": 2, "2": 3}
    f = lift_coloring(out, coloring)
    assert check_cover(out.graph, named(target), f)
    assert extract_coloring(out, f) == coloring
    r = solve_cover(out.graph, named(target))
    assert r.status == "yes"
    got = extract_coloring(out, r.witness)
    assert all(got[s] != got[t] for s, t in out.provenance["edges"])


def test_lift_rejects_bad_colorings():
    out = reduce_segments(TRIANGLE, "K4plus")
    with pytest.raises(CoverInputError):
        lift_coloring(out, {"0": 1, "1": 1, "2": 3})
    with pytest.raises(CoverInputError):
        lift_coloring(out, {"0": 0, "1": 1, "2": 3})
    with pytest.raises(CoverInputError):
        lift_coloring(out, {"0": 1, "1": 2})


def test_extract_rejects_non_covers():
    out = reduce_segments(TRIANGLE, "K4plus")
    with pytest.raises(CoverInputError):
        extract_coloring(out, [0] * out.graph.n)


def test_isolated_segment_warns_and_gets_a_color():
    a = SegmentArrangement.from_coords([(-20, 0, 20, 1), (-20, -20, 20, 20), (30, 30, 31, 35)])
    out = reduce_segments(a, "K4plus")
    assert any("2" in w for w in out.provenance["warnings"])
    f = solve_cover(out.graph, named("K4plus")).witness
    assert set(extract_coloring(out, f)) == {"0", "1", "2"}


def test_missing_gadget_is_a_hard_error():
    with pytest.raises(GadgetError):
        reduce_segments(TRIANGLE, "K4plus", catalog={})
    with pytest.raises(CoverInputError):
        reduce_segments(TRIANGLE, "K7")


def test_broken_catalog_is_detected():
    cat = load_catalog()
    g = cat["k4plus-crossing"]
    broken = dict(cat)
    broken[g.name] = type(g)(g.name, g.host, g.role, g.body, g.boundary[::-1], g.contract, g.source, g.meta)
    with pytest.raises(CatalogInconsistency):
        reduce_segments(TRIANGLE, "K4plus", catalog=broken)


def test_provenance_serializes():
    out = reduce_segments(TRIANGLE, "K5minus")
    back = ReductionOutput.from_json(json.loads(out.dumps()))
    assert back == out
    gtext, ptext = serialize_output(out)
    assert json.loads(ptext)["host"] == "K5minus"


def test_sat_reduction_round_trip():
    out = reduce_sat(SAMPLE_FORMULA)
    g = out.graph
    assert all(g.degree(v) == 3 for v in range(g.n))
    r = solve_dumbbell(g)
    assert r.status == "yes"
    vals = extract_assignment(out, r.witness)
    assert satisfies(SAMPLE_FORMULA, vals)
    col = lift_assignment(out, [True, True, True, False, False, False])
    assert is_dumbbell_coloring(g, col)
    assert extract_assignment(out, col) == [True, True, True, False, False, False]


def test_sat_reduction_rejects_non_models():
    out = reduce_sat(SAMPLE_FORMULA)
    with pytest.raises(CoverInputError):
        lift_assignment(out, [True] * 6)
    with pytest.raises(CoverInputError):
        lift_assignment(out, [True] * 5)


def test_unused_variable_is_omitted_with_warning():
    f = Formula24.make(5, [(0, 1, 2, 3)])
    out = reduce_sat(f)
    assert out.provenance["warnings"]
    col = solve_dumbbell(out.graph).witness
    vals = extract_assignment(out, col)
    assert len(vals) == 5 and satisfies(f, vals)


def test_unsat_fixture_has_no_dumbbell_cover():
    out = reduce_sat(unsat_fixture())
    assert solve_dumbbell(out.graph, Budget(secs=120)).status == "no"


def test_invalid_formula_is_rejected():
    with pytest.raises(CoverInputError):
        reduce_sat(Formula24.make(3, [(0, 1, 2)]))
