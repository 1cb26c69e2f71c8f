import json

import pytest

from artifact.cover import BLACK, WHITE, Budget
from artifact.gadgets import (DUMBBELL, Gadget, GadgetContract, GadgetError, assemble, canonical,
                              enumerate_boundary_behaviors, gadget_from_json, gadget_to_json, load_catalog, orbit,
                              save_gadget, synthesize_gadget, validate_gadget, variable_gadget, verify_contract)
from artifact.graph import Graph, named


def test_catalog_entries_are_structurally_valid(catalog):
    assert len(catalog) >= 12
    for g in catalog.values():
        assert not validate_gadget(g), g.name


@pytest.mark.parametrize("name", sorted(load_catalog()))
def test_catalog_entry_verifies(catalog, name):
    rep = verify_contract(catalog[name], budget=Budget(secs=60))
    assert rep.status == "ok" and rep.passed, "\n".join(rep.lines())


def test_k6_auxiliary_is_unique_up_to_host_symmetry(catalog):
    g = catalog["k6-auxiliary"]
    found = enumerate_boundary_behaviors(g)
    assert len(found) == 720 and set(found.values()) == {1}
    assert len({canonical(b, "K6") for b in found}) == 1


def test_clause_behaviors_are_the_two_black_patterns(catalog):
    found = enumerate_boundary_behaviors(catalog["dumbbell-clause"])
    assert sorted(found) == sorted(b for b in __import__("itertools").product((BLACK, WHITE), repeat=4)
                                   if sum(c == BLACK for c in b) == 2)


def test_tampered_contract_is_caught(catalog):
    g = catalog["k4plus-crossing"]
    fewer = GadgetContract(frozenset(sorted(g.contract.behaviors)[1:]), g.contract.rigid, g.contract.properties)
    rep = verify_contract(g, fewer)
    assert not rep.passed and rep.extra


def test_rigidity_violation_is_reported():
    g = Gadget("q3", DUMBBELL, "basic_block", named("Q3"), (), GadgetContract(frozenset({()}), rigid=True))
    rep = verify_contract(g)
    assert not rep.passed and rep.rigidity


def test_contract_must_be_closed_under_host_symmetry():
    with pytest.raises(GadgetError):
        GadgetContract.from_behaviors("K4", [((0, (1,)),)])
    b = ((0, (1,)),)
    assert GadgetContract.from_behaviors("K4", orbit(b, "K4")).behaviors == {canonical(b, "K4")}


def test_json_roundtrip_and_save(tmp_path, catalog):
    g = catalog["dumbbell-tap"]
    assert gadget_from_json(json.loads(json.dumps(gadget_to_json(g)))) == g
    save_gadget(g, tmp_path)
    assert load_catalog(tmp_path)["dumbbell-tap"] == g
    with pytest.raises(GadgetError):
        gadget_from_json({"name": "x"})
    with pytest.raises(GadgetError):
        load_catalog(tmp_path / "missing")


def test_validate_flags_degree_and_boundary_problems():
    g = Gadget("bad", "K4", "auxiliary", named("C4"), ((0, 1), (0, 1)), GadgetContract(frozenset()))
    assert any("twice" in m for m in validate_gadget(g))
    g = Gadget("bad", "K4", "auxiliary", named("C4"), ((0, 1),), GadgetContract(frozenset()))
    assert any("matches no host degree" in m for m in validate_gadget(g))


def test_assemble_checks_residuals(catalog):
    face = catalog["dumbbell-cube-face"]
    a = assemble([face, face], [[[0, i], [1, i]] for i in range(4)], [])
    assert a.body == Graph.from_edges(8, a.body.edges) and a.body.m == 12
    with pytest.raises(GadgetError):
        assemble([face, face], [[[0, 0], [1, 0]]], [])
    with pytest.raises(GadgetError):
        assemble([face], [[[0, 0], [0, 0]]], [])


def test_variable_gadget_is_monochrome():
    for k in (1, 2, 3):
        g = variable_gadget(k)
        assert set(enumerate_boundary_behaviors(g)) == {(BLACK,) * k, (WHITE,) * k}
        assert g.body.n == 7 * k


def test_synthesis_finds_a_four_cycle_face(catalog):
    face = catalog["dumbbell-cube-face"]
    res = synthesize_gadget(face.contract, DUMBBELL, 4, max_vertices=4)
    assert res.exhausted and res.gadgets
    assert res.gadgets[0].body.m == 4


def test_synthesis_limits():
    contract = load_catalog()["k4plus-crossing"].contract
    with pytest.raises(GadgetError):
        synthesize_gadget(contract, "K4plus", 8, max_vertices=9)   # beyond the atlas
    with pytest.raises(GadgetError):
        synthesize_gadget(contract, "K4plus", 8, max_vertices=6)   # irregular host


def test_synthesis_exhausts_without_a_match():
    contract = GadgetContract(frozenset({((0, (1, 2)), (0, (1, 2)))}))
    res = synthesize_gadget(contract, "K3", 2, max_vertices=4)
    assert res.exhausted and not res.gadgets
