import itertools

import pytest
from hypothesis import given, settings, strategies as st

from artifact.graph import GraphError
from artifact.sat24 import (SAMPLE_FORMULA, Formula24, brute_force_sat, count_models, formula_to_json, generate_instances,
                            parse_formula, satisfies, serialize_formula, validate_formula)
from conftest import unsat_fixture


def test_worked_example_is_valid_and_satisfiable():
    assert not validate_formula(SAMPLE_FORMULA)
    sol = brute_force_sat(SAMPLE_FORMULA)
    assert sol is not None and satisfies(SAMPLE_FORMULA, sol)


def test_unsat_fixture():
    f = unsat_fixture()
    assert not validate_formula(f)
    assert brute_force_sat(f) is None
    assert count_models(f) == 0


def test_validation_messages():
    assert validate_formula(Formula24.make(3, [(0, 1, 2)]))
    assert validate_formula(Formula24.make(4, [(0, 1, 1, 2)]))
    assert validate_formula(Formula24.make(4, [(0, 1, 2, 9)]))


def test_nonplanar_incidence_is_rejected():
    # K3,3-like: three clauses each containing the same three variables
    f = Formula24.make(6, [(0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 2, 5)])
    assert any("not planar" in m for m in validate_formula(f))


def test_formats_roundtrip():
    assert parse_formula(serialize_formula(SAMPLE_FORMULA)) == SAMPLE_FORMULA
    assert parse_formula(formula_to_json(SAMPLE_FORMULA)) == SAMPLE_FORMULA


@pytest.mark.parametrize("text", ["c 0 1 2 3\n", "p 24sat 4 2\nc 0 1 2 3\n", "p cnf 4 1\nc 0 1 2 3\n",
                                  "p 24sat 4 1\nc 0 x 2 3\n"])
def test_parse_errors(text):
    with pytest.raises(GraphError):
        parse_formula(text)


def test_generator_is_deterministic_and_mixed():
    a = generate_instances(3, 20)
    assert a == generate_instances(3, 20)
    assert all(not validate_formula(f) and 1 <= len(f.clauses) <= 5 for f in a)
    sat = [brute_force_sat(f) is not None for f in a]
    assert any(sat) and not all(sat)


@given(st.integers(1, 7), st.data())
@settings(max_examples=60, deadline=None)
def test_dfs_oracle_matches_enumeration(nv, data):
    nv = max(nv, 4)
    clauses = data.draw(st.lists(st.sampled_from(list(itertools.combinations(range(nv), 4))), min_size=1, max_size=4))
    f = Formula24.make(nv, clauses)
    sol = brute_force_sat(f)
    assert (sol is not None) == (count_models(f) > 0)
    if sol is not None:
        assert satisfies(f, sol)
