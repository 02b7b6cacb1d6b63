import itertools
import json
from collections import Counter

import pytest

from sphere import catalog
from sphere.catalog import (CatalogError, EXTERNAL_LOW_RANK, canonical_key, evaluate, instantiate,
                            match, parameter_grid, reductive_dimension_check, relabel)
from sphere.decomp import is_cuspidal
from sphere.root_engine import root_system
from sphere.sphsys import SphericalSystem, build_colours, validate_axioms


def minimal(entry_id):
    e = catalog.get(entry_id)
    return instantiate(e, e.minimal_params())


def test_entry_counts():
    ids = [e.id for e in catalog.entries()]
    assert len(ids) == len(set(ids)) == 40
    assert Counter(e.family for e in catalog.entries()) == {"A": 6, "B": 7, "C": 7, "D": 8, "E": 9, "F": 3}
    assert catalog.catalog_version() == 1


def test_a2_instance():
    inst = instantiate("A.2", {"n1": 3})
    assert str(inst.system.rs.diagram) == "A3xA3"
    assert inst.system.sp == frozenset()
    assert set(inst.system.sigma) == {(1, 0, 0, 1, 0, 0), (0, 1, 0, 0, 1, 0), (0, 0, 1, 0, 0, 1)}
    assert inst.subgroup["K"] == "N(SL_{n1+1})"


def test_d6_instance():
    inst = minimal("D.6")
    assert str(inst.system.rs.diagram) == "D4"
    assert set(inst.system.sigma) == {(1, 1, 1, 0), (0, 1, 1, 1), (1, 1, 0, 1)}
    assert inst.subgroup["K"] == "N(G_2)"
    assert inst.entry.normalizations         # S^p = {a2} is a logged normalization


def test_f2_instance():
    inst = minimal("F.2")
    assert str(inst.system.rs.diagram) == "F4"
    assert set(inst.system.sigma) == {(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2)}
    assert inst.subgroup["K"] == "Sp_6×SL_2"


def test_instantiate_rejects_bad_parameters():
    with pytest.raises(CatalogError):
        instantiate("A.2", {"n1": 2})
    with pytest.raises(CatalogError):
        instantiate("A.2", {"n1": 3, "q": 1})
    with pytest.raises(KeyError):
        catalog.get("Z.1")


@pytest.mark.parametrize("entry_id,fragment", [
    ("C.2", "N(Sp_{2n1})"), ("D.6", "alpha_2"), ("C.5", ""), ("A.3", ""), ("A.4", ""),
])
def test_normalizations_are_recorded(entry_id, fragment):
    notes = catalog.get(entry_id).normalizations
    assert notes and any(fragment in n for n in notes)


def test_match_examples():
    m = match(minimal("A.2").system)
    assert m and m.entry_id == "A.2" and m.params == {"n1": 3, "n2": 3}
    b2 = SphericalSystem(root_system("B2"), frozenset(), ((2, 0), (0, 2)))
    assert not match(b2) and match(b2).reason == EXTERNAL_LOW_RANK
    g = SphericalSystem(root_system("G2xA1"), frozenset(), ((2, 0, 0), (0, 2, 0), (0, 0, 2)))
    assert validate_axioms(g).ok
    r = match(g)
    assert not r and "type G" in r.reason


def test_match_is_invariant_under_diagram_automorphisms():
    inst = minimal("D.6")
    for perm in catalog.automorphisms(inst.system.rs):
        m = match(relabel(inst.system, perm))
        assert m and m.entry_id == "D.6"


def _all_instances(max_rank=10):
    for e in catalog.entries():
        for params in parameter_grid(e, max_rank):
            yield instantiate(e, params)


def test_every_instance_is_a_cuspidal_system():
    n = 0
    for inst in _all_instances(8):
        n += 1
        assert validate_axioms(inst.system).ok, inst.entry.id
        assert is_cuspidal(inst.system), inst.entry.id
        build_colours(inst.system)
    assert n > 100


def test_injectivity_and_match_round_trip():
    seen = {}
    for inst in _all_instances(10):
        key = canonical_key(inst.system)
        assert key not in seen, (inst.entry.id, inst.params, seen.get(key))
        seen[key] = (inst.entry.id, inst.params)
        m = match(inst.system)
        assert m and m.entry_id == inst.entry.id
        assert relabel(m.instance.system, m.relabeling) == inst.system or m.instance.system == inst.system


def test_reductive_dimension_counts():
    checked = 0
    for inst in _all_instances(8):
        res = reductive_dimension_check(inst)
        if res is None:
            continue
        got, want = res
        assert got == want, (inst.entry.id, inst.params)
        checked += 1
    assert checked > 50


def test_self_test_runs_every_entry():
    reps = catalog.self_test()
    assert {r.entry_id for r in reps} == {e.id for e in catalog.entries()}
    assert all(r.checks["axioms"] and r.checks["colours"] and r.checks["cuspidal"] for r in reps)
    for family in "AE":
        assert all(r.ok for r in reps if r.entry_id.startswith(family))


def test_expression_evaluator_is_restricted():
    assert evaluate("2*n+1", {"n": 3}) == 7
    assert evaluate("n % 2 == 0 and p < n", {"n": 4, "p": 2}) is True
    for bad in ["__import__('os')", "n.real", "[n]", "n ** 2", "m"]:
        with pytest.raises(CatalogError):
            evaluate(bad, {"n": 3})


def test_catalog_file_is_valid_json_with_stable_ids():
    from importlib import resources
    data = json.loads(resources.files("sphere").joinpath("data/catalog.json").read_text())
    assert data["version"] == 1
    assert [e["id"] for e in data["entries"]] == [e.id for e in catalog.entries()]
