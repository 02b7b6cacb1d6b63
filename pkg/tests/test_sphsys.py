import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sphere.patterns import enumerate_candidates
from sphere.root_engine import Weight, root_system
from sphere.sphsys import (SphericalSystem, build_colours, check_gamma_compat, check_no_doubling,
                           colour_of_node, validate_axioms)
from sphere.weight_monoid import WeightTuple


def system(diagram, sp, sigma):
    return SphericalSystem(root_system(diagram), frozenset(a - 1 for a in sp), tuple(map(tuple, sigma)))


def a3a3_sigma():
    return [tuple(int(k in (i, i + 3)) for k in range(6)) for i in range(3)]


def test_a3xa3_pairs_pass():
    assert validate_axioms(system("A3xA3", [], a3a3_sigma())).ok


def test_simple_root_in_sigma_fails():
    rep = validate_axioms(system("A2", [], [(1, 0)]))
    assert rep.failed_axioms() == ["sigma_cap_S"]


def test_b2_axioms():
    assert validate_axioms(system("B2", [], [(2, 0), (0, 2)])).ok
    # a1+a2 in B2 is not an orthogonal pair; it passes only as a chain root
    rep = validate_axioms(system("B2", [], [(2, 0), (1, 1)]))
    assert not rep.ok


def test_sigma1_violation_reports_value():
    rep = validate_axioms(system("A3", [], [(2, 0, 0), (0, 1, 1)]))
    assert rep.failures["Sigma1"]


def test_colours_b2():
    cols = build_colours(system("B2", [], [(2, 0), (0, 2)]))
    assert [(c.kind, tuple(c.sigma_weight)) for c in cols] == [("a'", (2, 0)), ("a'", (0, 2))]
    # rho(D_a) = 1/2 <a^vee, .> on (2a1, 2a2); a1 is the long root
    assert cols[0].rho == (2, -1)
    assert cols[1].rho == (-2, 2)


def test_colours_a3xa3():
    sys = system("A3xA3", [], a3a3_sigma())
    cols = build_colours(sys)
    assert [c.id for c in cols] == ["D1,4", "D2,5", "D3,6"]
    assert all(c.kind == "b" for c in cols)
    assert tuple(cols[0].sigma_weight) == (1, 0, 0, 1, 0, 0)


def test_colours_a2_single_node():
    cols = build_colours(system("A2", [2], []))
    assert len(cols) == 1 and tuple(cols[0].sigma_weight) == (1, 0)
    assert colour_of_node(cols, 1) is None


def wt(diagram, *weights):
    return WeightTuple(root_system(diagram), tuple(Weight(w) for w in weights))


def test_gamma_compat():
    b2 = system("B2", [], [(2, 0), (0, 2)])
    assert check_gamma_compat(b2, wt("B2", (2, 0), (0, 2))).ok
    # a single weight D1 + D2 satisfies the colour conditions, but Sigma leaves Z Gamma
    r = check_gamma_compat(b2, wt("B2", (2, 2)))
    assert r.coefficients == [[1, 1]]
    assert r.reasons == ["2a1 is not in Z Gamma", "2a2 is not in Z Gamma"]
    a3 = system("A3xA3", [], a3a3_sigma())
    r = check_gamma_compat(a3, wt("A3xA3", (1, 0, 0, 1, 0, 0), (0, 1, 0, 0, 1, 0)))
    assert not r.ok and any("D3,6" in x for x in r.reasons)


def test_no_doubling():
    assert not check_no_doubling(system("B3", [3], [(1, 1, 1)]))[0]
    assert check_no_doubling(system("B3", [], [(1, 1, 1)]))[0]
    assert check_no_doubling(system("A3", [], [(1, 1, 1)]))[0]


def test_json_round_trip():
    sys = system("B3xA2", [2], [(0, 0, 0, 1, 1), (2, 2, 2, 0, 0)])
    assert SphericalSystem.from_json(sys.to_json()) == sys
    assert sys.sigma[0] == (2, 2, 2, 0, 0)            # canonical order


def _axiom_systems(diagram, max_size=3):
    rs = root_system(diagram)
    cands = [c.vector for c in enumerate_candidates(rs)]
    for k in range(max_size + 1):
        for sigma in itertools.combinations(cands, k):
            for r in range(rs.rank + 1):
                for sp in itertools.combinations(range(rs.rank), r):
                    sys = SphericalSystem(rs, frozenset(sp), sigma)
                    if validate_axioms(sys).ok:
                        yield sys


@pytest.mark.parametrize("diagram", ["A3", "B3", "C3", "G2", "A1xA2"])
def test_colour_invariants_exhaustive(diagram):
    count = 0
    for sys in _axiom_systems(diagram):
        count += 1
        cols = build_colours(sys)
        weights = [tuple(c.sigma_weight) for c in cols]
        assert len(set(weights)) == len(weights)
        for c in cols:
            if c.kind == "b":
                assert all(x.denominator == 1 for x in c.rho)
            else:
                for g, v in zip(sys.sigma, c.rho):
                    if g != tuple(2 * (k == c.nodes[0]) for k in range(sys.rs.rank)):
                        assert v.denominator == 1 and v <= 0
    assert count > 0


@given(st.sampled_from(["A3", "B3", "C3"]), st.data())
def test_pairwise_failures_are_inherited_by_supersets(diagram, data):
    rs = root_system(diagram)
    cands = [c.vector for c in enumerate_candidates(rs)]
    sigma = data.draw(st.lists(st.sampled_from(cands), min_size=1, max_size=3, unique=True))
    extra = data.draw(st.sampled_from(cands))
    rep = validate_axioms(SphericalSystem(rs, frozenset(), tuple(sigma)))
    bigger = validate_axioms(SphericalSystem(rs, frozenset(), tuple(set(sigma) | {extra})))
    for ax in ("Sigma1", "Sigma2", "independent"):
        if rep.failures[ax]:
            assert bigger.failures[ax]


def test_json_input_on_c2_is_renumbered():
    # C2 node 1 is short, which is node 2 of B2
    sys = SphericalSystem.from_json({"diagram": "C2", "sp": [1], "sigma": [[0, 2]]})
    assert sys.sp == {1} and sys.sigma == ((2, 0),)
