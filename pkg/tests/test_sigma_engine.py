import pytest
from hypothesis import assume, given, strategies as st

from sphere.patterns import enumerate_candidates
from sphere.root_engine import RootVector, Weight, root_system
from sphere.sigma_engine import (AmbiguousMaximum, attach_spherical_system, filter_candidate,
                                 hilbert_dimension)
from sphere.sphsys import validate_axioms
from sphere.weight_monoid import (NotFree, NotSaturated, WeightTuple, check_free, compute_sp, in_lattice,
                                  is_saturated)

import tangent_oracle as oracle


def wt(diagram, *weights):
    return WeightTuple(root_system(diagram), tuple(Weight(w) for w in weights))


def sigma_of(diagram, *weights):
    return set(attach_spherical_system(wt(diagram, *weights))[1].sigma)


def candidate(rs, vector):
    return next(c for c in enumerate_candidates(rs) if c.vector == tuple(vector))


@pytest.mark.parametrize("diagram,expected", [
    ("A1", {(2,)}),
    ("A2", {(2, 0), (0, 2), (1, 1)}),
    ("G2", {(1, 1), (4, 2), (2, 0), (0, 2)}),
])
def test_candidate_enumeration(diagram, expected):
    got = {c.vector for c in enumerate_candidates(root_system(diagram))}
    assert got == expected


def test_g2_candidates_include_both_special_patterns():
    tags = {c.vector: c.support_type for c in enumerate_candidates(root_system("G2"))}
    assert tags[(1, 1)] == "G2-short" and tags[(4, 2)] == "G2-doubled"


@pytest.mark.parametrize("diagram", ["A4", "B4", "C4", "D5", "F4", "G2", "E6", "A2xB3"])
def test_candidates_are_sums_of_a_simple_and_a_positive_root(diagram):
    rs = root_system(diagram)
    vectors = [c.vector for c in enumerate_candidates(rs)]
    assert len(vectors) == len(set(vectors))
    for g in vectors:
        assert sum(g) > 1                              # never simple
        ok = False
        for i in range(rs.rank):
            rest = tuple(x - (k == i) for k, x in enumerate(g))
            if rs.is_root(rest) or rest == tuple(rs.simple_root(i)):
                ok = True
        assert ok, g


def test_g2_filters_pass_short_root():
    t = wt("G2", (1, 0), (0, 1))
    out = filter_candidate(candidate(t.rs, (1, 1)), t, compute_sp(t))
    assert out.passed


def test_f4_pattern_excluded_by_rule_h():
    t = wt("F4", (0, 0, 0, 1), (0, 0, 1, 0))
    out = filter_candidate(candidate(t.rs, (1, 2, 3, 2)), t, compute_sp(t))
    assert "h" in out.failed_rules()


def test_b3_no_doubling_rule():
    t = wt("B3", (1, 0, 0))
    sp = compute_sp(t)
    assert filter_candidate(candidate(t.rs, (1, 1, 1)), t, sp).reason == "f"
    assert filter_candidate(candidate(t.rs, (2, 2, 2)), t, sp).passed


def test_g2_attached_system():
    r, sys = attach_spherical_system(wt("G2", (1, 0), (0, 1)))
    assert sys.sigma == ((1, 1),) and r.dimension == 1 and r.unique_maximal


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_b_n_first_fundamental_weight(n):
    w = tuple([1] + [0] * (n - 1))
    assert sigma_of(f"B{n}", w) == {tuple([2] * n)}
    assert hilbert_dimension(wt(f"B{n}", w)) == 1


def test_a1_doubled_weight():
    assert sigma_of("A1", (2,)) == {(2,)}


def test_errors():
    with pytest.raises(NotFree):
        attach_spherical_system(wt("A2", (1, 0), (2, 0)))
    with pytest.raises(NotSaturated):
        attach_spherical_system(wt("A2", (1, 1), (1, 0)))
    assert issubclass(AmbiguousMaximum, RuntimeError)


def test_trace_is_deterministic_and_complete():
    t = wt("C3", (0, 1, 0), (2, 0, 0))
    a, _ = attach_spherical_system(t)
    b, _ = attach_spherical_system(t)
    assert a.trace_json() == b.trace_json()
    assert len(a.trace) == len(enumerate_candidates(t.rs))
    assert all([r for r, _, _ in o.checks] == list("abcdefgh") for o in a.trace)


# -- tangent space oracle --------------------------------------------------

def _epsilon_to_roots(eps):
    """Type A/B conversion: coefficient of alpha_j is the partial sum eps_1+...+eps_j."""
    out, acc = [], 0.0
    for e in eps:
        acc += e
        out.append(acc)
    return out


def _shift(top, weights):
    """Torus weights lambda - mu from the class weights mu."""
    return [[a - b for a, b in zip(top, w)] for w in weights]


def _as_root(values):
    r = [round(x) for x in values]
    assert max(abs(x - y) for x, y in zip(values, r)) < 1e-6
    return RootVector(r)


def _group_level(rs, weight, roots):
    """Keep weights fixed by the torus part of the stabilizer: lambda - mu in Z lambda."""
    t = WeightTuple(rs, (Weight(weight),))
    return {g for g in roots if in_lattice(t, rs.root_to_weight(g))}


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_oracle_sl2(k):
    ws = _shift([k], oracle.tangent_weights(*oracle.sl2_symmetric(k)))
    found = {_as_root([e / 2]) for (e,) in ws}
    rs = root_system("A1")
    if k >= 2:
        assert found == {(2,)}          # the Lie algebra sees 2 alpha for every k >= 2
    assert _group_level(rs, (k,), found) == sigma_of("A1", (k,))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_oracle_vector_representation_of_odd_orthogonal(n):
    ws = _shift([1] + [0] * (n - 1), oracle.tangent_weights(*oracle.so_odd(n)))
    found = {_as_root(_epsilon_to_roots(w)) for w in ws}
    weight = tuple([1] + [0] * (n - 1))
    assert _group_level(root_system(f"B{n}"), weight, found) == sigma_of(f"B{n}", weight)


def test_oracle_spin_representation():
    ws = _shift([0.5] * 3, oracle.tangent_weights(*oracle.spin7()))
    found = {_as_root(_epsilon_to_roots(w)) for w in ws}
    assert found == {(1, 2, 3)}
    assert _group_level(root_system("B3"), (0, 0, 1), found) == sigma_of("B3", (0, 0, 1))


@pytest.mark.parametrize("n", [3, 4])
def test_oracle_adjoint_representation(n):
    top = [1] + [0] * (n - 2) + [-1]
    ws = _shift(top, oracle.tangent_weights(*oracle.sl_adjoint(n)))
    found = {_as_root(_epsilon_to_roots(w)[:-1]) for w in ws}
    weight = tuple([1] + [0] * (n - 3) + [1])
    assert _group_level(root_system(f"A{n - 1}"), weight, found) == sigma_of(f"A{n - 1}", weight)


# -- properties ---------------------------------------------------------------

@st.composite
def saturated_tuples(draw):
    diagram = draw(st.sampled_from(["A2", "A3", "B2", "B3", "C3", "G2", "A1xA2", "D4"]))
    rs = root_system(diagram)
    s = draw(st.integers(1, rs.rank))
    ws = draw(st.lists(st.lists(st.integers(0, 2), min_size=rs.rank, max_size=rs.rank).filter(any),
                       min_size=s, max_size=s))
    t = wt(diagram, *ws)
    assume(check_free(t) and is_saturated(t))
    return t


@given(saturated_tuples())
def test_attached_system_properties(t):
    r, sys = attach_spherical_system(t)
    assert len(set(sys.sigma)) == len(sys.sigma) <= t.s
    assert all(sum(g) > 1 for g in sys.sigma)
    assert validate_axioms(sys).ok


@given(saturated_tuples(), st.randoms())
def test_attached_system_ignores_weight_order(t, rnd):
    ws = list(t.weights)
    rnd.shuffle(ws)
    a = attach_spherical_system(t)
    b = attach_spherical_system(WeightTuple(t.rs, tuple(ws)))
    assert a[1] == b[1] and [c.vector for c in a[0].sigma] == [c.vector for c in b[0].sigma]
