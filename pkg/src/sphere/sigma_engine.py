"""The set Sigma of tangent weights attached to a free saturated monoid.

Candidates come from the rank-one table, are pruned by necessary conditions,
and the answer is the unique maximal admissible subset of the survivors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import lattice
from .patterns import CandidateRoot, enumerate_candidates, format_root
from .root_engine import RootSystem, sub
from .sphsys import (SphericalSystem, check_no_doubling, colour_conditions_for_root,
                     doubled_node, orthogonal_pair, s_axiom_problems, validate_axioms,
                     check_gamma_compat)
from .weight_monoid import NotFree, NotSaturated, WeightTuple, check_free, compute_sp, in_lattice, is_saturated

FILTERS = ("a", "b", "c", "d", "e", "f", "g", "h")


class AmbiguousMaximum(RuntimeError):
    def __init__(self, maxima: list[tuple[CandidateRoot, ...]]):
        self.maxima = maxima
        sets = ["{" + ", ".join(c.label() for c in m) + "}" for m in maxima]
        super().__init__("several maximal admissible sets: " + "; ".join(sets))


@dataclass(frozen=True)
class FilterOutcome:
    candidate: CandidateRoot
    checks: tuple[tuple[str, bool, str], ...]     # (rule, passed, detail)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    @property
    def reason(self) -> Optional[str]:
        """First failing rule."""
        return next((r for r, ok, _ in self.checks if not ok), None)

    def failed_rules(self) -> list[str]:
        return [r for r, ok, _ in self.checks if not ok]


@dataclass
class SigmaResult:
    sigma: tuple[CandidateRoot, ...]
    unique_maximal: bool
    trace: list[FilterOutcome]
    pool: tuple[CandidateRoot, ...] = ()
    notes: list[str] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.sigma)

    def trace_json(self) -> list[dict]:
        return [{
            "root": list(o.candidate.vector),
            "label": o.candidate.label(),
            "type": o.candidate.support_type,
            "rules": [{"rule": r, "pass": ok, **({"detail": d} if d else {})} for r, ok, d in o.checks],
            "pass": o.passed,
        } for o in self.trace]


def _component_restriction(rs: RootSystem, t: WeightTuple, nodes) -> list[tuple[int, ...]]:
    comp = rs.diagram.component_of(nodes[0])
    cn = list(rs.diagram.component_nodes(comp))
    out = [tuple(lam[k] for k in cn) for lam in t.weights]
    return [w for w in out if any(w)]


def filter_candidate(c: CandidateRoot, t: WeightTuple, sp: frozenset[int]) -> FilterOutcome:
    """Evaluate every necessary condition and record each outcome."""
    rs = t.rs
    g = c.vector
    lams = t.weights
    checks: list[tuple[str, bool, str]] = []

    ok = in_lattice(t, rs.root_to_weight(g))
    checks.append(("a", ok, "" if ok else "not in Z Gamma"))

    detail = []
    for d in (i for i, x in enumerate(g) if x):
        if rs.is_root(sub(g, rs.simple_root(d))):
            continue
        ip = rs.inner_product(g, rs.simple_root(d))
        if ip < 0:
            detail.append(f"(gamma, a{d + 1}) < 0")
        elif ip == 0 and any(lam[d] for lam in lams):
            detail.append(f"a{d + 1} orthogonal to gamma but not to Gamma")
    checks.append(("b", not detail, "; ".join(detail)))

    a = doubled_node(g)
    if a is not None:
        touching = [j for j, lam in enumerate(lams) if lam[a]]
        ok = len(touching) == 1 and lams[touching[0]][a] % 2 == 0
        checks.append(("c", ok, "" if ok else f"needs one weight with even coordinate at a{a + 1}"))
    else:
        checks.append(("c", True, ""))

    pr = orthogonal_pair(rs, g)
    if pr is not None:
        x, y = pr
        both = [j for j, lam in enumerate(lams) if lam[x] and lam[y]]
        ok = (len(both) == 1 and lams[both[0]][x] == lams[both[0]][y]
              and all(lam[x] == lam[y] == 0 for j, lam in enumerate(lams) if j != both[0]))
        checks.append(("d", ok, "" if ok else f"pair a{x + 1}, a{y + 1} not carried by a single weight"))
    else:
        checks.append(("d", True, ""))

    probs = s_axiom_problems(rs, sp, c)
    checks.append(("e", not probs, "; ".join(probs)))

    bad = c.support_type == "B_n" and c.nodes[-1] in sp
    checks.append(("f", not bad, f"short end a{c.nodes[-1] + 1} in S^p" if bad else ""))

    if c.support_type == "G2-short":
        rest = sorted(_component_restriction(rs, t, c.nodes))
        ok = rest == [(0, 1), (1, 0)]
        checks.append(("g", ok, "" if ok else "restricted weights are not (w1, w2)"))
    else:
        checks.append(("g", True, ""))

    if c.support_type == "F4":
        rest = _component_restriction(rs, t, c.nodes)
        hit = (len(rest) == 2 and (0, 0, 0, 1) in rest
               and any(w[:2] == (0, 0) and w[2] > 0 and w[3] == 0 for w in rest))
        checks.append(("h", not hit, "restricted weights are (w4, a w3)" if hit else ""))
    else:
        checks.append(("h", True, ""))
    return FilterOutcome(c, tuple(checks))


def _compatible(rs: RootSystem, c1: CandidateRoot, c2: CandidateRoot) -> bool:
    """Pairwise axioms Sigma1 and Sigma2."""
    for g, h in ((c1.vector, c2.vector), (c2.vector, c1.vector)):
        a = doubled_node(g)
        if a is not None:
            v = rs.pairing(h, a)
            if v % 2 or v > 0:
                return False
        pr = orthogonal_pair(rs, g)
        if pr is not None and rs.pairing(h, pr[0]) != rs.pairing(h, pr[1]):
            return False
    return True


def _maximal_cliques(adj: list[set[int]]) -> list[frozenset[int]]:
    out: list[frozenset[int]] = []

    def bk(r: set[int], p: set[int], x: set[int]):
        if not p and not x:
            out.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            bk(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    bk(set(), set(range(len(adj))), set())
    return out


def _maximal_independent_subsets(vectors, idx: list[int]) -> list[frozenset[int]]:
    """Bases of the matroid on idx; all have the same size."""
    r = lattice.rank([vectors[i] for i in idx]) if idx else 0
    out = []

    def rec(start: int, chosen: list[int]):
        if len(chosen) == r:
            out.append(frozenset(chosen))
            return
        for k in range(start, len(idx)):
            trial = chosen + [idx[k]]
            if lattice.rank([vectors[i] for i in trial]) == len(trial):
                rec(k + 1, trial)

    rec(0, [])
    return out


def maximal_admissible(rs: RootSystem, pool: list[CandidateRoot]) -> list[tuple[CandidateRoot, ...]]:
    """All inclusion-maximal subsets that are pairwise compatible and independent.

    Admissibility is downward closed: pairwise axioms are checked on the
    compatibility graph, independence inside each maximal clique.
    """
    k = len(pool)
    adj = [set() for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if _compatible(rs, pool[i], pool[j]):
                adj[i].add(j)
                adj[j].add(i)
    vecs = [c.vector for c in pool]
    admissible: set[frozenset[int]] = set()
    for clique in _maximal_cliques(adj):
        admissible.update(_maximal_independent_subsets(vecs, sorted(clique)))
    maxima = [s for s in admissible if not any(s < o for o in admissible)]
    maxima.sort(key=lambda s: sorted(s))
    return [tuple(pool[i] for i in sorted(s)) for s in maxima]


def attach_spherical_system(t: WeightTuple) -> tuple[SigmaResult, SphericalSystem]:
    if not check_free(t):
        raise NotFree("weights are linearly dependent")
    sat = is_saturated(t)
    if not sat:
        raise NotSaturated(sat.offending)
    rs = t.rs
    sp = compute_sp(t)
    trace = [filter_candidate(c, t, sp) for c in enumerate_candidates(rs)]
    pool = []
    notes = []
    for o in trace:
        if not o.passed:
            continue
        probs = colour_conditions_for_root(rs, t, o.candidate.vector)
        if probs:
            notes.append(f"{o.candidate.label()} dropped by colour conditions: " + "; ".join(probs))
            continue
        pool.append(o.candidate)
    maxima = maximal_admissible(rs, pool)
    if len(maxima) > 1:
        raise AmbiguousMaximum(maxima)
    chosen = maxima[0] if maxima else ()
    system = SphericalSystem(rs, sp, tuple(c.vector for c in chosen))
    order = {g: i for i, g in enumerate(system.sigma)}
    chosen = tuple(sorted(chosen, key=lambda c: order[c.vector]))
    # postconditions of the maximality characterization
    rep = validate_axioms(system)
    if not rep.ok:
        raise AssertionError(f"attached system violates axioms: {rep.failures}")
    nd, _ = check_no_doubling(system)
    compat = check_gamma_compat(system, t)
    if not nd or not compat.ok:
        raise AssertionError("attached system violates no-doubling or Gamma conditions: "
                             + "; ".join(compat.reasons))
    return SigmaResult(chosen, True, trace, tuple(pool), notes), system


def hilbert_dimension(t: WeightTuple) -> int:
    return attach_spherical_system(t)[0].dimension
