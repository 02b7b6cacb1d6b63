"""Distinguished colours, quotients, and decomposition into primitive factors."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import catalog, lattice, lp
from .root_engine import RootSystem, RootVector, root_system, subdiagram_type
from .sphsys import Colour, SphericalSystem, build_colours, colour_of_node, validate_axioms


class NotASystem(ValueError):
    pass


class Unresolved(RuntimeError):
    def __init__(self, system: SphericalSystem, reason: str):
        super().__init__(f"unresolved factor {system.describe()}: {reason}")
        self.system = system
        self.reason = reason


def colours(sys: SphericalSystem) -> tuple[Colour, ...]:
    return build_colours(sys)


def _ids(sys: SphericalSystem, subset) -> tuple[int, ...]:
    """Colour indices from indices or colour ids such as "D1,4"."""
    cols = colours(sys)
    out = []
    for x in subset:
        if isinstance(x, int):
            if not 0 <= x < len(cols):
                raise IndexError(x)
            out.append(x)
        else:
            key = x.id if isinstance(x, Colour) else str(x)
            idx = next((k for k, c in enumerate(cols) if c.id == key), None)
            if idx is None:
                raise KeyError(key)
            out.append(idx)
    return tuple(sorted(set(out)))


def delta_of_node(sys: SphericalSystem, a: int) -> frozenset[int]:
    """Colours moved by a simple root (empty on S^p)."""
    cols = colours(sys)
    c = colour_of_node(cols, a)
    return frozenset() if c is None else frozenset({cols.index(c)})


def delta_of_nodes(sys: SphericalSystem, nodes) -> frozenset[int]:
    out: set[int] = set()
    for a in nodes:
        out |= delta_of_node(sys, a)
    return frozenset(out)


# -- distinguished subsets -----------------------------------------------------

@dataclass(frozen=True)
class DistinguishedSubset:
    colours: tuple[int, ...]
    certificate: tuple[Fraction, ...]
    sigma_of: frozenset[int]          # indices into sys.sigma


def _constraints(sys: SphericalSystem, idx: Sequence[int], strict: Optional[int] = None):
    """A x <= b for: c_D >= 1, sum c_D rho_D(gamma) >= 0, and >= 1 at gamma_strict."""
    cols = colours(sys)
    k = len(idx)
    A, b = [], []
    for j in range(k):
        row = [0] * k
        row[j] = -1
        A.append(row)
        b.append(-1)
    for g in range(sys.rank):
        A.append([-cols[d].rho[g] for d in idx])
        b.append(-1 if g == strict else 0)
    return A, b


def is_distinguished(sys: SphericalSystem, subset, method: str = "auto") -> Optional[DistinguishedSubset]:
    idx = _ids(sys, subset)
    if not idx:
        return DistinguishedSubset((), (), frozenset())
    A, b = _constraints(sys, idx)
    if not lp.feasible(A, b, method):
        return None
    point = lp.simplex_point(A, b)
    if point is None or not lp.satisfies(A, b, point):
        raise AssertionError("feasibility engines disagree")
    return DistinguishedSubset(idx, tuple(point), sigma_of(sys, idx))


def sigma_of(sys: SphericalSystem, subset, method: str = "auto") -> frozenset[int]:
    """Sigma(Delta'): roots on which some admissible phi is strictly positive."""
    idx = _ids(sys, subset)
    if not idx:
        return frozenset()
    return frozenset(g for g in range(sys.rank) if lp.feasible(*_constraints(sys, idx, g), method))


def sigma_of_single_lp(sys: SphericalSystem, subset) -> Optional[frozenset[int]]:
    """Same set from one LP maximizing the number of strict inequalities.

    Variables e_D = c_D - 1 >= 0 and 0 <= t_gamma <= 1 with phi(gamma) >= t_gamma;
    the optimum puts t = 1 exactly on Sigma(Delta').
    """
    idx = _ids(sys, subset)
    if not idx:
        return frozenset()
    cols = colours(sys)
    k, r = len(idx), sys.rank
    A, b = [], []
    for g in range(r):
        rho = [cols[d].rho[g] for d in idx]
        row = [-x for x in rho] + [0] * r
        A.append(row)                       # phi(gamma) >= 0
        b.append(sum(rho))
        row = [-x for x in rho] + [int(h == g) for h in range(r)]
        A.append(row)                       # phi(gamma) >= t_gamma
        b.append(sum(rho))
        row = [0] * (k + r)
        row[k + g] = 1
        A.append(row)
        b.append(1)
    status, value, x = lp.simplex_maximize([0] * k + [1] * r, A, b)
    if status != "optimal":
        return None
    return frozenset(g for g in range(r) if x[k + g] > 0)


# -- quotients -----------------------------------------------------------------

@dataclass(frozen=True)
class QuotientSystem:
    parent: SphericalSystem
    delta_prime: DistinguishedSubset
    xi_quotient: tuple[tuple[int, ...], ...]     # lattice basis, coordinates on parent Sigma
    hilbert: tuple[tuple[int, ...], ...]         # Sigma/Delta' in the same coordinates
    system: SphericalSystem

    @property
    def sp_quotient(self) -> frozenset[int]:
        return self.system.sp

    @property
    def sigma_quotient(self) -> tuple[RootVector, ...]:
        return self.system.sigma


def _extreme_rays(kernel: list[list[int]], r: int) -> list[list[int]]:
    """Primitive generators of the rays of the orthant meet the span of kernel."""
    if not kernel:
        return []
    rays = []
    for size in range(1, r + 1):
        for supp in itertools.combinations(range(r), size):
            if any(all(x == 0 or i in supp for i, x in enumerate(ray)) for ray in rays):
                continue
            # vectors of the span vanishing off supp
            cons = [[row[i] for row in kernel] for i in range(r) if i not in supp]
            null = lattice.nullspace(cons, len(kernel)) if cons else [[Fraction(int(i == j)) for j in range(len(kernel))] for i in range(len(kernel))]
            if len(null) != 1:
                continue
            v = [sum(Fraction(y) * row[i] for y, row in zip(null[0], kernel)) for i in range(r)]
            if any(v[i] == 0 for i in supp):
                continue
            if all(x <= 0 for x in v):
                v = [-x for x in v]
            if all(x >= 0 for x in v):
                rays.append(lattice.primitive(v))
    return rays


def hilbert_basis(kernel: list[list[int]], r: int) -> list[tuple[int, ...]]:
    """Indecomposable elements of the lattice (given by a basis) meet the orthant.

    In an orthant section the indecomposables are the coordinatewise-minimal
    nonzero points. Each lies in the parallelepiped of some simplicial subcone,
    so coordinates are bounded by the sum of the ray generators.
    """
    rays = _extreme_rays(kernel, r)
    if not rays:
        return []
    bound = [sum(ray[i] for ray in rays) for i in range(r)]
    hnf = lattice.hermite_rows(kernel)
    pivots = [next(j for j, x in enumerate(row) if x) for row in hnf]
    points = []

    def rec(j: int, y: list[int], partial: list[int]):
        if j == len(hnf):
            if any(partial) and all(0 <= partial[i] <= bound[i] for i in range(r)):
                points.append(tuple(partial))
            return
        p, lead = pivots[j], hnf[j][pivots[j]]
        # x[p] = partial[p] + y_j * lead must land in [0, bound[p]]
        for yj in range(-(partial[p] // lead), (bound[p] - partial[p]) // lead + 1):
            nxt = [partial[i] + yj * hnf[j][i] for i in range(r)]
            rec(j + 1, y + [yj], nxt)

    rec(0, [], [0] * r)
    minimal = [x for x in points
               if not any(y != x and all(a <= b for a, b in zip(y, x)) for y in points)]
    for ray in rays:
        if tuple(ray) not in points:
            raise AssertionError("ray generator missed by the enumeration")
    return sorted(set(minimal), reverse=True)


def _is_lattice_basis(vectors: list[tuple[int, ...]], kernel: list[list[int]]) -> bool:
    if len(vectors) != len(kernel):
        return False
    if not vectors:
        return True
    coords = []
    for v in vectors:
        x = lattice.solve(kernel, list(v))
        if x is None or any(c.denominator != 1 for c in x):
            return False
        coords.append(x)
    return abs(lattice.determinant(coords)) == 1


def quotient(sys: SphericalSystem, subset) -> QuotientSystem:
    idx = _ids(sys, subset)
    dist = is_distinguished(sys, idx)
    if dist is None:
        raise NotASystem("subset of colours is not distinguished")
    cols = colours(sys)
    r = sys.rank
    rows = []
    for d in idx:
        rows.append(lattice.primitive(list(cols[d].rho)) if any(cols[d].rho) else [0] * r)
    for g in dist.sigma_of:
        rows.append([int(h == g) for h in range(r)])
    kernel = lattice.integer_kernel(rows, r) if rows else [[int(i == j) for j in range(r)] for i in range(r)]
    hb = hilbert_basis(kernel, r)
    if not _is_lattice_basis(hb, kernel):
        raise NotASystem(f"Sigma/Delta' has {len(hb)} elements but Xi/Delta' has rank {len(kernel)}"
                         if len(hb) != len(kernel) else "Sigma/Delta' does not generate Xi/Delta'")
    n = sys.rs.rank
    sigma = []
    for c in hb:
        v = [0] * n
        for coef, g in zip(c, sys.sigma):
            for i in range(n):
                v[i] += coef * g[i]
        sigma.append(RootVector(v))
    chosen = set(idx)
    sp = frozenset(a for a in range(n) if delta_of_node(sys, a) <= chosen)
    return QuotientSystem(sys, dist, tuple(tuple(k) for k in kernel), tuple(hb),
                          SphericalSystem(sys.rs, sp, tuple(sigma)))


@dataclass(frozen=True)
class Classification:
    smooth: bool
    parabolic: bool


def classify(sys: SphericalSystem, subset) -> Classification:
    idx = _ids(sys, subset)
    if is_distinguished(sys, idx) is None:
        raise NotASystem("subset of colours is not distinguished")
    sig = sigma_of(sys, idx)
    cols = colours(sys)
    # V(Delta') is spanned by the gamma* of Sigma(Delta') iff every rho(D) vanishes off Sigma(Delta')
    smooth = all(cols[d].rho[g] == 0 for d in idx for g in range(sys.rank) if g not in sig)
    return Classification(smooth, len(sig) == sys.rank)


def parabolic_subset(sys: SphericalSystem, nodes) -> tuple[int, ...]:
    """Delta(S') as the union of the colours moved by the nodes of S'."""
    return tuple(sorted(delta_of_nodes(sys, nodes)))


# -- localization, reduction, products -----------------------------------------

@dataclass(frozen=True)
class Localized:
    system: SphericalSystem
    nodes: tuple[int, ...]          # parent node of each local node


def _components(rs: RootSystem, nodes) -> list[list[int]]:
    nodes = set(nodes)
    out = []
    while nodes:
        start = min(nodes)
        comp, stack = {start}, [start]
        while stack:
            v = stack.pop()
            for w in list(nodes - comp):
                if rs.adjacent(v, w):
                    comp.add(w)
                    stack.append(w)
        nodes -= comp
        out.append(sorted(comp))
    return out


def localize(sys: SphericalSystem, nodes) -> Localized:
    """Restriction of the system to the sub-diagram on the given nodes."""
    nodes = sorted(set(nodes))
    if not nodes:
        raise ValueError("empty sub-diagram")
    keep = []
    for g in sys.sigma:
        supp = {i for i, c in enumerate(g) if c}
        if supp <= set(nodes):
            keep.append(g)
        elif supp & set(nodes):
            raise ValueError("a spherical root straddles the chosen nodes")
    parts, order = [], []
    for comp in _components(sys.rs, nodes):
        fam, k, ordered = subdiagram_type(sys.rs, comp)
        parts.append(f"{fam}{k}")
        order.extend(ordered)
    rs = root_system("x".join(parts))
    where = {old: new for new, old in enumerate(order)}
    sigma = [RootVector(g[old] for old in order) for g in keep]
    sp = frozenset(where[a] for a in sys.sp if a in where)
    return Localized(SphericalSystem(rs, sp, tuple(sigma)), tuple(order))


def is_cuspidal(sys: SphericalSystem) -> bool:
    return sys.support() == frozenset(range(sys.rs.rank))


@dataclass(frozen=True)
class Reduction:
    s_prime: tuple[int, ...]        # Supp Sigma together with S^p
    dropped: tuple[int, ...]        # S^p nodes off the support: an orthogonal rank-0 factor
    localized: Localized


def cuspidal_reduce(sys: SphericalSystem) -> Reduction:
    """Localize to the support of Sigma.

    The parabolic induction is by S' = Supp Sigma + S^p. Nodes of S^p off the
    support are orthogonal to it (the S axiom), so they only contribute a
    product with a point and are dropped. A rank-0 system keeps S^p.
    """
    supp = sys.support()
    s_prime = tuple(sorted(supp | sys.sp))
    if not supp:
        if not sys.sp:
            raise ValueError("rank-0 system without S^p has nothing to localize")
        return Reduction(s_prime, (), localize(sys, s_prime))
    dropped = tuple(sorted(sys.sp - supp))
    return Reduction(s_prime, dropped, localize(sys, sorted(supp)))


def split_products(sys: SphericalSystem) -> list[Localized]:
    """Finest partition of S into mutually orthogonal parts containing whole supports."""
    n = sys.rs.rank
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for i in range(n):
        for j in range(i + 1, n):
            if sys.rs.adjacent(i, j):
                union(i, j)
    for g in sys.sigma:
        s = [i for i, c in enumerate(g) if c]
        for i in s[1:]:
            union(s[0], i)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    parts = sorted(groups.values())
    if len(parts) == 1:
        return [Localized(sys, tuple(range(n)))]
    return [localize(sys, p) for p in parts]


# -- strong adjacency and erasability ------------------------------------------

def strongly_adjacent(sys: SphericalSystem, g1: int, g2: int) -> bool:
    cols = colours(sys)
    for a, b in ((g1, g2), (g2, g1)):
        supp = [i for i, c in enumerate(sys.sigma[a]) if c]
        if any(cols[d].rho[b] == 0 for d in delta_of_nodes(sys, supp)):
            return False
    return True


def strong_components(sys: SphericalSystem) -> list[frozenset[int]]:
    r = sys.rank
    seen: set[int] = set()
    out = []
    for s in range(r):
        if s in seen:
            continue
        comp, stack = {s}, [s]
        while stack:
            v = stack.pop()
            for w in range(r):
                if w not in comp and strongly_adjacent(sys, v, w):
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return out


def delta_of_sigma(sys: SphericalSystem, sub) -> tuple[int, ...]:
    """Colours of Supp Sigma' vanishing on the rest of Sigma."""
    sub = set(sub)
    cols = colours(sys)
    supp = {i for g in sub for i, c in enumerate(sys.sigma[g]) if c}
    return tuple(sorted(d for d in delta_of_nodes(sys, supp)
                        if all(cols[d].rho[g] == 0 for g in range(sys.rank) if g not in sub)))


@dataclass(frozen=True)
class Erasability:
    erasable: bool
    quasi_erasable: bool
    erasable_witness: Optional[tuple[int, ...]]
    quasi_witness: Optional[tuple[int, ...]]


def _nonempty_subsets(items):
    items = list(items)
    for k in range(1, len(items) + 1):
        yield from itertools.combinations(items, k)


def erasability(sys: SphericalSystem, sub) -> Erasability:
    er = qe = None
    for s in _nonempty_subsets(delta_of_sigma(sys, sub)):
        if is_distinguished(sys, s) is None:
            continue
        if er is None and classify(sys, s).smooth:
            er = s
        if qe is None:
            try:
                quotient(sys, s)
                qe = s
            except NotASystem:
                pass
        if er is not None and qe is not None:
            break
    return Erasability(er is not None, qe is not None, er, qe)


def is_isolated(sys: SphericalSystem, sub) -> bool:
    sub = set(sub)
    s1 = {i for g in sub for i, c in enumerate(sys.sigma[g]) if c}
    s2 = sys.support() - s1
    if not sys.rs.orthogonal_sets(s1, s2):
        return False
    return all({i for i, c in enumerate(g) if c} <= (s1 if k in sub else s2)
               for k, g in enumerate(sys.sigma))


# -- fiber products ------------------------------------------------------------

def fiber_conditions(sys: SphericalSystem, d1, d2) -> dict[str, bool]:
    """Conditions (i)-(v) for a pair of colour subsets, evaluated in order."""
    a, b = set(_ids(sys, d1)), set(_ids(sys, d2))
    out = {"i": bool(a) and bool(b) and not a & b}
    if not out["i"]:
        return out
    if is_distinguished(sys, a) is None or is_distinguished(sys, b) is None:
        out["ii"] = False
        return out
    try:
        q = [quotient(sys, x) for x in (a, b, a | b)]
    except NotASystem:
        out["ii"] = False
        return out
    out["ii"] = True
    sig = set(sys.sigma)
    out["iii"] = not ((sig - set(q[0].sigma_quotient)) & (sig - set(q[1].sigma_quotient)))
    e1 = q[0].sp_quotient - sys.sp
    e2 = q[1].sp_quotient - sys.sp
    out["iv"] = sys.rs.orthogonal_sets(e1, e2)
    out["v"] = classify(sys, a).smooth or classify(sys, b).smooth
    return out


def find_fiber_product(sys: SphericalSystem) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    n = len(colours(sys))
    dist = [s for s in _nonempty_subsets(range(n)) if is_distinguished(sys, s) is not None]
    for s1 in dist:
        for s2 in dist:
            if set(s1) & set(s2):
                continue
            cond = fiber_conditions(sys, s1, s2)
            if len(cond) == 5 and all(cond.values()):
                return s1, s2
    return None


# -- decomposition tree --------------------------------------------------------

EXTERNAL = "external:rank<=2"


@dataclass
class DecompositionTree:
    system: SphericalSystem
    kind: str                                   # "leaf", "parabolic", "product", "fiber"
    children: list["DecompositionTree"] = field(default_factory=list)
    edge: dict = field(default_factory=dict)
    leaf: Optional[str] = None
    params: dict = field(default_factory=dict)

    def leaves(self) -> list["DecompositionTree"]:
        if self.kind == "leaf":
            return [self]
        return [x for c in self.children for x in c.leaves()]

    def to_json(self) -> dict:
        out: dict = {"system": self.system.to_json()}
        if self.kind == "leaf":
            out["leaf"] = self.leaf
            if self.params:
                out["params"] = dict(sorted(self.params.items()))
        else:
            out["edge"] = {"kind": self.kind, **self.edge}
            out["children"] = [c.to_json() for c in self.children]
        return out


def _leaf(sys: SphericalSystem) -> Optional[DecompositionTree]:
    if sys.rank <= 2:
        return DecompositionTree(sys, "leaf", leaf=EXTERNAL)
    m = catalog.match(sys)
    if m:
        return DecompositionTree(sys, "leaf", leaf=m.entry_id, params=m.params,
                                 edge={"relabeling": [a + 1 for a in m.relabeling]})
    return None


def decompose(sys: SphericalSystem, _depth: int = 0) -> DecompositionTree:
    if _depth > 64:
        raise Unresolved(sys, "recursion limit")
    if sys.rank == 0:
        return DecompositionTree(sys, "leaf", leaf=EXTERNAL)
    if not is_cuspidal(sys):
        red = cuspidal_reduce(sys)
        child = decompose(red.localized.system, _depth + 1)
        return DecompositionTree(sys, "parabolic", [child], edge={
            "S_prime": [a + 1 for a in red.s_prime],
            "nodes": [a + 1 for a in red.localized.nodes],
            "trivial_nodes": [a + 1 for a in red.dropped]})
    parts = split_products(sys)
    if len(parts) > 1:
        kids = [decompose(p.system, _depth + 1) for p in parts]
        return DecompositionTree(sys, "product", kids,
                                 edge={"parts": [[a + 1 for a in p.nodes] for p in parts]})
    leaf = _leaf(sys)
    if leaf is not None:
        return leaf
    pair = find_fiber_product(sys)
    if pair is None:
        raise Unresolved(sys, "no catalog match and no fiber-product decomposition")
    d1, d2 = pair
    cols = colours(sys)
    kids = []
    for s in (d1, d2, tuple(sorted(set(d1) | set(d2)))):
        q = quotient(sys, s).system
        if (q.rank, len(set(range(q.rs.rank)) - q.sp)) >= (sys.rank, len(set(range(sys.rs.rank)) - sys.sp)):
            raise AssertionError("fiber-product quotient does not shrink")
        kids.append(decompose(q, _depth + 1))
    return DecompositionTree(sys, "fiber", kids, edge={
        "delta1": [cols[d].id for d in d1], "delta2": [cols[d].id for d in d2]})


def quotient_axioms_ok(q: QuotientSystem) -> bool:
    return validate_axioms(q.system).ok
