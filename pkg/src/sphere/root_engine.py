"""Root systems of semisimple Dynkin diagrams with exact arithmetic.

Nodes are numbered 0..n-1 internally and follow Bourbaki order inside each
component; components are concatenated in the order given. Weights are
integer vectors in the fundamental weight basis, roots integer vectors in
the simple root basis.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Optional, Sequence, Union

from . import lattice

MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3, "E": 6, "F": 4, "G": 2}


class Weight(tuple):
    """Integer coordinates in the fundamental weight basis."""

    def __new__(cls, coords: Iterable[int]):
        return super().__new__(cls, (int(c) for c in coords))

    def __repr__(self):
        return f"Weight{tuple(self)}"


class RootVector(tuple):
    """Integer coordinates in the simple root basis."""

    def __new__(cls, coords: Iterable[int]):
        return super().__new__(cls, (int(c) for c in coords))

    def __repr__(self):
        return f"RootVector{tuple(self)}"


def add(u: Sequence[int], v: Sequence[int]):
    return type(u)(a + b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]):
    return type(u)(a - b for a, b in zip(u, v))


def scale(k: int, u: Sequence[int]):
    return type(u)(k * a for a in u)


@dataclass(frozen=True)
class DynkinDiagram:
    components: tuple[tuple[str, int], ...]
    # original label (as typed) -> canonical label, per component, 0-based local
    relabel: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    def __post_init__(self):
        for fam, n in self.components:
            if fam not in MIN_RANK:
                raise ValueError(f"unknown family {fam!r}")
            if n < MIN_RANK[fam]:
                raise ValueError(f"rank {n} too small for type {fam}")
            if fam == "E" and n > 8 or fam == "F" and n != 4 or fam == "G" and n != 2:
                raise ValueError(f"no diagram of type {fam}{n}")

    @classmethod
    def parse(cls, text: str) -> "DynkinDiagram":
        """Parse literals such as "A3", "b4", "A3xA3". C2 and D3 are canonicalized."""
        parts = [p.strip() for p in text.strip().upper().split("X")]
        comps, relabel = [], []
        for p in parts:
            m = re.fullmatch(r"([A-G])\s*(\d+)", p)
            if not m:
                raise ValueError(f"bad diagram component {p!r}")
            fam, n = m.group(1), int(m.group(2))
            perm = tuple(range(n))
            if fam == "C" and n == 2:
                # C2 node 1 (short) is B2 node 2
                fam, perm = "B", (1, 0)
            elif fam == "D" and n == 3:
                # D3 branch node 1 sits in the middle of A3
                fam, perm = "A", (1, 0, 2)
            comps.append((fam, n))
            relabel.append(perm)
        return cls(tuple(comps), tuple(relabel))

    @property
    def rank(self) -> int:
        return sum(n for _, n in self.components)

    def offsets(self) -> list[int]:
        out, k = [], 0
        for _, n in self.components:
            out.append(k)
            k += n
        return out

    def component_of(self, node: int) -> int:
        for idx, off in enumerate(self.offsets()):
            if off <= node < off + self.components[idx][1]:
                return idx
        raise IndexError(node)

    def component_nodes(self, idx: int) -> range:
        off = self.offsets()[idx]
        return range(off, off + self.components[idx][1])

    def canonical_node(self, comp: int, local_label: int) -> int:
        """Global 0-based node for a 0-based label as typed in the input literal."""
        perm = self.relabel[comp] if self.relabel else tuple(range(self.components[comp][1]))
        return self.offsets()[comp] + perm[local_label]

    def input_order(self) -> tuple[int, ...]:
        """Canonical node of each position of the input literal, in order."""
        return tuple(self.canonical_node(c, i) for c, (_, n) in enumerate(self.components)
                     for i in range(n))

    def __str__(self) -> str:
        return "x".join(f"{f}{n}" for f, n in self.components)


def _component_lengths_and_edges(fam: str, n: int):
    """Squared lengths (long = 2) and bonds (i, j, multiplicity)."""
    if fam == "A":
        lengths = [Fraction(2)] * n
        edges = [(i, i + 1, 1) for i in range(n - 1)]
    elif fam == "B":
        lengths = [Fraction(2)] * (n - 1) + [Fraction(1)]
        edges = [(i, i + 1, 1) for i in range(n - 2)] + [(n - 2, n - 1, 2)]
    elif fam == "C":
        lengths = [Fraction(1)] * (n - 1) + [Fraction(2)]
        edges = [(i, i + 1, 1) for i in range(n - 2)] + [(n - 2, n - 1, 2)]
    elif fam == "D":
        lengths = [Fraction(2)] * n
        edges = [(i, i + 1, 1) for i in range(n - 2)] + [(n - 3, n - 1, 1)]
    elif fam == "E":
        lengths = [Fraction(2)] * n
        edges = [(0, 2, 1), (2, 3, 1), (1, 3, 1)] + [(i, i + 1, 1) for i in range(3, n - 1)]
    elif fam == "F":
        lengths = [Fraction(2), Fraction(2), Fraction(1), Fraction(1)]
        edges = [(0, 1, 1), (1, 2, 2), (2, 3, 1)]
    elif fam == "G":
        lengths = [Fraction(2, 3), Fraction(2)]
        edges = [(0, 1, 3)]
    else:
        raise ValueError(fam)
    return lengths, edges


def gram_matrix(diagram: DynkinDiagram) -> list[list[Fraction]]:
    """Matrix of (alpha_i, alpha_j), long roots of squared length 2."""
    n = diagram.rank
    g = [[Fraction(0)] * n for _ in range(n)]
    for (fam, k), off in zip(diagram.components, diagram.offsets()):
        lengths, edges = _component_lengths_and_edges(fam, k)
        for i, l in enumerate(lengths):
            g[off + i][off + i] = l
        for i, j, mult in edges:
            v = -min(lengths[i], lengths[j]) * mult / 2
            g[off + i][off + j] = g[off + j][off + i] = v
    return g


@dataclass(frozen=True, eq=False)
class RootSystem:
    diagram: DynkinDiagram
    cartan: tuple[tuple[int, ...], ...]       # cartan[i][j] = <alpha_j^vee, alpha_i>
    symmetrizer: tuple[Fraction, ...]         # (alpha_i, alpha_i) / 2
    gram: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[RootVector, ...]

    @property
    def rank(self) -> int:
        return self.diagram.rank

    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.positive_roots) | frozenset(scale(-1, r) for r in self.positive_roots)

    @cached_property
    def _inv_cartan(self):
        return lattice.inverse(self.cartan)

    def is_root(self, v: Sequence[int]) -> bool:
        return RootVector(v) in self.root_set

    def simple_root(self, i: int) -> RootVector:
        return RootVector(int(i == k) for k in range(self.rank))

    def fundamental_weight(self, i: int) -> Weight:
        return Weight(int(i == k) for k in range(self.rank))

    def highest_roots(self) -> list[RootVector]:
        out = []
        for idx in range(len(self.diagram.components)):
            nodes = self.diagram.component_nodes(idx)
            comp = [r for r in self.positive_roots if all(r[k] == 0 for k in range(self.rank) if k not in nodes)]
            out.append(max(comp, key=sum))
        return out

    def root_to_weight(self, v: Sequence[int]) -> Weight:
        """omega-coordinates: coordinate j is <alpha_j^vee, v>."""
        n = self.rank
        return Weight(sum(v[i] * self.cartan[i][j] for i in range(n)) for j in range(n))

    def weight_to_root(self, w: Sequence[int]) -> tuple[Fraction, ...]:
        """Rational alpha-coordinates of a weight."""
        n = self.rank
        inv = self._inv_cartan
        return tuple(sum((Fraction(w[j]) * inv[j][i] for j in range(n)), Fraction(0)) for i in range(n))

    def as_root_coords(self, xi) -> tuple:
        return self.weight_to_root(xi) if isinstance(xi, Weight) else tuple(xi)

    def pairing(self, xi, j: int) -> int:
        """<alpha_j^vee, xi> for a Weight or a RootVector."""
        if not 0 <= j < self.rank:
            raise IndexError(j)
        if isinstance(xi, Weight):
            return xi[j]
        return sum(xi[i] * self.cartan[i][j] for i in range(self.rank))

    def inner_product(self, x1, x2) -> Fraction:
        a = self.as_root_coords(x1)
        b = self.as_root_coords(x2)
        n = self.rank
        return sum((Fraction(a[i]) * self.gram[i][j] * b[j]
                    for i in range(n) if a[i] for j in range(n) if b[j]), Fraction(0))

    def dominance_leq(self, lam: Sequence[int], mu: Sequence[int]) -> bool:
        diff = self.weight_to_root([m - l for l, m in zip(lam, mu)])
        return all(x.denominator == 1 and x >= 0 for x in diff)

    def support(self, v: Sequence[int]) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(v) if c)

    def levi_restrict(self, nodes: Iterable[int], lam: Sequence[int]) -> Weight:
        """Coordinates of lam on the given nodes, in increasing node order."""
        return Weight(lam[i] for i in sorted(nodes))

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and self.cartan[i][j] != 0

    def orthogonal_sets(self, a: Iterable[int], b: Iterable[int]) -> bool:
        return all(self.cartan[i][j] == 0 for i in a for j in b)


def _closure_roots(cartan) -> list[RootVector]:
    """Positive roots by adding simple roots along root strings, height by height."""
    n = len(cartan)
    simple = [RootVector(int(i == k) for k in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = set()
        for beta in layer:
            for i in range(n):
                # p = largest k with beta - k alpha_i a root (or zero if beta is alpha_i)
                p = 0
                cur = list(beta)
                while True:
                    cur[i] -= 1
                    if RootVector(cur) in roots:
                        p += 1
                    else:
                        break
                pair = sum(beta[k] * cartan[k][i] for k in range(n))
                if p - pair > 0:
                    new = list(beta)
                    new[i] += 1
                    nxt.add(RootVector(new))
        nxt -= roots
        roots |= nxt
        layer = sorted(nxt)
    return sorted(roots)


def reflection_orbit_roots(cartan) -> list[RootVector]:
    """Positive roots as the positive part of the Weyl orbit of the simple roots."""
    n = len(cartan)
    start = [RootVector(int(i == k) for k in range(n)) for i in range(n)]
    seen = set(start)
    stack = list(start)
    while stack:
        beta = stack.pop()
        for i in range(n):
            pair = sum(beta[k] * cartan[k][i] for k in range(n))
            img = list(beta)
            img[i] -= pair
            img = RootVector(img)
            if img not in seen:
                seen.add(img)
                stack.append(img)
    return sorted(r for r in seen if all(c >= 0 for c in r))


def build_root_system(diagram: Union[DynkinDiagram, str]) -> RootSystem:
    if isinstance(diagram, str):
        diagram = DynkinDiagram.parse(diagram)
    g = gram_matrix(diagram)
    n = diagram.rank
    cartan = tuple(tuple(int(2 * g[i][j] / g[j][j]) for j in range(n)) for i in range(n))
    sym = tuple(g[i][i] / 2 for i in range(n))
    roots = tuple(_closure_roots(cartan))
    return RootSystem(diagram, cartan, sym, tuple(tuple(r) for r in g), roots)


_CACHE: dict[str, RootSystem] = {}


def root_system(text: str) -> RootSystem:
    """Cached construction from a diagram literal."""
    d = DynkinDiagram.parse(text)
    key = str(d) + repr(d.relabel)
    if key not in _CACHE:
        _CACHE[key] = build_root_system(d)
    return _CACHE[key]


def classical_count(fam: str, n: int) -> int:
    return {
        "A": n * (n + 1) // 2, "B": n * n, "C": n * n, "D": n * (n - 1),
        "E": {6: 36, 7: 63, 8: 120}.get(n, 0), "F": 24, "G": 6,
    }[fam]


# -- sub-diagram embeddings -------------------------------------------------

def embeddings(small: Sequence[Sequence[int]], big: Sequence[Sequence[int]],
               allowed: Optional[Iterable[int]] = None) -> Iterator[tuple[int, ...]]:
    """Injective maps f with big[f(i)][f(j)] == small[i][j] for all i, j.

    Since Cartan entries encode root lengths along bonds, the match respects
    the long/short orientation.
    """
    k = len(small)
    pool = sorted(set(range(len(big))) if allowed is None else set(allowed))
    image: list[int] = []

    def extend():
        i = len(image)
        if i == k:
            yield tuple(image)
            return
        for v in pool:
            if v in image:
                continue
            if all(big[v][image[j]] == small[i][j] and big[image[j]][v] == small[j][i] for j in range(i)):
                image.append(v)
                yield from extend()
                image.pop()

    yield from extend()


@lru_cache(maxsize=None)
def component_cartan(fam: str, n: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix of a single irreducible diagram (no canonicalization)."""
    return build_root_system(DynkinDiagram(((fam, n),))).cartan


def subdiagram_type(rs: RootSystem, nodes: Iterable[int]) -> Optional[tuple[str, int, tuple[int, ...]]]:
    """Identify a connected sub-diagram: (family, rank, Bourbaki-ordered nodes)."""
    nodes = sorted(nodes)
    k = len(nodes)
    sub = [[rs.cartan[i][j] for j in nodes] for i in nodes]
    for fam in "ABCDEFG":
        if k < MIN_RANK[fam] or fam == "E" and k > 8 or fam == "F" and k != 4 or fam == "G" and k != 2:
            continue
        if fam == "C" and k == 2 or fam == "D" and k == 3:
            continue
        model = component_cartan(fam, k)
        for emb in embeddings(model, sub):
            return fam, k, tuple(nodes[e] for e in emb)
    return None


def connected(rs: RootSystem, nodes: Iterable[int]) -> bool:
    nodes = set(nodes)
    if not nodes:
        return True
    start = min(nodes)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in nodes:
            if w not in seen and rs.adjacent(v, w):
                seen.add(w)
                stack.append(w)
    return seen == nodes
