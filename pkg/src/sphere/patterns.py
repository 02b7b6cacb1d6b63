"""Rank-one spherical root shapes and their instances in a root system."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .root_engine import RootSystem, RootVector, component_cartan, embeddings

TAGS = ("A1xA1", "A_n", "A1-doubled", "A3-middle", "B_n", "B_n-doubled", "B3-special",
        "C_n", "D_n", "D4-special-1", "D4-special-2", "F4", "G2-doubled", "G2-short")


@dataclass(frozen=True)
class CandidateRoot:
    vector: RootVector
    support_type: str
    nodes: tuple[int, ...]        # Bourbaki-ordered image of the pattern diagram

    def label(self) -> str:
        return format_root(self.vector)


# (tag, family, minimal rank, maximal rank or None, coefficients for rank k)
_PATTERNS: list[tuple[str, str, int, Optional[int], Callable[[int], list[int]]]] = [
    ("A_n", "A", 2, None, lambda k: [1] * k),
    ("A3-middle", "A", 3, 3, lambda k: [1, 2, 1]),
    ("B_n", "B", 2, None, lambda k: [1] * k),
    ("B_n-doubled", "B", 2, None, lambda k: [2] * k),
    ("B3-special", "B", 3, 3, lambda k: [1, 2, 3]),
    ("C_n", "C", 3, None, lambda k: [1] + [2] * (k - 2) + [1]),
    ("D_n", "D", 4, None, lambda k: [2] * (k - 2) + [1, 1]),
    ("F4", "F", 4, 4, lambda k: [1, 2, 3, 2]),
    ("G2-doubled", "G", 2, 2, lambda k: [4, 2]),
    ("G2-short", "G", 2, 2, lambda k: [1, 1]),
]


def _d4_tag(emb: tuple[int, ...]) -> str:
    leaves = sorted((emb[0], emb[2], emb[3]))
    return ("D_n", "D4-special-1", "D4-special-2")[leaves.index(emb[0])]


def _vector(n: int, nodes, coeffs) -> RootVector:
    v = [0] * n
    for node, c in zip(nodes, coeffs):
        v[node] += c
    return RootVector(v)


def enumerate_candidates(rs: RootSystem) -> list[CandidateRoot]:
    """Every rank-one shape on every matching sub-diagram, without duplicates."""
    return list(_enumerate(rs))


@lru_cache(maxsize=None)
def _enumerate(rs: RootSystem) -> tuple[CandidateRoot, ...]:
    n = rs.rank
    found: dict[RootVector, CandidateRoot] = {}

    def keep(c: CandidateRoot):
        found.setdefault(c.vector, c)

    for i in range(n):
        for j in range(i + 1, n):
            if rs.cartan[i][j] == 0:
                keep(CandidateRoot(_vector(n, (i, j), (1, 1)), "A1xA1", (i, j)))
    for i in range(n):
        keep(CandidateRoot(_vector(n, (i,), (2,)), "A1-doubled", (i,)))
    for tag, fam, kmin, kmax, coeffs in _PATTERNS:
        top = min(n, kmax) if kmax else n
        for k in range(kmin, top + 1):
            if fam == "F" and k != 4 or fam == "G" and k != 2:
                continue
            model = component_cartan(fam, k)
            for emb in embeddings(model, rs.cartan):
                t = _d4_tag(emb) if tag == "D_n" and k == 4 else tag
                keep(CandidateRoot(_vector(n, emb, coeffs(k)), t, emb))
    return tuple(sorted(found.values(), key=lambda c: (sum(c.vector), tuple(-x for x in c.vector))))


def recognize(rs: RootSystem, v) -> Optional[CandidateRoot]:
    v = RootVector(v)
    for c in _enumerate(rs):
        if c.vector == v:
            return c
    return None


def format_root(v, prime_offsets=None) -> str:
    """Human readable form such as a1+2a2+a3."""
    terms = []
    for i, c in enumerate(v):
        if c == 0:
            continue
        coef = "" if c == 1 else ("-" if c == -1 else str(c))
        terms.append(f"{coef}a{i + 1}")
    return "+".join(terms).replace("+-", "-") if terms else "0"
