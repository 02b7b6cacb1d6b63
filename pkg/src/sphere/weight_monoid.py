"""Tuples of dominant weights: freeness, saturation and S^p."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import lattice
from .root_engine import RootSystem, Weight

ORACLE_MAX_RANK = 4


class NotFree(ValueError):
    pass


class NotSaturated(ValueError):
    def __init__(self, index: int, message: str = ""):
        super().__init__(message or f"no saturation witness for weight {index + 1}")
        self.index = index


@dataclass(frozen=True, eq=False)
class WeightTuple:
    rs: RootSystem
    weights: tuple[Weight, ...]

    def __post_init__(self):
        n = self.rs.rank
        fixed = []
        for w in self.weights:
            if len(w) != n:
                raise ValueError(f"weight {tuple(w)} has length {len(w)}, expected {n}")
            if any(c < 0 for c in w):
                raise ValueError(f"weight {tuple(w)} is not dominant")
            if not any(w):
                raise ValueError("zero weight")
            fixed.append(Weight(w))
        if not fixed:
            raise ValueError("empty weight tuple")
        object.__setattr__(self, "weights", tuple(fixed))

    @property
    def s(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class SaturationResult:
    ok: bool
    witnesses: Optional[tuple[int, ...]] = None   # node k_i for each weight
    offending: Optional[int] = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class OracleResult:
    ok: bool
    counterexample: Optional[Weight] = None
    bound: int = 0

    def __bool__(self):
        return self.ok


def check_free(t: WeightTuple) -> bool:
    return lattice.rank(t.weights) == t.s


def is_saturated(t: WeightTuple) -> SaturationResult:
    """Witness criterion: each weight needs a node touching it and no other weight."""
    if not check_free(t):
        raise NotFree("weights are linearly dependent")
    witnesses = []
    for i, lam in enumerate(t.weights):
        k = next((k for k in range(t.rs.rank)
                  if lam[k] != 0 and all(mu[k] == 0 for j, mu in enumerate(t.weights) if j != i)), None)
        if k is None:
            return SaturationResult(False, offending=i)
        witnesses.append(k)
    return SaturationResult(True, witnesses=tuple(witnesses))


def lattice_coefficients(t: WeightTuple, mu: Sequence[int]) -> Optional[list[Fraction]]:
    """The unique rational a with sum a_i lambda_i = mu, or None."""
    return lattice.solve(t.weights, list(mu))


def in_lattice(t: WeightTuple, mu: Sequence[int]) -> bool:
    a = lattice_coefficients(t, mu)
    return a is not None and all(x.denominator == 1 for x in a)


def in_monoid(t: WeightTuple, mu: Sequence[int]) -> bool:
    a = lattice_coefficients(t, mu)
    return a is not None and all(x.denominator == 1 and x >= 0 for x in a)


def default_box_bound(t: WeightTuple) -> int:
    return 2 * max(max(w) for w in t.weights) + t.rs.rank


def _pivot_rows(weights: Sequence[Sequence[int]]) -> list[int]:
    """Coordinates on which the weights restrict to an invertible square matrix."""
    _, piv = lattice.rref(weights)
    return piv


def saturation_oracle(t: WeightTuple, box_bound: Optional[int] = None) -> OracleResult:
    """Check Z-span meet dominant cone equals the monoid, inside a coordinate box.

    Every dominant weight of the box is tested. Integer arithmetic throughout:
    a = adj(M) mu / det(M) on pivot coordinates, then the full combination is
    compared with mu.
    """
    if t.rs.rank > ORACLE_MAX_RANK:
        raise ValueError(f"oracle limited to rank <= {ORACLE_MAX_RANK}")
    if not check_free(t):
        raise NotFree("weights are linearly dependent")
    bound = default_box_bound(t) if box_bound is None else box_bound
    n, s = t.rs.rank, t.s
    piv = _pivot_rows(t.weights)
    sq = [[t.weights[i][k] for i in range(s)] for k in piv]      # sq @ a = mu[piv]
    det = lattice.determinant(sq)
    inv = lattice.inverse(sq)
    adj = np.array([[int(x * det) for x in row] for row in inv], dtype=np.int64)
    det = int(det)
    grid = np.array(list(itertools.product(range(bound + 1), repeat=n)), dtype=np.int64)[1:]
    num = grid[:, piv] @ adj.T
    ok = (num % det == 0).all(axis=1)
    grid, num = grid[ok], num[ok] // det
    lam = np.array(t.weights, dtype=np.int64)
    back = num @ lam
    hit = (back == grid).all(axis=1)
    bad = np.nonzero(hit & (num < 0).any(axis=1))[0]
    if len(bad):
        return OracleResult(False, Weight(grid[bad[0]].tolist()), bound)
    return OracleResult(True, None, bound)


def compute_sp(t: WeightTuple) -> frozenset[int]:
    return frozenset(k for k in range(t.rs.rank) if all(w[k] == 0 for w in t.weights))
