"""Exact linear feasibility and optimization.

Two independent engines: Fourier-Motzkin elimination and a two-phase
tableau simplex with Bland's rule. Both work over Fractions.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

FM_MAX_VARS = 8


def _normalize(row: list[Fraction], rhs: Fraction) -> tuple[tuple[Fraction, ...], Fraction]:
    scale = next((abs(x) for x in row if x != 0), None)
    if scale is None:
        return tuple(row), rhs
    return tuple(x / scale for x in row), rhs / scale


def fm_feasible(A: Sequence[Sequence], b: Sequence) -> bool:
    """Is {x : A x <= b} nonempty? Variables are free."""
    rows = [( [Fraction(v) for v in r], Fraction(c)) for r, c in zip(A, b)]
    if not rows:
        return True
    n = len(rows[0][0])
    for k in range(n):
        pos, neg, zero = [], [], []
        for r, c in rows:
            (pos if r[k] > 0 else neg if r[k] < 0 else zero).append((r, c))
        new = list(zero)
        for rp, cp in pos:
            for rn, cn in neg:
                fp, fn = -rn[k], rp[k]
                new.append(([fp * x + fn * y for x, y in zip(rp, rn)], fp * cp + fn * cn))
        # drop duplicates and keep only the tightest rhs for each direction
        best: dict[tuple, Fraction] = {}
        for r, c in new:
            key, rhs = _normalize(r, c)
            if key not in best or rhs < best[key]:
                best[key] = rhs
        rows = [(list(key), rhs) for key, rhs in best.items()]
    return all(c >= 0 for _, c in rows)


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.t = rows
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        t = self.t
        inv = 1 / t[r][c]
        t[r] = [x * inv for x in t[r]]
        for i in range(len(t)):
            if i != r and t[i][c] != 0:
                f = t[i][c]
                t[i] = [a - f * p for a, p in zip(t[i], t[r])]
        self.basis[r] = c

    def optimize(self, obj: list[Fraction], allowed: int) -> str:
        """Maximize obj over the current basis; columns >= allowed never enter."""
        m = len(self.t)
        while True:
            # reduced costs: obj_j - sum_i obj_{basis_i} t_ij
            enter = None
            for j in range(allowed):
                if j in self.basis:
                    continue
                red = obj[j] - sum(obj[self.basis[i]] * self.t[i][j] for i in range(m))
                if red > 0:
                    enter = j
                    break
            if enter is None:
                return "optimal"
            leave, best = None, None
            for i in range(m):
                a = self.t[i][enter]
                if a > 0:
                    ratio = self.t[i][-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        leave, best = i, ratio
            if leave is None:
                return "unbounded"
            self.pivot(leave, enter)


def simplex_maximize(c: Sequence, A: Sequence[Sequence], b: Sequence
                     ) -> tuple[str, Optional[Fraction], Optional[list[Fraction]]]:
    """Maximize c.x subject to A x <= b and x >= 0.

    Returns (status, value, x) with status in {"optimal", "infeasible",
    "unbounded"}.
    """
    m = len(A)
    n = len(c)
    if m == 0:
        if any(Fraction(x) > 0 for x in c):
            return "unbounded", None, None
        return "optimal", Fraction(0), [Fraction(0)] * n
    neg = [i for i in range(m) if Fraction(b[i]) < 0]
    nart = len(neg)
    width = n + m + nart
    rows: list[list[Fraction]] = []
    basis: list[int] = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]] + [Fraction(int(i == k)) for k in range(m)]
        row += [Fraction(0)] * nart + [Fraction(b[i])]
        if i in neg:
            row = [-x for x in row]
            a = n + m + neg.index(i)
            row[a] = Fraction(1)
            basis.append(a)
        else:
            basis.append(n + i)
        rows.append(row)
    tab = _Tableau(rows, basis)
    if nart:
        phase1 = [Fraction(0)] * (n + m) + [Fraction(-1)] * nart
        tab.optimize(phase1, width)
        if any(tab.t[i][-1] != 0 for i in range(m) if tab.basis[i] >= n + m):
            return "infeasible", None, None
        # drive zero-level artificials out of the basis
        for i in range(m):
            if tab.basis[i] >= n + m:
                j = next((j for j in range(n + m) if tab.t[i][j] != 0), None)
                if j is not None:
                    tab.pivot(i, j)
    obj = [Fraction(x) for x in c] + [Fraction(0)] * (m + nart)
    status = tab.optimize(obj, n + m)
    if status == "unbounded":
        return status, None, None
    x = [Fraction(0)] * n
    for i, j in enumerate(tab.basis):
        if j < n:
            x[j] = tab.t[i][-1]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return "optimal", value, x


def simplex_point(A: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """A point of {x : A x <= b} with free variables, or None."""
    if not A:
        return []
    n = len(A[0])
    split = [list(r) + [-Fraction(v) for v in r] for r in A]
    status, _, y = simplex_maximize([0] * (2 * n), split, b)
    if status != "optimal":
        return None
    return [y[i] - y[n + i] for i in range(n)]


def feasible(A: Sequence[Sequence], b: Sequence, method: str = "auto") -> bool:
    """Nonemptiness of {x : A x <= b}; Fourier-Motzkin for few variables."""
    n = len(A[0]) if A else 0
    if method == "fm" or (method == "auto" and n <= FM_MAX_VARS):
        return fm_feasible(A, b)
    return simplex_point(A, b) is not None


def satisfies(A: Sequence[Sequence], b: Sequence, x: Sequence) -> bool:
    return all(sum(Fraction(a) * xi for a, xi in zip(row, x)) <= bi for row, bi in zip(A, b))


def integer_scale(v: Sequence[Fraction]) -> list[int]:
    """Smallest positive integer multiple of a rational vector."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in v]
