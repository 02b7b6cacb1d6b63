"""Exact linear algebra over the rationals and the integers.

Matrices are plain lists of rows. Entries may be ints or Fractions; every
result is exact.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

Matrix = list[list[Fraction]]


def to_fractions(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def transpose(rows: Sequence[Sequence]) -> list[list]:
    if not rows:
        return []
    return [list(col) for col in zip(*rows)]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = to_fractions(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def inverse(rows: Sequence[Sequence]) -> Matrix:
    n = len(rows)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(rows)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def solve(columns: Sequence[Sequence], target: Sequence) -> Optional[list[Fraction]]:
    """Solve sum_i x_i * columns[i] = target.

    The columns must be linearly independent; returns the unique solution or
    None when the target is outside their span.
    """
    if not columns:
        return [] if all(t == 0 for t in target) else None
    aug = [[col[k] for col in columns] + [target[k]] for k in range(len(target))]
    red, piv = rref(aug)
    s = len(columns)
    if s in piv:
        return None
    if len(piv) < s:
        raise ValueError("columns are linearly dependent")
    x = [Fraction(0)] * s
    for row, c in zip(red, piv):
        x[c] = row[s]
    return x


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Rational basis of {x : rows x = 0}."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(red, piv):
            v[c] = -row[f]
        basis.append(v)
    return basis


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a * b // gcd(a, b)


def primitive(v: Sequence) -> list[int]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    from math import gcd
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = _lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return [x // g for x in ints] if g else ints


def hermite_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix (zero rows dropped).

    The nonzero rows form a basis of the row lattice.
    """
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out: list[list[int]] = []
    r = 0
    for c in range(ncols):
        # gcd-reduce column c among rows r.. using integer row operations
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[i0] = m[i0], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-a for a in m[r]]
            for i in range(r):
                q = m[i][c] // m[r][c]
                if q:
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
            r += 1
            if r == len(m):
                break
    out = [row for row in m if any(row)]
    return out


def integer_kernel(rows: Sequence[Sequence], ncols: int) -> list[list[int]]:
    """Basis of the lattice {x in Z^ncols : rows x = 0}.

    Rational rows are cleared of denominators first. The basis is obtained
    by column reduction of the matrix stacked over the identity.
    """
    ints = [primitive(r) if any(r) else [0] * ncols for r in rows]
    # columns of [A; I] as rows of the transpose
    cols = [[ints[i][j] for i in range(len(ints))] + [int(j == k) for k in range(ncols)]
            for j in range(ncols)]
    h = len(ints)
    red = hermite_rows(cols) if cols else []
    # rows whose A-part vanishes span the kernel; since the reduction is
    # unimodular, pad with rows that hermite_rows dropped (none are dropped
    # because the identity part keeps every row nonzero)
    kernel = [row[h:] for row in red if not any(row[:h])]
    return kernel


def determinant(rows: Sequence[Sequence]) -> Fraction:
    m = to_fractions(rows)
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det
