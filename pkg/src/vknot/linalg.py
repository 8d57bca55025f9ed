"""Exact linear algebra over the integers and rationals."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def integer_rows(rows: Iterable[Sequence]) -> list[list[int]]:
    """Scale each rational row by the lcm of its denominators."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    nrows = len(m)
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pr = m[rank]
        pv = pr[col]
        for r in range(rank + 1, nrows):
            row = m[r]
            a = row[col]
            if a == 0:
                if pv != prev:
                    for j in range(col + 1, ncols):
                        row[j] = row[j] * pv // prev
                continue
            for j in range(col + 1, ncols):
                row[j] = (row[j] * pv - a * pr[j]) // prev
            row[col] = 0
        prev = pv
        rank += 1
    return rank


def rank(rows: Sequence[Sequence]) -> int:
    return bareiss_rank(integer_rows(rows))


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)
