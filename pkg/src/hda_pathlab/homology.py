"""Integer homology of finite chain complexes via Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .nerve import BoundaryCheckFailed, NerveComplex, SparseMatrix

__all__ = [
    "BoundaryCheckFailed",
    "HomologyReport",
    "homology",
    "homology_of_boundaries",
    "invariant_factors",
    "smith_normal_form",
]


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Invariant factors d_1 | d_2 | ... of an integer matrix, and its rank.

    Pivots are chosen by smallest absolute value, ties broken by row-major
    position, so the sequence of operations is reproducible.
    """
    A = [list(map(int, row)) for row in M]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    factors: list[int] = []
    t = 0
    while t < min(nrows, ncols):
        pivot = _min_entry(A, t, nrows, ncols)
        if pivot is None:
            break
        while True:
            _, i, j = pivot
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
            p = A[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, ncols):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for row in A:
                            row[j] -= q * row[t]
                    dirty = dirty or A[t][j] != 0
            if not dirty:
                bad = next(
                    (i for i in range(t + 1, nrows) if any(A[i][j] % p for j in range(t + 1, ncols))), None
                )
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad])]
            pivot = _min_entry(A, t, nrows, ncols)
        factors.append(abs(A[t][t]))
        t += 1
    return factors, len(factors)


def _min_entry(A, t: int, nrows: int, ncols: int):
    best = None
    for i in range(t, nrows):
        row = A[i]
        for j in range(t, ncols):
            v = row[j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return best
    return best


def invariant_factors(M: SparseMatrix) -> list[int]:
    """Invariant factors of a sparse matrix.

    Unit entries are eliminated first, always taking the unit whose row and
    column are shortest (ties by position); whatever is left without a unit
    entry goes through the dense reduction above.  Unimodular operations
    preserve invariant factors, so this agrees with reducing M directly.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, j, v in M.entries():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)
    units = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(cols):
            if j not in cols:
                continue
            cands = [i for i in cols[j] if abs(rows[i][j]) == 1]
            if not cands:
                continue
            r = min(cands, key=lambda i: (len(rows[i]), i))
            pivot_row = rows.pop(r)
            sign = pivot_row[j]
            for i in sorted(cols[j] - {r}):
                row = rows[i]
                q = row[j] * sign
                for c, v in pivot_row.items():
                    nv = row.get(c, 0) - q * v
                    if nv:
                        if c not in row:
                            cols[c].add(i)
                        row[c] = nv
                    elif c in row:
                        del row[c]
                        cols[c].discard(i)
                if not row:
                    del rows[i]
            for c in pivot_row:
                cols[c].discard(r)
            del cols[j]
            for c in [c for c in pivot_row if c in cols and not cols[c]]:
                del cols[c]
            units += 1
            progress = True
    rest: list[int] = []
    if rows:
        ridx = sorted(rows)
        cidx = sorted({c for row in rows.values() for c in row})
        cpos = {c: k for k, c in enumerate(cidx)}
        dense = [[0] * len(cidx) for _ in ridx]
        for a, i in enumerate(ridx):
            for c, v in rows[i].items():
                dense[a][cpos[c]] = v
        rest, _ = smith_normal_form(dense)
    return [1] * units + rest


@dataclass(frozen=True)
class HomologyReport:
    betti: tuple
    torsion: tuple  # per dimension, a tuple of invariant factors > 1
    euler: int

    def to_json(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion], "euler": self.euler}


def homology_of_boundaries(sizes: Sequence[int], boundaries: Sequence[SparseMatrix | None]) -> HomologyReport:
    """H_k = ker d_k / im d_(k+1), with ``boundaries[k]``: C_k -> C_(k-1)."""
    top = len(sizes) - 1
    factors = [[] for _ in range(top + 2)]
    for k in range(1, top + 1):
        factors[k] = invariant_factors(boundaries[k])
    ranks = [len(f) for f in factors]
    betti = tuple(sizes[k] - ranks[k] - ranks[k + 1] for k in range(top + 1))
    torsion = tuple(tuple(d for d in factors[k + 1] if d > 1) for k in range(top + 1))
    euler = sum((-1) ** k * b for k, b in enumerate(betti))
    if euler != sum((-1) ** k * c for k, c in enumerate(sizes)):
        raise ArithmeticError("Euler characteristic mismatch")
    return HomologyReport(betti, torsion, euler)


def homology(c: NerveComplex) -> HomologyReport:
    c.check()
    return homology_of_boundaries(c.counts(), c.boundaries)
