"""Normalized chain complex of the nerve of a cube chain category."""

from __future__ import annotations

from dataclasses import dataclass, field

from .chains import ChainCategory


class EndomorphismDetected(ValueError):
    pass


class BoundaryCheckFailed(ArithmeticError):
    pass


@dataclass
class SparseMatrix:
    """Integer matrix stored column-wise: ``cols[j]`` maps row index to a nonzero entry."""

    nrows: int
    ncols: int
    cols: list = field(default_factory=list)

    def entries(self):
        for j, col in enumerate(self.cols):
            for i in sorted(col):
                yield i, j, col[i]

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, j, v in self.entries():
            out[i][j] = v
        return out

    def to_triplets(self) -> str:
        """Plain ``row col value`` lines after a ``rows cols nnz`` header (0-based)."""
        lines = [f"{self.nrows} {self.ncols} {self.nnz()}"]
        lines.extend(f"{i} {j} {v}" for i, j, v in sorted(self.entries()))
        return "\n".join(lines) + "\n"

    def times(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = []
        for col in other.cols:
            acc: dict[int, int] = {}
            for k, b in col.items():
                for i, a in self.cols[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            cols.append({i: v for i, v in acc.items() if v})
        return SparseMatrix(self.nrows, other.ncols, cols)

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)


class NerveComplex:
    """Simplices of every dimension and the boundary maps between them.

    A k-simplex is a tuple of k composable non-identity morphism indices
    (f_1, ..., f_k) with target(f_i) = source(f_{i+1}); 0-simplices are the
    objects, stored as 1-tuples ``(object,)`` in ``simplices[0]``.
    ``boundaries[k]`` maps C_k to C_{k-1} (``boundaries[0]`` is absent).
    """

    def __init__(self, cat: ChainCategory, simplices: list[list[tuple]], boundaries: list[SparseMatrix | None]):
        self.category = cat
        self.simplices = simplices
        self.boundaries = boundaries

    @property
    def top(self) -> int:
        return len(self.simplices) - 1

    def counts(self) -> list[int]:
        return [len(s) for s in self.simplices]

    def euler(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts()))

    def check(self) -> None:
        for k in range(2, len(self.boundaries)):
            if not self.boundaries[k - 1].times(self.boundaries[k]).is_zero():
                raise BoundaryCheckFailed(f"boundary composite vanishes not in degree {k}")


def build_nerve(cat: ChainCategory, check: bool = True) -> NerveComplex:
    for m, (s, d) in enumerate(zip(cat.src, cat.dst)):
        if s == d:
            raise EndomorphismDetected(f"morphism {m} is a non-identity endomorphism of object {s}")
    comp: dict[tuple[int, int], int] = {}

    def composite(f: int, g: int) -> int:
        key = (g, f)
        if key not in comp:
            comp[key] = cat.compose_index(g, f)
        return comp[key]

    simplices: list[list[tuple]] = [[(k,) for k in range(len(cat.objects))]]
    if cat.morphisms:
        simplices.append([(m,) for m in range(len(cat.morphisms))])
    while len(simplices) > 1:
        nxt = [s + (m,) for s in simplices[-1] for m in cat.out_edges[cat.dst[s[-1]]]]
        if not nxt:
            break
        simplices.append(nxt)
    for k in range(1, len(simplices)):
        for s in simplices[k]:
            assert len(s) == k

    boundaries: list[SparseMatrix | None] = [None]
    for k in range(1, len(simplices)):
        lower = {s: r for r, s in enumerate(simplices[k - 1])}
        cols = []
        for s in simplices[k]:
            col: dict[int, int] = {}
            for i, face in enumerate(_faces(cat, s, composite)):
                r = lower[face]
                col[r] = col.get(r, 0) + (-1) ** i
            cols.append({r: v for r, v in col.items() if v})
        boundaries.append(SparseMatrix(len(simplices[k - 1]), len(simplices[k]), cols))
    nerve = NerveComplex(cat, simplices, boundaries)
    if check:
        nerve.check()
    return nerve


def _faces(cat: ChainCategory, s: tuple, composite) -> list[tuple]:
    k = len(s)
    if k == 1:
        return [(cat.dst[s[0]],), (cat.src[s[0]],)]
    out = [s[1:]]
    for i in range(1, k):
        out.append(s[: i - 1] + (composite(s[i - 1], s[i]),) + s[i + 1:])
    out.append(s[:-1])
    return out
