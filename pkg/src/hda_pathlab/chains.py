"""Cube chains and the cube chain category.

A cube chain of length n is a sequence of cubes c_1, ..., c_l of positive
dimension with d0(c_1) the start vertex, d1(c_l) the end vertex, d1(c_i) =
d0(c_{i+1}) and dimensions summing to n.  A morphism a -> b records how each
cube of ``b`` is cut into consecutive cubes of ``a``: one ordered partition
(B_1, ..., B_r) of the coordinates of every target cube, where the k-th
source cube is the face with coordinates in B_1..B_{k-1} set to 1, those in
B_{k+1}..B_r set to 0 and B_k left free.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .precubical import PrecubicalSet, extreme_vertex, iterated_face


class InvalidChain(ValueError):
    pass


class InvalidPartition(ValueError):
    pass


class SourceTargetMismatch(ValueError):
    pass


class StageMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# types and chains


@dataclass(frozen=True)
class ChainType:
    parts: tuple

    def __init__(self, parts: Iterable[int]):
        parts = tuple(int(p) for p in parts)
        if not parts or any(p < 1 for p in parts):
            raise InvalidChain(f"chain type needs positive parts, got {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def length(self) -> int:
        return sum(self.parts)

    @property
    def count(self) -> int:
        return len(self.parts)

    def vertices(self) -> tuple[int, ...]:
        """Partial sums t_0 = 0, t_1, ..., t_l = n."""
        return tuple(itertools.accumulate(self.parts, initial=0))

    def vert(self) -> frozenset:
        return frozenset(self.vertices())

    def free(self) -> frozenset:
        return frozenset(range(1, self.length)) - self.vert()


@dataclass(frozen=True)
class CubeChain:
    K: PrecubicalSet = field(compare=False, repr=False, hash=False)
    cubes: tuple

    def __init__(self, K: PrecubicalSet, cubes: Iterable[str], check: bool = True):
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "cubes", tuple(cubes))
        if check:
            problem = chain_problem(K, self.cubes)
            if problem:
                raise InvalidChain(problem)

    @property
    def type(self) -> ChainType:
        return ChainType(self.K.dim(c) for c in self.cubes)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.K.dim(c) for c in self.cubes)

    @property
    def length(self) -> int:
        return sum(self.dims)

    def __len__(self) -> int:
        return len(self.cubes)

    def to_json(self) -> list:
        return list(self.cubes)

    def label(self) -> str:
        return "(" + ", ".join(self.cubes) + ")"


def chain_problem(K: PrecubicalSet, cubes: Sequence[str]) -> str | None:
    if not cubes:
        return "empty chain"
    for c in cubes:
        if c not in K:
            return f"unknown cube {c!r}"
        if K.dim(c) < 1:
            return f"cube {c!r} has dimension 0"
    if extreme_vertex(K, cubes[0], 0) != K.start:
        return f"chain does not start at {K.start!r}"
    if extreme_vertex(K, cubes[-1], 1) != K.end:
        return f"chain does not end at {K.end!r}"
    for x, y in zip(cubes, cubes[1:]):
        if extreme_vertex(K, x, 1) != extreme_vertex(K, y, 0):
            return f"{x!r} and {y!r} do not meet"
    return None


def enumerate_chains(K: PrecubicalSet, n: int) -> list[CubeChain]:
    """All cube chains of total dimension ``n``, in lexicographic order of cube ids."""
    if n < 1:
        raise ValueError("chain length must be positive")
    index = K.initial_index()
    final = {c: extreme_vertex(K, c, 1) for cubes in index.values() for c in cubes}
    out: list[CubeChain] = []
    path: list[str] = []

    def walk(v: str, left: int) -> None:
        if left == 0:
            if v == K.end:
                out.append(CubeChain(K, path, check=False))
            return
        for c in index.get(v, ()):
            d = K.dim(c)
            if d <= left:
                path.append(c)
                walk(final[c], left - d)
                path.pop()

    walk(K.start, n)
    return out


def chain_face(chain: CubeChain, i: int, A: Iterable[int], B: Iterable[int]) -> CubeChain:
    """Replace c_i by the pair (d0_B(c_i), d1_A(c_i)); ``i`` is 1-based."""
    K = chain.K
    A, B = frozenset(A), frozenset(B)
    if not 1 <= i <= len(chain):
        raise InvalidPartition(f"stage {i} out of range")
    c = chain.cubes[i - 1]
    m = K.dim(c)
    if not A or not B or A & B or A | B != frozenset(range(1, m + 1)):
        raise InvalidPartition(f"({sorted(A)}, {sorted(B)}) is not a partition of 1..{m} into two blocks")
    pair = (iterated_face(K, c, B, 0), iterated_face(K, c, A, 1))
    return CubeChain(K, chain.cubes[: i - 1] + pair + chain.cubes[i:])


# ---------------------------------------------------------------------------
# ordered partitions


@dataclass(frozen=True, order=True)
class OrderedPartition:
    blocks: tuple  # tuple of sorted tuples of 1-based indices

    def __init__(self, blocks: Iterable[Iterable[int]]):
        object.__setattr__(self, "blocks", tuple(tuple(sorted(b)) for b in blocks))
        seen: set = set()
        for b in self.blocks:
            if not b:
                raise InvalidPartition("empty block")
            if seen & set(b):
                raise InvalidPartition("blocks overlap")
            seen.update(b)
        if seen != set(range(1, len(seen) + 1)):
            raise InvalidPartition(f"blocks do not cover 1..{len(seen)}")

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def words(self) -> tuple[str, ...]:
        """Face word of each block: 1 on earlier blocks, * on the block, 0 on later ones."""
        m = self.size
        out = []
        for k, block in enumerate(self.blocks):
            w = ["0"] * m
            for b in self.blocks[:k]:
                for j in b:
                    w[j - 1] = "1"
            for j in block:
                w[j - 1] = "*"
            out.append("".join(w))
        return tuple(out)

    def transport(self, block: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        """This partition of 1..|block| carried onto ``block`` by the increasing bijection."""
        base = sorted(block)
        return tuple(tuple(base[j - 1] for j in b) for b in self.blocks)

    def to_json(self) -> list:
        return [list(b) for b in self.blocks]


@lru_cache(maxsize=None)
def ordered_partitions(m: int, sizes: tuple | None = None) -> tuple[OrderedPartition, ...]:
    """Ordered partitions of 1..m, optionally with prescribed block sizes, sorted."""
    if sizes is not None:
        if sum(sizes) != m or any(s < 1 for s in sizes):
            return ()
        out = []

        def rec(rest: tuple, k: int, acc: list) -> None:
            if k == len(sizes):
                out.append(OrderedPartition(acc))
                return
            for block in itertools.combinations(rest, sizes[k]):
                remaining = tuple(x for x in rest if x not in block)
                rec(remaining, k + 1, acc + [block])

        rec(tuple(range(1, m + 1)), 0, [])
        return tuple(sorted(out))
    out = []
    for r in range(1, m + 1):
        for comp in _compositions(m, r):
            out.extend(ordered_partitions(m, comp))
    return tuple(sorted(out))


def _compositions(m: int, r: int) -> Iterator[tuple[int, ...]]:
    for cuts in itertools.combinations(range(1, m), r - 1):
        bounds = (0, *cuts, m)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class ChainMorphism:
    source: CubeChain
    target: CubeChain
    partitions: tuple  # one OrderedPartition per target cube

    def __post_init__(self):
        object.__setattr__(self, "partitions", tuple(
            p if isinstance(p, OrderedPartition) else OrderedPartition(p) for p in self.partitions
        ))

    def is_identity(self) -> bool:
        return self.source == self.target and all(len(p.blocks) == 1 for p in self.partitions)

    def signature(self) -> str:
        return " ".join("|".join(",".join(map(str, b)) for b in p.blocks) for p in self.partitions)

    def to_json(self) -> list:
        return [p.to_json() for p in self.partitions]


def induced_source(K: PrecubicalSet, target: Sequence[str], partitions: Sequence[OrderedPartition]) -> tuple[str, ...]:
    """The source cubes forced by cutting each target cube along its partition."""
    out: list[str] = []
    for c, p in zip(target, partitions):
        out.extend(K.face_word(c, w) for w in p.words())
    return tuple(out)


def check_morphism(f: ChainMorphism) -> None:
    K = f.target.K
    if len(f.partitions) != len(f.target):
        raise InvalidPartition("need one partition per target cube")
    for c, p in zip(f.target.cubes, f.partitions):
        if p.size != K.dim(c):
            raise InvalidPartition(f"partition of size {p.size} for cube {c!r} of dimension {K.dim(c)}")
    if induced_source(K, f.target.cubes, f.partitions) != f.source.cubes:
        raise InvalidPartition("source cubes are not the faces selected by the partitions")


def identity(chain: CubeChain) -> ChainMorphism:
    return ChainMorphism(chain, chain, tuple(OrderedPartition([range(1, d + 1)]) for d in chain.dims))


def _groupings(parts: Sequence[int], sums: Sequence[int]) -> Iterator[list[tuple[int, ...]]]:
    """Split ``parts`` into consecutive runs whose sums are ``sums``."""
    if not sums:
        if not parts:
            yield []
        return
    acc = 0
    for k, p in enumerate(parts):
        acc += p
        if acc == sums[0]:
            for rest in _groupings(parts[k + 1:], sums[1:]):
                yield [tuple(parts[: k + 1])] + rest
            return
        if acc > sums[0]:
            return


def morphisms_between(a: CubeChain, b: CubeChain) -> list[ChainMorphism]:
    """All morphisms a -> b over the underlying set, in partition order."""
    if a.length != b.length:
        return []
    K = b.K
    out: list[ChainMorphism] = []
    for grouping in _groupings(a.dims, b.dims):
        options = []
        offset = 0
        for c, sizes in zip(b.cubes, grouping):
            want = a.cubes[offset: offset + len(sizes)]
            offset += len(sizes)
            ok = [p for p in ordered_partitions(K.dim(c), sizes)
                  if tuple(K.face_word(c, w) for w in p.words()) == want]
            options.append(ok)
        for combo in itertools.product(*options):
            out.append(ChainMorphism(a, b, combo))
    return out


def compose(g: ChainMorphism, f: ChainMorphism) -> ChainMorphism:
    """g o f for f: a -> b and g: b -> c."""
    if f.target != g.source:
        raise SourceTargetMismatch(f"cannot compose: {f.target.label()} != {g.source.label()}")
    f_parts = iter(f.partitions)
    result = []
    for p in g.partitions:
        blocks: list[tuple[int, ...]] = []
        for block in p.blocks:
            blocks.extend(next(f_parts).transport(block))
        result.append(OrderedPartition(blocks))
    return ChainMorphism(f.source, g.target, tuple(result))


# ---------------------------------------------------------------------------
# the category


class ChainCategory:
    """Objects are the cube chains of one length; morphisms are stored by index.

    ``morphisms`` holds the non-identity morphisms only, sorted by
    (source index, target index, partitions); identities are implicit.
    """

    def __init__(self, K: PrecubicalSet, n: int, objects: Sequence[CubeChain], morphisms: Sequence[ChainMorphism]):
        self.K = K
        self.n = n
        self.objects = list(objects)
        self.index = {c.cubes: k for k, c in enumerate(self.objects)}
        keyed = sorted(
            ((self.index[f.source.cubes], self.index[f.target.cubes], f.partitions), f) for f in morphisms
        )
        self.morphisms = [f for _, f in keyed]
        self.src = [k[0] for k, _ in keyed]
        self.dst = [k[1] for k, _ in keyed]
        self._key = {k: m for m, (k, _) in enumerate(keyed)}
        self.out_edges: list[list[int]] = [[] for _ in self.objects]
        for m, s in enumerate(self.src):
            self.out_edges[s].append(m)

    def morphism_index(self, f: ChainMorphism) -> int | None:
        """Index of a non-identity morphism, None for identities."""
        if f.is_identity():
            return None
        return self._key[(self.index[f.source.cubes], self.index[f.target.cubes], f.partitions)]

    def compose_index(self, g: int, f: int) -> int:
        return self.morphism_index(compose(self.morphisms[g], self.morphisms[f]))

    def hom(self, a: int, b: int) -> list[int]:
        return [m for m in self.out_edges[a] if self.dst[m] == b]

    def components(self) -> int:
        """Connected components of the underlying graph."""
        parent = list(range(len(self.objects)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, d in zip(self.src, self.dst):
            parent[find(s)] = find(d)
        return len({find(x) for x in range(len(self.objects))})

    def to_json(self) -> dict:
        return {
            "length": self.n,
            "objects": [c.to_json() for c in self.objects],
            "morphisms": [
                {"src": s, "dst": d, "partitions": f.to_json()}
                for s, d, f in zip(self.src, self.dst, self.morphisms)
            ],
        }

    def to_dot(self) -> str:
        lines = [f'digraph "Ch(n={self.n})" {{', "  rankdir=BT;"]
        for k, c in enumerate(self.objects):
            lines.append(f'  o{k} [label="{c.label()}"];')
        for s, d, f in zip(self.src, self.dst, self.morphisms):
            lines.append(f'  o{s} -> o{d} [label="{f.signature()}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def category(K: PrecubicalSet, n: int, objects: Sequence[CubeChain] | None = None) -> ChainCategory:
    """Ch(K; n), generated target by target.

    For a target chain every choice of one ordered partition per cube
    determines its source, so the morphisms into a chain are enumerated
    directly instead of testing all pairs.
    """
    if objects is None:
        objects = enumerate_chains(K, n)
    by_cubes = {c.cubes: c for c in objects}
    cuts: dict[str, list[tuple[OrderedPartition, tuple[str, ...]]]] = {}
    morphisms = []
    for b in objects:
        options = []
        for c in b.cubes:
            if c not in cuts:
                cuts[c] = [
                    (p, tuple(K.face_word(c, w) for w in p.words())) for p in ordered_partitions(K.dim(c))
                ]
            options.append(cuts[c])
        for combo in itertools.product(*options):
            if all(len(p.blocks) == 1 for p, _ in combo):
                continue
            source = tuple(x for _, faces in combo for x in faces)
            a = by_cubes.get(source)
            if a is None:
                raise InvalidChain(f"face {source} of {b.label()} is not among the objects")
            morphisms.append(ChainMorphism(a, b, tuple(p for p, _ in combo)))
    return ChainCategory(K, n, objects, morphisms)


# ---------------------------------------------------------------------------
# paths along a chain


def assemble_path(chain: CubeChain, betas: Sequence):
    """The tame natural path [c_1; beta_1] * ... * [c_l; beta_l]."""
    from .dpath.presentation import PathPresentation, Segment, is_natural

    K = chain.K
    if len(betas) != len(chain):
        raise StageMismatch(f"{len(betas)} stage maps for a chain of {len(chain)} cubes")
    times = chain.type.vertices()
    segs = []
    for i, (c, beta) in enumerate(zip(chain.cubes, betas), start=1):
        d = K.dim(c)
        if beta.width != d:
            raise StageMismatch(f"stage {i}: width {beta.width} for a {d}-cube")
        if (beta.start, beta.end) != (times[i - 1], times[i]):
            raise StageMismatch(f"stage {i}: domain [{beta.start}, {beta.end}] should be [{times[i - 1]}, {times[i]}]")
        if any(v != 0 for v in beta.first) or any(v != 1 for v in beta.last):
            raise StageMismatch(f"stage {i}: map must run from 0 to 1")
        segs.append(Segment(c, beta))
    pres = PathPresentation(K, segs)
    if not is_natural(pres):
        raise StageMismatch("stage maps are not naturally parametrized")
    return pres
