"""Finite bi-pointed pre-cubical sets.

Cubes are addressed by opaque string identifiers.  Face indices are 1-based
in every public function (``face(c, i, eps)`` is d^eps_i), matching the JSON
model format; internally face lists are plain 0-based tuples.

Faces of a cube ``c`` of dimension ``m`` are also addressed by *face words*:
strings over ``{'0', '1', '*'}`` of length ``m``.  The word ``w`` names the
image of the corresponding cube of the standard cube under the unique map
sending the top cube to ``c``; e.g. ``"*0"`` is the bottom edge of a square.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence


class ModelError(ValueError):
    """Malformed model input (duplicate ids, dangling references, ...)."""


@dataclass(frozen=True)
class Cube:
    id: str
    dim: int
    d0: tuple[str, ...]
    d1: tuple[str, ...]


@dataclass(frozen=True)
class Violation:
    kind: str
    cube: str
    message: str
    indices: tuple = ()
    ids: tuple = ()

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "cube": self.cube,
            "message": self.message,
            "indices": list(self.indices),
            "ids": list(self.ids),
        }


class PrecubicalSet:
    """A finite pre-cubical set with initial vertex ``start`` and final ``end``.

    Instances are immutable; the only internal state that changes after
    construction is a memo table of face words, which is a pure cache.
    """

    def __init__(self, cubes: Iterable[Cube], start: str, end: str, name: str | None = None):
        table: dict[str, Cube] = {}
        for cube in cubes:
            if cube.id in table:
                raise ModelError(f"duplicate cube id {cube.id!r}")
            if cube.dim < 0 or len(cube.d0) != cube.dim or len(cube.d1) != cube.dim:
                raise ModelError(f"cube {cube.id!r}: face lists must have length dim={cube.dim}")
            table[cube.id] = cube
        self._cubes = table
        self.start = start
        self.end = end
        self.name = name
        self._words: dict[tuple[str, str], str] = {}
        self._by_initial: dict[str, tuple[str, ...]] | None = None

    # -- basic access ---------------------------------------------------

    def __contains__(self, cid: str) -> bool:
        return cid in self._cubes

    def __iter__(self):
        return iter(self._cubes.values())

    def __len__(self) -> int:
        return len(self._cubes)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<PrecubicalSet{label} counts={self.counts()} start={self.start!r} end={self.end!r}>"

    def cube(self, cid: str) -> Cube:
        try:
            return self._cubes[cid]
        except KeyError:
            raise KeyError(f"unknown cube {cid!r}") from None

    def ids(self) -> list[str]:
        return list(self._cubes)

    def dim(self, cid: str) -> int:
        return self.cube(cid).dim

    def cubes_of_dim(self, k: int) -> list[str]:
        return sorted(c.id for c in self._cubes.values() if c.dim == k)

    def max_dim(self) -> int:
        return max((c.dim for c in self._cubes.values()), default=-1)

    def counts(self) -> tuple[int, ...]:
        """Number of cubes in each dimension 0..max_dim."""
        top = self.max_dim()
        out = [0] * (top + 1)
        for c in self._cubes.values():
            out[c.dim] += 1
        return tuple(out)

    def face(self, cid: str, i: int, eps: int) -> str:
        """d^eps_i(c) with 1-based ``i``."""
        c = self.cube(cid)
        if not 1 <= i <= c.dim:
            raise IndexError(f"face index {i} out of range for {cid!r} of dim {c.dim}")
        return (c.d1 if eps else c.d0)[i - 1]

    # -- face words ------------------------------------------------------

    def face_word(self, cid: str, word: str) -> str:
        """The face of ``cid`` at position ``word`` (see module docstring)."""
        if len(word) != self.dim(cid):
            raise ValueError(f"word {word!r} has wrong length for {cid!r}")
        key = (cid, word)
        hit = self._words.get(key)
        if hit is not None:
            return hit
        last = max((j for j, ch in enumerate(word) if ch != "*"), default=None)
        if last is None:
            result = cid
        else:
            parent = word[:last] + "*" + word[last + 1:]
            k = parent[: last + 1].count("*")
            result = self.face(self.face_word(cid, parent), k, int(word[last]))
        self._words[key] = result
        return result

    def all_faces(self, cid: str) -> dict[str, str]:
        """Every face word of ``cid`` mapped to the cube it names."""
        m = self.dim(cid)
        return {"".join(w): self.face_word(cid, "".join(w)) for w in itertools.product("01*", repeat=m)}

    def initial_index(self) -> dict[str, tuple[str, ...]]:
        """Vertex -> cubes of positive dimension having it as initial vertex (sorted ids)."""
        if self._by_initial is None:
            index: dict[str, list[str]] = {}
            for c in self._cubes.values():
                if c.dim > 0:
                    index.setdefault(extreme_vertex(self, c.id, 0), []).append(c.id)
            self._by_initial = {v: tuple(sorted(cs)) for v, cs in index.items()}
        return self._by_initial

    # -- derived sets ------------------------------------------------------

    def relabeled(self, mapping: dict[str, str]) -> "PrecubicalSet":
        """Copy with every identifier renamed through ``mapping``."""
        def r(x: str) -> str:
            return mapping.get(x, x)

        cubes = [Cube(r(c.id), c.dim, tuple(map(r, c.d0)), tuple(map(r, c.d1))) for c in self._cubes.values()]
        return PrecubicalSet(cubes, r(self.start), r(self.end), self.name)

    def skeleton(self, k: int) -> "PrecubicalSet":
        cubes = [c for c in self._cubes.values() if c.dim <= k]
        return PrecubicalSet(cubes, self.start, self.end, self.name)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        doc: dict = {}
        if self.name is not None:
            doc["name"] = self.name
        doc["cubes"] = [
            {"id": c.id, "dim": c.dim, "d0": list(c.d0), "d1": list(c.d1)} for c in self._cubes.values()
        ]
        doc["start"] = self.start
        doc["end"] = self.end
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "PrecubicalSet":
        """Load the JSON model format, rejecting structurally broken input."""
        try:
            raw = doc["cubes"]
            start, end = doc["start"], doc["end"]
            cubes = [Cube(str(e["id"]), int(e["dim"]), tuple(e["d0"]), tuple(e["d1"])) for e in raw]
        except (KeyError, TypeError) as exc:
            raise ModelError(f"malformed model document: {exc}") from exc
        K = cls(cubes, start, end, doc.get("name"))
        for v in K.validate():
            if v.kind in ("dangling", "dimension", "basepoint"):
                raise ModelError(v.message)
        return K

    @classmethod
    def loads(cls, text: str) -> "PrecubicalSet":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelError(f"invalid JSON: {exc}") from exc
        return cls.from_json_dict(doc)

    @classmethod
    def load(cls, path) -> "PrecubicalSet":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())

    def validate(self) -> list[Violation]:
        return validate(self)


# ---------------------------------------------------------------------------
# validation and face algebra


def validate(K: PrecubicalSet) -> list[Violation]:
    """All invariant violations of ``K``; empty iff ``K`` is a valid bi-pointed set."""
    out: list[Violation] = []
    for tag, v in (("start", K.start), ("end", K.end)):
        if v not in K:
            out.append(Violation("basepoint", v, f"{tag} vertex {v!r} does not exist"))
        elif K.dim(v) != 0:
            out.append(Violation("basepoint", v, f"{tag} {v!r} has dimension {K.dim(v)}, expected 0"))
    structural_ok = True
    for c in K:
        for eps, faces in ((0, c.d0), (1, c.d1)):
            for i, f in enumerate(faces, start=1):
                if f not in K:
                    structural_ok = False
                    out.append(Violation("dangling", c.id, f"d{eps}_{i}({c.id}) = {f!r} does not exist", (i, eps), (f,)))
                elif K.dim(f) != c.dim - 1:
                    structural_ok = False
                    out.append(
                        Violation(
                            "dimension",
                            c.id,
                            f"d{eps}_{i}({c.id}) = {f!r} has dimension {K.dim(f)}, expected {c.dim - 1}",
                            (i, eps),
                            (f,),
                        )
                    )
    if not structural_ok:
        return out
    for c in K:
        for i in range(1, c.dim + 1):
            for j in range(i + 1, c.dim + 1):
                for eps in (0, 1):
                    for eta in (0, 1):
                        lhs = K.face(K.face(c.id, j, eta), i, eps)
                        rhs = K.face(K.face(c.id, i, eps), j - 1, eta)
                        if lhs != rhs:
                            out.append(
                                Violation(
                                    "identity",
                                    c.id,
                                    f"d{eps}_{i} d{eta}_{j}({c.id}) = {lhs!r} but d{eta}_{j - 1} d{eps}_{i}({c.id}) = {rhs!r}",
                                    (i, j, eps, eta),
                                    (lhs, rhs),
                                )
                            )
    return out


def iterated_face(K: PrecubicalSet, cid: str, A: Iterable[int], eps: int) -> str:
    """d^eps_A(c) = d^eps_{a_1} o ... o d^eps_{a_k}(c) for A = {a_1 < ... < a_k}."""
    idx = sorted(set(A))
    m = K.dim(cid)
    if idx and (idx[0] < 1 or idx[-1] > m):
        raise IndexError(f"index set {idx} not contained in 1..{m}")
    for a in reversed(idx):
        cid = K.face(cid, a, eps)
    return cid


def extreme_vertex(K: PrecubicalSet, cid: str, eps: int) -> str:
    """Initial (eps=0) or final (eps=1) vertex of a cube."""
    return iterated_face(K, cid, range(1, K.dim(cid) + 1), eps)


def word_for(m: int, zeros: Iterable[int] = (), ones: Iterable[int] = ()) -> str:
    """Face word of length ``m`` with 1-based ``zeros``/``ones`` positions fixed."""
    w = ["*"] * m
    for j in zeros:
        w[j - 1] = "0"
    for j in ones:
        w[j - 1] = "1"
    return "".join(w)


def coface(x: Sequence, A: Iterable[int], eps: int, n: int | None = None) -> tuple:
    """Insert ``eps`` at the 1-based positions ``A``: delta^eps_A(x)."""
    A = sorted(set(A))
    if n is None:
        n = len(x) + len(A)
    if len(x) + len(A) != n or (A and (A[0] < 1 or A[-1] > n)):
        raise ValueError(f"coface size mismatch: |x|={len(x)}, A={A}, n={n}")
    it = iter(x)
    Aset = set(A)
    return tuple(Fraction(eps) if i in Aset else next(it) for i in range(1, n + 1))


def expand_word(word: str, x: Sequence) -> tuple:
    """Coordinates in the ambient cube of the point ``x`` of the face ``word``."""
    it = iter(x)
    out = tuple(Fraction(int(ch)) if ch != "*" else next(it) for ch in word)
    return out


def split_word(x: Sequence) -> tuple[str, tuple]:
    """Face word of the carrier of ``x`` inside its cube and the interior coordinates."""
    word = []
    rest = []
    for v in x:
        if v == 0:
            word.append("0")
        elif v == 1:
            word.append("1")
        else:
            word.append("*")
            rest.append(v)
    return "".join(word), tuple(rest)


@dataclass(frozen=True)
class Point:
    """The point [cube; coords] of the geometric realization."""

    cube: str
    coords: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(v) for v in self.coords))


def canonical_point(K: PrecubicalSet, p: Point) -> Point:
    """The unique presentation of ``p`` with no coordinate equal to 0 or 1."""
    if len(p.coords) != K.dim(p.cube):
        raise ValueError(f"point {p} has {len(p.coords)} coordinates, cube has dim {K.dim(p.cube)}")
    word, rest = split_word(p.coords)
    return Point(K.face_word(p.cube, word), rest)


def is_vertex_point(p: Point) -> bool:
    return all(v == 0 or v == 1 for v in p.coords)


# ---------------------------------------------------------------------------
# generators


def _words_set(n: int, name: str, max_dim: int | None = None) -> PrecubicalSet:
    cubes = []
    for w in itertools.product("01*", repeat=n):
        word = "".join(w)
        k = word.count("*")
        if max_dim is not None and k > max_dim:
            continue
        stars = [j for j, ch in enumerate(word) if ch == "*"]
        d0 = tuple(word[:s] + "0" + word[s + 1:] for s in stars)
        d1 = tuple(word[:s] + "1" + word[s + 1:] for s in stars)
        cubes.append(Cube(_word_id(word), k, tuple(map(_word_id, d0)), tuple(map(_word_id, d1))))
    return PrecubicalSet(cubes, _word_id("0" * n), _word_id("1" * n), name)


def _word_id(word: str) -> str:
    return word if word else "()"


def standard_cube(n: int) -> PrecubicalSet:
    """The standard n-cube; cubes are named by their {0,1,*}-words."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _words_set(n, f"cube{n}")


def boundary_cube(n: int) -> PrecubicalSet:
    """The (n-1)-skeleton of the standard n-cube."""
    if n < 1:
        raise ValueError("n must be positive")
    return _words_set(n, f"boundary{n}", max_dim=n - 1)


def wedge(parts: Sequence[int]) -> PrecubicalSet:
    """Wedge of standard cubes of the given dimensions, glued final-to-initial.

    Cubes of the k-th summand (1-based) are named ``"k:word"``; the initial
    vertex of summand k+1 is identified with (and named as) the final vertex
    of summand k.
    """
    if not parts or any(p < 1 for p in parts):
        raise ValueError("wedge needs a non-empty sequence of positive integers")
    cubes: list[Cube] = []
    rename: dict[str, str] = {}
    for k, m in enumerate(parts, start=1):
        if k > 1:
            rename[f"{k}:{'0' * m}"] = f"{k - 1}:{'1' * parts[k - 2]}"
        for c in standard_cube(m):
            def r(x: str, k=k) -> str:
                name = f"{k}:{x if x != '()' else ''}"
                return rename.get(name, name)

            if c.id == "0" * m and k > 1:
                continue
            cubes.append(Cube(r(c.id), c.dim, tuple(map(r, c.d0)), tuple(map(r, c.d1))))
    return PrecubicalSet(cubes, f"1:{'0' * parts[0]}", f"{len(parts)}:{'1' * parts[-1]}", f"wedge{tuple(parts)}")


def grid_complex(extents: Sequence[int], forbidden: Sequence[Sequence[Sequence[int]]] = (), name: str | None = None) -> PrecubicalSet:
    """Euclidean cubical complex on prod [0, N_i] minus cubes meeting open forbidden boxes.

    ``forbidden`` is a list of boxes, each a list of ``[lo, hi]`` pairs per
    axis.  A cube with base point ``x`` and free axes ``S`` is the closed box
    prod [x_i, x_i + [i in S]]; it is removed when it meets the open interior
    of any forbidden box.  Cube ids are ``"x1,x2,..."`` for vertices and
    ``"x1,x2,...+axes"`` (axes as 0-based digits) otherwise.
    """
    d = len(extents)
    if d == 0 or any(e < 1 for e in extents):
        raise ValueError("extents must be positive integers")
    for box in forbidden:
        if len(box) != d:
            raise ValueError(f"forbidden box {box} has wrong dimension")

    def blocked(base: tuple[int, ...], axes: tuple[int, ...]) -> bool:
        for box in forbidden:
            if all(base[i] < box[i][1] and base[i] + (1 if i in axes else 0) > box[i][0] for i in range(d)):
                return True
        return False

    def cid(base, axes) -> str:
        s = ",".join(map(str, base))
        return s + ("+" + "".join(map(str, axes)) if axes else "")

    cubes = []
    for axes_len in range(d + 1):
        for axes in itertools.combinations(range(d), axes_len):
            ranges = [range(extents[i]) if i in axes else range(extents[i] + 1) for i in range(d)]
            for base in itertools.product(*ranges):
                if blocked(base, axes):
                    continue
                d0, d1 = [], []
                for a in axes:
                    rest = tuple(x for x in axes if x != a)
                    d0.append(cid(base, rest))
                    up = list(base)
                    up[a] += 1
                    d1.append(cid(tuple(up), rest))
                cubes.append(Cube(cid(base, axes), len(axes), tuple(d0), tuple(d1)))
    start = cid((0,) * d, ())
    end = cid(tuple(extents), ())
    return PrecubicalSet(cubes, start, end, name or f"grid{tuple(extents)}")


def double_cube() -> PrecubicalSet:
    """Two 3-cubes ``c`` and ``c'`` glued along their common boundary."""
    base = boundary_cube(3)
    cubes = list(base)
    stars = [0, 1, 2]
    d0 = tuple("***"[:s] + "0" + "***"[s + 1:] for s in stars)
    d1 = tuple("***"[:s] + "1" + "***"[s + 1:] for s in stars)
    cubes.append(Cube("c", 3, d0, d1))
    cubes.append(Cube("c'", 3, d0, d1))
    return PrecubicalSet(cubes, "000", "111", "double_cube")


def expected_cube_counts(n: int) -> tuple[int, ...]:
    return tuple(comb(n, k) * 2 ** (n - k) for k in range(n + 1))
