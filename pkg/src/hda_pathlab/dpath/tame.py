"""Tame paths: decision, tamification, minimal and regular nt-presentations.

An *nt-presentation* here is a natural presentation in tame form: every
segment runs from the initial vertex (all coordinates 0) to the final vertex
(all coordinates 1) of its cube, so the segment cubes form a cube chain.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..precubical import PrecubicalSet, expand_word, extreme_vertex
from .pl import PLMap, frac
from .presentation import (
    PathPresentation,
    PresentationError,
    Segment,
    is_natural,
    naturalize,
    path_length,
    paths_equal,
    tighten,
    vertices_of_path,
)


class NotTame(PresentationError):
    pass


class WrongLength(PresentationError):
    pass


class NotNaturalTame(PresentationError):
    pass


class DifferentPaths(PresentationError):
    pass


# ---------------------------------------------------------------------------
# deciding tameness


def _is_vertex_row(row) -> bool:
    return all(v == 0 or v == 1 for v in row)


def _groups(pieces: Sequence[Segment], K: PrecubicalSet):
    """Split tight pieces into vertex-to-vertex runs; rests at vertices are kept apart."""
    out = []
    current: list[Segment] = []
    for piece in pieces:
        if K.dim(piece.cube) == 0:
            if current:
                out.append(("run", current))
                current = []
            out.append(("rest", [piece]))
            continue
        current.append(piece)
        if _is_vertex_row(piece.map.last):
            out.append(("run", current))
            current = []
    if current:
        out.append(("run", current))
    return out


def _face_index(K: PrecubicalSet, cube: str) -> dict[str, list[str]]:
    inv: dict[str, list[str]] = {}
    for word, face in sorted(K.all_faces(cube).items()):
        inv.setdefault(face, []).append(word)
    return inv


def _lift_run(K: PrecubicalSet, run: Sequence[Segment]) -> Segment | None:
    """Present a vertex-to-vertex run as [c; beta] from 0 to 1 of a single cube c."""
    x = K.face_word(run[0].cube, "".join(str(int(v)) if v in (0, 1) else "*" for v in run[0].map.first))
    y = K.face_word(run[-1].cube, "".join(str(int(v)) if v in (0, 1) else "*" for v in run[-1].map.last))
    length = sum(p.map.increase() for p in run)
    if length.denominator != 1:
        return None
    m = int(length)
    candidates = [
        c
        for c in K.cubes_of_dim(m)
        if extreme_vertex(K, c, 0) == x and extreme_vertex(K, c, 1) == y
    ]
    zeros, ones = (Fraction(0),) * m, (Fraction(1),) * m
    for c in candidates:
        inv = _face_index(K, c)
        words: list[str] = []

        def search(k: int, prev: tuple) -> bool:
            if k == len(run):
                return prev == ones
            piece = run[k]
            for w in inv.get(piece.cube, ()):
                if expand_word(w, piece.map.first) != prev:
                    continue
                words.append(w)
                if search(k + 1, expand_word(w, piece.map.last)):
                    return True
                words.pop()
            return False

        if search(0, zeros):
            beta = run[0].map.embed(words[0])
            for piece, w in zip(run[1:], words[1:]):
                beta = beta.concat(piece.map.embed(w))
            return Segment(c, beta.simplified())
    return None


def to_tame_presentation(pres: PathPresentation) -> PathPresentation:
    """A presentation whose segments each run from 0 to 1 of their cube.

    The path is split at every time it sits at a vertex; each vertex-to-vertex
    run is then lifted into a single cube by searching the face positions of
    its carriers, which succeeds exactly when such a cube exists.
    """
    K = pres.K
    if pres.initial_point().cube != K.start or pres.final_point().cube != K.end:
        raise PresentationError("tameness is defined for paths from the start to the end vertex")
    pieces = tighten(pres)
    groups = _groups(pieces, K)
    lifted: list[tuple[str, Segment]] = []
    for kind, run in groups:
        if kind == "rest":
            lifted.append(("rest", run[0]))
            continue
        seg = _lift_run(K, run)
        if seg is None:
            raise NotTame(f"no cube carries the run on [{run[0].start}, {run[-1].end}]")
        lifted.append(("run", seg))
    runs = [s for kind, s in lifted if kind == "run"]
    if not runs:
        rest = lifted[0][1]
        return PathPresentation(K, [Segment(rest.cube, PLMap.constant((), pres.start, pres.end))])
    out: list[Segment] = []
    pending_start = None
    for kind, seg in lifted:
        if kind == "rest":
            if out:
                last = out[-1]
                ext = PLMap.constant(last.map.last, last.end, seg.end) if seg.end > last.end else None
                if ext is not None:
                    out[-1] = Segment(last.cube, last.map.concat(ext))
            elif pending_start is None:
                pending_start = seg.start
            continue
        if pending_start is not None and pending_start < seg.start:
            seg = Segment(seg.cube, PLMap.constant(seg.map.first, pending_start, seg.start).concat(seg.map))
            pending_start = None
        out.append(seg)
    return PathPresentation(K, out)


def is_tame(pres: PathPresentation) -> bool:
    try:
        to_tame_presentation(pres)
    except NotTame:
        return False
    return True


def in_tame_form(pres: PathPresentation) -> bool:
    """Every segment starts at all-0 and ends at all-1."""
    return all(
        all(v == 0 for v in s.map.first) and all(v == 1 for v in s.map.last) for s in pres.segments
    )


# ---------------------------------------------------------------------------
# the compression map R


def eval_R(n: int, t, h) -> Fraction:
    """R(t, h) = min(1, max(0, 4nt + 12n^2 h - 8n^2))."""
    t, h = frac(t), frac(h)
    return min(Fraction(1), max(Fraction(0), 4 * n * t + 12 * n * n * h - 8 * n * n))


def eval_R_s(s, n: int, t, h) -> Fraction:
    """Straight-line homotopy between the identity (s=0) and R (s=1)."""
    s, h = frac(s), frac(h)
    return s * eval_R(n, t, h) + (1 - s) * h


def _R_kinks(n: int):
    def kinks(t0, x0, t1, x1):
        slope = (x1 - x0) / (t1 - t0)
        rate = 4 * n + 12 * n * n * slope
        g0 = 4 * n * t0 + 12 * n * n * x0 - 8 * n * n
        return [t0 + (c - g0) / rate for c in (0, 1)]

    return kinks


def apply_R(pres: PathPresentation, n: int, s=1) -> PathPresentation:
    """R-bar^K_s: every coordinate h(t) of every segment replaced by R_s(t, h(t))."""
    s = frac(s)
    kinks = _R_kinks(n)
    fn = (lambda t, x: eval_R(n, t, x)) if s == 1 else (lambda t, x: eval_R_s(s, n, t, x))
    segs = [Segment(seg.cube, seg.map.compose_pointwise(fn, kinks)) for seg in pres.segments]
    return PathPresentation(pres.K, segs)


def apply_R_map(f: PLMap, n: int) -> PLMap:
    """R-bar on a single PL map of any width."""
    return f.compose_pointwise(lambda t, x: eval_R(n, t, x), _R_kinks(n))


def _integral_length(pres: PathPresentation) -> int:
    K = pres.K
    if pres.initial_point().cube != K.start or pres.final_point().cube != K.end:
        raise WrongLength("tamification needs a path from the start to the end vertex")
    length = path_length(pres)
    if length.denominator != 1:
        raise WrongLength(f"path length {length} is not an integer")
    return int(length)


def tamify(pres: PathPresentation) -> PathPresentation:
    """Tam = nat o R-bar o nat for a path of integral length n."""
    n = _integral_length(pres)
    if n == 0:
        return pres
    alpha = naturalize(pres)
    if alpha.start != 0 or alpha.end != n:
        raise WrongLength("naturalized domain is not [0, n]")
    return naturalize(apply_R(alpha, n))


def tamify_orbit(pres: PathPresentation) -> list[PathPresentation]:
    """alpha, Tam(alpha), Tam^2(alpha), ... up to the first iterate with unchanged Vert."""
    n = _integral_length(pres)
    cur = naturalize(pres)
    orbit = [cur]
    for _ in range(max(n, 1)):
        nxt = tamify(cur)
        orbit.append(nxt)
        if vertices_of_path(nxt) == vertices_of_path(cur):
            break
        cur = nxt
    return orbit


# ---------------------------------------------------------------------------
# nt-presentations


def _require_nt(pres: PathPresentation) -> None:
    if not is_natural(pres):
        raise NotNaturalTame("presentation is not naturally parametrized")
    if not in_tame_form(pres):
        raise NotNaturalTame("presentation is not in tame form (segments must run 0 -> 1)")
    K = pres.K
    if any(K.dim(s.cube) == 0 for s in pres.segments):
        raise NotNaturalTame("nt-presentations have no zero-dimensional segments")
    if extreme_vertex(K, pres.segments[0].cube, 0) != K.start or extreme_vertex(K, pres.segments[-1].cube, 1) != K.end:
        raise NotNaturalTame("presentation does not run from the start to the end vertex")


def _split(K: PrecubicalSet, seg: Segment, k: Fraction) -> tuple[Segment, Segment]:
    x = seg.map(k)
    A = [j for j, v in enumerate(x) if v == 1]
    B = [j for j, v in enumerate(x) if v == 0]
    assert len(A) + len(B) == len(x) and A and B
    word_first = "".join("0" if v == 0 else "*" for v in x)  # d0_B: B coordinates fixed at 0
    word_second = "".join("1" if v == 1 else "*" for v in x)  # d1_A
    first = Segment(K.face_word(seg.cube, word_first), seg.map.restrict(seg.start, k).select(A).simplified())
    second = Segment(K.face_word(seg.cube, word_second), seg.map.restrict(k, seg.end).select(B).simplified())
    return first, second


def minimal_presentation(pres: PathPresentation):
    """Split at every vertex time that is not a junction; returns (CubeChain, presentation)."""
    from ..chains import CubeChain

    _require_nt(pres)
    K = pres.K
    vert = vertices_of_path(pres)
    out: list[Segment] = []
    for seg in pres.segments:
        cur = seg
        for k in sorted(t for t in vert if seg.start < t < seg.end):
            first, cur = _split(K, cur, k)
            out.append(first)
        out.append(cur)
    result = PathPresentation(K, out)
    chain = CubeChain(K, result.cubes())
    assert vertices_of_path(result) == frozenset(result.junctions())
    return chain, result


def is_regular(pres: PathPresentation) -> bool:
    """Every segment passes through the interior of its cube."""
    _require_nt(pres)
    for seg in pres.segments:
        m = seg.map
        probes = list(m.values) + [
            tuple((a + b) / 2 for a, b in zip(m.values[k - 1], m.values[k])) for k in range(1, len(m.times))
        ]
        if not any(all(0 < v < 1 for v in row) for row in probes):
            return False
    return True


def regularize(pres: PathPresentation) -> PathPresentation:
    """Iterate Tam until Vert stabilizes; return the minimal nt-presentation reached."""
    orbit = tamify_orbit(pres)
    stable = orbit[-2] if len(orbit) > 1 else orbit[-1]
    _, minimal = minimal_presentation(naturalize(to_tame_presentation(stable)))
    return minimal


def same_presentation(p: PathPresentation, q: PathPresentation) -> bool:
    if p.cubes() != q.cubes():
        return False
    return all(
        a.map.simplified() == b.map.simplified() for a, b in zip(p.segments, q.segments)
    )


def presentations_equivalent(p1: PathPresentation, p2: PathPresentation, in_standard_cube: bool = False):
    """True / False, or None when minimal presentations differ and nothing decides it.

    ``in_standard_cube`` asserts that the underlying set is a sub-set of some
    standard cube, where minimal presentations are unique.
    """
    if not paths_equal(p1, p2):
        raise DifferentPaths("the presentations describe different paths")
    _, m1 = minimal_presentation(p1)
    _, m2 = minimal_presentation(p2)
    if same_presentation(m1, m2):
        return True
    if in_standard_cube or is_regular(m1) or is_regular(m2):
        return False
    return None
