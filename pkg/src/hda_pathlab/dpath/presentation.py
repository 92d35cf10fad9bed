"""Presentations of d-paths: consecutive segments [cube; PL map]."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..precubical import Point, PrecubicalSet, canonical_point
from .pl import PLMap, PLMapError, frac


class PresentationError(ValueError):
    pass


class ConstantPath(PresentationError):
    pass


@dataclass(frozen=True)
class Segment:
    cube: str
    map: PLMap

    @property
    def start(self) -> Fraction:
        return self.map.start

    @property
    def end(self) -> Fraction:
        return self.map.end


class PathPresentation:
    """A d-path given as ``[c_1; beta_1] * ... * [c_l; beta_l]`` on consecutive intervals."""

    def __init__(self, K: PrecubicalSet, segments: Iterable[Segment], check: bool = True):
        self.K = K
        self.segments: tuple[Segment, ...] = tuple(segments)
        if check:
            self._check()

    def _check(self) -> None:
        if not self.segments:
            raise PresentationError("a presentation needs at least one segment")
        for k, seg in enumerate(self.segments):
            if seg.cube not in self.K:
                raise PresentationError(f"segment {k}: unknown cube {seg.cube!r}")
            if seg.map.width != self.K.dim(seg.cube):
                raise PresentationError(
                    f"segment {k}: map width {seg.map.width} != dim({seg.cube}) = {self.K.dim(seg.cube)}"
                )
        for k in range(1, len(self.segments)):
            left, right = self.segments[k - 1], self.segments[k]
            if left.end != right.start:
                raise PresentationError(f"segments {k - 1},{k} are not consecutive in time")
            p = canonical_point(self.K, Point(left.cube, left.map.last))
            q = canonical_point(self.K, Point(right.cube, right.map.first))
            if p != q:
                raise PresentationError(f"segments {k - 1},{k} disagree at t={left.end}: {p} vs {q}")

    def __repr__(self) -> str:
        body = " * ".join(f"[{s.cube}; {len(s.map.times)} bp on [{s.start},{s.end}]]" for s in self.segments)
        return f"<PathPresentation {body}>"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PathPresentation):
            return NotImplemented
        return self.K is other.K and self.segments == other.segments

    def __hash__(self):
        return hash(self.segments)

    @classmethod
    def single(cls, K: PrecubicalSet, cube: str, points: Iterable[tuple]) -> "PathPresentation":
        return cls(K, [Segment(cube, PLMap.from_points(points))])

    @classmethod
    def of(cls, K: PrecubicalSet, *pieces: tuple[str, Iterable[tuple]]) -> "PathPresentation":
        """Build from ``(cube, [(t, values), ...])`` pairs."""
        return cls(K, [Segment(c, PLMap.from_points(pts)) for c, pts in pieces])

    # -- evaluation --------------------------------------------------------

    @property
    def start(self) -> Fraction:
        return self.segments[0].start

    @property
    def end(self) -> Fraction:
        return self.segments[-1].end

    def cubes(self) -> tuple[str, ...]:
        return tuple(s.cube for s in self.segments)

    def junctions(self) -> tuple[Fraction, ...]:
        """t_0 <= t_1 <= ... <= t_l."""
        return (self.start, *(s.end for s in self.segments))

    def breakpoints(self) -> list[Fraction]:
        out = set()
        for s in self.segments:
            out.update(s.map.times)
        return sorted(out)

    def segment_at(self, t) -> Segment:
        t = frac(t)
        for s in self.segments:
            if s.start <= t <= s.end:
                return s
        raise PresentationError(f"time {t} outside [{self.start}, {self.end}]")

    def point(self, t) -> Point:
        """Canonical presentation of alpha(t)."""
        s = self.segment_at(t)
        return canonical_point(self.K, Point(s.cube, s.map(t)))

    def initial_point(self) -> Point:
        return self.point(self.start)

    def final_point(self) -> Point:
        return self.point(self.end)

    def is_constant(self) -> bool:
        return all(s.map.first == s.map.last for s in self.segments)

    def to_json(self) -> dict:
        return {"segments": [{"cube": s.cube, "breakpoints": s.map.to_json()} for s in self.segments]}

    @classmethod
    def from_json(cls, K: PrecubicalSet, doc: dict) -> "PathPresentation":
        try:
            segs = [Segment(str(e["cube"]), PLMap.from_json(e["breakpoints"])) for e in doc["segments"]]
        except (KeyError, TypeError) as exc:
            raise PresentationError(f"malformed path document: {exc}") from exc
        except PLMapError as exc:
            raise PresentationError(str(exc)) from exc
        return cls(K, segs)


# ---------------------------------------------------------------------------


def path_length(pres: PathPresentation) -> Fraction:
    """L1-length: total coordinate increase over all segments."""
    return sum((s.map.increase() for s in pres.segments), Fraction(0))


def is_natural(pres: PathPresentation) -> bool:
    """Every affine piece runs at L1-speed exactly 1."""
    for s in pres.segments:
        m = s.map
        for k in range(1, len(m.times)):
            if sum(m.values[k]) - sum(m.values[k - 1]) != m.times[k] - m.times[k - 1]:
                return False
    return True


def naturalize(pres: PathPresentation) -> PathPresentation:
    """The arc-length parametrization nat(alpha) on [0, len(alpha)].

    Breakpoints keep their values and move to their cumulative length;
    stretches of zero length collapse.  A constant path becomes a single
    one-breakpoint segment at time 0.
    """
    segs: list[Segment] = []
    s_acc = Fraction(0)
    for seg in pres.segments:
        m = seg.map
        pts = [(s_acc, m.values[0])]
        for k in range(1, len(m.times)):
            step = sum(m.values[k]) - sum(m.values[k - 1])
            if step == 0:
                continue
            s_acc += step
            pts.append((s_acc, m.values[k]))
        if len(pts) > 1:
            segs.append(Segment(seg.cube, PLMap.from_points(pts).simplified()))
    if not segs:
        first = pres.segments[0]
        segs = [Segment(first.cube, PLMap.constant(first.map.first, 0))]
    return PathPresentation(pres.K, segs)


def vertices_of_path(pres: PathPresentation) -> frozenset:
    """Times at which the path sits at a vertex.

    Natural paths have no constancy intervals, so this is exact for them; for
    paths that rest at a vertex the endpoints of the resting interval are
    reported.
    """
    out = set()
    for s in pres.segments:
        for t, row in zip(s.map.times, s.map.values):
            if all(v == 0 or v == 1 for v in row):
                out.add(t)
    return frozenset(out)


def check_vertex_times(pres: PathPresentation) -> frozenset:
    """Vert(alpha) for a natural path 0 -> 1, asserted to consist of integers."""
    vert = vertices_of_path(pres)
    if not all(t.denominator == 1 for t in vert):
        raise PresentationError(f"natural path has non-integral vertex times {sorted(vert)}")
    return vert


def comparison_grid(*pres: PathPresentation) -> list[Fraction]:
    """Union of breakpoints plus two interior points of every gap.

    Two PL paths agreeing at all these times agree everywhere: on each gap
    both are affine inside a fixed carrier cube, and two interior samples
    pin down an affine map.
    """
    base = set()
    for p in pres:
        base.update(p.breakpoints())
    base = sorted(base)
    out = list(base)
    for a, b in zip(base, base[1:]):
        out.append(a + (b - a) / 3)
        out.append(a + 2 * (b - a) / 3)
    return sorted(out)


def paths_equal(p: PathPresentation, q: PathPresentation) -> bool:
    """Pointwise equality of the presented paths (same domain required)."""
    if p.start != q.start or p.end != q.end:
        return False
    return all(p.point(t) == q.point(t) for t in comparison_grid(p, q))


def tighten(pres: PathPresentation) -> list[Segment]:
    """Split at every breakpoint and move each affine piece into its carrier.

    On the open interval of an affine piece each coordinate is constant or
    strictly increasing, so the carrier is constant there; coordinates frozen
    at 0 or 1 over the piece are stripped by the matching face.
    """
    K = pres.K
    out: list[Segment] = []
    for s in pres.segments:
        m = s.map
        if len(m.times) == 1:
            continue
        for k in range(1, len(m.times)):
            x, y = m.values[k - 1], m.values[k]
            word = []
            keep = []
            for j, (a, b) in enumerate(zip(x, y)):
                if a == b and a in (0, 1):
                    word.append(str(int(a)))
                else:
                    word.append("*")
                    keep.append(j)
            cube = K.face_word(s.cube, "".join(word))
            piece = PLMap((m.times[k - 1], m.times[k]), (tuple(x[j] for j in keep), tuple(y[j] for j in keep)))
            out.append(Segment(cube, piece))
    if not out:
        s = pres.segments[0]
        p = canonical_point(K, Point(s.cube, s.map.first))
        out.append(Segment(p.cube, PLMap.constant(p.coords, s.start)))
    return out


def concatenate(*parts: PathPresentation) -> PathPresentation:
    """Concatenate presentations that meet in time and space."""
    segs: list[Segment] = []
    K = parts[0].K
    for p in parts:
        segs.extend(p.segments)
    return PathPresentation(K, segs)


def drop_degenerate(segments: Sequence[Segment]) -> list[Segment]:
    """Remove one-breakpoint segments unless nothing else is left."""
    kept = [s for s in segments if len(s.map.times) > 1]
    return kept if kept else [segments[0]]
