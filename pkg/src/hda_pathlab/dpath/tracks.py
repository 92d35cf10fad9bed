"""Tracks, track extraction from a presentation, and the action table of a track."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..precubical import PrecubicalSet, iterated_face
from .pl import PLMap
from .presentation import ConstantPath, PathPresentation, PresentationError, Segment


@dataclass(frozen=True)
class TrackEntry:
    cube: str
    A: frozenset
    B: frozenset

    def __init__(self, cube: str, A: Iterable[int], B: Iterable[int]):
        object.__setattr__(self, "cube", cube)
        object.__setattr__(self, "A", frozenset(A))
        object.__setattr__(self, "B", frozenset(B))


@dataclass(frozen=True)
class Track:
    K: PrecubicalSet = field(compare=False, repr=False)
    entries: tuple

    def __init__(self, K: PrecubicalSet, entries: Iterable):
        object.__setattr__(self, "K", K)
        object.__setattr__(
            self, "entries", tuple(e if isinstance(e, TrackEntry) else TrackEntry(*e) for e in entries)
        )

    def __len__(self) -> int:
        return len(self.entries)

    def dims(self) -> list[int]:
        return [self.K.dim(e.cube) for e in self.entries]

    def to_json(self) -> dict:
        return {"entries": [{"cube": e.cube, "A": sorted(e.A), "B": sorted(e.B)} for e in self.entries]}

    @classmethod
    def from_json(cls, K: PrecubicalSet, doc: dict) -> "Track":
        return cls(K, [TrackEntry(str(e["cube"]), map(int, e["A"]), map(int, e["B"])) for e in doc["entries"]])


def validate_track(t: Track) -> list[str]:
    """Violations of the track conditions (a)-(d); empty iff ``t`` is a track."""
    K = t.K
    out: list[str] = []
    if not t.entries:
        return ["empty track"]
    for i, e in enumerate(t.entries, start=1):
        if e.cube not in K:
            out.append(f"stage {i}: unknown cube {e.cube!r}")
            continue
        m = K.dim(e.cube)
        for name, S in (("A", e.A), ("B", e.B)):
            if any(j < 1 or j > m for j in S):
                out.append(f"stage {i}: {name}={sorted(S)} not within 1..{m}")
    if out:
        return out
    first, last = t.entries[0], t.entries[-1]
    if iterated_face(K, first.cube, first.A, 0) != K.start:
        out.append(f"(a): d0_A1({first.cube}) = {iterated_face(K, first.cube, first.A, 0)!r} is not the start vertex")
    if iterated_face(K, last.cube, last.B, 1) != K.end:
        out.append(f"(b): d1_Bl({last.cube}) = {iterated_face(K, last.cube, last.B, 1)!r} is not the end vertex")
    for i in range(len(t.entries) - 1):
        e, f = t.entries[i], t.entries[i + 1]
        lhs = iterated_face(K, e.cube, e.B, 1)
        rhs = iterated_face(K, f.cube, f.A, 0)
        if lhs != rhs:
            out.append(f"(c) at stage {i + 1}: d1_B({e.cube}) = {lhs!r} but d0_A({f.cube}) = {rhs!r}")
        if not (e.B or f.A):
            out.append(f"(d): B_{i + 1} and A_{i + 2} are both empty")
    if not first.A:
        out.append("(d): A_1 is empty")
    if not last.B:
        out.append("(d): B_l is empty")
    return out


def track_length(t: Track) -> int:
    a = sum(len(e.A) for e in t.entries)
    b = sum(len(e.B) for e in t.entries)
    assert a == b, f"sum |A_i| = {a} differs from sum |B_i| = {b}"
    return a


# ---------------------------------------------------------------------------
# extraction


def _drop_frozen(K: PrecubicalSet, seg: Segment) -> Segment | None:
    """Apply one drop-0 rule, else one drop-1 rule; None if neither applies."""
    m = seg.map
    for j, v in enumerate(m.last):
        if v == 0:
            return Segment(K.face(seg.cube, j + 1, 0), m.drop(j))
    for j, v in enumerate(m.first):
        if v == 1:
            return Segment(K.face(seg.cube, j + 1, 1), m.drop(j))
    return None


def _mergeable(left: Segment, right: Segment) -> bool:
    return all(v != 1 for v in left.map.last) and all(v != 0 for v in right.map.first)


def _extend(seg: Segment, other: Segment, before: bool) -> Segment:
    """Absorb a zero-dimensional or zero-duration neighbour into ``seg``."""
    m = seg.map
    if before:
        if other.start == m.start:
            return seg
        return Segment(seg.cube, PLMap.constant(m.first, other.start, m.start).concat(m))
    if other.end == m.end:
        return seg
    return Segment(seg.cube, m.concat(PLMap.constant(m.last, m.end, other.end)))


def normalize_presentation(pres: PathPresentation) -> PathPresentation:
    """Reduce ``l + sum dim(c_i)`` with the rules of the track-extraction argument.

    Rules, applied left to right until nothing changes: drop a coordinate
    frozen at 0 (then at 1) over a whole segment, merge two neighbours whose
    junction presentations are both canonical, and absorb zero-dimensional
    or single-instant segments into a neighbour.
    """
    K = pres.K
    segs = list(pres.segments)
    changed = True
    while changed:
        changed = False
        for k, seg in enumerate(segs):
            new = _drop_frozen(K, seg)
            if new is not None:
                segs[k] = new
                changed = True
                break
        if changed:
            continue
        for k in range(len(segs) - 1):
            if _mergeable(segs[k], segs[k + 1]):
                left, right = segs[k], segs[k + 1]
                assert left.cube == right.cube, "canonical junction with different carriers"
                segs[k : k + 2] = [Segment(left.cube, left.map.concat(right.map))]
                changed = True
                break
        if changed:
            continue
        if len(segs) > 1:
            for k, seg in enumerate(segs):
                if K.dim(seg.cube) == 0 or len(seg.map.times) == 1:
                    if k + 1 < len(segs):
                        segs[k : k + 2] = [_extend(segs[k + 1], seg, before=True)]
                    else:
                        segs[k - 1 : k + 1] = [_extend(segs[k - 1], seg, before=False)]
                    changed = True
                    break
    return PathPresentation(K, segs)


def extract_track(pres: PathPresentation) -> tuple[Track, PathPresentation]:
    """A track containing the path, with the normalized presentation lying in it."""
    K = pres.K
    if pres.is_constant():
        raise ConstantPath("a constant path lies in no track")
    if pres.initial_point().cube != K.start or pres.final_point().cube != K.end:
        raise PresentationError("track extraction needs a path from the start to the end vertex")
    norm = normalize_presentation(pres)
    entries = []
    for s in norm.segments:
        A = [j + 1 for j, v in enumerate(s.map.first) if v == 0]
        B = [j + 1 for j, v in enumerate(s.map.last) if v == 1]
        entries.append(TrackEntry(s.cube, A, B))
    track = Track(K, entries)
    problems = validate_track(track)
    assert not problems, problems
    return track, norm


# ---------------------------------------------------------------------------
# actions


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class Action:
    id: int
    beg: int
    end: int
    slot: dict  # stage -> 1-based coordinate r(p, i)

    def __hash__(self):
        return hash((self.id, self.beg, self.end))


@dataclass(frozen=True)
class ActionTable:
    track: Track
    actions: tuple

    def action_at(self, stage: int, r: int) -> Action:
        """The action [i, r]."""
        return self._index()[(stage, r)]

    def _index(self) -> dict:
        idx = getattr(self, "_idx", None)
        if idx is None:
            idx = {(i, r): p for p in self.actions for i, r in p.slot.items()}
            object.__setattr__(self, "_idx", idx)
        return idx

    def finished(self, i: int) -> list[Action]:
        """Actions with end(p) < i."""
        return [p for p in self.actions if p.end < i]

    def active(self, i: int) -> list[Action]:
        return [p for p in self.actions if p.beg <= i <= p.end]

    def unstarted(self, i: int) -> list[Action]:
        return [p for p in self.actions if i < p.beg]

    def to_json(self) -> dict:
        return {
            "actions": [
                {"id": p.id, "beg": p.beg, "end": p.end, "slot": {str(i): r for i, r in sorted(p.slot.items())}}
                for p in self.actions
            ]
        }


def action_table(t: Track) -> ActionTable:
    """Quotient of local actions (i, r) by (i, bbar_i^j) ~ (i+1, abar_{i+1}^j)."""
    dims = t.dims()
    uf = _UnionFind()
    for i, m in enumerate(dims, start=1):
        for r in range(1, m + 1):
            uf.find((i, r))
    for i in range(1, len(dims)):
        e, f = t.entries[i - 1], t.entries[i]
        bbar = [r for r in range(1, dims[i - 1] + 1) if r not in e.B]
        abar = [r for r in range(1, dims[i] + 1) if r not in f.A]
        if len(bbar) != len(abar):
            raise ValueError(f"stage {i}: q_i mismatch ({len(bbar)} vs {len(abar)}); not a track")
        for x, y in zip(bbar, abar):
            uf.union((i, x), (i + 1, y))
    classes: dict = {}
    for key in sorted(uf.parent):
        classes.setdefault(uf.find(key), []).append(key)
    raw = []
    for members in classes.values():
        stages = [i for i, _ in members]
        slot = dict(members)
        if len(slot) != len(members):
            raise AssertionError("an action has two representatives at one stage")
        beg, end = min(stages), max(stages)
        if sorted(stages) != list(range(beg, end + 1)):
            raise AssertionError("active stages of an action are not an interval")
        raw.append((beg, slot[beg], end, slot))
    raw.sort(key=lambda x: (x[0], x[1]))
    actions = tuple(Action(k, beg, end, slot) for k, (beg, _, end, slot) in enumerate(raw, start=1))
    table = ActionTable(t, actions)
    _check_actions(table)
    return table


def _check_actions(table: ActionTable) -> None:
    t = table.track
    dims = t.dims()
    l = len(dims)
    if len(table.actions) != track_length(t):
        raise AssertionError("number of actions differs from the track length")
    for i, e in enumerate(t.entries, start=1):
        slots = sorted(p.slot[i] for p in table.active(i))
        if slots != list(range(1, dims[i - 1] + 1)):
            raise AssertionError(f"slots at stage {i} are not a bijection")
        for p in table.active(i):
            r = p.slot[i]
            if (p.beg == i) != (r in e.A) or (p.end == i) != (r in e.B):
                raise AssertionError(f"beg/end of action {p.id} disagree with A_{i}/B_{i}")
    for i in range(1, l):
        if not set(map(id, table.unstarted(i + 1))) <= set(map(id, table.unstarted(i))):
            raise AssertionError("unstarted sets are not decreasing")
        if not set(map(id, table.finished(i))) <= set(map(id, table.finished(i + 1))):
            raise AssertionError("finished sets are not increasing")
