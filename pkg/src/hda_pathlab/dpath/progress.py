"""Progress functions of a track and the two maps between them and d-paths."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .pl import PLMap, frac_str
from .presentation import PathPresentation, PresentationError, Segment
from .tracks import ActionTable, Track, action_table


class NotATrackPresentation(PresentationError):
    pass


class InfeasibleProgressFunction(ValueError):
    pass


@dataclass(frozen=True)
class ProgressFunction:
    """One non-decreasing PL map [a, b] -> [0, 1] per action of a track."""

    table: ActionTable
    maps: dict  # action id -> width-1 PLMap

    @property
    def track(self) -> Track:
        return self.table.track

    @property
    def a(self) -> Fraction:
        return next(iter(self.maps.values())).start

    @property
    def b(self) -> Fraction:
        return next(iter(self.maps.values())).end

    def value(self, pid: int, t) -> Fraction:
        return self.maps[pid](t)[0]

    def support(self, pid: int) -> tuple[Fraction, Fraction]:
        """(a^p, b^p): f^p vanishes up to a^p and equals 1 from b^p on."""
        m = self.maps[pid]
        lo = max(t for t, v in zip(m.times, m.values) if v[0] == 0)
        hi = min(t for t, v in zip(m.times, m.values) if v[0] == 1)
        return lo, hi

    def junction_times(self) -> list[Fraction]:
        """The t_i = max_{end(p) <= i} b^p witnessing feasibility (raises if infeasible)."""
        l = len(self.track)
        sup = {p.id: self.support(p.id) for p in self.table.actions}
        times = [self.a]
        for i in range(1, l):
            left = [sup[p.id][1] for p in self.table.actions if p.end <= i]
            right = [sup[p.id][0] for p in self.table.actions if p.beg > i]
            lo = max(left, default=self.a)
            hi = min(right, default=self.b)
            if lo > hi:
                raise InfeasibleProgressFunction(f"no admissible t_{i}: {lo} > {hi}")
            times.append(max(lo, times[-1]))
        times.append(self.b)
        return times

    def is_feasible(self) -> bool:
        try:
            self._check_shape()
            self.junction_times()
        except InfeasibleProgressFunction:
            return False
        return True

    def _check_shape(self) -> None:
        ids = {p.id for p in self.table.actions}
        if set(self.maps) != ids:
            raise InfeasibleProgressFunction("progress function must have one map per action")
        spans = {(m.start, m.end) for m in self.maps.values()}
        if len(spans) != 1:
            raise InfeasibleProgressFunction("component maps have different domains")
        for pid, m in self.maps.items():
            if m.width != 1:
                raise InfeasibleProgressFunction(f"map of action {pid} is not real-valued")
            if m.first != (0,) or m.last != (1,):
                raise InfeasibleProgressFunction(f"map of action {pid} does not run from 0 to 1")

    def to_json(self) -> dict:
        return {
            "track": self.track.to_json(),
            "actions": {str(pid): m.to_json() for pid, m in sorted(self.maps.items())},
            "supports": {str(pid): [frac_str(x) for x in self.support(pid)] for pid in sorted(self.maps)},
        }


def check_track_presentation(pres: PathPresentation, track: Track) -> None:
    """Raise NotATrackPresentation unless ``pres`` lies in ``track`` stage by stage."""
    if len(pres.segments) != len(track):
        raise NotATrackPresentation(f"{len(pres.segments)} segments for a track of length {len(track)}")
    for i, (s, e) in enumerate(zip(pres.segments, track.entries), start=1):
        if s.cube != e.cube:
            raise NotATrackPresentation(f"stage {i}: segment cube {s.cube!r} != track cube {e.cube!r}")
    first, last = pres.segments[0], pres.segments[-1]
    if any(first.map.first[j - 1] != 0 for j in track.entries[0].A):
        raise NotATrackPresentation("first segment does not start at 0 on A_1")
    if any(last.map.last[j - 1] != 1 for j in track.entries[-1].B):
        raise NotATrackPresentation("last segment does not end at 1 on B_l")
    for i in range(len(track) - 1):
        s, u = pres.segments[i], pres.segments[i + 1]
        e, f = track.entries[i], track.entries[i + 1]
        x, y = s.map.last, u.map.first
        if any(x[j - 1] != 1 for j in e.B):
            raise NotATrackPresentation(f"stage {i + 1}: beta_i(t_i) is not 1 on B_i")
        if any(y[j - 1] != 0 for j in f.A):
            raise NotATrackPresentation(f"stage {i + 2}: beta_(i+1)(t_i) is not 0 on A_(i+1)")
        xs = [x[j] for j in range(len(x)) if j + 1 not in e.B]
        ys = [y[j] for j in range(len(y)) if j + 1 not in f.A]
        if xs != ys:
            raise NotATrackPresentation(f"junction {i + 1}: free coordinates disagree ({xs} vs {ys})")


def progress_from_path(pres: PathPresentation, track: Track) -> ProgressFunction:
    """f_alpha: each action's coordinate read through the stages where it is active."""
    check_track_presentation(pres, track)
    table = action_table(track)
    t = pres.junctions()
    a, b = t[0], t[-1]
    maps = {}
    for p in table.actions:
        pieces: list[PLMap] = []
        if t[p.beg - 1] > a:
            pieces.append(PLMap.constant((0,), a, t[p.beg - 1]))
        for i in range(p.beg, p.end + 1):
            pieces.append(pres.segments[i - 1].map.coordinate(p.slot[i] - 1))
        if t[p.end] < b:
            pieces.append(PLMap.constant((1,), t[p.end], b))
        f = pieces[0]
        for piece in pieces[1:]:
            f = f.concat(piece)
        maps[p.id] = f.simplified()
    pf = ProgressFunction(table, maps)
    pf._check_shape()
    return pf


def stage_windows(f: ProgressFunction) -> list[tuple[Fraction, Fraction]]:
    """[a_i^f, b_i^f] for every stage."""
    table = f.table
    sup = {p.id: f.support(p.id) for p in table.actions}
    out = []
    for i in range(1, len(f.track) + 1):
        lo = max((sup[p.id][1] for p in table.finished(i)), default=f.a)
        hi = min((sup[p.id][0] for p in table.unstarted(i)), default=f.b)
        out.append((lo, hi))
    return out


def path_from_progress(f: ProgressFunction) -> PathPresentation:
    """The d-path alpha^f assembled from the stage pieces [c_i; beta_i^f]."""
    f._check_shape()
    f.junction_times()
    track, table = f.track, f.table
    K = track.K
    windows = stage_windows(f)
    l = len(track)
    if windows[0][0] != f.a or windows[-1][1] != f.b:
        raise InfeasibleProgressFunction("stage windows do not reach the ends of the domain")
    for i in range(l - 1):
        if windows[i + 1][0] > windows[i][1]:
            raise InfeasibleProgressFunction(f"stage windows {i + 1} and {i + 2} leave a gap")
        if windows[i + 1][0] < windows[i][0] or windows[i + 1][1] < windows[i][1]:
            raise InfeasibleProgressFunction("stage windows are not monotone")
    cuts = [f.a] + [windows[i + 1][0] for i in range(l - 1)] + [f.b]
    segments = []
    for i in range(1, l + 1):
        lo, hi = cuts[i - 1], cuts[i]
        if lo == hi:
            continue
        entry = track.entries[i - 1]
        comps = [f.maps[table.action_at(i, r).id].restrict(lo, hi) for r in range(1, K.dim(entry.cube) + 1)]
        times = sorted({t for m in comps for t in m.times} | {lo, hi})
        rows = tuple(tuple(m(t)[0] for m in comps) for t in times)
        segments.append(Segment(entry.cube, PLMap(tuple(times), rows).simplified()))
    return PathPresentation(K, segments)
