"""Exact piecewise-linear maps [a, b] -> I^k with non-decreasing coordinates."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence


def frac(x) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}")
    return Fraction(x)


def frac_str(x: Fraction):
    """Emit an integer as int, everything else as a lowest-terms string."""
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class PLMapError(ValueError):
    pass


@dataclass(frozen=True)
class PLMap:
    """Breakpoints ``(times[k], values[k])`` joined by affine pieces.

    A single breakpoint denotes a map on the one-point domain ``[t, t]``.
    """

    times: tuple
    values: tuple

    def __post_init__(self):
        times = tuple(frac(t) for t in self.times)
        values = tuple(tuple(frac(v) for v in row) for row in self.values)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if not times or len(times) != len(values):
            raise PLMapError("need a non-empty list of breakpoints")
        width = len(values[0])
        for row in values:
            if len(row) != width:
                raise PLMapError("breakpoint values have inconsistent width")
            if any(v < 0 or v > 1 for v in row):
                raise PLMapError(f"value {row} outside [0,1]")
        for k in range(1, len(times)):
            if times[k] <= times[k - 1]:
                raise PLMapError("breakpoint times must be strictly increasing")
            if any(b < a for a, b in zip(values[k - 1], values[k])):
                raise PLMapError("coordinates must be non-decreasing")

    @classmethod
    def from_points(cls, points: Iterable[tuple]) -> "PLMap":
        pts = list(points)
        return cls(tuple(p[0] for p in pts), tuple(tuple(p[1]) for p in pts))

    @classmethod
    def constant(cls, value: Sequence, a, b=None) -> "PLMap":
        a = frac(a)
        if b is None or frac(b) == a:
            return cls((a,), (tuple(value),))
        return cls((a, frac(b)), (tuple(value), tuple(value)))

    @classmethod
    def linear(cls, a, b, x: Sequence, y: Sequence) -> "PLMap":
        return cls((a, b), (tuple(x), tuple(y)))

    # -- queries -------------------------------------------------------------

    @property
    def width(self) -> int:
        return len(self.values[0])

    @property
    def start(self) -> Fraction:
        return self.times[0]

    @property
    def end(self) -> Fraction:
        return self.times[-1]

    @property
    def first(self) -> tuple:
        return self.values[0]

    @property
    def last(self) -> tuple:
        return self.values[-1]

    def points(self) -> list[tuple]:
        return list(zip(self.times, self.values))

    def __call__(self, t) -> tuple:
        t = frac(t)
        ts = self.times
        if t < ts[0] or t > ts[-1]:
            raise PLMapError(f"time {t} outside [{ts[0]}, {ts[-1]}]")
        k = bisect_left(ts, t)
        if ts[k] == t:
            return self.values[k]
        t0, t1 = ts[k - 1], ts[k]
        lam = (t - t0) / (t1 - t0)
        return tuple(a + (b - a) * lam for a, b in zip(self.values[k - 1], self.values[k]))

    def coordinate(self, j: int) -> "PLMap":
        """The 0-based ``j``-th coordinate as a width-1 map."""
        return PLMap(self.times, tuple((row[j],) for row in self.values))

    def increase(self) -> Fraction:
        return sum(self.last) - sum(self.first)

    # -- constructions ---------------------------------------------------------

    def refine(self, extra: Iterable) -> "PLMap":
        """Same map with additional breakpoints at the given in-domain times."""
        ts = set(self.times)
        ts.update(frac(t) for t in extra if self.start <= frac(t) <= self.end)
        order = sorted(ts)
        return PLMap(tuple(order), tuple(self(t) for t in order))

    def restrict(self, a, b) -> "PLMap":
        a, b = frac(a), frac(b)
        if a < self.start or b > self.end or b < a:
            raise PLMapError(f"cannot restrict [{self.start}, {self.end}] to [{a}, {b}]")
        if a == b:
            return PLMap((a,), (self(a),))
        inner = [t for t in self.times if a < t < b]
        order = [a, *inner, b]
        return PLMap(tuple(order), tuple(self(t) for t in order))

    def simplified(self) -> "PLMap":
        """Drop breakpoints where the map is affine across."""
        pts = self.points()
        if len(pts) <= 2:
            return self
        keep = [pts[0]]
        for k in range(1, len(pts) - 1):
            (t0, v0), (t1, v1), (t2, v2) = keep[-1], pts[k], pts[k + 1]
            lam = (t1 - t0) / (t2 - t0)
            if all(a + (c - a) * lam == b for a, b, c in zip(v0, v1, v2)):
                continue
            keep.append(pts[k])
        keep.append(pts[-1])
        return PLMap.from_points(keep)

    def select(self, coords: Sequence[int]) -> "PLMap":
        """Keep only the 0-based coordinates listed (in the given order)."""
        return PLMap(self.times, tuple(tuple(row[j] for j in coords) for row in self.values))

    def drop(self, j: int) -> "PLMap":
        keep = [k for k in range(self.width) if k != j]
        return self.select(keep)

    def embed(self, word: str) -> "PLMap":
        """Insert constant 0/1 coordinates according to a face word."""
        from ..precubical import expand_word

        return PLMap(self.times, tuple(expand_word(word, row) for row in self.values))

    def concat(self, other: "PLMap") -> "PLMap":
        if other.start != self.end:
            raise PLMapError("maps are not consecutive in time")
        if other.first != self.last:
            raise PLMapError("maps disagree at the junction")
        if len(other.times) == 1:
            return self
        if len(self.times) == 1:
            return other
        return PLMap(self.times + other.times[1:], self.values + other.values[1:])

    def shifted(self, dt) -> "PLMap":
        dt = frac(dt)
        return PLMap(tuple(t + dt for t in self.times), self.values)

    def reparametrize(self, new_times: Sequence) -> "PLMap":
        """Same breakpoint values at new (strictly increasing) times."""
        return PLMap(tuple(new_times), self.values)

    def compose_pointwise(self, fn: Callable[[Fraction, Fraction], Fraction], kinks: Callable[[Fraction, Fraction, Fraction, Fraction], Iterable]) -> "PLMap":
        """Map t -> (fn(t, x_1(t)), ..., fn(t, x_k(t))).

        ``fn`` must be piecewise affine in (t, x); ``kinks(t0, x0, t1, x1)``
        returns the times inside (t0, t1) where ``fn`` composed with the affine
        coordinate through (t0, x0), (t1, x1) changes slope.  The result is
        exact because ``fn`` is affine between consecutive kinks.
        """
        extra = set()
        for k in range(1, len(self.times)):
            t0, t1 = self.times[k - 1], self.times[k]
            for j in range(self.width):
                for s in kinks(t0, self.values[k - 1][j], t1, self.values[k][j]):
                    if t0 < s < t1:
                        extra.add(s)
        dense = self.refine(extra)
        rows = tuple(tuple(fn(t, x) for x in row) for t, row in zip(dense.times, dense.values))
        return PLMap(dense.times, rows).simplified()

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> list:
        return [[frac_str(t), [frac_str(v) for v in row]] for t, row in zip(self.times, self.values)]

    @classmethod
    def from_json(cls, data) -> "PLMap":
        try:
            return cls.from_points((frac(t), [frac(v) for v in row]) for t, row in data)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise PLMapError(f"malformed breakpoint list: {exc}") from exc


def merge_times(*maps: PLMap) -> list[Fraction]:
    out = set()
    for m in maps:
        out.update(m.times)
    return sorted(out)


def index_at(times: Sequence[Fraction], t: Fraction) -> int:
    return bisect_right(times, t) - 1
