"""Exact interval sets over the nonnegative rationals.

An `IntervalSet` is a canonical finite union of disjoint, non-mergeable
intervals with `Fraction` endpoints (upper endpoint None = unbounded).
All operations are exact; no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .syntax import IntervalSpec

Rational = Fraction


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Interval:
    lower: Fraction
    upper: Optional[Fraction]  # None = +oo
    lower_closed: bool
    upper_closed: bool

    def __post_init__(self):
        if self.lower < 0:
            raise ValueError("intervals live in the nonnegative rationals")
        if self.upper is None:
            if self.upper_closed:
                raise ValueError("unbounded interval cannot be upper-closed")
        else:
            if self.lower > self.upper:
                raise ValueError("empty interval")
            if self.lower == self.upper and not (self.lower_closed and self.upper_closed):
                raise ValueError("degenerate interval must be closed on both sides")

    def contains(self, q: Fraction) -> bool:
        if q < self.lower or (q == self.lower and not self.lower_closed):
            return False
        if self.upper is None:
            return True
        if q > self.upper or (q == self.upper and not self.upper_closed):
            return False
        return True

    def sample(self) -> Fraction:
        """Some point of the interval."""
        if self.lower_closed:
            return self.lower
        if self.upper is None:
            return self.lower + 1
        return (self.lower + self.upper) / 2


def point(q) -> Interval:
    q = Fraction(q)
    return Interval(q, q, True, True)


def _mergeable(a: Interval, b: Interval) -> bool:
    """Whether a and b (with a.lower <= b.lower) overlap or touch."""
    if a.upper is None:
        return True
    if b.lower < a.upper:
        return True
    if b.lower == a.upper:
        return a.upper_closed or b.lower_closed
    return False


def _merge(a: Interval, b: Interval) -> Interval:
    lower = a.lower
    lower_closed = a.lower_closed or (b.lower == a.lower and b.lower_closed)
    if a.upper is None or b.upper is None:
        return Interval(lower, None, lower_closed, False)
    if a.upper > b.upper:
        upper, upper_closed = a.upper, a.upper_closed
    elif b.upper > a.upper:
        upper, upper_closed = b.upper, b.upper_closed
    else:
        upper, upper_closed = a.upper, a.upper_closed or b.upper_closed
    return Interval(lower, upper, lower_closed, upper_closed)


def _sort_key(iv: Interval):
    return (iv.lower, not iv.lower_closed)


@dataclass(frozen=True)
class IntervalSet:
    parts: tuple

    def __post_init__(self):
        prev = None
        for iv in self.parts:
            if prev is not None:
                if _sort_key(prev) > _sort_key(iv) or _mergeable(prev, iv):
                    raise ValueError("interval set is not canonical")
            prev = iv

    @staticmethod
    def of(intervals: Iterable[Interval]) -> "IntervalSet":
        ivs = sorted(intervals, key=_sort_key)
        out: list[Interval] = []
        for iv in ivs:
            if out and _mergeable(out[-1], iv):
                out[-1] = _merge(out[-1], iv)
            else:
                out.append(iv)
        return IntervalSet(tuple(out))

    @staticmethod
    def empty() -> "IntervalSet":
        return IntervalSet(())

    @staticmethod
    def full() -> "IntervalSet":
        return IntervalSet((Interval(Fraction(0), None, True, False),))

    @property
    def is_empty(self) -> bool:
        return not self.parts

    def contains(self, q: Fraction) -> bool:
        return any(iv.contains(q) for iv in self.parts)

    # -- boolean algebra (complement relative to [0, oo))

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet.of(self.parts + other.parts)

    def complement(self) -> "IntervalSet":
        out = []
        cursor = Fraction(0)
        cursor_closed = True  # whether `cursor` itself is still outside the set
        for iv in self.parts:
            if iv.lower > cursor or (iv.lower == cursor and cursor_closed and not iv.lower_closed):
                out.append(Interval(cursor, iv.lower, cursor_closed, not iv.lower_closed))
            if iv.upper is None:
                return IntervalSet(tuple(out))
            cursor = iv.upper
            cursor_closed = not iv.upper_closed
        out.append(Interval(cursor, None, cursor_closed, False))
        return IntervalSet(tuple(out))

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        return self.complement().union(other.complement()).complement()

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersect(other.complement())

    def subset_of(self, other: "IntervalSet") -> bool:
        return self.difference(other).is_empty

    def endpoints(self) -> list[Fraction]:
        out = []
        for iv in self.parts:
            out.append(iv.lower)
            if iv.upper is not None:
                out.append(iv.upper)
        return out

    def sample_points(self) -> list[Fraction]:
        """One representative point per component."""
        return [iv.sample() for iv in self.parts]


# ---------------------------------------------------------------------------
# box semantics: shifted windows and erosion


def interval_of(spec: IntervalSpec, b: Fraction) -> Interval:
    """The window {d : b+m <= d <= b+n} with strictness per bracket flags."""
    if b < 0:
        raise ValueError("negative base point")
    lower = b + spec.lower
    if spec.unbounded:
        return Interval(lower, None, spec.lower_closed, False)
    return Interval(lower, b + spec.upper, spec.lower_closed, spec.upper_closed)


def erode(ts: IntervalSet, spec: IntervalSpec) -> IntervalSet:
    """{x >= 0 : interval_of(spec, x) is contained in ts}, exactly.

    A window is connected and the gaps between canonical components are
    nonempty, so a window fits iff it fits inside a single component.
    """
    out = []
    m = Fraction(spec.lower)
    n = None if spec.unbounded else Fraction(spec.upper)
    for comp in ts.parts:
        # lower end: x + m must not fall below the component
        lo = comp.lower - m
        lo_closed = comp.lower_closed or not spec.lower_closed
        # upper end: x + n must not exceed the component
        if n is None:
            if comp.upper is not None:
                continue
            hi, hi_closed = None, False
        elif comp.upper is None:
            hi, hi_closed = None, False
        else:
            hi = comp.upper - n
            hi_closed = comp.upper_closed or not spec.upper_closed
        # clamp to [0, oo)
        if lo < 0:
            lo, lo_closed = Fraction(0), True
        if hi is not None:
            if hi < lo or (hi == lo and not (lo_closed and hi_closed)):
                continue
        out.append(Interval(lo, hi, lo_closed, hi_closed))
    return IntervalSet.of(out)


# ---------------------------------------------------------------------------
# text format: "[0/1, 2/1]", "(1/2, oo)", sets joined with " u ", "empty"


def parse_interval(text: str) -> Interval:
    text = text.strip()
    if not text or text[0] not in "[(" or text[-1] not in "])":
        raise ValueError(f"bad interval: {text!r}")
    lower_closed = text[0] == "["
    upper_closed = text[-1] == "]"
    body = text[1:-1]
    lo_txt, hi_txt = body.split(",", 1)
    lower = parse_rational(lo_txt)
    hi_txt = hi_txt.strip()
    upper = None if hi_txt == "oo" else parse_rational(hi_txt)
    return Interval(lower, upper, lower_closed, upper_closed)


def format_interval(iv: Interval) -> str:
    lo = "[" if iv.lower_closed else "("
    hi = "]" if iv.upper_closed else ")"
    upper = "oo" if iv.upper is None else format_rational(iv.upper)
    return f"{lo}{format_rational(iv.lower)}, {upper}{hi}"


def parse_interval_set(text: str) -> IntervalSet:
    text = text.strip()
    if text == "empty":
        return IntervalSet.empty()
    return IntervalSet.of(parse_interval(p) for p in text.split(" u "))


def format_interval_set(ts: IntervalSet) -> str:
    if ts.is_empty:
        return "empty"
    return " u ".join(format_interval(iv) for iv in ts.parts)
