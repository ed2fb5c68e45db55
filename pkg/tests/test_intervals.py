from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtl2.intervals import (
    Interval,
    IntervalSet,
    erode,
    format_interval_set,
    interval_of,
    parse_interval_set,
    point,
)
from mtl2.syntax import IntervalSpec, spec_of_shape, SPEC_SHAPES

F = Fraction


# -- strategies ---------------------------------------------------------------

rationals = st.integers(0, 16 * 8).map(lambda k: F(k, 8))


@st.composite
def intervals(draw):
    lo = draw(rationals)
    if draw(st.booleans()):
        return Interval(lo, None, draw(st.booleans()), False)
    hi = draw(rationals.filter(lambda q: q >= lo))
    if hi == lo:
        return Interval(lo, hi, True, True)
    return Interval(lo, hi, draw(st.booleans()), draw(st.booleans()))


@st.composite
def interval_sets(draw):
    return IntervalSet.of(draw(st.lists(intervals(), max_size=6)))


@st.composite
def specs(draw):
    shape = draw(st.sampled_from(SPEC_SHAPES))
    m = draw(st.integers(0, 3))
    n = draw(st.integers(m + 1, 4))
    return spec_of_shape(shape, m, None if shape.endswith("inf") else n)


# -- basic algebra ------------------------------------------------------------


def test_interval_of_examples():
    assert interval_of(IntervalSpec(0, 1, True, True), F(0)) == Interval(F(0), F(1), True, True)
    assert interval_of(IntervalSpec(1, None, False, False), F(1, 2)) == Interval(
        F(3, 2), None, False, False
    )
    assert interval_of(IntervalSpec(0, 1, False, True), F(2)) == Interval(F(2), F(3), False, True)


def test_canonicalisation_merges():
    s = IntervalSet.of([Interval(F(0), F(1), True, False), Interval(F(1), F(2), True, True)])
    assert s == IntervalSet.of([Interval(F(0), F(2), True, True)])
    # a point-sized gap keeps components apart
    s2 = IntervalSet.of([Interval(F(0), F(1), True, False), Interval(F(1), F(2), False, True)])
    assert len(s2.parts) == 2
    assert not s2.contains(F(1))


def test_complement_examples():
    s = IntervalSet.of([Interval(F(0), F(2), True, True)])
    assert s.complement() == IntervalSet.of([Interval(F(2), None, False, False)])
    assert IntervalSet.empty().complement() == IntervalSet.full()
    hole = IntervalSet.of([Interval(F(1), F(2), False, False)])
    comp = hole.complement()
    assert comp.contains(F(1)) and comp.contains(F(2)) and not comp.contains(F(3, 2))


@given(interval_sets())
def test_complement_involutive(s):
    assert s.complement().complement() == s


@given(interval_sets(), interval_sets())
def test_union_commutes(a, b):
    assert a.union(b) == b.union(a)


@given(interval_sets(), interval_sets(), interval_sets())
@settings(max_examples=50)
def test_union_associates(a, b, c):
    assert a.union(b).union(c) == a.union(b.union(c))


@given(interval_sets())
def test_union_idempotent(a):
    assert a.union(a) == a


@given(interval_sets(), interval_sets())
def test_intersection_via_membership(a, b):
    inter = a.intersect(b)
    pts = set(a.endpoints() + b.endpoints() + inter.endpoints() + [F(0), F(1, 3)])
    for q in pts:
        assert inter.contains(q) == (a.contains(q) and b.contains(q))


# -- erosion ------------------------------------------------------------------


def test_erode_frozen_examples():
    # window [x, x+1] inside [0,2] exactly when x in [0,1]
    t = IntervalSet.of([Interval(F(0), F(2), True, True)])
    assert erode(t, IntervalSpec(0, 1, True, True)) == IntervalSet.of(
        [Interval(F(0), F(1), True, True)]
    )
    assert erode(IntervalSet.empty(), IntervalSpec(0, 1, True, True)) == IntervalSet.empty()
    tail = IntervalSet.of([Interval(F(3), None, True, False)])
    assert erode(tail, IntervalSpec(0, None, True, False)) == tail


def oracle_points(t: IntervalSet, spec: IntervalSpec):
    """Critical values of x plus a denominator-16 grid."""
    pts = {F(0)}
    offsets = [F(spec.lower)] + ([] if spec.unbounded else [F(spec.upper)])
    for e in t.endpoints():
        for off in offsets:
            for nudge in (F(-1, 32), F(0), F(1, 32)):
                x = e - off + nudge
                if x >= 0:
                    pts.add(x)
    pts.update(F(k, 16) for k in range(0, 16 * 18))
    return sorted(pts)


def window_subset(t: IntervalSet, spec: IntervalSpec, x: Fraction) -> bool:
    w = interval_of(spec, x)
    return IntervalSet.of([w]).subset_of(t)


@given(interval_sets(), specs())
@settings(max_examples=200)
def test_erode_matches_pointwise_oracle(t, spec):
    result = erode(t, spec)
    for x in oracle_points(t, spec):
        assert result.contains(x) == window_subset(t, spec, x), (t, spec, x)


@given(interval_sets(), interval_sets(), specs())
@settings(max_examples=100)
def test_erode_monotone(t1, t2, spec):
    small = t1.intersect(t2)
    assert erode(small, spec).subset_of(erode(t1, spec))


# -- text format --------------------------------------------------------------


def test_text_roundtrip():
    s = IntervalSet.of([point(F(1, 2)), Interval(F(2), None, False, False)])
    assert parse_interval_set(format_interval_set(s)) == s
    assert format_interval_set(IntervalSet.empty()) == "empty"
    assert parse_interval_set("empty") == IntervalSet.empty()


@given(interval_sets())
def test_text_roundtrip_property(s):
    assert parse_interval_set(format_interval_set(s)) == s
