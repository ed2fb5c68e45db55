from fractions import Fraction

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtl2.grammar import parse_sequent
from mtl2.intervals import Interval, IntervalSet, interval_of, point
from mtl2.model import ModelDescription, Region, dumps_model, loads_model
from mtl2.semantics import (
    eval_relational,
    eval_sequent,
    exceeds_tested_fragment,
    external_cells,
    quantifier_candidates,
    term_value,
    truthset_external,
    truthset_internal,
)
from mtl2.syntax import (
    ELabel,
    ETerm,
    FAnd,
    FBox,
    FImp,
    FNot,
    FOr,
    ILabel,
    ITerm,
    IntervalSpec,
    PLetter,
    RAtom,
    RBigVee,
    RExists,
    RForall,
)

from .strategies import et_formulas, it_formulas, model_pool, random_model

F = Fraction


def simple_model(ext="[0/1, oo)", ints="[0/1, 2/1]", letter=0):
    from mtl2.intervals import parse_interval, parse_interval_set

    return ModelDescription.build(
        [Region(letter, parse_interval(ext), parse_interval_set(ints))]
    )


def test_term_values():
    m = ModelDescription.build([], {"X0": F(1, 2)}, {"x1": F(3)})
    assert term_value(ETerm("C", 2), m) == F(2)
    assert term_value(ETerm("X0", 1), m) == F(3, 2)
    assert term_value(ITerm("x1"), m) == F(3)
    assert term_value(ITerm("x0"), m) == F(0)  # default


def test_truthset_internal_examples():
    m = simple_model()
    assert truthset_internal(PLetter(0), F(0), m) == IntervalSet.of(
        [Interval(F(0), F(2), True, True)]
    )
    assert truthset_internal(FNot(PLetter(0)), F(0), m) == IntervalSet.of(
        [Interval(F(2), None, False, False)]
    )
    assert truthset_internal(FBox(IntervalSpec(0, 1, True, True), PLetter(0)), F(0), m) == (
        IntervalSet.of([Interval(F(0), F(1), True, True)])
    )


def test_truthset_external_examples():
    m = simple_model(ext="[0/1, 1/1]")
    beta = ILabel(ITerm("c"), PLetter(0))
    assert truthset_external(beta, m) == IntervalSet.of([Interval(F(0), F(1), True, True)])
    boxed = FBox(IntervalSpec(0, 1, True, True), beta)
    assert truthset_external(boxed, m) == IntervalSet.of([point(F(0))])
    taut = FImp(beta, beta)
    assert truthset_external(taut, m) == IntervalSet.full()


def test_eval_relational_examples():
    m = ModelDescription.build([])
    assert eval_relational(RAtom("<", ETerm("C"), ETerm("C", 1)), m)
    assert eval_relational(RBigVee(ETerm("C", 2)), m)
    dense = RExists("X2", FAnd(RAtom("<", ETerm("C"), ETerm("X2")), RAtom("<", ETerm("X2"), ETerm("C", 1))))
    assert eval_relational(dense, m)


def test_eval_sequent_examples():
    empty = ModelDescription.build([])
    assert eval_sequent(parse_sequent("C : c : p0 |- C : c : p0"), empty)
    assert not eval_sequent(parse_sequent("|- C : c : p0"), empty)
    total = simple_model(ext="[0/1, oo)", ints="[0/1, oo)")
    assert eval_sequent(parse_sequent("|- C : Box[0,1] c : Box[0,1] p0"), total)


def test_fragment_marker():
    shallow = RForall("x0", RAtom("<", ITerm("x0"), ITerm("c", 2)))
    assert not exceeds_tested_fragment(shallow)
    deep = RForall(
        "x0", RExists("x1", RForall("x2", RAtom("<", ITerm("x0"), ITerm("x2"))))
    )
    assert exceeds_tested_fragment(deep)


def test_model_file_roundtrip():
    m = ModelDescription.build(
        [Region(0, Interval(F(0), None, True, False), IntervalSet.of([point(F(1, 2))]))],
        {"X0": F(1, 2)},
        {"x0": F(0)},
    )
    assert loads_model(dumps_model(m)) == m


# -- pointwise oracle (independent of the interval-set implementation) ----------


def _breakpoints_internal(psi, a, m):
    match psi:
        case PLetter(k):
            pts = set()
            for r in m.regions:
                if r.letter == k and r.ext.contains(a):
                    pts.update(r.int_set.endpoints())
            return pts
        case FNot(b):
            return _breakpoints_internal(b, a, m)
        case FAnd(x, y) | FOr(x, y) | FImp(x, y):
            return _breakpoints_internal(x, a, m) | _breakpoints_internal(y, a, m)
        case FBox(spec, b):
            out = set()
            for e in _breakpoints_internal(b, a, m):
                out.add(max(e - spec.lower, F(0)))
                if spec.upper is not None:
                    out.add(max(e - spec.upper, F(0)))
            return out
    raise TypeError(psi)


def _window_probes(window, pts):
    inside = sorted(p for p in pts if window.contains(p))
    probes = set(inside)
    if window.lower_closed:
        probes.add(window.lower)
    fringe = sorted(probes | {window.lower} | ({window.upper} if window.upper is not None else set()))
    for lo, hi in zip(fringe, fringe[1:]):
        mid = (lo + hi) / 2
        if window.contains(mid):
            probes.add(mid)
    if window.upper is None:
        probes.add(max(fringe, default=window.lower) + 1)
    elif window.upper_closed:
        probes.add(window.upper)
    return probes


def holds_at_internal(psi, a, d, m):
    """Direct pointwise truth, deciding boxes by probing critical points."""
    match psi:
        case PLetter(k):
            return any(
                r.letter == k and r.ext.contains(a) and r.int_set.contains(d) for r in m.regions
            )
        case FNot(b):
            return not holds_at_internal(b, a, d, m)
        case FAnd(x, y):
            return holds_at_internal(x, a, d, m) and holds_at_internal(y, a, d, m)
        case FOr(x, y):
            return holds_at_internal(x, a, d, m) or holds_at_internal(y, a, d, m)
        case FImp(x, y):
            return (not holds_at_internal(x, a, d, m)) or holds_at_internal(y, a, d, m)
        case FBox(spec, b):
            window = interval_of(spec, d)
            probes = _window_probes(window, _breakpoints_internal(b, a, m))
            return all(holds_at_internal(b, a, q, m) for q in probes)
    raise TypeError(psi)


def _breakpoints_external(beta, m):
    match beta:
        case ILabel(_, _):
            pts = set(m.ext_boundaries())
            return pts
        case FNot(b):
            return _breakpoints_external(b, m)
        case FAnd(x, y) | FOr(x, y) | FImp(x, y):
            return _breakpoints_external(x, m) | _breakpoints_external(y, m)
        case FBox(spec, b):
            out = set()
            for e in _breakpoints_external(b, m):
                out.add(max(e - spec.lower, F(0)))
                if spec.upper is not None:
                    out.add(max(e - spec.upper, F(0)))
            return out
    raise TypeError(beta)


def holds_at_external(beta, a, m):
    match beta:
        case ILabel(t, psi):
            return holds_at_internal(psi, a, term_value(t, m), m)
        case FNot(b):
            return not holds_at_external(b, a, m)
        case FAnd(x, y):
            return holds_at_external(x, a, m) and holds_at_external(y, a, m)
        case FOr(x, y):
            return holds_at_external(x, a, m) or holds_at_external(y, a, m)
        case FImp(x, y):
            return (not holds_at_external(x, a, m)) or holds_at_external(y, a, m)
        case FBox(spec, b):
            window = interval_of(spec, a)
            probes = _window_probes(window, _breakpoints_external(b, m))
            return all(holds_at_external(b, q, m) for q in probes)
    raise TypeError(beta)


def _sample_points(ts: IntervalSet, extra):
    pts = set(extra)
    for e in ts.endpoints():
        pts.add(e)
        pts.add(e + F(1, 16))
        if e >= F(1, 16):
            pts.add(e - F(1, 16))
    pts.update(ts.sample_points())
    return pts


@given(it_formulas, st.integers(0, 2 ** 30))
@settings(max_examples=120, deadline=None)
def test_pointwise_coherence_internal(psi, seed):
    m = random_model(random.Random(seed))
    a = F(seed % 5, 2)
    ts = truthset_internal(psi, a, m)
    for d in _sample_points(ts, [F(0), F(1, 2), F(3), F(17, 8)]):
        assert ts.contains(d) == holds_at_internal(psi, a, d, m), (psi, a, d)


@given(et_formulas, st.integers(0, 2 ** 30))
@settings(max_examples=80, deadline=None)
def test_pointwise_coherence_external(beta, seed):
    m = random_model(random.Random(seed))
    ts = truthset_external(beta, m)
    for a in _sample_points(ts, [F(0), F(1, 2), F(3)]):
        assert ts.contains(a) == holds_at_external(beta, a, m), (beta, a)


# -- quantifier oracle -----------------------------------------------------------


def brute_force_relational(f, m, bound_k):
    grid = [F(j, 2) for j in range(0, 2 * (bound_k + 1) + 1)]

    def ev(g, env):
        match g:
            case RAtom(rel, a, b):
                va, vb = term_value(a, m, env), term_value(b, m, env)
                return va == vb if rel == "=" else va < vb
            case RBigVee(_):
                return True
            case FNot(x):
                return not ev(x, env)
            case FAnd(x, y):
                return ev(x, env) and ev(y, env)
            case FOr(x, y):
                return ev(x, env) or ev(y, env)
            case FImp(x, y):
                return (not ev(x, env)) or ev(y, env)
            case RForall(v, x):
                return all(ev(x, {**env, v: q}) for q in grid)
            case RExists(v, x):
                return any(ev(x, {**env, v: q}) for q in grid)
        raise TypeError(g)

    return ev(f, {})


def random_sentence(rng, qdepth=2, fdepth=2):
    """Random closed relational sentence with bounded quantifier/f depth."""
    scope = []

    def term():
        if scope and rng.random() < 0.7:
            base = rng.choice(scope)
        else:
            base = "c"
        return ITerm(base, rng.randint(0, fdepth))

    def formula(q_budget, depth):
        roll = rng.random()
        if depth <= 0 or roll < 0.45:
            if rng.random() < 0.1:
                return RBigVee(term())
            return RAtom(rng.choice(["<", "="]), term(), term())
        if q_budget > 0 and roll < 0.7:
            var = f"x{len(scope)}"
            scope.append(var)
            body = formula(q_budget - 1, depth - 1)
            scope.pop()
            return (RForall if rng.random() < 0.5 else RExists)(var, body)
        ctor = rng.choice([FNot, FAnd, FOr, FImp])
        if ctor is FNot:
            return FNot(formula(q_budget, depth - 1))
        return ctor(formula(q_budget, depth - 1), formula(q_budget, depth - 1))

    return formula(qdepth, 3)


def test_quantifier_oracle_agreement():
    rng = random.Random(20240811)
    m = ModelDescription.build([])
    from mtl2.semantics import max_f_depth, quantifier_nesting

    for _ in range(200):
        f = random_sentence(rng)
        k = quantifier_nesting(f) * max_f_depth(f)
        assert eval_relational(f, m) == brute_force_relational(f, m, k), f


def test_candidates_include_midpoints():
    m = ModelDescription.build([])
    dense = RExists(
        "x0", FAnd(RAtom("<", ITerm("c"), ITerm("x0")), RAtom("<", ITerm("x0"), ITerm("c", 1)))
    )
    assert F(1, 2) in quantifier_candidates(dense, m)


def test_external_cells_partition():
    m = simple_model(ext="[1/2, 2/1]")
    cells = external_cells(m)
    # cells tile [0, oo) without overlap
    probe = [F(0), F(1, 4), F(1, 2), F(1), F(2), F(5, 2)]
    for q in probe:
        assert sum(1 for c in cells if c.contains(q)) == 1
