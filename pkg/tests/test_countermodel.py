from fractions import Fraction

import pytest

from mtl2.countermodel import CountermodelError, countermodel_from_branch, verify_countermodel
from mtl2.grammar import parse_formula, parse_sequent
from mtl2.semantics import eval_sequent

F = Fraction


def build(gamma_texts, delta_texts):
    gamma = [parse_formula(t) for t in gamma_texts]
    delta = [parse_formula(t) for t in delta_texts]
    return countermodel_from_branch(gamma, delta)


def test_empty_prefix_atomic_goal():
    m = build([], ["C : c : p0"])
    assert m.regions == ()
    assert verify_countermodel(m, parse_sequent("|- C : c : p0"))


def test_strict_gap_picks_midpoint():
    m = build(["C < X0", "X0 < F(C)"], [])
    assert m.ext_value("X0") == F(1, 2)


def test_chain_spreads_evenly():
    m = build(["C < X0", "X0 < X1", "X1 < F(C)"], [])
    assert F(0) < m.ext_value("X0") < m.ext_value("X1") < F(1)


def test_cycle_fails():
    with pytest.raises(CountermodelError, match="order"):
        build(["X0 < X1", "X1 < X0"], [])


def test_equation_conflict_fails():
    with pytest.raises(CountermodelError, match="equation"):
        build(["X0 = F(X0)"], [])


def test_below_zero_fails():
    with pytest.raises(CountermodelError):
        build(["F(X0) = C"], [])


def test_equations_fold_classes():
    m = build(["X0 = F(C)", "X1 = F(X0)"], [])
    assert m.ext_value("X0") == F(1)
    assert m.ext_value("X1") == F(2)


def test_internal_class_solving():
    m = build(["C : c < x0", "C : x0 < f(c)", "C : x0 : p0"], [])
    assert m.int_value("x0") == F(1, 2)
    [region] = m.regions
    assert region.letter == 0
    assert region.int_set.contains(F(1, 2))


def test_labelled_box_regions_generalize():
    gamma = ["C : c : Box[0,1] p0"]
    delta = ["C : c : Box[0,2] p0"]
    m = build(gamma, delta)
    s = parse_sequent("C : c : Box[0,1] p0 |- C : c : Box[0,2] p0")
    assert verify_countermodel(m, s)


def test_unconstrained_defaults_to_zero():
    m = build([], ["X0 = X1"])
    assert m.ext_value("X0") == m.ext_value("X1") == F(0)
    # the model does not falsify this sequent; verification reports that
    assert not verify_countermodel(m, parse_sequent("|- X0 = X1"))


def test_verified_refutation_with_antecedent():
    m = build(["X0 < X1"], ["X1 < X0"])
    s = parse_sequent("X0 < X1 |- X1 < X0")
    assert verify_countermodel(m, s)
