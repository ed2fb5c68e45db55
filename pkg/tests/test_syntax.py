import pytest

from mtl2.grammar import ParseError, parse_formula, parse_sequent, parse_term, print_sequent
from mtl2.syntax import (
    ELabel,
    ETerm,
    FImp,
    FOr,
    Hole,
    ILabel,
    ITerm,
    IntervalSpec,
    LevelError,
    PLetter,
    RAtom,
    RBigVee,
    RExists,
    RawTerm,
    Sequent,
    bigvee_instance,
    denormalize_term,
    free_vars,
    free_vars_sequent,
    instantiate,
    normalize_term,
    subformulas,
    substitute,
)


def test_normalize_term_examples():
    assert normalize_term(RawTerm("c", 2)) == ITerm("c", 2)
    assert normalize_term(RawTerm("x3", 0)) == ITerm("x3", 0)
    assert normalize_term(RawTerm("C", 3)) == ETerm("C", 3)


def test_denormalize_roundtrip():
    for raw in [RawTerm("c", 0), RawTerm("x1", 4), RawTerm("X0", 2), RawTerm("C", 1)]:
        assert denormalize_term(normalize_term(raw)) == raw


def test_parse_box_sequent():
    s = parse_sequent("C : c : Box[0,1] p0 |- C : c : Box[0,1] p0")
    assert len(s.antecedent) == len(s.succedent) == 1
    f = s.antecedent[0]
    assert isinstance(f, ELabel)
    inner = f.body
    assert isinstance(inner, ILabel)
    assert inner.body.spec == IntervalSpec(0, 1, True, True)


def test_parse_bigvee():
    s = parse_sequent("|- bigvee(X0)")
    assert s.antecedent == ()
    assert s.succedent == (RBigVee(ETerm("X0")),)


def test_parse_stratification_error():
    with pytest.raises(ParseError, match="internal label"):
        parse_sequent("C : x0 : Box[0,1] (c : p0) |- ")


def test_parse_mixed_connective_rejected():
    with pytest.raises(ParseError, match="stratification"):
        parse_sequent("C : (x0 < x1) & (c : p0) |- ")


def test_print_examples():
    assert print_sequent(parse_sequent("|- bigvee(C)")) == "|- bigvee(C)"
    assert print_sequent(parse_sequent("C:c:p0|-C:c:p0")) == "C : c : p0 |- C : c : p0"
    assert print_sequent(parse_sequent("|-")) == "|- "
    assert print_sequent(parse_sequent("C:c:p0|-")) == "C : c : p0 |- "


def test_substitute_atomic():
    f = parse_formula("X0 < X1")
    g = substitute(f, "X0", ETerm("C", 1))
    assert g == RAtom("<", ETerm("C", 1), ETerm("X1"))


def test_substitute_capture_avoidance():
    f = RExists("X2", RAtom("<", ETerm("X0"), ETerm("X2")))
    g = substitute(f, "X0", ETerm("X2"))
    assert isinstance(g, RExists)
    assert g.var != "X2"
    assert g.body == RAtom("<", ETerm("X2"), ETerm(g.var))


def test_substitute_bigvee():
    f = RBigVee(ITerm("x0"))
    g = substitute(f, "x0", ITerm("c", 1))
    assert g == RBigVee(ITerm("c", 1))


def test_substitute_level_mismatch():
    with pytest.raises(LevelError):
        substitute(RAtom("<", ITerm("x0"), ITerm("x1")), "x0", ETerm("C"))


def test_substitute_into_deep_term():
    # x0 at depth 2 picks up the replacement's depth
    f = RAtom("<", ITerm("x0", 2), ITerm("c"))
    g = substitute(f, "x0", ITerm("c", 1))
    assert g == RAtom("<", ITerm("c", 3), ITerm("c"))


def test_subformulas():
    import mtl2.syntax as syn

    conj = syn.FAnd(PLetter(0), PLetter(1))
    assert subformulas(conj) == [conj, PLetter(0), PLetter(1)]
    box = syn.FBox(IntervalSpec(0, 1, True, True), PLetter(0))
    assert subformulas(box) == [box, PLetter(0)]
    bv = RBigVee(ITerm("x0"))
    univ = syn.RForall("x0", bv)
    subs = subformulas(univ)
    assert univ in subs and bv in subs
    assert bigvee_instance(bv, 3) == RAtom("<", ITerm("x0"), ITerm("c", 3))


def test_free_vars():
    s = parse_sequent("X0 : x1 : p0 |- ")
    ext, intl = free_vars_sequent(s)
    assert ext == frozenset({"X0"})
    assert intl == frozenset({"x1"})
    import mtl2.syntax as syn

    f = syn.RForall("x0", RAtom("<", ITerm("x0"), ITerm("x1")))
    assert free_vars(f) == (frozenset(), frozenset({"x1"}))
    assert free_vars_sequent(parse_sequent("C < F(C) |- ")) == (frozenset(), frozenset())


def test_holes_instantiate():
    t = ITerm("c", Hole(1))
    assert instantiate(t, 2) == ITerm("c", 3)
    spec = IntervalSpec(0, Hole(1), True, True)
    assert instantiate(spec, 0) == IntervalSpec(0, 1, True, True)


def test_interval_spec_validation():
    with pytest.raises(ValueError):
        IntervalSpec(2, 2, True, True)
    with pytest.raises(ValueError):
        IntervalSpec(0, None, True, True)
    with pytest.raises(ValueError):
        IntervalSpec(Hole(0), 5, True, True)


def test_sequent_rejects_bare_internal_label():
    with pytest.raises(Exception):
        Sequent((ILabel(ITerm("c"), PLetter(0)),), ())
