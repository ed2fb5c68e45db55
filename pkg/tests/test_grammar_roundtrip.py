from hypothesis import given, settings

from mtl2.grammar import parse_sequent, print_sequent, parse_formula, print_formula

from .strategies import sequents, external_formulas


@given(sequents)
@settings(max_examples=300, deadline=None)
def test_sequent_roundtrip(s):
    assert parse_sequent(print_sequent(s)) == s


@given(external_formulas)
@settings(max_examples=300, deadline=None)
def test_formula_roundtrip(f):
    assert parse_formula(print_formula(f)) == f
