import pytest

from mtl2.assemble import bridge, closed_by_axiom, cut_cascade, logical_chunk
from mtl2.axioms import (
    COFINAL_E,
    DENSE_E,
    ID,
    INCR_E,
    IRREFL_E,
    LEAST_I,
    TOTAL_E,
    TRANS_I,
    AxiomInstance,
    cantor_pair,
    enumerate_axioms,
    find_closing_instance,
    instance_sequent,
    match_axiom,
)
from mtl2.grammar import parse_formula, parse_sequent
from mtl2.proofs import (
    ProofDocument,
    ProofNode,
    ProofViolation,
    check_proof,
    check_proof_report,
    cut_formulas,
    dumps_proof,
    loads_proof,
    restricted_cuts,
)
from mtl2.rules import RuleViolation, check_rule, premises_of, rule_for
from mtl2.syntax import ELabel, ETerm, ITerm, Sequent

from .strategies import model_pool


def seq(text):
    return parse_sequent(text)


# -- rule instances ------------------------------------------------------------


def test_right_external_box_rule():
    conclusion = seq("|- C : Box[0,1] (c : p0)")
    [premise] = premises_of(conclusion, "et_box_cc_r", {"pos": 0, "var": "X0"})
    assert premise == seq("(C < X0) | (C = X0), (X0 < F(C)) | (X0 = F(C)) |- X0 : c : p0")


def test_right_box_eigenvariable_violation():
    conclusion = seq("X0 < C |- C : Box[0,1] (c : p0)")
    with pytest.raises(RuleViolation, match="eigenvariable"):
        premises_of(conclusion, "et_box_cc_r", {"pos": 0, "var": "X0"})


def test_left_internal_box_rule():
    conclusion = seq("C : c : Box[0,2] p0 |- ")
    got = premises_of(conclusion, "it_box_cc_l", {"pos": 0, "term": ITerm("x0")})
    assert got == [
        seq("|- C : (c < x0) | (c = x0)"),
        seq("|- C : (x0 < f(f(c))) | (x0 = f(f(c)))"),
        seq("C : x0 : p0 |- "),
    ]


def test_unbounded_box_has_no_upper_premise():
    conclusion = seq("C : c : Box[0,oo) p0 |- ")
    got = premises_of(conclusion, "it_box_cinf_l", {"pos": 0, "term": ITerm("c")})
    assert got == [seq("|- C : (c < c) | (c = c)"), seq("C : c : p0 |- ")]


def test_strict_bound_box_uses_bare_atom():
    conclusion = seq("|- C : c : Box(0,1] p0")
    [premise] = premises_of(conclusion, "it_box_oc_r", {"pos": 0, "var": "x0"})
    assert premise == seq("C : c < x0, C : (x0 < f(c)) | (x0 = f(c)) |- C : x0 : p0")


def test_cut_rule_shape():
    conclusion = seq("C < F(C) |- ")
    a = parse_formula("C : c : p0")
    got = premises_of(conclusion, "cut", {"formula": a})
    assert got == [seq("C < F(C) |- C : c : p0"), seq("C < F(C), C : c : p0 |- ")]


def test_check_rule_accepts_and_rejects():
    conclusion = seq("|- C : (c : p0) -> (c : p0)")
    premise = seq("C : c : p0 |- C : c : p0")
    check_rule(conclusion, [premise], "et_imp_r", {"pos": 0})
    with pytest.raises(RuleViolation):
        check_rule(conclusion, [seq("C : c : p0 |- C : c : p1")], "et_imp_r", {"pos": 0})


def test_rule_for_dispatch():
    assert rule_for(parse_formula("C : c : Box[0,1] p0"), "ant") == "it_box_cc_l"
    assert rule_for(parse_formula("C : Box(0,oo) (c : p0)"), "suc") == "et_box_oinf_r"
    assert rule_for(parse_formula("bigvee(X0)"), "suc") == "er_bigvee_r"
    assert rule_for(parse_formula("C : bigvee(x0)"), "ant") == "ir_bigvee_l"
    assert rule_for(parse_formula("C : forall x0. x0 = x0"), "suc") == "ir_forall_r"
    assert rule_for(parse_formula("~(X0 < X1)"), "ant") == "er_neg_l"
    assert rule_for(parse_formula("C : c : p0"), "ant") is None


def test_quantifier_rules():
    conclusion = seq("forall X0. X0 < F(X0) |- ")
    [premise] = premises_of(conclusion, "er_forall_l", {"pos": 0, "term": ETerm("C", 1)})
    assert premise == seq("F(C) < F(F(C)) |- ")
    conclusion = seq("|- forall X0. X0 < F(X0)")
    [premise] = premises_of(conclusion, "er_forall_r", {"pos": 0, "var": "X1"})
    assert premise == seq("|- X1 < F(X1)")
    with pytest.raises(RuleViolation):
        premises_of(seq("|- forall X0. X0 < X1"), "er_forall_r", {"pos": 0, "var": "X1"})


# -- axioms ---------------------------------------------------------------------


def test_match_axiom_examples():
    got = match_axiom(seq("|- F(C) = F(C)"))
    assert [i.schema for i in got] == ["eq_refl_ext"]
    assert got[0].terms == (ETerm("C", 1),)

    got = match_axiom(seq("C < C |- "))
    assert [i.schema for i in got] == ["irrefl_ext"]

    assert match_axiom(seq("|- C : c : p0")) == []


def test_match_axiom_id():
    got = match_axiom(seq("C : c : p0 |- C : c : p0"))
    assert any(i.schema == ID for i in got)


def test_find_closing_instance_examples():
    s = seq("C : c : p0 |- C : c : p0")
    inst = find_closing_instance(s.antecedent, s.succedent)
    assert inst.schema == ID

    s = seq("C < F(C), C : c : p0 |- bigvee(C)")
    inst = find_closing_instance(s.antecedent, s.succedent)
    assert inst.schema == COFINAL_E

    s = seq("|- C : c : p0")
    assert find_closing_instance(s.antecedent, s.succedent) is None


def test_find_closing_density():
    s = seq("X0 < X1 |- exists X2. (X0 < X2) & (X2 < X1)")
    inst = find_closing_instance(s.antecedent, s.succedent)
    assert inst.schema == DENSE_E
    assert instance_sequent(inst) == s


def test_instance_sequents_render():
    inst = AxiomInstance(TRANS_I, (ITerm("c"), ITerm("x0"), ITerm("c", 1)), label=ETerm("C"))
    assert instance_sequent(inst) == seq("C : c < x0, C : x0 < f(c) |- C : c < f(c)")
    inst = AxiomInstance(LEAST_I, (ITerm("x1"),), label=ETerm("X0"))
    assert instance_sequent(inst) == seq("|- X0 : c < x1, X0 : c = x1")


def test_enumerate_axioms_deterministic_and_repeating():
    first = [enumerate_axioms(k) for k in range(200)]
    second = [enumerate_axioms(k) for k in range(200)]
    assert first == second
    # same instance index, different repetition counters
    for i in (0, 3, 17):
        assert enumerate_axioms(cantor_pair(i, 0)) == enumerate_axioms(cantor_pair(i, 1))
    schemas = {inst.schema for inst in first}
    assert INCR_E in schemas and TOTAL_E in schemas


def test_enumerated_instances_are_wellformed():
    for k in range(400):
        inst = enumerate_axioms(k)
        s = instance_sequent(inst)  # does not raise
        assert isinstance(s, Sequent)


def test_axiom_instances_valid_in_models():
    from mtl2.semantics import eval_sequent

    pool = model_pool(7, 25)
    for k in range(120):
        s = instance_sequent(enumerate_axioms(k))
        for m in pool:
            assert eval_sequent(s, m), (s, m)


# -- proof checking -------------------------------------------------------------


def imp_taut_proof():
    conclusion = seq("|- C : (c : p0) -> (c : p0)")
    premise = seq("C : c : p0 |- C : c : p0")
    leaf = ProofNode(premise, AxiomInstance(ID, formula=parse_formula("C : c : p0")))
    return ProofDocument(ProofNode(conclusion, "et_imp_r", {"pos": 0}, (leaf,)))


def test_check_proof_ok():
    check_proof(imp_taut_proof())


def test_check_proof_detects_wrong_leaf():
    doc = imp_taut_proof()
    bad_leaf = ProofNode(
        seq("C : c : p0 |- C : c : p1"),
        AxiomInstance(ID, formula=parse_formula("C : c : p0")),
    )
    doc.root.premises = (bad_leaf,)
    ok, msg = check_proof_report(doc)
    assert not ok


def _id_child(target):
    f = target.succedent[0]
    assert f in target.antecedent
    return closed_by_axiom(AxiomInstance(ID, formula=f), target)


def test_bridge_closes_by_axiom():
    target = seq("C < F(C), C : c : p0 |- bigvee(C), X0 = X0")
    inst = AxiomInstance(COFINAL_E, (ETerm("C"),))
    proof = closed_by_axiom(inst, target)
    check_proof(ProofDocument(proof))


def test_cut_cascade_checks_and_restricts():
    # peel the totality axiom into three hypothesis children
    base = seq("C : c : p0, X0 < X1 |- C : c : p0")
    inst = AxiomInstance(TOTAL_E, (ETerm("X0"), ETerm("X1")))
    ds = instance_sequent(inst).succedent
    children = [_id_child(Sequent(base.antecedent + (d,), base.succedent)) for d in ds]
    proof = cut_cascade(base, inst, children)
    doc = ProofDocument(proof)
    check_proof(doc)
    assert len(cut_formulas(doc)) == 3
    assert restricted_cuts(doc)


def test_logical_chunk_keeps_principal():
    target = seq("C : c : p0, C : c : p1 |- C : c : p0 & p1")
    k_seq = Sequent(target.antecedent, (target.succedent[0],) + target.succedent)
    want = premises_of(k_seq, "it_and_r", {"pos": 0})
    kids = [_id_child(w) for w in want]
    proof = logical_chunk(target, "suc", 0, "it_and_r", {}, kids)
    assert proof.conclusion == target
    check_proof(ProofDocument(proof))


def test_proof_io_roundtrip():
    doc = imp_taut_proof()
    text = dumps_proof(doc)
    doc2 = loads_proof(text)
    assert dumps_proof(doc2) == text
    check_proof(doc2)


def test_restricted_cuts_counterexample():
    conclusion = seq("|- C : (c : p0) -> (c : p0)")
    boxcut = parse_formula("C : c : Box[0,1] p0")
    inner = imp_taut_proof().root
    left = ProofNode(
        Sequent(conclusion.antecedent, (boxcut,) + conclusion.succedent),
        "weaken_r",
        {"pos": 0},
        (inner,),
    )
    right = ProofNode(
        Sequent(conclusion.antecedent + (boxcut,), conclusion.succedent),
        "weaken_l",
        {"pos": 0},
        (imp_taut_proof().root,),
    )
    doc = ProofDocument(ProofNode(conclusion, "cut", {"formula": boxcut}, (left, right)))
    check_proof(doc)
    assert not restricted_cuts(doc)
