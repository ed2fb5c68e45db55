"""Construction of the bundled proof of the internal induction principle

    |- C : c : (p0 & Box[0,oo)(p0 -> Box[0,1] p0)) -> Box[0,oo) p0

The proof works as follows.  After introducing the implication, splitting the
conjunction and introducing the unbounded box (eigenvariable x0 with
c <= x0), the internal cofinality axiom is cut in and the resulting
infinitary disjunction is opened with its left omega rule.  The premise for
numeral n assumes x0 < f^n(c) and closes uniformly from the lemma family

    coverage(n):   C : c : p0, C : c : STEP  |-  C : c : Box[0,n+1] p0

via one application of the box-left rule at x0 (the numeral enters only
through term depths and the box bound, so a single template covers every
premise).  The lemma family itself is given by a base proof (one step of the
hypothesis at c) and a step proof that extends coverage by one unit interval
through a totality case split at f^{n+1}(c).
"""

from __future__ import annotations

from .assemble import bridge, closed_by_axiom, cut_cascade
from .axioms import (
    COFINAL_I,
    EQ_REFL_I,
    ID,
    INCR_I,
    LEAST_I,
    TOTAL_I,
    TRANS_I,
    AxiomInstance,
)
from .proofs import LemmaFamily, OmegaNode, ProofDocument, ProofNode
from .syntax import (
    ELabel,
    ETerm,
    FAnd,
    FBox,
    FImp,
    Formula,
    Hole,
    ILabel,
    ITerm,
    IntervalSpec,
    PLetter,
    RAtom,
    RBigVee,
    Sequent,
    leq,
)

_C = ETerm("C")
_c = ITerm("c")
_x0 = ITerm("x0")

ETA = PLetter(0)
BOX01 = IntervalSpec(0, 1, True, True)
BOXINF = IntervalSpec(0, None, True, False)
STEP = FBox(BOXINF, FImp(ETA, FBox(BOX01, ETA)))

H_ETA = ELabel(_C, ILabel(_c, ETA))  # C : c : p0
H_STEP = ELabel(_C, ILabel(_c, STEP))  # C : c : Box[0,oo)(p0 -> Box[0,1] p0)
GAMMA = (H_ETA, H_STEP)

GOAL = ELabel(_C, ILabel(_c, FImp(FAnd(ETA, STEP), FBox(BOXINF, ETA))))
LEMMA_NAME = "coverage"


def _lab(body: Formula) -> Formula:
    return ELabel(_C, body)


def _at(t: ITerm, f: Formula) -> Formula:
    return ELabel(_C, ILabel(t, f))


def _le(a: ITerm, b: ITerm) -> Formula:
    return _lab(leq(a, b))


def _lt(a: ITerm, b: ITerm) -> Formula:
    return _lab(RAtom("<", a, b))


def _fn(k) -> ITerm:
    """f^k(c) with k either a numeral or a hole offset value."""
    return ITerm("c", k)


def _id_close(target: Sequent, formula: Formula) -> ProofNode:
    return closed_by_axiom(AxiomInstance(ID, formula=formula), target)


def _or_r_then(target: Sequent, close) -> ProofNode:
    """Split the leading succedent disjunction (under its label), then close."""
    disj = target.succedent[0].body
    inner = Sequent(
        target.antecedent, (_lab(disj.left), _lab(disj.right)) + target.succedent[1:]
    )
    return ProofNode(target, "ir_or_r", {"pos": 0}, (close(inner),))


def _least_close(target: Sequent, t: ITerm) -> ProofNode:
    """Close `... |- C : c<t, C : c=t, ...` from the least-element axiom."""
    return closed_by_axiom(AxiomInstance(LEAST_I, (t,), label=_C), target)


def _refl_close(target: Sequent, t: ITerm) -> ProofNode:
    return closed_by_axiom(AxiomInstance(EQ_REFL_I, (t,), label=_C), target)


# ---------------------------------------------------------------------------
# lemma family: coverage(n) : GAMMA |- C : c : Box[0,n+1] p0


def _coverage_formula(upper) -> Formula:
    return _at(_c, FBox(IntervalSpec(0, upper, True, True), ETA))


def coverage_scheme() -> Sequent:
    return Sequent(GAMMA, (_coverage_formula(Hole(1)),))


def _box_l_on_phi(target: Sequent, phi_pos: int, witness: ITerm, low_close, high_close, body=None):
    """Apply it_box_cc_l to the box at phi_pos, closing the two bound premises
    with the provided builders and the body premise by identity (or `body`)."""
    ant = target.antecedent
    phi = ant[phi_pos]
    eta_at_w = ELabel(_C, ILabel(witness, phi.body.body.body))
    gutted = ant[:phi_pos] + ant[phi_pos + 1 :]
    anchor = phi.body.term
    spec = phi.body.body.spec
    low_goal = Sequent(gutted, (_le(anchor.bump(spec.lower), witness),) + target.succedent)
    high_goal = Sequent(gutted, (_le(witness, anchor.bump(spec.upper)),) + target.succedent)
    body_goal = Sequent(ant[:phi_pos] + (eta_at_w,) + ant[phi_pos + 1 :], target.succedent)
    body_proof = body if body is not None else _id_close(body_goal, eta_at_w)
    premises = (low_close(low_goal), high_close(high_goal), body_proof)
    return ProofNode(target, "it_box_cc_l", {"pos": phi_pos, "term": witness}, premises)


def _coverage_base() -> ProofNode:
    # GAMMA |- C : c : Box[0,1] p0
    goal = Sequent(GAMMA, (_coverage_formula(1),))
    low0 = _le(_c, _x0)
    high1 = _le(_x0, _fn(1))
    inner = Sequent(GAMMA + (low0, high1), (_at(_x0, ETA),))

    # unfold the step hypothesis at c
    step_low = Sequent(
        (H_ETA, low0, high1), (_le(_c, _c),) + inner.succedent
    )
    step_low_proof = _or_r_then(step_low, lambda s: _refl_close(s, _c))

    imp_at_c = _at(_c, FImp(ETA, FBox(BOX01, ETA)))
    after_step = Sequent((H_ETA, imp_at_c, low0, high1), inner.succedent)

    # implication left: first the boxed branch, then the hypothesis branch
    boxed = Sequent((H_ETA, _at(_c, FBox(BOX01, ETA)), low0, high1), inner.succedent)
    boxed_proof = _box_l_on_phi(
        boxed,
        1,
        _x0,
        lambda s: _id_close(s, low0),
        lambda s: _id_close(s, high1),
    )
    hyp = Sequent((H_ETA, low0, high1), (H_ETA,) + inner.succedent)
    hyp_proof = _id_close(hyp, H_ETA)
    after_step_proof = ProofNode(after_step, "it_imp_l", {"pos": 1}, (boxed_proof, hyp_proof))

    inner_proof = ProofNode(
        inner, "it_box_cinf_l", {"pos": 1, "term": _c}, (step_low_proof, after_step_proof)
    )
    return ProofNode(goal, "it_box_cc_r", {"pos": 0, "var": "x0"}, (inner_proof,))


def _coverage_step() -> ProofNode:
    # GAMMA |- C : c : Box[0,n+2] p0   from the ih  GAMMA |- C : c : Box[0,n+1] p0
    goal = Sequent(GAMMA, (_coverage_formula(Hole(2)),))
    low0 = _le(_c, _x0)
    high2 = _le(_x0, _fn(Hole(2)))
    inner = Sequent(GAMMA + (low0, high2), (_at(_x0, ETA),))

    phi = _coverage_formula(Hole(1))  # C : c : Box[0,n+1] p0
    ih_leaf = ProofNode(coverage_scheme(), "ih", {})
    cut_left = bridge(ih_leaf, Sequent(inner.antecedent, (phi,) + inner.succedent))

    after_phi = Sequent(inner.antecedent + (phi,), inner.succedent)
    mid = _fn(Hole(1))  # f^(n+1)(c)

    def d_child(d_formula: Formula) -> Sequent:
        return Sequent(after_phi.antecedent + (d_formula,), after_phi.succedent)

    # case x0 < f^(n+1)(c) resp. x0 = f^(n+1)(c): x0 is already covered by phi
    def close_high_lt(s):
        return _or_r_then(s, lambda t: _id_close(t, _lt(_x0, mid)))

    def close_high_eq(s):
        return _or_r_then(s, lambda t: _id_close(t, _lab(RAtom("=", _x0, mid))))

    child_lt = _box_l_on_phi(
        d_child(_lt(_x0, mid)), 4, _x0, lambda s: _id_close(s, low0), close_high_lt
    )
    child_eq = _box_l_on_phi(
        d_child(_lab(RAtom("=", _x0, mid))),
        4,
        _x0,
        lambda s: _id_close(s, low0),
        close_high_eq,
    )

    # case f^(n+1)(c) < x0: reach x0 through the step hypothesis at f^(n+1)(c)
    d3 = _lt(mid, _x0)
    child_gt_target = d_child(d3)

    def least_pattern(s):
        return _or_r_then(s, lambda t: _least_close(t, mid))

    def refl_pattern(s):
        return _or_r_then(s, lambda t: _refl_close(t, mid))

    # (a) extract p0 at f^(n+1)(c) from phi
    eta_at_mid = _at(mid, ETA)
    after_extract = Sequent(
        child_gt_target.antecedent[:4] + (eta_at_mid,) + child_gt_target.antecedent[5:],
        child_gt_target.succedent,
    )

    # (b) unfold the step hypothesis at f^(n+1)(c)
    gutted_b = after_extract.antecedent[:1] + after_extract.antecedent[2:]
    step_low_b = Sequent(gutted_b, (_le(_c, mid),) + after_extract.succedent)
    imp_at_mid = _at(mid, FImp(ETA, FBox(BOX01, ETA)))
    after_step_b = Sequent(
        after_extract.antecedent[:1] + (imp_at_mid,) + after_extract.antecedent[2:],
        after_extract.succedent,
    )

    boxed_b = Sequent(
        after_step_b.antecedent[:1]
        + (_at(mid, FBox(BOX01, ETA)),)
        + after_step_b.antecedent[2:],
        after_step_b.succedent,
    )

    def close_low_gt(s):
        return _or_r_then(s, lambda t: _id_close(t, d3))

    boxed_b_proof = _box_l_on_phi(
        boxed_b, 1, _x0, close_low_gt, lambda s: _id_close(s, high2)
    )
    hyp_b = Sequent(gutted_b, (eta_at_mid,) + after_extract.succedent)
    hyp_b_proof = _id_close(hyp_b, eta_at_mid)
    after_step_b_proof = ProofNode(
        after_step_b, "it_imp_l", {"pos": 1}, (boxed_b_proof, hyp_b_proof)
    )
    extract_b_proof = ProofNode(
        after_extract,
        "it_box_cinf_l",
        {"pos": 1, "term": mid},
        (least_pattern(step_low_b), after_step_b_proof),
    )

    child_gt = _box_l_on_phi(
        child_gt_target, 4, mid, least_pattern, refl_pattern, body=extract_b_proof
    )

    after_phi_proof = cut_cascade(
        after_phi,
        AxiomInstance(TOTAL_I, (_x0, mid), label=_C),
        [child_lt, child_eq, child_gt],
    )
    inner_proof = ProofNode(
        inner, "cut", {"formula": phi}, (cut_left, after_phi_proof)
    )
    return ProofNode(goal, "it_box_cc_r", {"pos": 0, "var": "x0"}, (inner_proof,))


def coverage_family() -> LemmaFamily:
    return LemmaFamily(
        name=LEMMA_NAME,
        param="n",
        scheme=coverage_scheme(),
        base=_coverage_base(),
        step=_coverage_step(),
    )


# ---------------------------------------------------------------------------
# omega template: GAMMA, c<=x0, C : x0 < f^n(c) |- C : x0 : p0


def _omega_template() -> ProofNode:
    low = _le(_c, _x0)
    hyp = _lt(_x0, _fn(Hole(0)))
    gamma_t = GAMMA + (low, hyp)
    goal = Sequent(gamma_t, (_at(_x0, ETA),))

    t1 = _lt(_x0, _fn(Hole(1)))
    t2 = _lt(_fn(Hole(0)), _fn(Hole(1)))

    # left branch of the t1 cut: x0 < f^(n+1)(c) via increasingness
    l2_target = Sequent(gamma_t, (t2, t1) + goal.succedent)
    l2 = closed_by_axiom(AxiomInstance(INCR_I, (_fn(Hole(0)),), label=_C), l2_target)
    r2_target = Sequent(gamma_t + (t2,), (t1,) + goal.succedent)
    r2 = closed_by_axiom(
        AxiomInstance(TRANS_I, (_x0, _fn(Hole(0)), _fn(Hole(1))), label=_C), r2_target
    )
    l1 = ProofNode(Sequent(gamma_t, (t1,) + goal.succedent), "cut", {"formula": t2}, (l2, r2))

    # right branch: open the coverage lemma at n and land x0 inside it
    phi = _coverage_formula(Hole(1))
    lemma_leaf = ProofNode(coverage_scheme(), "lemma", {"name": LEMMA_NAME, "index": Hole(0)})
    r1_target = Sequent(gamma_t + (t1,), goal.succedent)
    cut_left = bridge(lemma_leaf, Sequent(r1_target.antecedent, (phi,) + r1_target.succedent))

    after_phi = Sequent(r1_target.antecedent + (phi,), r1_target.succedent)

    def close_high(s):
        return _or_r_then(s, lambda t: _id_close(t, t1))

    after_phi_proof = _box_l_on_phi(
        after_phi, 5, _x0, lambda s: _id_close(s, low), close_high
    )
    r1 = ProofNode(r1_target, "cut", {"formula": phi}, (cut_left, after_phi_proof))
    return ProofNode(goal, "cut", {"formula": t1}, (l1, r1))


# ---------------------------------------------------------------------------
# the bundled document


def build_induction_proof() -> ProofDocument:
    root_goal = Sequent((), (GOAL,))
    m1 = Sequent((_at(_c, FAnd(ETA, STEP)),), (_at(_c, FBox(BOXINF, ETA)),))
    m2 = Sequent(GAMMA, m1.succedent)
    low = _le(_c, _x0)
    m3 = Sequent(GAMMA + (low,), (_at(_x0, ETA),))

    k = _lab(RBigVee(_x0))
    cut_left = closed_by_axiom(
        AxiomInstance(COFINAL_I, (_x0,), label=_C),
        Sequent(m3.antecedent, (k,) + m3.succedent),
    )
    omega_conclusion = Sequent(m3.antecedent + (k,), m3.succedent)
    omega = OmegaNode(
        conclusion=omega_conclusion,
        rule="ir_bigvee_l",
        pos=3,
        param="n",
        template=_omega_template(),
    )
    m3_proof = ProofNode(m3, "cut", {"formula": k}, (cut_left, omega))
    m2_proof = ProofNode(m2, "it_box_cinf_r", {"pos": 0, "var": "x0"}, (m3_proof,))
    m1_proof = ProofNode(m1, "it_and_l", {"pos": 0}, (m2_proof,))
    root = ProofNode(root_goal, "it_imp_r", {"pos": 0}, (m1_proof,))
    return ProofDocument(root=root, lemmas=(coverage_family(),))
