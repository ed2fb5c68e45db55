"""Deduction rules: premise construction and instance checking.

Every rule consumes its principal formula.  Positional conventions, fixed once
for the whole system:

  - residues staying on the same side replace the principal at its position
    (several residues occupy consecutive positions starting there);
  - residues moving to the antecedent are appended at its end;
  - residues moving to the succedent are inserted at its head.

`premises_of` computes the exact premise list of a rule instance from its
conclusion and parameters; `check_rule` compares given premises against it.
The left infinitary-disjunction rules have countably many premises and are
handled through `omega_premise` (see proofs.OmegaNode).
"""

from __future__ import annotations

from typing import Optional

from .syntax import (
    ELabel,
    ETerm,
    FAnd,
    FBox,
    FImp,
    FNot,
    FOr,
    Formula,
    ILabel,
    ITerm,
    PLetter,
    RAtom,
    RBigVee,
    RExists,
    RForall,
    Sequent,
    Term,
    bigvee_instance,
    free_vars_sequent,
    is_atomic,
    kind_of,
    leq,
    substitute,
)


class RuleViolation(ValueError):
    """A rule instance fails; the message names the violated side condition."""


STRUCTURAL_RULES = ("weaken_l", "weaken_r", "exchange_l", "exchange_r", "contract_l", "contract_r")

_CONNECTIVE_RULES = []
for _lvl in ("er", "ir", "et", "it"):
    for _conn in ("neg", "and", "or", "imp"):
        for _side in ("l", "r"):
            _CONNECTIVE_RULES.append(f"{_lvl}_{_conn}_{_side}")
_QUANTIFIER_RULES = [
    f"{lvl}_{q}_{side}" for lvl in ("er", "ir") for q in ("forall", "exists") for side in ("l", "r")
]
_BIGVEE_RULES = ["er_bigvee_l", "er_bigvee_r", "ir_bigvee_l", "ir_bigvee_r"]
_BOX_RULES = [
    f"{lvl}_box_{shape}_{side}"
    for lvl in ("et", "it")
    for shape in ("cc", "oc", "co", "oo", "cinf", "oinf")
    for side in ("l", "r")
]

RULE_IDS = (
    ("id", "cut")
    + STRUCTURAL_RULES
    + tuple(_CONNECTIVE_RULES)
    + tuple(_QUANTIFIER_RULES)
    + tuple(_BIGVEE_RULES)
    + tuple(_BOX_RULES)
)

OMEGA_RULES = ("er_bigvee_l", "ir_bigvee_l")


def _replace(seq: tuple, pos: int, items) -> tuple:
    return seq[:pos] + tuple(items) + seq[pos + 1 :]


def _need(cond: bool, message: str):
    if not cond:
        raise RuleViolation(message)


def _principal(s: Sequent, side: str, pos: int) -> Formula:
    coll = s.antecedent if side == "ant" else s.succedent
    _need(0 <= pos < len(coll), f"principal position {pos} out of range")
    return coll[pos]


def _bound_atom(label: Optional[ETerm], low: Term, high: Term, closed: bool) -> Formula:
    atom = leq(low, high) if closed else RAtom("<", low, high)
    return atom if label is None else ELabel(label, atom)


def _eigen_ok(s: Sequent, var: str):
    ext, intl = free_vars_sequent(s)
    _need(var not in ext | intl, f"eigenvariable {var} occurs free in the conclusion")


# ---------------------------------------------------------------------------
# principal-formula decomposition per rule family


def _split_rule(rule: str):
    parts = rule.split("_")
    level = parts[0]
    side = parts[-1]
    op = "_".join(parts[1:-1])
    return level, op, side


def _unwrap_principal(rule: str, f: Formula):
    """Return (label, inner-label-term, body) appropriate to the rule level."""
    level, op, _ = _split_rule(rule)
    if level == "er":
        _need(not isinstance(f, ELabel), f"{rule} expects a relational principal")
        return None, None, f
    _need(isinstance(f, ELabel), f"{rule} expects a labelled principal")
    if level == "ir":
        _need(kind_of(f.body) == "IR", f"{rule} expects a labelled relational principal")
        return f.term, None, f.body
    if level == "et":
        _need(kind_of(f.body) == "ET", f"{rule} expects an external temporal principal")
        return f.term, None, f.body
    # it: principal S : t : eta
    _need(isinstance(f.body, ILabel), f"{rule} expects an internally labelled principal")
    return f.term, f.body.term, f.body.body


def _rewrap(rule: str, label, ilabel, body: Formula) -> Formula:
    level, _, _ = _split_rule(rule)
    if level == "er":
        return body
    if level == "it":
        return ELabel(label, ILabel(ilabel, body))
    return ELabel(label, body)


_SHAPES = {
    "cc": (True, True, False),
    "oc": (False, True, False),
    "co": (True, False, False),
    "oo": (False, False, False),
    "cinf": (True, False, True),
    "oinf": (False, False, True),
}


# ---------------------------------------------------------------------------
# premise construction


def premises_of(conclusion: Sequent, rule: str, params: dict) -> list[Sequent]:
    """Exact premise list of the rule instance, or RuleViolation."""
    if rule == "id":
        _need(
            len(conclusion.antecedent) == 1
            and conclusion.antecedent == conclusion.succedent,
            "id concludes A |- A",
        )
        return []
    if rule == "cut":
        a = params["formula"]
        return [
            Sequent(conclusion.antecedent, (a,) + conclusion.succedent),
            Sequent(conclusion.antecedent + (a,), conclusion.succedent),
        ]
    if rule in STRUCTURAL_RULES:
        return _structural_premise(conclusion, rule, params)

    side = "ant" if rule.endswith("_l") else "suc"
    pos = params["pos"]
    f = _principal(conclusion, side, pos)
    level, op, _ = _split_rule(rule)

    if op.startswith("box"):
        return _box_premises(conclusion, rule, params, side, pos, f)

    label, ilabel, body = _unwrap_principal(rule, f)

    def wrap(g: Formula) -> Formula:
        return _rewrap(rule, label, ilabel, g)

    ant, suc = conclusion.antecedent, conclusion.succedent

    if op == "neg":
        _need(isinstance(body, FNot), f"{rule} expects a negation")
        inner = wrap(body.body)
        if side == "ant":
            return [Sequent(_replace(ant, pos, ()), (inner,) + suc)]
        return [Sequent(ant + (inner,), _replace(suc, pos, ()))]
    if op == "and":
        _need(isinstance(body, FAnd), f"{rule} expects a conjunction")
        a, b = wrap(body.left), wrap(body.right)
        if side == "ant":
            return [Sequent(_replace(ant, pos, (a, b)), suc)]
        return [
            Sequent(ant, _replace(suc, pos, (a,))),
            Sequent(ant, _replace(suc, pos, (b,))),
        ]
    if op == "or":
        _need(isinstance(body, FOr), f"{rule} expects a disjunction")
        a, b = wrap(body.left), wrap(body.right)
        if side == "ant":
            return [
                Sequent(_replace(ant, pos, (a,)), suc),
                Sequent(_replace(ant, pos, (b,)), suc),
            ]
        return [Sequent(ant, _replace(suc, pos, (a, b)))]
    if op == "imp":
        _need(isinstance(body, FImp), f"{rule} expects an implication")
        a, b = wrap(body.left), wrap(body.right)
        if side == "ant":
            return [
                Sequent(_replace(ant, pos, (b,)), suc),
                Sequent(_replace(ant, pos, ()), (a,) + suc),
            ]
        return [Sequent(ant + (a,), _replace(suc, pos, (b,)))]
    if op in ("forall", "exists"):
        want = RForall if op == "forall" else RExists
        _need(isinstance(body, want), f"{rule} expects a {op} principal")
        instantiating = (side == "ant") == (op == "forall")
        if instantiating:
            t = params["term"]
            _need(
                isinstance(t, ITerm) == (level == "ir"),
                f"{rule} instantiating term level mismatch",
            )
            inst = wrap(substitute(body.body, body.var, t))
            coll = ant if side == "ant" else suc
            new = _replace(coll, pos, (inst,))
            return [Sequent(new, suc) if side == "ant" else Sequent(ant, new)]
        var = params["var"]
        _need(
            var.startswith("x") == (level == "ir"),
            f"{rule} eigenvariable level mismatch",
        )
        _eigen_ok(conclusion, var)
        vt = ITerm(var) if level == "ir" else ETerm(var)
        inst = wrap(substitute(body.body, body.var, vt))
        coll = ant if side == "ant" else suc
        new = _replace(coll, pos, (inst,))
        return [Sequent(new, suc) if side == "ant" else Sequent(ant, new)]
    if op == "bigvee":
        _need(isinstance(body, RBigVee), f"{rule} expects an infinitary disjunction")
        if side == "ant":
            raise RuleViolation(
                "left infinitary disjunction has countably many premises; "
                "represent it as an omega node"
            )
        m = params["numeral"]
        inst = wrap(bigvee_instance(body, m))
        return [Sequent(ant, _replace(suc, pos, (inst,)))]
    raise RuleViolation(f"unknown rule {rule!r}")


def omega_premise(conclusion: Sequent, rule: str, pos: int, numeral) -> Sequent:
    """The `numeral`-th premise of a left infinitary-disjunction rule."""
    _need(rule in OMEGA_RULES, f"{rule} is not an infinitary rule")
    f = _principal(conclusion, "ant", pos)
    label, _, body = _unwrap_principal(rule, f)
    _need(isinstance(body, RBigVee), f"{rule} expects an infinitary disjunction")
    t = body.term
    anchor_cls = ITerm if isinstance(t, ITerm) else ETerm
    anchor = anchor_cls("c" if isinstance(t, ITerm) else "C", numeral)
    inst = _rewrap(rule, label, None, RAtom("<", t, anchor))
    return Sequent(_replace(conclusion.antecedent, pos, (inst,)), conclusion.succedent)


def _box_premises(conclusion, rule, params, side, pos, f):
    level, op, _ = _split_rule(rule)
    shape = op.split("_")[1]
    lower_closed, upper_closed, unbounded = _SHAPES[shape]
    label, ilabel, body = _unwrap_principal(rule, f)
    _need(isinstance(body, FBox), f"{rule} expects a box principal")
    spec = body.spec
    _need(spec.lower_closed == lower_closed, f"{rule} bracket mismatch on the lower bound")
    _need(spec.upper_closed == upper_closed, f"{rule} bracket mismatch on the upper bound")
    _need(spec.unbounded == unbounded, f"{rule} bracket mismatch on boundedness")

    ant, suc = conclusion.antecedent, conclusion.succedent
    # the anchored term: T at the external level, t under the label internally
    anchor = ilabel if level == "it" else label
    bound_label = label if level == "it" else None

    def low_atom(target: Term) -> Formula:
        return _bound_atom(bound_label, anchor.bump(spec.lower), target, lower_closed)

    def high_atom(target: Term) -> Formula:
        return _bound_atom(bound_label, target, anchor.bump(spec.upper), upper_closed)

    if side == "suc":
        var = params["var"]
        _need(
            var.startswith("x") == (level == "it"),
            f"{rule} eigenvariable level mismatch",
        )
        _eigen_ok(conclusion, var)
        vt = ITerm(var) if level == "it" else ETerm(var)
        residue = _rewrap(rule, label, vt, body.body) if level == "it" else ELabel(vt, body.body)
        hyps = [low_atom(vt)] + ([] if unbounded else [high_atom(vt)])
        return [Sequent(ant + tuple(hyps), _replace(suc, pos, (residue,)))]

    w = params["term"]
    _need(isinstance(w, ITerm) == (level == "it"), f"{rule} witness term level mismatch")
    residue = _rewrap(rule, label, w, body.body) if level == "it" else ELabel(w, body.body)
    gutted = _replace(ant, pos, ())
    premises = [Sequent(gutted, (low_atom(w),) + suc)]
    if not unbounded:
        premises.append(Sequent(gutted, (high_atom(w),) + suc))
    premises.append(Sequent(_replace(ant, pos, (residue,)), suc))
    return premises


def _structural_premise(conclusion, rule, params):
    pos = params["pos"]
    ant, suc = conclusion.antecedent, conclusion.succedent
    if rule == "weaken_l":
        f = _principal(conclusion, "ant", pos)
        _need(params.get("formula", f) == f, "weakened formula mismatch")
        return [Sequent(_replace(ant, pos, ()), suc)]
    if rule == "weaken_r":
        f = _principal(conclusion, "suc", pos)
        _need(params.get("formula", f) == f, "weakened formula mismatch")
        return [Sequent(ant, _replace(suc, pos, ()))]
    if rule == "exchange_l":
        _need(pos + 1 < len(ant), "exchange position out of range")
        return [Sequent(ant[:pos] + (ant[pos + 1], ant[pos]) + ant[pos + 2 :], suc)]
    if rule == "exchange_r":
        _need(pos + 1 < len(suc), "exchange position out of range")
        return [Sequent(ant, suc[:pos] + (suc[pos + 1], suc[pos]) + suc[pos + 2 :])]
    if rule == "contract_l":
        f = _principal(conclusion, "ant", pos)
        return [Sequent(ant[: pos + 1] + (f,) + ant[pos + 1 :], suc)]
    if rule == "contract_r":
        f = _principal(conclusion, "suc", pos)
        return [Sequent(ant, suc[: pos + 1] + (f,) + suc[pos + 1 :])]
    raise RuleViolation(f"unknown structural rule {rule!r}")


# ---------------------------------------------------------------------------
# checking


def check_rule(conclusion: Sequent, premises: list[Sequent], rule: str, params: dict) -> None:
    """Raise RuleViolation unless premises/conclusion instantiate the rule."""
    expected = premises_of(conclusion, rule, params)
    _need(
        len(expected) == len(premises),
        f"{rule} expects {len(expected)} premises, got {len(premises)}",
    )
    for i, (want, got) in enumerate(zip(expected, premises)):
        _need(want == got, f"premise {i} of {rule} does not match the rule instance")


# ---------------------------------------------------------------------------
# principal-formula dispatch (used by the reduction engine)


def rule_for(f: Formula, side: str) -> Optional[str]:
    """Rule id decomposing f on the given side; None when f is atomic."""
    if is_atomic(f):
        return None
    sfx = "_l" if side == "ant" else "_r"
    if isinstance(f, ELabel):
        body = f.body
        if isinstance(body, ILabel):
            eta = body.body
            if isinstance(eta, FBox):
                return f"it_box_{eta.spec.shape()}{sfx}"
            return f"it_{_conn_name(eta)}{sfx}"
        k = kind_of(body)
        if isinstance(body, FBox):
            return f"et_box_{body.spec.shape()}{sfx}"
        if isinstance(body, RBigVee):
            return f"ir_bigvee{sfx}"
        if isinstance(body, (RForall, RExists)):
            return f"ir_{'forall' if isinstance(body, RForall) else 'exists'}{sfx}"
        prefix = "ir" if k == "IR" else "et"
        return f"{prefix}_{_conn_name(body)}{sfx}"
    if isinstance(f, RBigVee):
        return f"er_bigvee{sfx}"
    if isinstance(f, (RForall, RExists)):
        return f"er_{'forall' if isinstance(f, RForall) else 'exists'}{sfx}"
    return f"er_{_conn_name(f)}{sfx}"


def _conn_name(f: Formula) -> str:
    match f:
        case FNot():
            return "neg"
        case FAnd():
            return "and"
        case FOr():
            return "or"
        case FImp():
            return "imp"
    raise ValueError(f"no connective rule for {f!r}")
