"""Proof objects: finite derivation trees, omega templates, lemma families.

A proof is a finite tree of `ProofNode`s whose leaves are axiom instances
(or `id`), with two finite stand-ins for infinite material:

  - `OmegaNode`: a left infinitary-disjunction step.  Its countably many
    premises are represented by one numeral-parametric template, checked by
    instantiation at 0..omega_k together with a shape-uniformity comparison.
  - `LemmaFamily`: a numeral-indexed family of sequents given by a base proof
    and a step proof; the step may close subgoals with `ih` leaves (the
    family at the previous index).  Templates and later lemmas may cite a
    family through `lemma` leaves.

Lemma families extend the plain single-template representation: premise
proofs of an omega rule may grow with the premise index (the induction
schemas are the canonical example), and a base/step scheme is the finite way
to write such proofs down.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Union

from . import axioms
from .axioms import AxiomInstance, RhoAtom, instance_sequent
from .grammar import parse_formula, parse_sequent, parse_term, print_formula, print_sequent, print_term
from .rules import OMEGA_RULES, RuleViolation, check_rule, omega_premise
from .syntax import (
    ELabel,
    Formula,
    Hole,
    ILabel,
    NatExpr,
    RAtom,
    RBigVee,
    RExists,
    Sequent,
    Term,
    has_holes,
    instantiate,
    is_atomic,
    nat_instantiate,
)


@dataclass
class ProofNode:
    conclusion: Sequent
    rule: Union[str, AxiomInstance]
    params: dict = field(default_factory=dict)
    premises: tuple = ()


@dataclass
class OmegaNode:
    conclusion: Sequent
    rule: str  # er_bigvee_l or ir_bigvee_l
    pos: int
    param: str
    template: "Proof"


Proof = Union[ProofNode, OmegaNode]


@dataclass
class LemmaFamily:
    name: str
    param: str
    scheme: Sequent  # carries numeral holes
    base: Proof
    step: Proof  # carries numeral holes; `ih` leaves conclude scheme(param)


@dataclass
class ProofDocument:
    root: Proof
    lemmas: tuple = ()

    def lemma(self, name: str) -> LemmaFamily:
        for fam in self.lemmas:
            if fam.name == name:
                return fam
        raise KeyError(name)


class ProofViolation(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"at {path or 'root'}: {message}")
        self.path = path
        self.message = message


# ---------------------------------------------------------------------------
# instantiation of numeral holes inside proofs


def _instantiate_params(params: dict, value: int) -> dict:
    out = {}
    for k, v in params.items():
        if isinstance(v, (Hole, int)):
            out[k] = nat_instantiate(v, value) if isinstance(v, Hole) else v
        elif isinstance(v, (Sequent,)) or _is_formula(v) or _is_term(v):
            out[k] = instantiate(v, value)
        else:
            out[k] = v
    return out


def _is_formula(v) -> bool:
    from .syntax import (
        ELabel,
        FAnd,
        FBox,
        FImp,
        FNot,
        FOr,
        ILabel,
        PLetter,
        RAtom,
        RBigVee,
        RExists,
        RForall,
    )

    return isinstance(
        v, (ELabel, FAnd, FBox, FImp, FNot, FOr, ILabel, PLetter, RAtom, RBigVee, RExists, RForall)
    )


def _is_term(v) -> bool:
    from .syntax import ETerm, ITerm

    return isinstance(v, (ETerm, ITerm))


def _instantiate_axiom(inst: AxiomInstance, value: int) -> AxiomInstance:
    def inst_rho(rho):
        if rho is None:
            return None
        args = tuple(
            (tag, nat_instantiate(p, value) if tag == "z" and isinstance(p, Hole) else (instantiate(p, value) if tag == "t" else p))
            for tag, p in rho.args
        )
        return RhoAtom(rho.rel, args)

    return AxiomInstance(
        schema=inst.schema,
        terms=tuple(instantiate(t, value) for t in inst.terms),
        label=None if inst.label is None else instantiate(inst.label, value),
        rho=inst_rho(inst.rho),
        eta=None if inst.eta is None else instantiate(inst.eta, value),
        formula=None if inst.formula is None else instantiate(inst.formula, value),
        var=inst.var,
    )


def instantiate_proof(p: Proof, value: int) -> Proof:
    """Substitute the innermost-bound numeral parameter; nested omega
    templates keep their own parameter untouched."""
    if isinstance(p, OmegaNode):
        return OmegaNode(
            conclusion=instantiate(p.conclusion, value),
            rule=p.rule,
            pos=p.pos,
            param=p.param,
            template=p.template,  # bound by the inner parameter
        )
    rule = p.rule if isinstance(p.rule, str) else _instantiate_axiom(p.rule, value)
    return ProofNode(
        conclusion=instantiate(p.conclusion, value),
        rule=rule,
        params=_instantiate_params(p.params, value),
        premises=tuple(instantiate_proof(q, value) for q in p.premises),
    )


def skeleton(p: Proof):
    """Rule-id tree, the shape compared by the uniformity check."""
    if isinstance(p, OmegaNode):
        return ("omega", p.rule, skeleton(p.template))
    rid = p.rule if isinstance(p.rule, str) else f"axiom:{p.rule.schema}"
    return (rid, tuple(skeleton(q) for q in p.premises))


# ---------------------------------------------------------------------------
# checking


def check_proof(doc: ProofDocument, omega_k: int = 3) -> None:
    """Validate every node; raise ProofViolation at the first failure."""
    available: dict[str, LemmaFamily] = {}
    for fam in doc.lemmas:
        _check_lemma(fam, available, omega_k)
        available[fam.name] = fam
    _check_node(doc.root, available, None, omega_k, "root")


def check_proof_report(doc: ProofDocument, omega_k: int = 3):
    """(ok, message) wrapper around check_proof."""
    try:
        check_proof(doc, omega_k)
        return True, "ok"
    except (ProofViolation, RuleViolation, ValueError) as e:
        return False, str(e)


def _check_lemma(fam: LemmaFamily, available, omega_k: int):
    path = f"lemma {fam.name}"
    base_goal = instantiate(fam.scheme, 0)
    if fam.base.conclusion != base_goal:
        raise ProofViolation(path + "/base", "base proof concludes the wrong sequent")
    _check_node(fam.base, available, None, omega_k, path + "/base")
    shapes = set()
    for mu in range(omega_k):
        inst = instantiate_proof(fam.step, mu)
        shapes.add(skeleton(inst))
        goal = instantiate(fam.scheme, mu + 1)
        if inst.conclusion != goal:
            raise ProofViolation(
                path + f"/step@{mu}", "step proof concludes the wrong sequent"
            )
        _check_node(inst, available, instantiate(fam.scheme, mu), omega_k, path + f"/step@{mu}")
    if len(shapes) > 1:
        raise ProofViolation(path + "/step", "step instantiations disagree in shape")


def _check_node(p: Proof, lemmas, ih: Optional[Sequent], omega_k: int, path: str):
    if has_holes(p.conclusion):
        raise ProofViolation(path, "uninstantiated numeral parameter in a conclusion")
    if isinstance(p, OmegaNode):
        if p.rule not in OMEGA_RULES:
            raise ProofViolation(path, f"{p.rule} is not an infinitary rule")
        shapes = set()
        for nu in range(omega_k + 1):
            try:
                expected = omega_premise(p.conclusion, p.rule, p.pos, nu)
            except RuleViolation as e:
                raise ProofViolation(path, str(e)) from e
            inst = instantiate_proof(p.template, nu)
            shapes.add(skeleton(inst))
            if inst.conclusion != expected:
                raise ProofViolation(
                    path + f"/omega@{nu}", "template conclusion does not match the premise"
                )
            _check_node(inst, lemmas, ih, omega_k, path + f"/omega@{nu}")
        if len(shapes) > 1:
            raise ProofViolation(path, "omega template instantiations disagree in shape")
        return

    rule = p.rule
    if isinstance(rule, AxiomInstance):
        if p.premises:
            raise ProofViolation(path, "axiom leaves take no premises")
        try:
            want = instance_sequent(rule)
        except (ValueError, TypeError) as e:
            raise ProofViolation(path, f"malformed axiom instance: {e}") from e
        if want != p.conclusion:
            raise ProofViolation(path, f"conclusion is not the {rule.schema} instance")
        return
    if rule == "lemma":
        fam = lemmas.get(p.params.get("name"))
        if fam is None:
            raise ProofViolation(path, f"unknown lemma {p.params.get('name')!r}")
        if p.premises:
            raise ProofViolation(path, "lemma leaves take no premises")
        index = p.params.get("index")
        if not isinstance(index, int) or index < 0:
            raise ProofViolation(path, "lemma index must be a concrete numeral")
        if p.conclusion != instantiate(fam.scheme, index):
            raise ProofViolation(path, f"conclusion is not {fam.name}@{index}")
        return
    if rule == "ih":
        if ih is None:
            raise ProofViolation(path, "ih leaf outside a lemma step")
        if p.premises:
            raise ProofViolation(path, "ih leaves take no premises")
        if p.conclusion != ih:
            raise ProofViolation(path, "ih leaf concludes the wrong sequent")
        return

    try:
        check_rule(p.conclusion, [q.conclusion for q in p.premises], rule, p.params)
    except RuleViolation as e:
        raise ProofViolation(path, str(e)) from e
    except (KeyError, TypeError, ValueError) as e:
        raise ProofViolation(path, f"bad rule instance: {e}") from e
    for i, q in enumerate(p.premises):
        _check_node(q, lemmas, ih, omega_k, f"{path}/{rule}.{i}")


# ---------------------------------------------------------------------------
# cut bookkeeping


def cut_formulas(doc: ProofDocument) -> list[Formula]:
    """Multiset of cut formulas, including those inside templates (holed)."""
    out: list[Formula] = []

    def walk(p: Proof):
        if isinstance(p, OmegaNode):
            walk(p.template)
            return
        if isinstance(p.rule, str) and p.rule == "cut":
            out.append(p.params["formula"])
        for q in p.premises:
            walk(q)

    for fam in doc.lemmas:
        walk(fam.base)
        walk(fam.step)
    walk(doc.root)
    return out


def _in_axiom_succedent_shape(f: Formula) -> bool:
    """Whether some non-id axiom instance carries f in its succedent.

    Succedents of the equality and extralogical schemas consist of atomic
    formulas, density instances and cofinality disjunctions; nothing else.
    """
    if is_atomic(f):
        return True
    if isinstance(f, RBigVee):
        return True
    if isinstance(f, ELabel) and isinstance(f.body, RBigVee):
        return True
    from .axioms import _density_shape

    return _density_shape(f) is not None


def restricted_cuts(doc: ProofDocument) -> bool:
    """Every cut formula occurs in the succedent of a non-id axiom."""
    return all(_in_axiom_succedent_shape(f) for f in cut_formulas(doc))


# ---------------------------------------------------------------------------
# serialization (json tree of records; texts use the extended grammar)


FORMAT_NAME = "mtl2-proof"


def _dump_params(params: dict, param: str) -> dict:
    out = {}
    for k in sorted(params):
        v = params[k]
        if isinstance(v, Hole):
            out[k] = {"nat": print_nat_text(v, param)}
        elif isinstance(v, int):
            out[k] = v
        elif _is_term(v):
            out[k] = {"term": print_term(v, param)}
        elif _is_formula(v):
            out[k] = {"formula": print_formula(v, param)}
        else:
            out[k] = v
    return out


def print_nat_text(e: NatExpr, param: str) -> str:
    if isinstance(e, Hole):
        return param if e.offset == 0 else f"{param}+{e.offset}"
    return str(e)


def parse_nat_text(text: str, param: Optional[str]):
    text = text.strip()
    if text.isdigit():
        return int(text)
    if param is None:
        raise ValueError(f"numeral expected: {text!r}")
    if text == param:
        return Hole(0)
    head, _, off = text.partition("+")
    if head.strip() == param and off.strip().isdigit():
        return Hole(int(off))
    raise ValueError(f"bad numeral expression {text!r}")


def _load_params(data: dict, param: Optional[str]) -> dict:
    out = {}
    for k, v in data.items():
        if isinstance(v, dict) and "term" in v:
            out[k] = parse_term(v["term"], param)
        elif isinstance(v, dict) and "formula" in v:
            out[k] = parse_formula_any(v["formula"], param)
        elif isinstance(v, dict) and "nat" in v:
            out[k] = parse_nat_text(v["nat"], param)
        else:
            out[k] = v
    return out


def parse_formula_any(text: str, param: Optional[str]) -> Formula:
    """Parse a formula without the external-level restriction (cut formulas
    and axiom parts are always external, but rho/eta parts may be bare)."""
    from .grammar import _Parser

    p = _Parser(text, param)
    f = p.formula()
    if not p.done():
        raise ValueError(f"trailing input in {text!r}")
    return f


def _dump_axiom(inst: AxiomInstance, param: str) -> dict:
    out = {"axiom": inst.schema}
    if inst.terms:
        out["terms"] = [print_term(t, param) for t in inst.terms]
    if inst.label is not None:
        out["label"] = print_term(inst.label, param)
    if inst.rho is not None:
        out["rho"] = {
            "rel": inst.rho.rel,
            "args": [
                ["z", print_nat_text(payload, param)] if tag == "z" else ["t", print_term(payload, param)]
                for tag, payload in inst.rho.args
            ],
        }
    if inst.eta is not None:
        out["eta"] = print_formula(inst.eta, param)
    if inst.formula is not None:
        out["formula"] = print_formula(inst.formula, param)
    if inst.var is not None:
        out["var"] = inst.var
    return out


def _load_axiom(data: dict, param: Optional[str]) -> AxiomInstance:
    rho = None
    if "rho" in data:
        args = []
        for tag, payload in data["rho"]["args"]:
            if tag == "z":
                args.append(("z", parse_nat_text(str(payload), param)))
            else:
                args.append(("t", parse_term(payload, param)))
        rho = RhoAtom(data["rho"]["rel"], tuple(args))
    return AxiomInstance(
        schema=data["axiom"],
        terms=tuple(parse_term(t, param) for t in data.get("terms", [])),
        label=parse_term(data["label"], param) if "label" in data else None,
        rho=rho,
        eta=parse_formula_any(data["eta"], param) if "eta" in data else None,
        formula=parse_formula_any(data["formula"], param) if "formula" in data else None,
        var=data.get("var"),
    )


def _dump_node(p: Proof, param: str) -> dict:
    if isinstance(p, OmegaNode):
        return {
            "conclusion": print_sequent(p.conclusion, param),
            "omega": {
                "rule": p.rule,
                "pos": p.pos,
                "param": p.param,
                "template": _dump_node(p.template, p.param),
            },
        }
    rule = p.rule if isinstance(p.rule, str) else _dump_axiom(p.rule, param)
    out = {"conclusion": print_sequent(p.conclusion, param), "rule": rule}
    if p.params:
        out["params"] = _dump_params(p.params, param)
    if p.premises:
        out["premises"] = [_dump_node(q, param) for q in p.premises]
    return out


def _load_node(data: dict, param: Optional[str]) -> Proof:
    conclusion = parse_sequent(data["conclusion"], param)
    if "omega" in data:
        om = data["omega"]
        return OmegaNode(
            conclusion=conclusion,
            rule=om["rule"],
            pos=om["pos"],
            param=om["param"],
            template=_load_node(om["template"], om["param"]),
        )
    rule = data["rule"]
    if isinstance(rule, dict):
        return ProofNode(conclusion, _load_axiom(rule, param))
    return ProofNode(
        conclusion,
        rule,
        params=_load_params(data.get("params", {}), param),
        premises=tuple(_load_node(q, param) for q in data.get("premises", [])),
    )


def dumps_proof(doc: ProofDocument) -> str:
    payload = {"format": FORMAT_NAME, "root": _dump_node(doc.root, "n")}
    if doc.lemmas:
        payload["lemmas"] = [
            {
                "name": fam.name,
                "param": fam.param,
                "scheme": print_sequent(fam.scheme, fam.param),
                "base": _dump_node(fam.base, fam.param),
                "step": _dump_node(fam.step, fam.param),
            }
            for fam in doc.lemmas
        ]
    return json.dumps(payload, indent=1) + "\n"


class ProofFormatError(ValueError):
    pass


def loads_proof(text: str) -> ProofDocument:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProofFormatError(f"not a json document: {e}") from e
    if not isinstance(payload, dict) or payload.get("format") != FORMAT_NAME:
        raise ProofFormatError("missing or wrong format marker")
    try:
        lemmas = tuple(
            LemmaFamily(
                name=item["name"],
                param=item["param"],
                scheme=parse_sequent(item["scheme"], item["param"]),
                base=_load_node(item["base"], item["param"]),
                step=_load_node(item["step"], item["param"]),
            )
            for item in payload.get("lemmas", [])
        )
        root = _load_node(payload["root"], None)
    except (KeyError, ValueError) as e:
        raise ProofFormatError(f"malformed proof document: {e}") from e
    return ProofDocument(root=root, lemmas=lemmas)
