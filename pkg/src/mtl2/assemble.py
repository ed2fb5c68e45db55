"""Proof assembly helpers: structural bridges, cut cascades, rule chunks.

Structural rules are explicit nodes, so moving between "the axiom instance"
and "the branch sequent containing its formulas somewhere" takes a chain of
weakening/exchange/contraction nodes.  These builders construct such chains
and keep every intermediate conclusion explicit.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .axioms import AxiomInstance, instance_sequent
from .proofs import OmegaNode, Proof, ProofNode
from .rules import premises_of
from .syntax import Formula, Sequent


class _Deriver:
    """Grows a proof downward through structural rules."""

    def __init__(self, proof: Proof):
        self.proof = proof
        self.ant = list(proof.conclusion.antecedent)
        self.suc = list(proof.conclusion.succedent)

    def weaken(self, side: str, pos: int, formula: Formula):
        coll = self.ant if side == "ant" else self.suc
        coll.insert(pos, formula)
        conclusion = Sequent(tuple(self.ant), tuple(self.suc))
        rule = "weaken_l" if side == "ant" else "weaken_r"
        self.proof = ProofNode(conclusion, rule, {"pos": pos}, (self.proof,))

    def exchange(self, side: str, pos: int):
        coll = self.ant if side == "ant" else self.suc
        coll[pos], coll[pos + 1] = coll[pos + 1], coll[pos]
        conclusion = Sequent(tuple(self.ant), tuple(self.suc))
        rule = "exchange_l" if side == "ant" else "exchange_r"
        self.proof = ProofNode(conclusion, rule, {"pos": pos}, (self.proof,))

    def contract(self, side: str, pos: int):
        # adjacent copies at pos, pos+1 merge into one
        coll = self.ant if side == "ant" else self.suc
        assert coll[pos] == coll[pos + 1], "contraction needs adjacent copies"
        del coll[pos + 1]
        conclusion = Sequent(tuple(self.ant), tuple(self.suc))
        rule = "contract_l" if side == "ant" else "contract_r"
        self.proof = ProofNode(conclusion, rule, {"pos": pos}, (self.proof,))

    def move(self, side: str, src: int, dst: int):
        """Bubble the item at src to dst by adjacent exchanges."""
        if src > dst:
            for k in range(src - 1, dst - 1, -1):
                self.exchange(side, k)
        else:
            for k in range(src, dst):
                self.exchange(side, k)


def bridge(proof: Proof, target: Sequent) -> Proof:
    """Derive `target` from `proof` by structural rules only.

    Requires every formula of the proof's conclusion to occur on the same
    side of `target`.
    """
    d = _Deriver(proof)
    for side in ("ant", "suc"):
        cur = d.ant if side == "ant" else d.suc
        goal = list(target.antecedent if side == "ant" else target.succedent)
        # contract duplicates not supported by the target's multiset
        _dedupe(d, side, goal)
        cur = d.ant if side == "ant" else d.suc
        # weaken in whatever is missing
        missing = list(goal)
        for f in cur:
            missing.remove(f)  # membership guaranteed by the caller
        for f in missing:
            d.weaken(side, len(cur), f)
        # permute into the target order
        cur = d.ant if side == "ant" else d.suc
        for i, f in enumerate(goal):
            j = next(k for k in range(i, len(cur)) if cur[k] == f)
            d.move(side, j, i)
    assert d.proof.conclusion == target, (d.proof.conclusion, target)
    return d.proof


def _dedupe(d: _Deriver, side: str, goal: list):
    """Contract surplus copies down to the multiplicities available in goal."""
    from collections import Counter

    budget = Counter(goal)
    while True:
        cur = d.ant if side == "ant" else d.suc
        counts = Counter(cur)
        surplus = next((f for f, c in counts.items() if c > budget.get(f, 1)), None)
        if surplus is None:
            return
        positions = [i for i, g in enumerate(cur) if g == surplus]
        i, j = positions[0], positions[1]
        d.move(side, j, i + 1)
        d.contract(side, i)


def axiom_leaf(inst: AxiomInstance) -> Proof:
    return ProofNode(instance_sequent(inst), inst)


def closed_by_axiom(inst: AxiomInstance, target: Sequent) -> Proof:
    """Axiom leaf followed by the structural bridge to the branch sequent."""
    leaf = axiom_leaf(inst)
    if leaf.conclusion == target:
        return leaf
    return bridge(leaf, target)


def cut_cascade(target: Sequent, inst: AxiomInstance, child_proofs: list) -> Proof:
    """The case-2 expansion: derive target from an axiom via a chain of cuts.

    child_proofs[i] proves target.antecedent + [D_i] |- target.succedent for
    the axiom succedent D_1..D_m.
    """
    ds = list(instance_sequent(inst).succedent)
    ant, suc = target.antecedent, target.succedent
    top_goal = Sequent(ant, tuple(ds) + suc)
    proof = closed_by_axiom(inst, top_goal)
    for i, d_i in enumerate(ds):
        rest = tuple(ds[i + 1 :])
        conclusion = Sequent(ant, rest + suc)
        right = child_proofs[i]
        want_right = Sequent(ant + (d_i,), rest + suc)
        if right.conclusion != want_right:
            deriver = _Deriver(right)
            for k, f in enumerate(rest):
                deriver.weaken("suc", k, f)
            right = deriver.proof
            assert right.conclusion == want_right, (right.conclusion, want_right)
        proof = ProofNode(conclusion, "cut", {"formula": d_i}, (proof, right))
    assert proof.conclusion == target
    return proof


def logical_chunk(
    target: Sequent,
    side: str,
    pos: int,
    rule: str,
    params: dict,
    child_proofs: list,
    omega: Optional[tuple] = None,
) -> Proof:
    """Apply `rule` to the principal at (side, pos) of `target`, keeping the
    principal in the child sequents (rule at a fresh copy + contraction)."""
    ant, suc = target.antecedent, target.succedent
    if side == "ant":
        principal = ant[pos]
        k_seq = Sequent(ant + (principal,), suc)
        rule_pos = len(ant)
    else:
        principal = suc[pos]
        k_seq = Sequent(ant, (principal,) + suc)
        rule_pos = 0
    full_params = dict(params)
    full_params["pos"] = rule_pos
    if omega is not None:
        param_name, template = omega
        node: Proof = OmegaNode(k_seq, rule, rule_pos, param_name, template)
    else:
        expected = premises_of(k_seq, rule, full_params)
        got = [p.conclusion for p in child_proofs]
        assert expected == got, (rule, expected, got)
        node = ProofNode(k_seq, rule, full_params, tuple(child_proofs))
    d = _Deriver(node)
    if side == "ant":
        d.move("ant", len(ant), pos + 1)
        d.contract("ant", pos)
    else:
        d.move("suc", 0, pos)
        d.contract("suc", pos)
    assert d.proof.conclusion == target, (d.proof.conclusion, target)
    return d.proof
