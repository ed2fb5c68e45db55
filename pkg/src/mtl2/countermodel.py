"""Countermodel construction from open-branch prefixes.

External terms are quotiented by the equations collected on the branch, the
order atoms become a strict difference-constraint system over Q+ (every
function application contributes exactly +1, constants sit at 0), and the
system is solved exactly: longest-path potentials with an infinitesimal
strictness slack, then the largest admissible rational slack (which places
singly-bounded values at midpoints).  The same solver runs once per external
class for the internal terms.

The valuation realises the branch's labelled facts: every labelled letter
contributes a degenerate region, and labelled boxes over letters contribute
the corresponding rectangular region (a finite prefix can never satisfy a
universally quantified hypothesis with point regions alone).  Every model
produced here is only surfaced after independent verification.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .intervals import Interval, IntervalSet, interval_of, point
from .model import ModelDescription, Region
from .syntax import (
    ELabel,
    ETerm,
    FBox,
    Formula,
    ILabel,
    ITerm,
    PLetter,
    RAtom,
    Sequent,
    Term,
)


class CountermodelError(ValueError):
    def __init__(self, reason: str, detail: str = ""):
        super().__init__(f"{reason}{': ' + detail if detail else ''}")
        self.reason = reason


class _DiffSolver:
    """Union-find with integer offsets plus strict longest-path placement."""

    def __init__(self, anchor: str):
        self.anchor = anchor
        self.parent: dict = {}
        self.offset: dict = {}  # value(b) = value(parent(b)) + offset(b)
        self.order: list = []
        self._touch(anchor)

    def _touch(self, base: str):
        if base not in self.parent:
            self.parent[base] = base
            self.offset[base] = Fraction(0)
            self.order.append(base)

    def find(self, base: str):
        self._touch(base)
        if self.parent[base] == base:
            return base, Fraction(0)
        root, above = self.find(self.parent[base])
        self.parent[base] = root
        self.offset[base] += above
        return root, self.offset[base]

    def equate(self, t1: Term, t2: Term):
        r1, o1 = self.find(t1.base)
        r2, o2 = self.find(t2.base)
        # value(t1) = value(t2):  value(r1) + o1 + d1 = value(r2) + o2 + d2
        lhs = o1 + t1.depth
        rhs = o2 + t2.depth
        if r1 == r2:
            if lhs != rhs:
                raise CountermodelError(
                    "equation-conflict", "equations contradict the successor offsets"
                )
            return
        # attach the later-seen root below the earlier-seen one
        if self.order.index(r1) > self.order.index(r2):
            r1, r2 = r2, r1
            lhs, rhs = rhs, lhs
        self.parent[r2] = r1
        self.offset[r2] = lhs - rhs

    def resolve(self, t: Term):
        root, off = self.find(t.base)
        return root, off + t.depth

    def solve(self, strict: list) -> dict:
        """Assign a rational value to every known base.

        strict: list of (t1, t2) with value(t1) < value(t2) required.
        """
        roots = []
        members: dict = {}
        for b in self.order:
            r, _ = self.find(b)
            members.setdefault(r, []).append(b)
            if r not in roots:
                roots.append(r)
        anchor_root, anchor_off = self.find(self.anchor)
        fixed = {anchor_root: -anchor_off}

        dist = {}
        for r in roots:
            floor = max(-self.offset_of(b) for b in members[r])
            if r in fixed:
                if fixed[r] < floor:
                    raise CountermodelError(
                        "equation-conflict", "a term is forced below the least element"
                    )
                dist[r] = (fixed[r], 0)
            else:
                dist[r] = (max(floor, Fraction(0)), 0)

        edges = []
        for t1, t2 in strict:
            r1, o1 = self.resolve(t1)
            r2, o2 = self.resolve(t2)
            if r1 == r2:
                if not o1 < o2:
                    raise CountermodelError(
                        "order-cycle", "order atoms admit no strict solution"
                    )
                continue
            edges.append((r1, r2, o1 - o2))

        for _ in range(len(roots) + 1):
            improved = False
            for u, v, c in edges:
                cand = (dist[u][0] + c, dist[u][1] + 1)
                if cand > dist[v]:
                    if v in fixed:
                        raise CountermodelError(
                            "order-cycle", "order atoms admit no strict solution"
                        )
                    dist[v] = cand
                    improved = True
            if not improved:
                break
        else:
            raise CountermodelError("order-cycle", "order atoms admit no strict solution")

        slack = Fraction(1)
        for u, v, c in edges:
            gap = dist[v][0] - dist[u][0] - c
            extra = dist[u][1] + 1 - dist[v][1]
            if extra > 0 and gap > 0:
                slack = min(slack, Fraction(gap, extra))

        values = {}
        for r in roots:
            q, k = dist[r]
            values[r] = q + k * slack
        out = {}
        for b in self.order:
            r, off = self.find(b)
            out[b] = values[r] + off
        return out

    def offset_of(self, base: str) -> Fraction:
        _, off = self.find(base)
        return off


def _term_val(values: dict, t: Term) -> Fraction:
    root_free = values.get(t.base)
    if root_free is None:
        return Fraction(0) + t.depth
    return root_free + t.depth


# ---------------------------------------------------------------------------


def _external_atoms(gamma):
    eqs, lts = [], []
    for f in gamma:
        if isinstance(f, RAtom) and isinstance(f.left, ETerm):
            (eqs if f.rel == "=" else lts).append((f.left, f.right))
    return eqs, lts


def _collect_eterms(formulas) -> list[ETerm]:
    out = []
    for f in formulas:
        if isinstance(f, RAtom):
            out.extend(t for t in (f.left, f.right) if isinstance(t, ETerm))
        elif isinstance(f, ELabel):
            out.append(f.term)
    return out


def countermodel_from_branch(gamma: Iterable[Formula], delta: Iterable[Formula]) -> ModelDescription:
    """Build a candidate model falsifying `gamma |- delta` from its prefix.

    Raises CountermodelError when the prefix's equations or order atoms admit
    no solution over the canonical flow.
    """
    gamma = tuple(gamma)
    delta = tuple(delta)

    solver = _DiffSolver("C")
    eqs, lts = _external_atoms(gamma)
    for t1, t2 in eqs:
        solver.equate(t1, t2)
    for t in _collect_eterms(gamma + delta):
        solver.find(t.base)
    ext_values = solver.solve(lts)

    # group the labelled relational facts by the value of their label
    classes: dict = {}
    int_terms_by_class: dict = {}
    for f in gamma + delta:
        if isinstance(f, ELabel):
            a = _term_val(ext_values, f.term)
            classes.setdefault(a, ([], []))
            int_terms_by_class.setdefault(a, set())
            _collect_iterms(f.body, int_terms_by_class[a])
    for f in gamma:
        if isinstance(f, ELabel) and isinstance(f.body, RAtom):
            a = _term_val(ext_values, f.term)
            eqs_a, lts_a = classes[a]
            (eqs_a if f.body.rel == "=" else lts_a).append((f.body.left, f.body.right))

    int_values_by_class: dict = {}
    for a in sorted(classes):
        eqs_a, lts_a = classes[a]
        s = _DiffSolver("c")
        for t1, t2 in eqs_a:
            s.equate(t1, t2)
        for t in sorted(int_terms_by_class[a], key=lambda t: (str(t.base), t.depth)):
            s.find(t.base)
        int_values_by_class[a] = s.solve(lts_a)

    # internal variables take their value from the lowest class mentioning them
    int_assign: dict = {}
    for a in sorted(int_values_by_class):
        for base, v in int_values_by_class[a].items():
            if base != "c" and base not in int_assign:
                int_assign[base] = v

    ext_assign = {b: v for b, v in ext_values.items() if b != "C"}

    def ival(a: Fraction, t: ITerm) -> Fraction:
        vals = int_values_by_class.get(a, {})
        base = vals.get(t.base)
        if base is None:
            base = int_assign.get(t.base, Fraction(0))
        return base + t.depth

    regions = []
    for f in gamma:
        if not isinstance(f, ELabel):
            continue
        a = _term_val(ext_values, f.term)
        ext_iv = point(a)
        body = f.body
        if isinstance(body, FBox) and isinstance(body.body, ILabel):
            ext_iv = interval_of(body.spec, a)
            body = body.body
        if isinstance(body, ILabel):
            t_val = ival(a, body.term)
            inner = body.body
            if isinstance(inner, PLetter):
                regions.append(Region(inner.index, ext_iv, IntervalSet.of([point(t_val)])))
            elif isinstance(inner, FBox) and isinstance(inner.body, PLetter):
                regions.append(
                    Region(
                        inner.body.index,
                        ext_iv,
                        IntervalSet.of([interval_of(inner.spec, t_val)]),
                    )
                )

    return ModelDescription.build(regions, ext_assign, int_assign)


def _collect_iterms(f: Formula, out: set):
    match f:
        case RAtom(_, a, b):
            if isinstance(a, ITerm):
                out.add(a)
                out.add(b)
        case ILabel(t, body):
            out.add(t)
            _collect_iterms(body, out)
        case FBox(_, body):
            _collect_iterms(body, out)
        case _:
            pass


def verify_countermodel(m: ModelDescription, s: Sequent) -> bool:
    """True when the model falsifies the sequent (checked by evaluation)."""
    from .semantics import falsifies

    return falsifies(m, s)
