"""Exact evaluation over the canonical pre-structure (Q+ with q -> q+1).

Temporal truth is computed as interval sets (box = erosion); relational truth
uses exact rational comparison, with quantifiers decided by a critical-point
candidate method (term values closed under +-1, midpoints, and one point past
the maximum).  The candidate method is a tested heuristic for the fragment we
use; `exceeds_tested_fragment` reports when a formula falls outside it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .intervals import Interval, IntervalSet, erode, interval_of, point
from .model import ModelDescription
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
    kind_of,
    nat_is_concrete,
)


def term_value(t: Term, m: ModelDescription, env: Optional[dict] = None) -> Fraction:
    """Interpretation of a normal-form term: base value plus depth."""
    if not nat_is_concrete(t.depth):
        raise ValueError("cannot evaluate a term with a numeral hole")
    if not t.is_var:
        base = Fraction(0)
    elif env is not None and t.base in env:
        base = env[t.base]
    elif isinstance(t, ITerm):
        base = m.int_value(t.base)
    else:
        base = m.ext_value(t.base)
    return base + t.depth


# ---------------------------------------------------------------------------
# temporal truth sets


def truthset_internal(psi: Formula, a: Fraction, m: ModelDescription) -> IntervalSet:
    """Internal points (of the flow indexed by external point a) where psi holds."""
    match psi:
        case PLetter(k):
            return IntervalSet.of(
                iv for r in m.regions if r.letter == k and r.ext.contains(a) for iv in r.int_set.parts
            )
        case FNot(b):
            return truthset_internal(b, a, m).complement()
        case FAnd(x, y):
            return truthset_internal(x, a, m).intersect(truthset_internal(y, a, m))
        case FOr(x, y):
            return truthset_internal(x, a, m).union(truthset_internal(y, a, m))
        case FImp(x, y):
            return truthset_internal(x, a, m).complement().union(truthset_internal(y, a, m))
        case FBox(spec, b):
            return erode(truthset_internal(b, a, m), spec)
    raise TypeError(f"not an internal temporal formula: {psi!r}")


def external_cells(m: ModelDescription) -> list[Interval]:
    """Partition of [0, oo) on which every region membership is constant."""
    bounds = m.ext_boundaries()
    if not bounds:
        return [Interval(Fraction(0), None, True, False)]
    cells: list[Interval] = []
    if bounds[0] > 0:
        cells.append(Interval(Fraction(0), bounds[0], True, False))
    for i, b in enumerate(bounds):
        cells.append(point(b))
        if i + 1 < len(bounds):
            cells.append(Interval(b, bounds[i + 1], False, False))
        else:
            cells.append(Interval(b, None, False, False))
    return cells


def truthset_external(beta: Formula, m: ModelDescription) -> IntervalSet:
    """External points where an external temporal formula holds."""
    match beta:
        case ILabel(t, psi):
            v = term_value(t, m)
            good = []
            for cell in external_cells(m):
                if truthset_internal(psi, cell.sample(), m).contains(v):
                    good.append(cell)
            return IntervalSet.of(good)
        case FNot(b):
            return truthset_external(b, m).complement()
        case FAnd(x, y):
            return truthset_external(x, m).intersect(truthset_external(y, m))
        case FOr(x, y):
            return truthset_external(x, m).union(truthset_external(y, m))
        case FImp(x, y):
            return truthset_external(x, m).complement().union(truthset_external(y, m))
        case FBox(spec, b):
            return erode(truthset_external(b, m), spec)
    raise TypeError(f"not an external temporal formula: {beta!r}")


# ---------------------------------------------------------------------------
# relational truth (first-order over (Q+, <, 0, +1))


def _collect_free_term_values(f: Formula, m: ModelDescription, bound: frozenset, out: set) -> None:
    match f:
        case RAtom(_, a, b):
            for t in (a, b):
                if not (t.is_var and t.base in bound):
                    out.add(term_value(t, m))
        case RBigVee(t):
            if not (t.is_var and t.base in bound):
                out.add(term_value(t, m))
        case FNot(a):
            _collect_free_term_values(a, m, bound, out)
        case FAnd(a, b) | FOr(a, b) | FImp(a, b):
            _collect_free_term_values(a, m, bound, out)
            _collect_free_term_values(b, m, bound, out)
        case RForall(v, a) | RExists(v, a):
            _collect_free_term_values(a, m, bound | {v}, out)


def quantifier_nesting(f: Formula) -> int:
    match f:
        case RForall(_, a) | RExists(_, a):
            return 1 + quantifier_nesting(a)
        case FNot(a):
            return quantifier_nesting(a)
        case FAnd(a, b) | FOr(a, b) | FImp(a, b):
            return max(quantifier_nesting(a), quantifier_nesting(b))
        case _:
            return 0


def max_f_depth(f: Formula) -> int:
    match f:
        case RAtom(_, a, b):
            return max(int(a.depth), int(b.depth))
        case RBigVee(t):
            return int(t.depth)
        case FNot(a):
            return max_f_depth(a)
        case FAnd(a, b) | FOr(a, b) | FImp(a, b):
            return max(max_f_depth(a), max_f_depth(b))
        case RForall(_, a) | RExists(_, a):
            return max_f_depth(a)
        case _:
            return 0


def quantifier_candidates(f: Formula, m: ModelDescription) -> list[Fraction]:
    """Critical points: free term values, closed under +-1, plus midpoints
    of consecutive candidates and one point past the maximum."""
    values: set = {Fraction(0)}
    _collect_free_term_values(f, m, frozenset(), values)
    rounds = quantifier_nesting(f) * max_f_depth(f)
    for _ in range(rounds):
        fresh = set()
        for v in values:
            fresh.add(v + 1)
            fresh.add(max(v - 1, Fraction(0)))
        values |= fresh
    ordered = sorted(values)
    mids = [(a + b) / 2 for a, b in zip(ordered, ordered[1:])]
    values |= set(mids)
    values.add(max(values) + 1)
    return sorted(values)


def exceeds_tested_fragment(f: Formula) -> bool:
    """Whether the quantifier heuristic runs outside its validated range."""
    return quantifier_nesting(f) > 2 or max_f_depth(f) > 2


def eval_relational(f: Formula, m: ModelDescription, env: Optional[dict] = None) -> bool:
    """Truth of a relational formula (internal or external level alike)."""
    env = dict(env or {})
    candidates = quantifier_candidates(f, m)
    return _eval_rel(f, m, env, candidates)


def _eval_rel(f, m, env, candidates) -> bool:
    match f:
        case RAtom(rel, a, b):
            va, vb = term_value(a, m, env), term_value(b, m, env)
            return va == vb if rel == "=" else va < vb
        case RBigVee(_):
            # the iterated-successor sequence is cofinal in Q+
            return True
        case FNot(a):
            return not _eval_rel(a, m, env, candidates)
        case FAnd(a, b):
            return _eval_rel(a, m, env, candidates) and _eval_rel(b, m, env, candidates)
        case FOr(a, b):
            return _eval_rel(a, m, env, candidates) or _eval_rel(b, m, env, candidates)
        case FImp(a, b):
            return (not _eval_rel(a, m, env, candidates)) or _eval_rel(b, m, env, candidates)
        case RForall(v, a):
            return all(_eval_rel(a, m, {**env, v: q}, candidates) for q in candidates)
        case RExists(v, a):
            return any(_eval_rel(a, m, {**env, v: q}, candidates) for q in candidates)
    raise TypeError(f"not a relational formula: {f!r}")


# ---------------------------------------------------------------------------
# sequent truth


def eval_external_formula(f: Formula, m: ModelDescription) -> bool:
    """Truth of a sequent member in the model."""
    if isinstance(f, ELabel):
        a = term_value(f.term, m)
        if kind_of(f.body) == "IR":
            return eval_relational(f.body, m)
        return truthset_external(f.body, m).contains(a)
    return eval_relational(f, m)


def eval_sequent(s: Sequent, m: ModelDescription) -> bool:
    """False exactly when every antecedent member holds and no succedent member does."""
    return any(not eval_external_formula(f, m) for f in s.antecedent) or any(
        eval_external_formula(f, m) for f in s.succedent
    )


def falsifies(m: ModelDescription, s: Sequent) -> bool:
    return not eval_sequent(s, m)
