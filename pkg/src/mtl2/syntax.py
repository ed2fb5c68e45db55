"""Stratified two-level syntax: terms, formulas, sequents.

The language has an internal level (terms over {c, f, <, =}, propositional
letters, temporal boxes) and an external level (upper-case mirror {C, F, <, =},
boxes over labelled formulas).  Formula trees are built from a single family of
node classes; `kind_of` assigns each tree to exactly one stratum and rejects
mixed trees.

Numeral metavariables (`Hole`) may appear in term depths and box bounds; they
only occur inside proof templates and are substituted away before any semantic
or rule-level use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union


class StratificationError(ValueError):
    """A formula tree violates the two-level formation rules."""


class LevelError(ValueError):
    """An operation mixed internal and external material."""


# ---------------------------------------------------------------------------
# numeral expressions (concrete numeral or metavariable + offset)


@dataclass(frozen=True)
class Hole:
    """Numeral metavariable with a nonnegative offset: denotes n + offset."""

    offset: int = 0

    def __post_init__(self):
        if self.offset < 0:
            raise ValueError("hole offset must be nonnegative")

    def shifted(self, k: int) -> "Hole":
        return Hole(self.offset + k)


NatExpr = Union[int, Hole]


def nat_instantiate(e: NatExpr, value: int) -> int:
    if isinstance(e, Hole):
        return value + e.offset
    return e


def nat_shift(e: NatExpr, k: NatExpr) -> NatExpr:
    if isinstance(e, Hole) and isinstance(k, Hole):
        raise ValueError("cannot add two numeral holes")
    if isinstance(e, Hole):
        return e.shifted(k)
    if isinstance(k, Hole):
        return k.shifted(e)
    return e + k


def nat_is_concrete(e: NatExpr) -> bool:
    return isinstance(e, int)


# ---------------------------------------------------------------------------
# terms

_IVAR = re.compile(r"^x(\d+)$")
_EVAR = re.compile(r"^X(\d+)$")


@dataclass(frozen=True)
class ITerm:
    """Internal term in normal form: f^depth(base), base `c` or `x<k>`."""

    base: str
    depth: NatExpr = 0

    def __post_init__(self):
        if self.base != "c" and not _IVAR.match(self.base):
            raise ValueError(f"bad internal base {self.base!r}")
        if isinstance(self.depth, int) and self.depth < 0:
            raise ValueError("negative depth")

    @property
    def is_var(self) -> bool:
        return self.base != "c"

    def bump(self, k: int = 1) -> "ITerm":
        return ITerm(self.base, nat_shift(self.depth, k))


@dataclass(frozen=True)
class ETerm:
    """External term in normal form: F^depth(base), base `C` or `X<k>`."""

    base: str
    depth: NatExpr = 0

    def __post_init__(self):
        if self.base != "C" and not _EVAR.match(self.base):
            raise ValueError(f"bad external base {self.base!r}")
        if isinstance(self.depth, int) and self.depth < 0:
            raise ValueError("negative depth")

    @property
    def is_var(self) -> bool:
        return self.base != "C"

    def bump(self, k: int = 1) -> "ETerm":
        return ETerm(self.base, nat_shift(self.depth, k))


Term = Union[ITerm, ETerm]


def var_index(name: str) -> int:
    m = _IVAR.match(name) or _EVAR.match(name)
    if not m:
        raise ValueError(f"not a variable: {name}")
    return int(m.group(1))


def is_internal_name(name: str) -> bool:
    return name == "c" or bool(_IVAR.match(name))


# raw (unnormalised) term trees -- the surface shape f(f(c)) etc.


@dataclass(frozen=True)
class RawTerm:
    """Surface term tree: `apps` nested applications of f/F around a base."""

    base: str
    apps: int = 0


def normalize_term(raw: RawTerm) -> Term:
    """Collapse a raw application tree to (base, depth) normal form."""
    if is_internal_name(raw.base):
        return ITerm(raw.base, raw.apps)
    return ETerm(raw.base, raw.apps)


def denormalize_term(t: Term) -> RawTerm:
    if not nat_is_concrete(t.depth):
        raise ValueError("cannot denormalise a term with a numeral hole")
    return RawTerm(t.base, t.depth)


# ---------------------------------------------------------------------------
# interval specifications for the six box shapes


@dataclass(frozen=True)
class IntervalSpec:
    """Bounds (m, n) with open/closed flags; upper None means unbounded."""

    lower: NatExpr
    upper: Optional[NatExpr]
    lower_closed: bool
    upper_closed: bool

    def __post_init__(self):
        if self.upper is None:
            if self.upper_closed:
                raise ValueError("unbounded interval must be upper-open")
            return
        holed_lo = isinstance(self.lower, Hole)
        holed_hi = isinstance(self.upper, Hole)
        lo = self.lower.offset if holed_lo else self.lower
        hi = self.upper.offset if holed_hi else self.upper
        if holed_lo and not holed_hi:
            # lower grows with the numeral while upper stays fixed
            raise ValueError("interval needs lower < upper for every numeral")
        if not lo < hi:
            raise ValueError("interval needs lower < upper")

    @property
    def unbounded(self) -> bool:
        return self.upper is None

    def shape(self) -> str:
        """One of cc, oc, co, oo, cinf, oinf (bracket shape only)."""
        if self.unbounded:
            return "cinf" if self.lower_closed else "oinf"
        return ("c" if self.lower_closed else "o") + ("c" if self.upper_closed else "o")


SPEC_SHAPES = ("cc", "oc", "co", "oo", "cinf", "oinf")


def spec_of_shape(shape: str, m: int, n: Optional[int]) -> IntervalSpec:
    if shape == "cinf":
        return IntervalSpec(m, None, True, False)
    if shape == "oinf":
        return IntervalSpec(m, None, False, False)
    return IntervalSpec(m, n, shape[0] == "c", shape[1] == "c")


# ---------------------------------------------------------------------------
# formula nodes (shared across the strata; `kind_of` sorts them out)


@dataclass(frozen=True)
class PLetter:
    index: int


@dataclass(frozen=True)
class RAtom:
    rel: str  # '=' or '<'
    left: Term
    right: Term

    def __post_init__(self):
        if self.rel not in ("=", "<"):
            raise ValueError(f"bad relation {self.rel!r}")
        if isinstance(self.left, ITerm) != isinstance(self.right, ITerm):
            raise LevelError("relational atom mixes internal and external terms")


@dataclass(frozen=True)
class RBigVee:
    """Infinitary disjunction over n of (t < f^n(c)); only this shape exists."""

    term: Term


@dataclass(frozen=True)
class FNot:
    body: "Formula"


@dataclass(frozen=True)
class FAnd:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class FOr:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class FImp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class RForall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class RExists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class FBox:
    spec: IntervalSpec
    body: "Formula"


@dataclass(frozen=True)
class ILabel:
    """Internal labelled formula t : psi with psi internal temporal."""

    term: ITerm
    body: "Formula"


@dataclass(frozen=True)
class ELabel:
    """External labelled formula S : beta; beta external temporal or internal relational."""

    term: ETerm
    body: "Formula"


Formula = Union[
    PLetter, RAtom, RBigVee, FNot, FAnd, FOr, FImp, RForall, RExists, FBox, ILabel, ELabel
]

_CONNECTIVES = (FNot, FAnd, FOr, FImp)


# ---------------------------------------------------------------------------
# stratification

# kinds: 'IT' internal temporal, 'IR' internal relational, 'ET' external
# temporal (closure of internal labelled formulas), 'ER' external relational.


def kind_of(f: Formula) -> str:
    """Classify a tree into its stratum, raising on malformed mixes."""
    match f:
        case PLetter():
            return "IT"
        case RAtom(_, left, _):
            return "IR" if isinstance(left, ITerm) else "ER"
        case RBigVee(term):
            return "IR" if isinstance(term, ITerm) else "ER"
        case ILabel(_, body):
            if kind_of(body) != "IT":
                raise StratificationError(
                    "internal label body must be internal temporal "
                    "(internal label under internal label is not allowed)"
                )
            return "ET"
        case ELabel():
            raise StratificationError("external label cannot occur inside a formula")
        case FNot(body):
            return _connective_kind((body,))
        case FAnd(a, b) | FOr(a, b) | FImp(a, b):
            return _connective_kind((a, b))
        case RForall(var, body) | RExists(var, body):
            k = kind_of(body)
            if k not in ("IR", "ER"):
                raise StratificationError("quantifier applied to a non-relational formula")
            if (k == "IR") != is_internal_name(var):
                raise StratificationError("quantifier variable level mismatch")
            return k
        case FBox(_, body):
            k = kind_of(body)
            if k not in ("IT", "ET"):
                raise StratificationError("box applied to a relational formula")
            return k
    raise TypeError(f"not a formula: {f!r}")


def _connective_kind(parts) -> str:
    kinds = {kind_of(p) for p in parts}
    if len(kinds) != 1:
        raise StratificationError(
            f"connective mixes strata {sorted(kinds)}: relational and labelled "
            "formulas cannot be combined"
        )
    return kinds.pop()


def is_external_formula(f: Formula) -> bool:
    """Whether f may occur in a sequent (external relational or labelled)."""
    if isinstance(f, ELabel):
        return kind_of(f.body) in ("ET", "IR")
    return kind_of(f) == "ER"


def validate_external(f: Formula) -> None:
    if not is_external_formula(f):
        raise StratificationError(
            f"not an external-level formula: stratum {kind_of(f)}"
        )


def is_atomic(f: Formula) -> bool:
    """Atomicity on sequent members: relational atoms and S:beta with beta atomic."""
    match f:
        case RAtom():
            return True
        case ELabel(_, body):
            return _atomic_body(body)
        case _:
            return False


def _atomic_body(body: Formula) -> bool:
    match body:
        case RAtom():
            return True
        case ILabel(_, PLetter()):
            return True
        case _:
            return False


# ---------------------------------------------------------------------------
# sequents


@dataclass(frozen=True)
class Sequent:
    antecedent: tuple
    succedent: tuple

    def __post_init__(self):
        for f in self.antecedent + self.succedent:
            validate_external(f)

    def formulas(self) -> Iterator[tuple]:
        for i, f in enumerate(self.antecedent):
            yield ("ant", i, f)
        for i, f in enumerate(self.succedent):
            yield ("suc", i, f)


def sequent(ant, suc) -> Sequent:
    return Sequent(tuple(ant), tuple(suc))


# ---------------------------------------------------------------------------
# free variables / substitution


def free_vars(f: Formula) -> tuple[frozenset, frozenset]:
    """(external names, internal names) of variables occurring free."""
    ext: set = set()
    intl: set = set()
    _free(f, frozenset(), ext, intl)
    return frozenset(ext), frozenset(intl)


def free_vars_sequent(s: Sequent) -> tuple[frozenset, frozenset]:
    ext: set = set()
    intl: set = set()
    for f in s.antecedent + s.succedent:
        e, i = free_vars(f)
        ext |= e
        intl |= i
    return frozenset(ext), frozenset(intl)


def _term_free(t: Term, bound, ext, intl):
    if not t.is_var or t.base in bound:
        return
    (intl if isinstance(t, ITerm) else ext).add(t.base)


def _free(f: Formula, bound, ext, intl):
    match f:
        case PLetter():
            pass
        case RAtom(_, a, b):
            _term_free(a, bound, ext, intl)
            _term_free(b, bound, ext, intl)
        case RBigVee(t):
            _term_free(t, bound, ext, intl)
        case FNot(a):
            _free(a, bound, ext, intl)
        case FAnd(a, b) | FOr(a, b) | FImp(a, b):
            _free(a, bound, ext, intl)
            _free(b, bound, ext, intl)
        case RForall(v, a) | RExists(v, a):
            _free(a, bound | {v}, ext, intl)
        case FBox(_, a):
            _free(a, bound, ext, intl)
        case ILabel(t, a):
            _term_free(t, bound, ext, intl)
            _free(a, bound, ext, intl)
        case ELabel(t, a):
            _term_free(t, bound, ext, intl)
            _free(a, bound, ext, intl)


def fresh_var(level: str, avoid: frozenset) -> str:
    """Least-index variable of the given level ('i' or 'e') not in avoid."""
    prefix = "x" if level == "i" else "X"
    k = 0
    while f"{prefix}{k}" in avoid:
        k += 1
    return f"{prefix}{k}"


def _subst_term(t: Term, var: str, repl: Term) -> Term:
    if t.is_var and t.base == var:
        return type(repl)(repl.base, _depth_add(repl.depth, t.depth))
    return t


def _depth_add(a: NatExpr, b: NatExpr):
    if isinstance(a, Hole) and isinstance(b, Hole):
        raise ValueError("cannot add two numeral holes")
    if isinstance(a, Hole):
        return a.shifted(b)
    if isinstance(b, Hole):
        return b.shifted(a)
    return a + b


def substitute(f: Formula, var: str, repl: Term) -> Formula:
    """Capture-avoiding substitution of `repl` for variable `var`.

    The variable and the term must live on the same level.
    """
    if is_internal_name(var) != isinstance(repl, ITerm):
        raise LevelError("substitution mixes levels")
    return _subst(f, var, repl)


def _subst(f: Formula, var: str, repl: Term) -> Formula:
    match f:
        case PLetter():
            return f
        case RAtom(rel, a, b):
            return RAtom(rel, _subst_term(a, var, repl), _subst_term(b, var, repl))
        case RBigVee(t):
            return RBigVee(_subst_term(t, var, repl))
        case FNot(a):
            return FNot(_subst(a, var, repl))
        case FAnd(a, b):
            return FAnd(_subst(a, var, repl), _subst(b, var, repl))
        case FOr(a, b):
            return FOr(_subst(a, var, repl), _subst(b, var, repl))
        case FImp(a, b):
            return FImp(_subst(a, var, repl), _subst(b, var, repl))
        case RForall(v, a) | RExists(v, a):
            cls = RForall if isinstance(f, RForall) else RExists
            if v == var:
                return f
            if repl.is_var and repl.base == v:
                # rename the bound variable away from the replacement
                e, i = free_vars(a)
                avoid = e | i | {var, repl.base}
                v2 = fresh_var("i" if is_internal_name(v) else "e", avoid)
                a = _subst(a, v, _var_term(v2))
                v = v2
            return cls(v, _subst(a, var, repl))
        case FBox(spec, a):
            return FBox(spec, _subst(a, var, repl))
        case ILabel(t, a):
            return ILabel(_subst_term(t, var, repl), _subst(a, var, repl))
        case ELabel(t, a):
            return ELabel(_subst_term(t, var, repl), _subst(a, var, repl))
    raise TypeError(f"not a formula: {f!r}")


def _var_term(name: str) -> Term:
    return ITerm(name) if is_internal_name(name) else ETerm(name)


def substitute_sequent(s: Sequent, var: str, repl: Term) -> Sequent:
    return Sequent(
        tuple(substitute(f, var, repl) for f in s.antecedent),
        tuple(substitute(f, var, repl) for f in s.succedent),
    )


# ---------------------------------------------------------------------------
# subformulas

def subformulas(f: Formula) -> list:
    """Structural subformulas, the formula itself first.

    Quantified bodies are reported as written; infinitary disjunctions are
    reported as single nodes.  Use `bigvee_instance` / `instantiate_body` to
    materialise the countably many instances on demand.
    """
    out = [f]
    match f:
        case PLetter() | RAtom() | RBigVee():
            pass
        case FNot(a) | FBox(_, a) | RForall(_, a) | RExists(_, a):
            out.extend(subformulas(a))
        case FAnd(a, b) | FOr(a, b) | FImp(a, b):
            out.extend(subformulas(a))
            out.extend(subformulas(b))
        case ILabel(_, a) | ELabel(_, a):
            out.extend(subformulas(a))
    return out


def bigvee_instance(bv: RBigVee, k: int) -> RAtom:
    """k-th member of the disjunction: t < f^k(c) (resp. T < F^k(C))."""
    t = bv.term
    anchor = ITerm("c", k) if isinstance(t, ITerm) else ETerm("C", k)
    return RAtom("<", t, anchor)


def instantiate_body(f: Formula, t: Term) -> Formula:
    """Instance of a quantified relational formula at a term."""
    if not isinstance(f, (RForall, RExists)):
        raise ValueError("not a quantified formula")
    return substitute(f.body, f.var, t)


# ---------------------------------------------------------------------------
# hole instantiation (numeral metavariables -> concrete numerals)


def has_holes(obj) -> bool:
    if isinstance(obj, Hole):
        return True
    if isinstance(obj, (ITerm, ETerm)):
        return isinstance(obj.depth, Hole)
    if isinstance(obj, IntervalSpec):
        return isinstance(obj.lower, Hole) or isinstance(obj.upper, Hole)
    if isinstance(obj, Sequent):
        return any(has_holes(f) for f in obj.antecedent + obj.succedent)
    match obj:
        case PLetter():
            return False
        case RAtom(_, a, b):
            return has_holes(a) or has_holes(b)
        case RBigVee(t):
            return has_holes(t)
        case FNot(a) | RForall(_, a) | RExists(_, a):
            return has_holes(a)
        case FAnd(a, b) | FOr(a, b) | FImp(a, b):
            return has_holes(a) or has_holes(b)
        case FBox(spec, a):
            return has_holes(spec) or has_holes(a)
        case ILabel(t, a) | ELabel(t, a):
            return has_holes(t) or has_holes(a)
    return False


def instantiate(obj, value: int):
    """Replace every numeral hole by value + offset, recursively."""
    if isinstance(obj, Hole):
        return value + obj.offset
    if isinstance(obj, (ITerm, ETerm)):
        return type(obj)(obj.base, nat_instantiate(obj.depth, value))
    if isinstance(obj, IntervalSpec):
        up = None if obj.upper is None else nat_instantiate(obj.upper, value)
        return IntervalSpec(nat_instantiate(obj.lower, value), up, obj.lower_closed, obj.upper_closed)
    if isinstance(obj, Sequent):
        return Sequent(
            tuple(instantiate(f, value) for f in obj.antecedent),
            tuple(instantiate(f, value) for f in obj.succedent),
        )
    match obj:
        case PLetter():
            return obj
        case RAtom(rel, a, b):
            return RAtom(rel, instantiate(a, value), instantiate(b, value))
        case RBigVee(t):
            return RBigVee(instantiate(t, value))
        case FNot(a):
            return FNot(instantiate(a, value))
        case FAnd(a, b):
            return FAnd(instantiate(a, value), instantiate(b, value))
        case FOr(a, b):
            return FOr(instantiate(a, value), instantiate(b, value))
        case FImp(a, b):
            return FImp(instantiate(a, value), instantiate(b, value))
        case RForall(v, a):
            return RForall(v, instantiate(a, value))
        case RExists(v, a):
            return RExists(v, instantiate(a, value))
        case FBox(spec, a):
            return FBox(instantiate(spec, value), instantiate(a, value))
        case ILabel(t, a):
            return ILabel(instantiate(t, value), instantiate(a, value))
        case ELabel(t, a):
            return ELabel(instantiate(t, value), instantiate(a, value))
    raise TypeError(f"cannot instantiate {obj!r}")


# ---------------------------------------------------------------------------
# common abbreviation: s <= t is (s < t) or (s = t), expanded eagerly


def leq(left: Term, right: Term) -> Formula:
    return FOr(RAtom("<", left, right), RAtom("=", left, right))
