"""Axiom schemas, their instances, matching and fair enumeration.

Axioms are kept as first-class instances (schema id plus instantiating data);
`instance_sequent` renders the canonical sequent of an instance.  Matching
comes in two strengths: `match_axiom` (exact sequent up to reordering) and
`find_closing_instance` (instance formulas merely contained in the branch,
i.e. reachable from the branch sequent by structural rules alone).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .syntax import (
    ELabel,
    ETerm,
    FAnd,
    Formula,
    ILabel,
    ITerm,
    PLetter,
    RAtom,
    RBigVee,
    RExists,
    Sequent,
    Term,
    free_vars,
    fresh_var,
    is_atomic,
)

# schema identifiers ---------------------------------------------------------

ID = "id"
EQ_REFL_E, EQ_REFL_I = "eq_refl_ext", "eq_refl_int"
EQ_CONG_E, EQ_CONG_I = "eq_cong_ext", "eq_cong_int"
TRANSPORT = "label_transport"
IRREFL_E, IRREFL_I = "irrefl_ext", "irrefl_int"
TRANS_E, TRANS_I = "trans_ext", "trans_int"
TOTAL_E, TOTAL_I = "total_ext", "total_int"
LEAST_E, LEAST_I = "least_ext", "least_int"
DENSE_E, DENSE_I = "dense_ext", "dense_int"
INCR_E, INCR_I = "incr_ext", "incr_int"
MONO_E, MONO_I = "mono_ext", "mono_int"
COFINAL_E, COFINAL_I = "cofinal_ext", "cofinal_int"

# enumeration order of the non-id schemas (fixed)
SCHEMAS = (
    EQ_REFL_E,
    EQ_CONG_E,
    EQ_REFL_I,
    EQ_CONG_I,
    TRANSPORT,
    IRREFL_E,
    TRANS_E,
    TOTAL_E,
    LEAST_E,
    DENSE_E,
    INCR_E,
    MONO_E,
    COFINAL_E,
    IRREFL_I,
    TRANS_I,
    TOTAL_I,
    LEAST_I,
    DENSE_I,
    INCR_I,
    MONO_I,
    COFINAL_I,
)

_INTERNAL_SCHEMAS = {
    EQ_REFL_I,
    EQ_CONG_I,
    IRREFL_I,
    TRANS_I,
    TOTAL_I,
    LEAST_I,
    DENSE_I,
    INCR_I,
    MONO_I,
    COFINAL_I,
}


@dataclass(frozen=True)
class RhoAtom:
    """Atomic formula with a designated hole: args are ('z', depth) or ('t', term)."""

    rel: str
    args: tuple

    def realize(self, filler: Term) -> RAtom:
        out = []
        for tag, payload in self.args:
            if tag == "z":
                out.append(type(filler)(filler.base, _depth_plus(filler.depth, payload)))
            else:
                out.append(payload)
        return RAtom(self.rel, out[0], out[1])


def _depth_plus(depth, extra: int):
    from .syntax import nat_shift

    return nat_shift(depth, extra)


@dataclass(frozen=True)
class AxiomInstance:
    schema: str
    terms: tuple = ()
    label: Optional[ETerm] = None
    rho: Optional[RhoAtom] = None
    eta: Optional[Formula] = None
    formula: Optional[Formula] = None
    var: Optional[str] = None  # bound variable of a density instance


def _wrap(label: Optional[ETerm], f: Formula) -> Formula:
    return f if label is None else ELabel(label, f)


def instance_sequent(inst: AxiomInstance) -> Sequent:
    """Canonical sequent of an axiom instance."""
    s = inst.schema
    L = inst.label
    t = inst.terms

    def atom(rel, a, b):
        return _wrap(L, RAtom(rel, a, b))

    if s == ID:
        return Sequent((inst.formula,), (inst.formula,))
    if s in (EQ_REFL_E, EQ_REFL_I):
        return Sequent((), (atom("=", t[0], t[0]),))
    if s in (EQ_CONG_E, EQ_CONG_I):
        a, b = t
        return Sequent(
            (atom("=", a, b), _wrap(L, inst.rho.realize(a))),
            (_wrap(L, inst.rho.realize(b)),),
        )
    if s == TRANSPORT:
        a, b = t
        return Sequent((RAtom("=", a, b), ELabel(a, inst.eta)), (ELabel(b, inst.eta),))
    if s in (IRREFL_E, IRREFL_I):
        return Sequent((atom("<", t[0], t[0]),), ())
    if s in (TRANS_E, TRANS_I):
        a, b, c = t
        return Sequent((atom("<", a, b), atom("<", b, c)), (atom("<", a, c),))
    if s in (TOTAL_E, TOTAL_I):
        a, b = t
        return Sequent((), (atom("<", a, b), atom("=", a, b), atom("<", b, a)))
    if s in (LEAST_E, LEAST_I):
        zero = ITerm("c") if s == LEAST_I else ETerm("C")
        return Sequent((), (atom("<", zero, t[0]), atom("=", zero, t[0])))
    if s in (DENSE_E, DENSE_I):
        a, b = t
        v = inst.var
        vt = ITerm(v) if s == DENSE_I else ETerm(v)
        body = RExists(v, FAnd(RAtom("<", a, vt), RAtom("<", vt, b)))
        return Sequent((atom("<", a, b),), (_wrap(L, body),))
    if s in (INCR_E, INCR_I):
        return Sequent((), (atom("<", t[0], t[0].bump()),))
    if s in (MONO_E, MONO_I):
        a, b = t
        return Sequent((atom("<", a, b),), (atom("<", a.bump(), b.bump()),))
    if s in (COFINAL_E, COFINAL_I):
        return Sequent((), (_wrap(L, RBigVee(t[0])),))
    raise ValueError(f"unknown schema {s!r}")


def canonical_density_var(s: str, a: Term, b: Term) -> str:
    level = "i" if s == DENSE_I else "e"
    avoid = set()
    for term in (a, b):
        if term.is_var:
            avoid.add(term.base)
    return fresh_var(level, frozenset(avoid))


# ---------------------------------------------------------------------------
# structural views of branch formulas


def _ext_atoms(formulas) -> list[RAtom]:
    return [f for f in formulas if isinstance(f, RAtom)]


def _labelled_atoms(formulas) -> list[tuple[ETerm, RAtom]]:
    out = []
    for f in formulas:
        if isinstance(f, ELabel) and isinstance(f.body, RAtom):
            out.append((f.term, f.body))
    return out


def _density_shape(f: Formula):
    """Return (label|None, S, T, var) when f is `exists z (S<z & z<T)`."""
    label = None
    if isinstance(f, ELabel):
        label, f = f.term, f.body
    match f:
        case RExists(v, FAnd(RAtom("<", a, x), RAtom("<", y, b))):
            if (
                x.is_var
                and x.base == v
                and x.depth == 0
                and y.is_var
                and y.base == v
                and y.depth == 0
            ):
                ea, ia = free_vars(a)
                eb, ib = free_vars(b)
                if v not in ea | ia | eb | ib:
                    return label, a, b, v
    return None


def _rho_templates(eq_left: Term, eq_right: Term, alpha: RAtom, beta: RAtom):
    """All hole templates rho with alpha = rho[eq_left], beta = rho[eq_right]."""
    if alpha.rel != beta.rel:
        return
    options = []
    for x, y in ((alpha.left, beta.left), (alpha.right, beta.right)):
        slot = []
        if x == y:
            slot.append(("t", x))
        if (
            x.base == eq_left.base
            and y.base == eq_right.base
            and all(isinstance(d, int) for d in (x.depth, y.depth, eq_left.depth, eq_right.depth))
            and x.depth - eq_left.depth == y.depth - eq_right.depth
            and x.depth - eq_left.depth >= 0
        ):
            slot.append(("z", x.depth - eq_left.depth))
        if not slot:
            return
        options.append(slot)
    for first in options[0]:
        for second in options[1]:
            yield RhoAtom(alpha.rel, (first, second))


# ---------------------------------------------------------------------------
# exact matching (sequent equals the instance up to reordering)


def match_axiom(s: Sequent) -> list[AxiomInstance]:
    """All axiom instances whose sequent is exactly s after reordering."""
    out = []
    ant = list(s.antecedent)
    suc = list(s.succedent)
    for inst in _candidate_instances(ant, suc):
        got = instance_sequent(inst)
        if _same_multiset(got.antecedent, s.antecedent) and _same_multiset(
            got.succedent, s.succedent
        ):
            out.append(inst)
    # id needs both sides to be the same single formula
    if len(ant) == 1 and len(suc) == 1 and ant[0] == suc[0]:
        out.append(AxiomInstance(ID, formula=ant[0]))
    return out


def _same_multiset(a, b) -> bool:
    if len(a) != len(b):
        return False
    rest = list(b)
    for f in a:
        try:
            rest.remove(f)
        except ValueError:
            return False
    return not rest


# ---------------------------------------------------------------------------
# containment matching: instance antecedent within `ant`, succedent within `suc`


def find_closing_instance(ant, suc) -> Optional[AxiomInstance]:
    """First axiom instance reachable from (ant |- suc) by structural rules.

    id is searched first, then the schemas in their fixed order.
    """
    ant = tuple(ant)
    suc = tuple(suc)
    ant_set = set(ant)
    for f in suc:
        if f in ant_set:
            return AxiomInstance(ID, formula=f)
    for inst in _candidate_instances(ant, suc):
        return inst
    return None


def _candidate_instances(ant, suc) -> Iterable[AxiomInstance]:
    """Instances whose formulas all occur on the respective sides.

    Yields in the fixed schema order; within a schema, in scan order.
    """
    ant = tuple(ant)
    suc = tuple(suc)
    ant_set = set(ant)
    suc_set = set(suc)

    ant_ext = _ext_atoms(ant)
    suc_ext = _ext_atoms(suc)
    ant_lab = _labelled_atoms(ant)
    suc_lab = _labelled_atoms(suc)

    for schema in SCHEMAS:
        yield from _match_schema(
            schema, ant, suc, ant_set, suc_set, ant_ext, suc_ext, ant_lab, suc_lab
        )


def _match_schema(schema, ant, suc, ant_set, suc_set, ant_ext, suc_ext, ant_lab, suc_lab):
    if schema == EQ_REFL_E:
        for a in suc_ext:
            if a.rel == "=" and a.left == a.right and isinstance(a.left, ETerm):
                yield AxiomInstance(schema, (a.left,))
    elif schema == EQ_REFL_I:
        for lab, a in suc_lab:
            if a.rel == "=" and a.left == a.right:
                yield AxiomInstance(schema, (a.left,), label=lab)
    elif schema == EQ_CONG_E:
        for eq in ant_ext:
            if eq.rel != "=" or not isinstance(eq.left, ETerm):
                continue
            for alpha in ant_ext:
                for beta in suc_ext:
                    for rho in _rho_templates(eq.left, eq.right, alpha, beta):
                        yield AxiomInstance(schema, (eq.left, eq.right), rho=rho)
    elif schema == EQ_CONG_I:
        for lab, eq in ant_lab:
            if eq.rel != "=":
                continue
            for lab2, alpha in ant_lab:
                if lab2 != lab:
                    continue
                for lab3, beta in suc_lab:
                    if lab3 != lab:
                        continue
                    for rho in _rho_templates(eq.left, eq.right, alpha, beta):
                        yield AxiomInstance(schema, (eq.left, eq.right), label=lab, rho=rho)
    elif schema == TRANSPORT:
        for eq in ant_ext:
            if eq.rel != "=" or not isinstance(eq.left, ETerm):
                continue
            for f in ant:
                if not (isinstance(f, ELabel) and f.term == eq.left):
                    continue
                if not is_atomic(f):
                    continue
                if ELabel(eq.right, f.body) in suc_set:
                    yield AxiomInstance(schema, (eq.left, eq.right), eta=f.body)
    elif schema in (IRREFL_E, IRREFL_I):
        pool = ant_ext if schema == IRREFL_E else ant_lab
        for item in pool:
            lab, a = (None, item) if schema == IRREFL_E else item
            if a.rel == "<" and a.left == a.right:
                if schema == IRREFL_E and not isinstance(a.left, ETerm):
                    continue
                yield AxiomInstance(schema, (a.left,), label=lab)
    elif schema in (TRANS_E, TRANS_I):
        pool = (
            [(None, a) for a in ant_ext if isinstance(a.left, ETerm)]
            if schema == TRANS_E
            else ant_lab
        )
        goal = (
            [(None, a) for a in suc_ext]
            if schema == TRANS_E
            else suc_lab
        )
        goal_set = {(lab, a.left, a.right) for lab, a in goal if a.rel == "<"}
        lts = [(lab, a) for lab, a in pool if a.rel == "<"]
        for lab1, a in lts:
            for lab2, b in lts:
                if lab1 != lab2 or a.right != b.left:
                    continue
                if (lab1, a.left, b.right) in goal_set:
                    yield AxiomInstance(schema, (a.left, a.right, b.right), label=lab1)
    elif schema in (TOTAL_E, TOTAL_I):
        pool = (
            [(None, a) for a in suc_ext if isinstance(a.left, ETerm)]
            if schema == TOTAL_E
            else suc_lab
        )
        present = {(lab, a.rel, a.left, a.right) for lab, a in pool}
        for lab, a in pool:
            if a.rel != "<":
                continue
            if (lab, "=", a.left, a.right) in present and (lab, "<", a.right, a.left) in present:
                yield AxiomInstance(schema, (a.left, a.right), label=lab)
    elif schema in (LEAST_E, LEAST_I):
        zero = ETerm("C") if schema == LEAST_E else ITerm("c")
        pool = (
            [(None, a) for a in suc_ext if isinstance(a.left, ETerm)]
            if schema == LEAST_E
            else suc_lab
        )
        present = {(lab, a.rel, a.left, a.right) for lab, a in pool}
        for lab, a in pool:
            if a.rel == "<" and a.left == zero:
                if (lab, "=", zero, a.right) in present:
                    yield AxiomInstance(schema, (a.right,), label=lab)
    elif schema in (DENSE_E, DENSE_I):
        internal = schema == DENSE_I
        for f in suc:
            shape = _density_shape(f)
            if shape is None:
                continue
            lab, a, b, v = shape
            if internal != isinstance(a, ITerm):
                continue
            if internal and lab is None:
                continue
            if not internal and lab is not None:
                continue
            hyp = _wrap(lab, RAtom("<", a, b))
            if hyp in ant_set:
                yield AxiomInstance(schema, (a, b), label=lab, var=v)
    elif schema in (INCR_E, INCR_I):
        pool = (
            [(None, a) for a in suc_ext if isinstance(a.left, ETerm)]
            if schema == INCR_E
            else suc_lab
        )
        for lab, a in pool:
            if a.rel == "<" and a.right == a.left.bump():
                yield AxiomInstance(schema, (a.left,), label=lab)
    elif schema in (MONO_E, MONO_I):
        internal = schema == MONO_I
        hyp_pool = ant_lab if internal else [(None, a) for a in ant_ext if isinstance(a.left, ETerm)]
        goal_pool = suc_lab if internal else [(None, a) for a in suc_ext]
        goal_set = {(lab, a.left, a.right) for lab, a in goal_pool if a.rel == "<"}
        for lab, a in hyp_pool:
            if a.rel != "<":
                continue
            if (lab, a.left.bump(), a.right.bump()) in goal_set:
                yield AxiomInstance(schema, (a.left, a.right), label=lab)
    elif schema in (COFINAL_E, COFINAL_I):
        internal = schema == COFINAL_I
        for f in suc:
            lab, body = (f.term, f.body) if isinstance(f, ELabel) else (None, f)
            if isinstance(body, RBigVee):
                if internal and lab is not None and isinstance(body.term, ITerm):
                    yield AxiomInstance(schema, (body.term,), label=lab)
                if not internal and lab is None and isinstance(body.term, ETerm):
                    yield AxiomInstance(schema, (body.term,))


# ---------------------------------------------------------------------------
# fair enumeration (every non-id instance appears infinitely often)


def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(k: int) -> tuple[int, int]:
    w = 0
    while (w + 1) * (w + 2) // 2 <= k:
        w += 1
    b = k - w * (w + 1) // 2
    return w - b, b


def _decode_eterm(code: int) -> ETerm:
    base, depth = cantor_unpair(code)
    return ETerm("C" if base == 0 else f"X{base - 1}", depth)


def _decode_iterm(code: int) -> ITerm:
    base, depth = cantor_unpair(code)
    return ITerm("c" if base == 0 else f"x{base - 1}", depth)


def _decode_rho(code: int, internal: bool) -> RhoAtom:
    relbit, rest = code % 2, code // 2
    a_code, b_code = cantor_unpair(rest)

    def arg(c):
        tag, payload = c % 2, c // 2
        if tag == 0:
            return ("z", payload)
        return ("t", _decode_iterm(payload) if internal else _decode_eterm(payload))

    return RhoAtom("=" if relbit == 0 else "<", (arg(a_code), arg(b_code)))


def _decode_eta(code: int) -> Formula:
    kind, rest = code % 3, code // 3
    a, b = cantor_unpair(rest)
    if kind == 0:
        return ILabel(_decode_iterm(a), PLetter(b))
    rel = "=" if kind == 1 else "<"
    return RAtom(rel, _decode_iterm(a), _decode_iterm(b))


def _decode_terms(code: int, count: int, internal: bool):
    decode = _decode_iterm if internal else _decode_eterm
    codes = []
    for _ in range(count - 1):
        code, c = cantor_unpair(code)
        codes.append(c)
    codes.append(code)
    return tuple(decode(c) for c in reversed(codes))


_ARITY = {
    EQ_REFL_E: 1,
    EQ_REFL_I: 1,
    EQ_CONG_E: 2,
    EQ_CONG_I: 2,
    TRANSPORT: 2,
    IRREFL_E: 1,
    IRREFL_I: 1,
    TRANS_E: 3,
    TRANS_I: 3,
    TOTAL_E: 2,
    TOTAL_I: 2,
    LEAST_E: 1,
    LEAST_I: 1,
    DENSE_E: 2,
    DENSE_I: 2,
    INCR_E: 1,
    INCR_I: 1,
    MONO_E: 2,
    MONO_I: 2,
    COFINAL_E: 1,
    COFINAL_I: 1,
}


def enumerate_axioms(k: int) -> AxiomInstance:
    """Deterministic enumeration of all non-id axiom instances.

    k is split into (instance index, repetition counter), so every instance
    has infinitely many preimages.
    """
    if k < 0:
        raise ValueError("index must be nonnegative")
    i, _repetition = cantor_unpair(k)
    schema = SCHEMAS[i % len(SCHEMAS)]
    code = i // len(SCHEMAS)
    internal = schema in _INTERNAL_SCHEMAS

    label = None
    if internal:
        code, label_code = cantor_unpair(code)
        label = _decode_eterm(label_code)

    if schema in (EQ_CONG_E, EQ_CONG_I):
        code, rho_code = cantor_unpair(code)
        rho = _decode_rho(rho_code, internal)
        terms = _decode_terms(code, 2, internal)
        return AxiomInstance(schema, terms, label=label, rho=rho)
    if schema == TRANSPORT:
        code, eta_code = cantor_unpair(code)
        eta = _decode_eta(eta_code)
        terms = _decode_terms(code, 2, internal=False)
        return AxiomInstance(schema, terms, eta=eta)
    terms = _decode_terms(code, _ARITY[schema], internal)
    if schema in (DENSE_E, DENSE_I):
        return AxiomInstance(
            schema, terms, label=label, var=canonical_density_var(schema, *terms)
        )
    return AxiomInstance(schema, terms, label=label)
