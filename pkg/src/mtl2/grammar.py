"""Concrete syntax: lexer, parser and printer for sequents and formulas.

Grammar (ASCII, whitespace insignificant):

    terms        c | f(t) | x<k>        and upper case  C | F(T) | X<k>
    operators    Box[m,n]  Box(m,n]  Box[m,n)  Box(m,n)  Box[m,oo)  Box(m,oo)
    connectives  ~  &  |  ->      precedence  ~ > & > | > ->
    quantifiers  forall x<k>. phi      exists x<k>. phi
    infinitary   bigvee(t)
    labels       T : body              (a label's body extends maximally right)
    sequent      A1, ..., Am |- B1, ..., Bn

Labels bind weakest: `C : c : p0 & p1` labels the whole conjunction; write
`(C : c : p0) & ...` is not well-formed anyway (labelled formulas cannot be
combined at the top level), but parenthesised labels occur inside external
temporal bodies, e.g. `C : (c : p0) & (c : p1)`.

In extended mode (used by proof and trace files only) one numeral parameter
may appear in term depths and box bounds: `f^n(c)`, `f^(n+2)(c)`, `Box[0,n+1]`.
Concrete powers `f^3(c)` are accepted in extended mode as well.
"""

from __future__ import annotations

from dataclasses import dataclass
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
    Hole,
    ILabel,
    ITerm,
    IntervalSpec,
    NatExpr,
    PLetter,
    RAtom,
    RBigVee,
    RExists,
    RForall,
    Sequent,
    StratificationError,
    Term,
    is_internal_name,
    kind_of,
    nat_is_concrete,
    validate_external,
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_SYMBOLS = ("|-", "->", "(", ")", "[", "]", ",", ":", ".", "~", "&", "|", "<", "=", "^", "+")


@dataclass(frozen=True)
class Token:
    kind: str  # 'sym', 'int', 'name'
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        matched = False
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token("sym", sym, i))
                i += len(sym)
                matched = True
                break
        if matched:
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Token("name", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    return toks


class _Parser:
    def __init__(self, text: str, param: Optional[str] = None):
        self.toks = tokenize(text)
        self.i = 0
        self.param = param  # numeral metavariable name, extended mode only

    # -- token helpers

    def peek(self) -> Optional[Token]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.toks[-1].pos if self.toks else 0)
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.pos)
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    def done(self) -> bool:
        return self.i >= len(self.toks)

    # -- entry points

    def sequent(self) -> Sequent:
        ant = self.formula_list(stop="|-")
        self.expect("|-")
        suc = self.formula_list(stop=None)
        if not self.done():
            raise ParseError("trailing input", self.peek().pos)
        s = Sequent(tuple(ant), tuple(suc))
        return s

    def formula_list(self, stop):
        out = []
        if self.done() or self.at("|-"):
            return out
        out.append(self.checked_formula())
        while self.at(","):
            self.next()
            out.append(self.checked_formula())
        return out

    def checked_formula(self) -> Formula:
        tok = self.peek()
        pos = tok.pos if tok else 0
        f = self.formula()
        try:
            validate_external(f)
        except StratificationError as e:
            raise ParseError(f"stratification error: {e}", pos) from e
        return f

    # -- formula levels

    def formula(self) -> Formula:
        return self.imp()

    def imp(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.next()
            return FImp(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("|"):
            self.next()
            f = FOr(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.next()
            f = FAnd(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("formula expected", 0)
        if tok.text == "~":
            self.next()
            return FNot(self.unary())
        if tok.text == "Box":
            self.next()
            spec = self.interval_spec()
            return FBox(spec, self.unary())
        if tok.text in ("forall", "exists"):
            self.next()
            var = self.variable_name()
            self.expect(".")
            body = self.formula()
            return (RForall if tok.text == "forall" else RExists)(var, body)
        if tok.text == "bigvee":
            self.next()
            self.expect("(")
            t = self.term()
            self.expect(")")
            return RBigVee(t)
        if tok.text == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            # a parenthesised formula may still be labelled from outside:
            return self.atom_tail(f, tok.pos)
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "name" and tok.text[0] == "p" and tok.text[1:].isdigit():
            self.next()
            return PLetter(int(tok.text[1:]))
        t = self.term()
        nxt = self.peek()
        if nxt is not None and nxt.text == ":":
            self.next()
            body = self.formula()
            return self.make_label(t, body, tok.pos)
        if nxt is not None and nxt.text in ("<", "="):
            self.next()
            rhs = self.term()
            try:
                return RAtom(nxt.text, t, rhs)
            except ValueError as e:
                raise ParseError(str(e), nxt.pos) from e
        raise ParseError("expected ':', '<' or '=' after term", nxt.pos if nxt else tok.pos)

    def atom_tail(self, f: Formula, pos: int) -> Formula:
        # no postfix operators on parenthesised formulas
        return f

    def make_label(self, t: Term, body: Formula, pos: int) -> Formula:
        try:
            if isinstance(t, ITerm):
                return ILabel(t, body)
            return ELabel(t, body)
        except ValueError as e:
            raise ParseError(str(e), pos) from e

    # -- terms

    def variable_name(self) -> str:
        tok = self.next()
        if tok.kind != "name" or not (
            (tok.text[0] in "xX") and tok.text[1:].isdigit()
        ):
            raise ParseError(f"variable expected, found {tok.text!r}", tok.pos)
        return tok.text

    def term(self) -> Term:
        tok = self.next()
        if tok.kind != "name":
            raise ParseError(f"term expected, found {tok.text!r}", tok.pos)
        name = tok.text
        if name in ("f", "F"):
            depth: NatExpr = 1
            if self.at("^"):
                if self.param is None:
                    raise ParseError("power syntax is only allowed in template mode", tok.pos)
                self.next()
                depth = self.nat_expr()
            self.expect("(")
            inner = self.term()
            self.expect(")")
            internal = name == "f"
            if internal != isinstance(inner, ITerm):
                raise ParseError("function symbol level mismatch", tok.pos)
            if isinstance(depth, Hole) and isinstance(inner.depth, Hole):
                raise ParseError("nested numeral parameters", tok.pos)
            if isinstance(depth, Hole):
                return type(inner)(inner.base, depth.shifted(inner.depth))
            if isinstance(inner.depth, Hole):
                return type(inner)(inner.base, inner.depth.shifted(depth))
            return type(inner)(inner.base, inner.depth + depth)
        if name == "c" or (name[0] == "x" and name[1:].isdigit()):
            return ITerm(name)
        if name == "C" or (name[0] == "X" and name[1:].isdigit()):
            return ETerm(name)
        raise ParseError(f"term expected, found {name!r}", tok.pos)

    def nat_expr(self) -> NatExpr:
        if self.at("("):
            self.next()
            e = self.nat_expr_body()
            self.expect(")")
            return e
        return self.nat_expr_body()

    def nat_expr_body(self) -> NatExpr:
        tok = self.next()
        if tok.kind == "int":
            return int(tok.text)
        if tok.kind == "name" and tok.text == self.param:
            if self.at("+"):
                self.next()
                off = self.next()
                if off.kind != "int":
                    raise ParseError("numeral expected after '+'", off.pos)
                return Hole(int(off.text))
            return Hole(0)
        raise ParseError(f"numeral or parameter expected, found {tok.text!r}", tok.pos)

    # -- box interval

    def interval_spec(self) -> IntervalSpec:
        opener = self.next()
        if opener.text not in ("[", "("):
            raise ParseError("interval expected after Box", opener.pos)
        lower = self.nat_expr_inline()
        self.expect(",")
        if self.at("oo"):
            self.next()
            upper = None
        else:
            upper = self.nat_expr_inline()
        closer = self.next()
        if closer.text not in ("]", ")"):
            raise ParseError("unterminated interval", closer.pos)
        if upper is None and closer.text == "]":
            raise ParseError("unbounded interval must be upper-open", closer.pos)
        try:
            return IntervalSpec(lower, upper, opener.text == "[", closer.text == "]")
        except ValueError as e:
            raise ParseError(str(e), opener.pos) from e

    def nat_expr_inline(self) -> NatExpr:
        tok = self.peek()
        if tok is None:
            raise ParseError("numeral expected", 0)
        if tok.kind == "int":
            self.next()
            return int(tok.text)
        if self.param is not None and tok.kind == "name" and tok.text == self.param:
            return self.nat_expr_body()
        raise ParseError(f"numeral expected, found {tok.text!r}", tok.pos)


# ---------------------------------------------------------------------------
# public API


def parse_sequent(text: str, param: Optional[str] = None) -> Sequent:
    return _Parser(text, param).sequent()


def parse_formula(text: str, param: Optional[str] = None) -> Formula:
    p = _Parser(text, param)
    f = p.checked_formula()
    if not p.done():
        raise ParseError("trailing input", p.peek().pos)
    return f


def parse_term(text: str, param: Optional[str] = None) -> Term:
    p = _Parser(text, param)
    t = p.term()
    if not p.done():
        raise ParseError("trailing input", p.peek().pos)
    return t


# ---------------------------------------------------------------------------
# printer


def print_nat(e: NatExpr, param: str = "n") -> str:
    if isinstance(e, Hole):
        return param if e.offset == 0 else f"{param}+{e.offset}"
    return str(e)


def print_term(t: Term, param: str = "n") -> str:
    fn = "f" if isinstance(t, ITerm) else "F"
    if isinstance(t.depth, Hole):
        power = print_nat(t.depth, param)
        if t.depth.offset > 0:
            return f"{fn}^({power})({t.base})"
        return f"{fn}^{power}({t.base})"
    out = t.base
    for _ in range(t.depth):
        out = f"{fn}({out})"
    return out


def print_spec(spec: IntervalSpec, param: str = "n") -> str:
    lo = "[" if spec.lower_closed else "("
    hi = "]" if spec.upper_closed else ")"
    upper = "oo" if spec.upper is None else print_nat(spec.upper, param)
    return f"Box{lo}{print_nat(spec.lower, param)},{upper}{hi}"


_PREC_IMP, _PREC_OR, _PREC_AND, _PREC_UNARY, _PREC_ATOM = 1, 2, 3, 4, 5


def print_formula(f: Formula, param: str = "n") -> str:
    return _pf(f, 0, param)


def _pf(f: Formula, ctx: int, param: str) -> str:
    match f:
        case PLetter(k):
            return f"p{k}"
        case RAtom(rel, a, b):
            return f"{print_term(a, param)} {rel} {print_term(b, param)}"
        case RBigVee(t):
            return f"bigvee({print_term(t, param)})"
        case FNot(a):
            return f"~{_pf(a, _PREC_UNARY, param)}"
        case FBox(spec, a):
            return f"{print_spec(spec, param)} {_pf(a, _PREC_UNARY, param)}"
        case FAnd(a, b):
            s = f"{_pf(a, _PREC_AND, param)} & {_pf(b, _PREC_AND + 1, param)}"
            return _paren_if(s, ctx > _PREC_AND)
        case FOr(a, b):
            s = f"{_pf(a, _PREC_OR, param)} | {_pf(b, _PREC_OR + 1, param)}"
            return _paren_if(s, ctx > _PREC_OR)
        case FImp(a, b):
            s = f"{_pf(a, _PREC_IMP + 1, param)} -> {_pf(b, _PREC_IMP, param)}"
            return _paren_if(s, ctx > _PREC_IMP)
        case RForall(v, a) | RExists(v, a):
            q = "forall" if isinstance(f, RForall) else "exists"
            s = f"{q} {v}. {_pf(a, 0, param)}"
            return _paren_if(s, ctx > 0)
        case ILabel(t, a) | ELabel(t, a):
            s = f"{print_term(t, param)} : {_pf(a, 0, param)}"
            return _paren_if(s, ctx > 0)
    raise TypeError(f"not a formula: {f!r}")


def _paren_if(s: str, cond: bool) -> str:
    return f"({s})" if cond else s


def print_sequent(s: Sequent, param: str = "n") -> str:
    ant = ", ".join(_pf(f, 0, param) for f in s.antecedent)
    suc = ", ".join(_pf(f, 0, param) for f in s.succedent)
    left = f"{ant} " if ant else ""
    return f"{left}|- {suc}"
