"""Lexer and recursive-descent parser for assertion text.

Accepted surface syntax, in brief:

    property <name>{};  <seq> |-> [##[a:b]] <seq>;  endproperty
    [label:] <seq> |-> [##[a:b]] <seq>;

    seq    :=  unit ( ##[a:b] unit )*
    unit   :=  atom ( [*a] | [*a:b] unit )*
    atom   :=  { seq }  |  ~{ bexpr }  |  bexpr
    bexpr  :=  conj ( OR conj )*           (also '||')
    conj   :=  member ( && member )*  [ , name = arith ]
    member :=  @edge{ pred }  |  ( bexpr )  |  rel
    rel    :=  arith (> | >= | < | <= | ==) arith  |  boolsig

Relations are normalized at parse time: everything becomes ``expr > 0``
or ``expr >= 0``, with < and <= turning into negations and an analog
``==`` widening into a two-sided band of half-width ``value_tol``.
A bare identifier is a digital signal; analog values are ``V(name)``.
``#`` starts a comment except in the delay form ``##[``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ast
from .errors import ParseError
from .expr import BinOp, Const, Expr, Neg, SignalRef

#: Half-width of the band an analog equality comparison expands into.
VALUE_TOL = 1e-6

_SYMBOLS = (
    "|->",
    "&&",
    "||",
    ">=",
    "<=",
    "==",
    "{",
    "}",
    "(",
    ")",
    "[",
    "]",
    "*",
    ":",
    ";",
    ",",
    "@",
    "+",
    "-",
    "/",
    ">",
    "<",
    "~",
    "=",
)


@dataclass
class _Tok:
    kind: str  # 'num', 'id', or the symbol text itself
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class _BoolRef:
    """Parser-internal marker for a bare identifier in expression position."""

    name: str


def _lex(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c in " \t\r":
            i, col = i + 1, col + 1
            continue
        if text.startswith("##", i) and i + 2 < n and text[i + 2] == "[":
            toks.append(_Tok("##", "##", line, col))
            i, col = i + 2, col + 2
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                seen_dot = seen_dot or text[j] == "."
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            toks.append(_Tok("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("id", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(_Tok(sym, sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok], value_tol: float):
        self.toks = toks
        self.pos = 0
        self.value_tol = value_tol

    # -- token helpers --------------------------------------------------

    def peek(self, ahead: int = 0) -> _Tok | None:
        i = self.pos + ahead
        return self.toks[i] if i < len(self.toks) else None

    def at(self, kind: str, ahead: int = 0) -> bool:
        t = self.peek(ahead)
        return t is not None and t.kind == kind

    def at_kw(self, word: str, ahead: int = 0) -> bool:
        t = self.peek(ahead)
        return t is not None and t.kind == "id" and t.text == word

    def take(self) -> _Tok:
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else _Tok("", "", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return t

    def expect(self, kind: str) -> _Tok:
        t = self.peek()
        if t is None or t.kind != kind:
            got = t.text if t else "end of input"
            where = (t.line, t.col) if t else self._eof_pos()
            raise ParseError(f"expected {kind!r}, got {got!r}", *where)
        return self.take()

    def _eof_pos(self) -> tuple[int, int]:
        last = self.toks[-1] if self.toks else _Tok("", "", 1, 1)
        return last.line, last.col + len(last.text)

    def fail(self, msg: str) -> ParseError:
        t = self.peek()
        where = (t.line, t.col) if t else self._eof_pos()
        return ParseError(msg, *where)

    # -- arithmetic -----------------------------------------------------

    def number(self) -> float:
        if self.at("-"):
            self.take()
            return -float(self.expect("num").text)
        return float(self.expect("num").text)

    def arith(self) -> Expr:
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.take().kind
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.at("*") or self.at("/"):
            op = self.take().kind
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.at("num"):
            return Const(float(self.take().text))
        if self.at("-"):
            self.take()
            return Neg(self.factor())
        if self.at("("):
            self.take()
            node = self.arith()
            self.expect(")")
            return node
        if self.at("id"):
            tok = self.take()
            if self.at("("):
                if tok.text != "V":
                    raise ParseError(f"unknown function {tok.text!r}", tok.line, tok.col)
                self.take()
                name = self.expect("id").text
                self.expect(")")
                return SignalRef(name)
            return _BoolRef(tok.text)  # bare identifier, resolved by make_rel
        raise self.fail("expected a number, signal, or parenthesized expression")

    # -- relations ------------------------------------------------------

    def _reject_boolref(self, e: Expr, tok: _Tok) -> None:
        if isinstance(e, _BoolRef):
            raise ParseError(
                f"digital signal {e.name!r} cannot appear in arithmetic; use V({e.name}) "
                "for analog values",
                tok.line,
                tok.col,
            )
        if isinstance(e, Neg):
            self._reject_boolref(e.operand, tok)
        elif isinstance(e, BinOp):
            self._reject_boolref(e.left, tok)
            self._reject_boolref(e.right, tok)

    def make_rel(self, left: Expr, op: str, right: Expr, tok: _Tok) -> ast.BExpr:
        if isinstance(left, _BoolRef):
            if op == "==" and isinstance(right, Const) and right.value in (0.0, 1.0):
                sig = ast.BoolSignal(left.name)
                return sig if right.value == 1.0 else ast.Not(sig)
            raise ParseError(
                f"digital signal {left.name!r} only supports == 0 or == 1",
                tok.line,
                tok.col,
            )
        self._reject_boolref(left, tok)
        self._reject_boolref(right, tok)
        f = left if (isinstance(right, Const) and right.value == 0.0) else BinOp("-", left, right)
        if op == ">":
            return ast.Porv(f, ">")
        if op == ">=":
            return ast.Porv(f, ">=")
        if op == "<":
            return ast.Not(ast.Porv(f, ">="))
        if op == "<=":
            return ast.Not(ast.Porv(f, ">"))
        # analog equality: a band of half-width value_tol around zero
        tol = Const(self.value_tol)
        return ast.And((ast.Porv(BinOp("+", f, tol), ">="), ast.Porv(BinOp("-", tol, f), ">=")))

    def rel(self) -> ast.BExpr:
        tok = self.peek()
        assert tok is not None
        left = self.arith()
        if self.at(">") or self.at(">=") or self.at("<") or self.at("<=") or self.at("=="):
            op = self.take().kind
            return self.make_rel(left, op, self.arith(), tok)
        if isinstance(left, _BoolRef):
            return ast.BoolSignal(left.name)
        raise ParseError("expected a comparison operator", tok.line, tok.col)

    # -- Boolean layer --------------------------------------------------

    def event(self) -> ast.EventAtom:
        at_tok = self.expect("@")
        edge = "any"
        if self.at("+"):
            self.take()
            edge = "pos"
        elif self.at("-"):
            self.take()
            edge = "neg"
        self.expect("{")
        tok = self.peek()
        assert tok is not None
        left = self.arith()
        pred: ast.BExpr
        if self.at(">") or self.at(">=") or self.at("<") or self.at("<=") or self.at("=="):
            op = self.take().kind
            pred = self.make_rel(left, op, self.arith(), tok)
        elif self.at(","):
            # two-argument form @edge{V(sig), threshold}: a threshold crossing
            self.take()
            thr = self.arith()
            pred = self.make_rel(left, ">", thr, tok)
        elif isinstance(left, _BoolRef):
            pred = ast.BoolSignal(left.name)
        else:
            raise ParseError("event needs a comparison or a digital signal", tok.line, tok.col)
        self.expect("}")
        if not isinstance(pred, (ast.Porv, ast.BoolSignal)):
            raise ParseError(
                "event predicate must be a single comparison or signal",
                at_tok.line,
                at_tok.col,
            )
        return ast.EventAtom(pred, edge)

    def bmember(self) -> ast.BExpr:
        if self.at("~"):
            self.take()
            if self.at("{"):
                self.take()
                inner = self.bexpr()
                self.expect("}")
                return ast.Not(inner)
            return ast.Not(self.bmember())
        if self.at("@"):
            return self.event()
        if self.at("("):
            mark = self.pos
            self.take()
            try:
                inner = self.bexpr()
                self.expect(")")
                return inner
            except ParseError:
                self.pos = mark  # reparse as parenthesized arithmetic
            return self.rel()
        return self.rel()

    def bterm(self) -> ast.BExpr:
        members = [self.bmember()]
        while self.at("&&"):
            self.take()
            members.append(self.bmember())
        node: ast.BExpr = members[0] if len(members) == 1 else ast.And(tuple(members))
        if self.at(",") and self.at("id", 1) and self.at("=", 2):
            comma = self.take()
            target = self.take().text
            self.take()
            value = self.arith()
            node = ast.LocalAssign(node, target, value, pos=(comma.line, comma.col))
        return node

    def bexpr(self) -> ast.BExpr:
        node = self.bterm()
        while self.at("||") or self.at_kw("OR"):
            self.take()
            node = ast.Or(node, self.bterm())
        return node

    # -- sequence layer -------------------------------------------------

    def bounds(self) -> tuple[float, float, tuple[int, int]]:
        """Parse the tail of ##[a:b] after the '##' token."""
        tok = self.expect("[")
        a = self.number()
        self.expect(":")
        b = self.number()
        self.expect("]")
        return a, b, (tok.line, tok.col)

    def seq_atom(self) -> ast.SeqExpr:
        if self.at("{"):
            self.take()
            inner = self.seq()
            self.expect("}")
            return inner
        if self.at("~"):
            self.take()
            self.expect("{")
            inner_b = self.bexpr()
            self.expect("}")
            return ast.SeqBool(ast.Not(inner_b))
        return ast.SeqBool(self.bexpr())

    def unit(self) -> ast.SeqExpr:
        node = self.seq_atom()
        while self.at("[") and self.at("*", 1):
            tok = self.take()
            self.take()
            a = self.number()
            if self.at(":"):
                self.take()
                b = self.number()
                self.expect("]")
                cont = self.unit()
                node = ast.RepeatUntil(node, a, b, cont, pos=(tok.line, tok.col))
            else:
                self.expect("]")
                node = ast.Repeat(node, a, pos=(tok.line, tok.col))
        return node

    def seq(self) -> ast.SeqExpr:
        node = self.unit()
        while self.at("##"):
            self.take()
            a, b, pos = self.bounds()
            node = ast.Delay(node, a, b, self.unit(), pos=pos)
        return node

    def property_body(self) -> ast.Property:
        ante = self.seq()
        self.expect("|->")
        delay = None
        if self.at("##"):
            self.take()
            a, b, _ = self.bounds()
            delay = (a, b)
        cons = self.seq()
        return ast.Property(ante, cons, delay)

    # -- file level -----------------------------------------------------

    def file(self) -> list[ast.Property]:
        props: list[ast.Property] = []
        auto = 0
        while self.peek() is not None:
            if self.at_kw("property"):
                self.take()
                name = self.expect("id").text
                if self.at("{"):
                    self.take()
                    self.expect("}")
                if self.at(";"):
                    self.take()
                body = self.property_body()
                self.expect(";")
                if not self.at_kw("endproperty"):
                    raise self.fail("expected 'endproperty'")
                self.take()
                if self.at(";"):
                    self.take()
            else:
                if self.at("id") and self.at(":", 1):
                    name = self.take().text
                    self.take()
                else:
                    auto += 1
                    name = f"a{auto}"
                body = self.property_body()
                self.expect(";")
            props.append(
                ast.Property(body.antecedent, body.consequent, body.delay, name=name)
            )
        return props


def parse_property(text: str, name: str = "", value_tol: float = VALUE_TOL) -> ast.Property:
    """Parse and validate a single property expression (no trailing ';')."""
    parser = _Parser(_lex(text), value_tol)
    body = parser.property_body()
    if parser.at(";"):
        parser.take()
    if parser.peek() is not None:
        raise parser.fail("trailing input after property")
    return ast.validate(ast.Property(body.antecedent, body.consequent, body.delay, name=name))


def parse_file(text: str, value_tol: float = VALUE_TOL) -> list[ast.Property]:
    """Parse an assertion file: property blocks and bare assertions."""
    props = _Parser(_lex(text), value_tol).file()
    for p in props:
        ast.validate(p)
    return props
