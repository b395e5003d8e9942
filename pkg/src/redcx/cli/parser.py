"""Tokenizer, LL(1) parser and printer for the session language.

Grammar (EBNF)::

    session     = { statement } ;
    statement   = ring_decl | module_decl | command ;
    ring_decl   = "ring" IDENT "=" "GF" "(" INT ")" "[" IDENT { "," IDENT } "]"
                  [ "/" "<" [ expr { "," expr } ] ">" ] ";" ;
    module_decl = "module" IDENT "=" "coker" matrix ";" ;
    matrix      = "[" row { "," row } "]" ;
    row         = "[" expr { "," expr } "]" ;
    command     = "resolve" IDENT "to" INT ";"
                | ( "betti" | "certify" | "mcm" | "depth" | "period" ) IDENT ";"
                | ( "ext" | "tor" ) IDENT IDENT ";"
                | "pushout" IDENT "deg" INT [ "class" INT ] ";" ;
    expr        = [ "-" ] term { ( "+" | "-" ) term } ;
    term        = factor { "*" factor } ;
    factor      = atom [ "^" INT ] ;
    atom        = INT | IDENT | "(" expr ")" ;

``#`` starts a comment running to the end of the line.  A module is declared
over the most recent ring; a ring name used where a module is expected means
the free module of rank one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..ringkernel import Poly

KEYWORDS = {
    "ring", "module", "coker", "GF", "resolve", "to", "betti", "ext", "tor",
    "pushout", "deg", "class", "certify", "mcm", "depth", "period",
}
UNARY_COMMANDS = ("betti", "certify", "mcm", "depth", "period")
BINARY_COMMANDS = ("ext", "tor")

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<int>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[=;\[\],<>()/+\-*^])"
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int, expected=()):
        loc = f"line {line}, column {col}"
        exp = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{loc}: {message}{exp}")
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        self.detail = message


@dataclass(frozen=True)
class Token:
    kind: str  # int, ident, keyword, sym, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line += 1
            col = 1
        else:
            if kind == "ident" and s in KEYWORDS:
                kind = "keyword"
            if kind not in ("ws", "comment"):
                toks.append(Token(kind, s, line, col))
            col += len(s)
        pos = m.end()
    toks.append(Token("eof", "", line, col))
    return toks


# -- expression AST


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Paren:
    expr: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Prod:
    factors: tuple


@dataclass(frozen=True)
class Sum:
    terms: tuple  # ((sign, node), ...) with sign in "+-"


# -- statements


@dataclass(frozen=True)
class RingDecl:
    name: str
    p: int
    variables: tuple
    ideal: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    ring: str
    rows: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Command:
    name: str
    args: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Config:
    max_degree: int = 16
    max_hdeg: int = 10
    seed: int = 0
    cache_dir: str | None = None


@dataclass(frozen=True)
class Session:
    declarations: tuple = ()
    commands: tuple = ()
    config: Config = field(default_factory=Config, compare=False)

    @property
    def rings(self):
        return [d for d in self.declarations if isinstance(d, RingDecl)]

    @property
    def modules(self):
        return [d for d in self.declarations if isinstance(d, ModuleDecl)]


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, expected=(), tok=None):
        t = tok or self.tok
        return ParseError(msg, t.line, t.col, expected)

    def accept(self, text):
        if self.tok.text == text and self.tok.kind in ("sym", "keyword"):
            self.i += 1
            return True
        return False

    def expect(self, text) -> Token:
        t = self.tok
        if not self.accept(text):
            found = t.text or "end of input"
            raise self.error(f"unexpected {found!r}", (repr(text),))
        return t

    def expect_kind(self, kind, what) -> Token:
        t = self.tok
        if t.kind != kind:
            found = t.text or "end of input"
            raise self.error(f"unexpected {found!r}", (what,))
        self.i += 1
        return t

    # expressions
    def expr(self):
        terms = []
        sign = "-" if self.accept("-") else "+"
        terms.append((sign, self.term()))
        while self.tok.text in ("+", "-") and self.tok.kind == "sym":
            sign = self.tok.text
            self.i += 1
            terms.append((sign, self.term()))
        if len(terms) == 1 and terms[0][0] == "+":
            return terms[0][1]
        return Sum(tuple(terms))

    def term(self):
        factors = [self.factor()]
        while self.accept("*"):
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def factor(self):
        base = self.atom()
        if self.accept("^"):
            return Pow(base, int(self.expect_kind("int", "exponent").text))
        return base

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Num(int(t.text))
        if t.kind == "ident":
            self.i += 1
            return Var(t.text, t.line, t.col)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return Paren(e)
        found = t.text or "end of input"
        raise self.error(f"unexpected {found!r}", ("integer", "variable", "'('"))

    def exprs_until(self, closer):
        items = []
        if self.tok.text == closer:
            return items
        items.append(self.expr())
        while self.accept(","):
            items.append(self.expr())
        return items

    # statements
    def session(self):
        decls, cmds = [], []
        while self.tok.kind != "eof":
            t = self.tok
            if t.text == "ring" and t.kind == "keyword":
                decls.append(self.ring_decl())
            elif t.text == "module" and t.kind == "keyword":
                decls.append(self.module_decl(decls))
            else:
                cmds.append(self.command())
        return decls, cmds

    def ring_decl(self):
        start = self.expect("ring")
        name = self.expect_kind("ident", "identifier").text
        self.expect("=")
        self.expect("GF")
        self.expect("(")
        p = int(self.expect_kind("int", "prime").text)
        self.expect(")")
        self.expect("[")
        vs = [self.expect_kind("ident", "variable").text]
        while self.accept(","):
            vs.append(self.expect_kind("ident", "variable").text)
        self.expect("]")
        ideal = []
        if self.accept("/"):
            self.expect("<")
            ideal = self.exprs_until(">")
            self.expect(">")
        self.expect(";")
        return RingDecl(name, p, tuple(vs), tuple(ideal), start.line, start.col)

    def module_decl(self, decls):
        start = self.expect("module")
        name = self.expect_kind("ident", "identifier").text
        self.expect("=")
        self.expect("coker")
        self.expect("[")
        rows = [self.row()]
        while self.accept(","):
            rows.append(self.row())
        self.expect("]")
        self.expect(";")
        rings = [d for d in decls if isinstance(d, RingDecl)]
        if not rings:
            raise ParseError("module declared before any ring", start.line, start.col)
        return ModuleDecl(name, rings[-1].name, tuple(rows), start.line, start.col)

    def row(self):
        self.expect("[")
        items = [self.expr()]
        while self.accept(","):
            items.append(self.expr())
        self.expect("]")
        return tuple(items)

    def command(self):
        t = self.tok
        if t.kind != "keyword" or t.text not in (
            "resolve", "pushout", *UNARY_COMMANDS, *BINARY_COMMANDS
        ):
            raise self.error(
                f"unexpected {t.text or 'end of input'!r}",
                ("'ring'", "'module'", "command"),
            )
        self.i += 1
        name = t.text
        ident = lambda: self.expect_kind("ident", "identifier")  # noqa: E731
        if name == "resolve":
            a = ident()
            self.expect("to")
            args = ((a.text, a.line, a.col), int(self.expect_kind("int", "integer").text))
        elif name == "pushout":
            a = ident()
            self.expect("deg")
            n = int(self.expect_kind("int", "integer").text)
            j = int(self.expect_kind("int", "integer").text) if self.accept("class") else None
            args = ((a.text, a.line, a.col), n, j)
        elif name in BINARY_COMMANDS:
            a, b = ident(), ident()
            args = ((a.text, a.line, a.col), (b.text, b.line, b.col))
        else:
            a = ident()
            args = ((a.text, a.line, a.col),)
        self.expect(";")
        return Command(name, _strip_locations(args), t.line, t.col), args


def _strip_locations(args):
    return tuple(a[0] if isinstance(a, tuple) else a for a in args)


# -- evaluation and checks


def eval_expr(node, varnames, p: int) -> Poly:
    n = len(varnames)
    if isinstance(node, Num):
        return Poly.const(node.value, p, n)
    if isinstance(node, Var):
        if node.name not in varnames:
            raise ParseError(f"unknown variable {node.name!r}", node.line, node.col)
        e = [0] * n
        e[varnames.index(node.name)] = 1
        return Poly({tuple(e): 1}, p, n)
    if isinstance(node, Paren):
        return eval_expr(node.expr, varnames, p)
    if isinstance(node, Pow):
        return eval_expr(node.base, varnames, p) ** node.exp
    if isinstance(node, Prod):
        out = Poly.const(1, p, n)
        for f in node.factors:
            out = out * eval_expr(f, varnames, p)
        return out
    if isinstance(node, Sum):
        out = Poly.zero(p, n)
        for sign, t in node.terms:
            v = eval_expr(t, varnames, p)
            out = out + v if sign == "+" else out - v
        return out
    raise TypeError(f"not an expression node: {node!r}")


def _first_location(node):
    if isinstance(node, Var):
        return node.line, node.col
    for child in getattr(node, "__dict__", {}).values():
        kids = child if isinstance(child, tuple) else (child,)
        for k in kids:
            if isinstance(k, tuple):
                k = k[1]
            loc = _first_location(k) if not isinstance(k, (int, str)) else None
            if loc and loc[0]:
                return loc
    return None


def matrix_degrees(entries):
    """Generator/relation degrees making a polynomial matrix homogeneous.

    Returns ``(row_degrees, col_degrees)`` normalized so each connected block
    has minimum row degree 0, or raises ValueError naming the first offending
    entry.  Zero columns get degree None.
    """
    nrows = len(entries)
    ncols = len(entries[0]) if nrows else 0
    for i in range(nrows):
        for j in range(ncols):
            f = entries[i][j]
            if f and not f.is_homogeneous():
                raise ValueError((i, j))
    rdeg: list = [None] * nrows
    cdeg: list = [None] * ncols
    for seed in range(nrows):
        if rdeg[seed] is not None:
            continue
        rdeg[seed] = 0
        comp_rows = [seed]
        stack = [("r", seed)]
        while stack:
            kind, idx = stack.pop()
            if kind == "r":
                for j in range(ncols):
                    f = entries[idx][j]
                    if not f:
                        continue
                    want = rdeg[idx] + f.degree()
                    if cdeg[j] is None:
                        cdeg[j] = want
                        stack.append(("c", j))
                    elif cdeg[j] != want:
                        raise ValueError((idx, j))
            else:
                for i in range(nrows):
                    f = entries[i][idx]
                    if not f:
                        continue
                    want = cdeg[idx] - f.degree()
                    if rdeg[i] is None:
                        rdeg[i] = want
                        comp_rows.append(i)
                        stack.append(("r", i))
                    elif rdeg[i] != want:
                        raise ValueError((i, idx))
        low = min(rdeg[i] for i in comp_rows)
        if low:
            for i in comp_rows:
                rdeg[i] -= low
            for j in range(ncols):
                if cdeg[j] is not None and any(entries[i][j] for i in comp_rows):
                    cdeg[j] -= low
    return rdeg, cdeg


def _check(decls, cmd_locs):
    names: dict = {}
    for d in decls:
        if d.name in names:
            raise ParseError(f"duplicate identifier {d.name!r}", d.line, d.col)
        names[d.name] = d
        if isinstance(d, RingDecl):
            if d.p < 2 or any(d.p % q == 0 for q in range(2, int(d.p**0.5) + 1)):
                raise ParseError(f"GF({d.p}) is not a prime field", d.line, d.col)
            if len(set(d.variables)) != len(d.variables):
                raise ParseError("repeated variable name", d.line, d.col)
            for e in d.ideal:
                f = eval_expr(e, d.variables, d.p)
                if not f.is_homogeneous():
                    line, col = _first_location(e) or (d.line, d.col)
                    raise ParseError("non-homogeneous ideal generator", line, col)
        else:
            ring = names[d.ring]
            if len({len(r) for r in d.rows}) != 1:
                raise ParseError("matrix rows have different lengths", d.line, d.col)
            entries = [[eval_expr(e, ring.variables, ring.p) for e in r] for r in d.rows]
            try:
                matrix_degrees(entries)
            except ValueError as exc:
                i, j = exc.args[0]
                line, col = _first_location(d.rows[i][j]) or (d.line, d.col)
                raise ParseError(
                    f"non-homogeneous entry at row {i + 1}, column {j + 1}", line, col
                ) from None
    for cmd, raw in cmd_locs:
        for a in raw:
            if isinstance(a, tuple) and a[0] not in names:
                raise ParseError(f"undeclared identifier {a[0]!r}", a[1], a[2])


def parse_session(text: str, config: Config | None = None) -> Session:
    ps = _Parser(text)
    decls, cmd_locs = ps.session()
    _check(decls, cmd_locs)
    return Session(tuple(decls), tuple(c for c, _ in cmd_locs), config or Config())


def parse_polynomial(text: str, varnames, p: int) -> Poly:
    ps = _Parser(text)
    node = ps.expr()
    if ps.tok.kind != "eof":
        raise ps.error(f"unexpected {ps.tok.text!r}", ("end of expression",))
    return eval_expr(node, tuple(varnames), p)


# -- printing


def print_expr(node) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Paren):
        return f"({print_expr(node.expr)})"
    if isinstance(node, Pow):
        return f"{print_expr(node.base)}^{node.exp}"
    if isinstance(node, Prod):
        return "*".join(print_expr(f) for f in node.factors)
    if isinstance(node, Sum):
        out = []
        for k, (sign, t) in enumerate(node.terms):
            s = print_expr(t)
            if k == 0:
                out.append(s if sign == "+" else f"-{s}")
            else:
                out.append(f"{sign}{s}")
        return "".join(out)
    raise TypeError(f"not an expression node: {node!r}")


def print_statement(st) -> str:
    if isinstance(st, RingDecl):
        s = f"ring {st.name} = GF({st.p})[{','.join(st.variables)}]"
        if st.ideal:
            s += " / <" + ",".join(print_expr(e) for e in st.ideal) + ">"
        return s + ";"
    if isinstance(st, ModuleDecl):
        rows = ",".join("[" + ",".join(print_expr(e) for e in r) + "]" for r in st.rows)
        return f"module {st.name} = coker [{rows}];"
    if st.name == "resolve":
        return f"resolve {st.args[0]} to {st.args[1]};"
    if st.name == "pushout":
        s = f"pushout {st.args[0]} deg {st.args[1]}"
        if st.args[2] is not None:
            s += f" class {st.args[2]}"
        return s + ";"
    return f"{st.name} {' '.join(str(a) for a in st.args)};"


def print_session(session: Session) -> str:
    lines = [print_statement(d) for d in session.declarations]
    lines += [print_statement(c) for c in session.commands]
    return "\n".join(lines) + ("\n" if lines else "")
