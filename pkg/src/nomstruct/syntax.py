"""Lexer, parser and pretty-printer for the small class language.

The accepted grammar::

    program   := classdecl* ;
    classdecl := "class" IDENT ["extends" IDENT {"," IDENT}] "{" member* "}" ;
    member    := IDENT IDENT ";"
               | IDENT IDENT "(" [param {"," param}] ")" block ;
    param     := IDENT IDENT ;
    block     := "{" stmt "}" | "{" "if" "(" expr ")" stmt stmt "}" ;
    stmt      := "return" expr ";" ;
    expr      := unary {"&&" unary} ;
    unary     := "(" IDENT ")" unary | postfix ;
    postfix   := atom {"." IDENT ["(" [args] ")"] | ("instanceof"|"is") IDENT} ;
    atom      := IDENT ["(" [args] ")"] | "this" | "new" IDENT "(" [args] ")"
               | "(" expr ")" ;

A bare ``IDENT(args)`` is a call on the implicit receiver ``this``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

KEYWORDS = frozenset({"class", "extends", "new", "return", "instanceof", "is", "if", "this"})


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class SourceProgram:
    text: str
    origin: str = "<memory>"

    @classmethod
    def from_path(cls, path) -> "SourceProgram":
        with open(path, "rb") as fh:
            raw = fh.read()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = raw[: exc.start].decode("utf-8")
            line = prefix.count("\n") + 1
            col = exc.start - (prefix.rfind("\n") + 1) + 1
            raise LexError(Pos(line, col), repr(raw[exc.start : exc.start + 1]), str(path)) from None
        return cls(text, str(path))


class SyntaxProblem(Exception):
    def __init__(self, pos: Pos, message: str, origin: str = "<memory>"):
        super().__init__(f"{origin}:{pos}: {message}")
        self.pos = pos
        self.message = message
        self.origin = origin


class LexError(SyntaxProblem):
    def __init__(self, pos: Pos, text: str, origin: str = "<memory>"):
        super().__init__(pos, f"illegal character {text}", origin)
        self.text = text


class ParseError(SyntaxProblem):
    def __init__(self, pos: Pos, expected: str, found: str, origin: str = "<memory>"):
        super().__init__(pos, f"expected {expected}, found {found}", origin)
        self.expected = expected
        self.found = found


class ParseErrors(Exception):
    """Raised by parse_program when one or more declarations failed to parse."""

    def __init__(self, errors: list[ParseError]):
        super().__init__("\n".join(str(e) for e in errors))
        self.errors = errors


# ---------------------------------------------------------------- tokens

@dataclass(frozen=True)
class Token:
    kind: str  # "kw", "ident", a punctuation string, or "eof"
    text: str
    pos: Pos

    def __str__(self) -> str:
        if self.kind == "eof":
            return "end of input"
        if self.kind == "ident":
            return f"identifier {self.text!r}"
        return repr(self.text)


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<comment>//[^\n]*)"
    r"|(?P<word>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>&&|[{}();,.])"
)


def tokenize(src: SourceProgram) -> list[Token]:
    text = src.text
    tokens: list[Token] = []
    i = 0
    line, line_start = 1, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        pos = Pos(line, i - line_start + 1)
        if m is None:
            raise LexError(pos, repr(text[i]), src.origin)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "word":
            tokens.append(Token("kw" if chunk in KEYWORDS else "ident", chunk, pos))
        elif kind == "punct":
            tokens.append(Token(chunk, chunk, pos))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = i + chunk.rfind("\n") + 1
        i = m.end()
    tokens.append(Token("eof", "", _end_pos(text)))
    return tokens


def _end_pos(text: str) -> Pos:
    # last character of the input, so EOF errors stay within bounds
    if not text:
        return Pos(1, 1)
    end = len(text) - 1
    line = text.count("\n", 0, end) + 1
    return Pos(line, end - (text.rfind("\n", 0, end) + 1) + 1)


# ---------------------------------------------------------------- AST

@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class This:
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class FieldAccess:
    receiver: "Expr"
    name: str
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class Call:
    receiver: "Expr"
    name: str
    args: tuple["Expr", ...]
    pos: Pos = field(compare=False, default=Pos(0, 0))
    implicit: bool = field(compare=False, default=False)


@dataclass(frozen=True)
class New:
    cls: str
    args: tuple["Expr", ...]
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class InstanceOf:
    expr: "Expr"
    cls: str
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class Is:
    expr: "Expr"
    cls: str
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class Cast:
    cls: str
    expr: "Expr"
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class Return:
    expr: "Expr"
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class IfReturn:
    """``if (cond) return then; return otherwise;``"""

    cond: "Expr"
    then: Return
    otherwise: Return
    pos: Pos = field(compare=False, default=Pos(0, 0))


Expr = Union[Var, This, FieldAccess, Call, New, InstanceOf, Is, Cast, And]
Body = Union[Return, IfReturn]


@dataclass(frozen=True)
class FieldAst:
    type: str
    name: str
    pos: Pos = field(compare=False, default=Pos(0, 0))
    type_pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class ParamAst:
    type: str
    name: str
    pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class MethodAst:
    return_type: str
    name: str
    params: tuple[ParamAst, ...]
    body: Body
    pos: Pos = field(compare=False, default=Pos(0, 0))
    type_pos: Pos = field(compare=False, default=Pos(0, 0))


@dataclass(frozen=True)
class ClassDeclAst:
    name: str
    supers: tuple[str, ...]
    fields: tuple[FieldAst, ...]
    methods: tuple[MethodAst, ...]
    pos: Pos = field(compare=False, default=Pos(0, 0))
    super_pos: tuple[Pos, ...] = field(compare=False, default=())
    origin: str = field(compare=False, default="<memory>")
    # members in source order, fields and methods interleaved
    members: tuple[Union[FieldAst, MethodAst], ...] = field(compare=False, default=())


# ---------------------------------------------------------------- parser

_ATOM_START = {"ident", "this", "new", "("}


class _Parser:
    def __init__(self, src: SourceProgram):
        self.origin = src.origin
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, expected: str) -> ParseError:
        return ParseError(self.tok.pos, expected, str(self.tok), self.origin)

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def at_kw(self, word: str) -> bool:
        return self.at("kw", word)

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        if self.tok.kind != kind:
            raise self.error(what or repr(kind))
        return self.advance()

    def expect_kw(self, word: str) -> Token:
        if not self.at_kw(word):
            raise self.error(f"'{word}'")
        return self.advance()

    def ident(self) -> Token:
        return self.expect("ident", "identifier")

    # -- declarations

    def program(self) -> list[ClassDeclAst]:
        decls, errors = [], []
        while not self.at("eof"):
            try:
                decls.append(self.classdecl())
            except ParseError as exc:
                errors.append(exc)
                self.recover()
        if errors:
            raise ParseErrors(errors)
        return decls

    def recover(self) -> None:
        self.advance()
        while not (self.at("eof") or self.at_kw("class")):
            self.advance()

    def classdecl(self) -> ClassDeclAst:
        start = self.expect_kw("class")
        name = self.ident().text
        supers, super_pos = [], []
        if self.at_kw("extends"):
            self.advance()
            while True:
                t = self.ident()
                supers.append(t.text)
                super_pos.append(t.pos)
                if not self.at(","):
                    break
                self.advance()
        self.expect("{")
        members = []
        while not self.at("}"):
            members.append(self.member())
        self.advance()
        return ClassDeclAst(
            name,
            tuple(supers),
            tuple(m for m in members if isinstance(m, FieldAst)),
            tuple(m for m in members if isinstance(m, MethodAst)),
            start.pos,
            tuple(super_pos),
            self.origin,
            tuple(members),
        )

    def member(self):
        type_tok = self.expect("ident", "member type or '}'")
        name_tok = self.ident()
        if self.at(";"):
            self.advance()
            return FieldAst(type_tok.text, name_tok.text, name_tok.pos, type_tok.pos)
        self.expect("(", "';' or '('")
        params = []
        if not self.at(")"):
            while True:
                pt = self.ident()
                pn = self.ident()
                params.append(ParamAst(pt.text, pn.text, pn.pos))
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        body = self.block()
        return MethodAst(type_tok.text, name_tok.text, tuple(params), body, name_tok.pos, type_tok.pos)

    def block(self) -> Body:
        self.expect("{")
        if self.at_kw("if"):
            start = self.advance()
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            then = self.stmt()
            otherwise = self.stmt()
            body: Body = IfReturn(cond, then, otherwise, start.pos)
        else:
            body = self.stmt()
        self.expect("}")
        return body

    def stmt(self) -> Return:
        start = self.expect_kw("return")
        e = self.expr()
        self.expect(";")
        return Return(e, start.pos)

    # -- expressions

    def expr(self) -> Expr:
        left = self.unary()
        while self.at("&&"):
            op = self.advance()
            left = And(left, self.unary(), op.pos)
        return left

    def unary(self) -> Expr:
        if self.at("(") and self.peek(1).kind == "ident" and self.peek(2).kind == ")" and self._atom_start(self.peek(3)):
            start = self.advance()
            cls = self.advance().text
            self.advance()
            return Cast(cls, self.unary(), start.pos)
        return self.postfix()

    @staticmethod
    def _atom_start(t: Token) -> bool:
        return t.kind in ("ident", "(") or (t.kind == "kw" and t.text in ("this", "new"))

    def postfix(self) -> Expr:
        e = self.atom()
        while True:
            if self.at("."):
                self.advance()
                name = self.ident()
                if self.at("("):
                    e = Call(e, name.text, self.args(), name.pos)
                else:
                    e = FieldAccess(e, name.text, name.pos)
            elif self.at_kw("instanceof") or self.at_kw("is"):
                op = self.advance()
                cls = self.ident().text
                e = InstanceOf(e, cls, op.pos) if op.text == "instanceof" else Is(e, cls, op.pos)
            else:
                return e

    def args(self) -> tuple[Expr, ...]:
        self.expect("(")
        out = []
        if not self.at(")"):
            while True:
                out.append(self.expr())
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        return tuple(out)

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            if self.at("("):
                return Call(This(t.pos), t.text, self.args(), t.pos, implicit=True)
            return Var(t.text, t.pos)
        if self.at_kw("this"):
            self.advance()
            return This(t.pos)
        if self.at_kw("new"):
            self.advance()
            cls = self.ident()
            return New(cls.text, self.args(), cls.pos)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        raise self.error("expression")


def parse_program(src: SourceProgram) -> list[ClassDeclAst]:
    """Parse every class declaration in ``src``.

    Errors are collected per declaration (the parser skips ahead to the next
    ``class`` keyword) and raised together as :class:`ParseErrors`.
    """
    return _Parser(src).program()


def parse_expr(text: str, origin: str = "<memory>") -> Expr:
    p = _Parser(SourceProgram(text, origin))
    e = p.expr()
    if not p.at("eof"):
        raise p.error("end of input")
    return e


# ---------------------------------------------------------------- printing

def _show_args(args) -> str:
    return ", ".join(show_expr(a) for a in args)


def _show_operand(e: Expr) -> str:
    # operands of postfix/cast positions must be atoms
    if isinstance(e, (And, Cast, InstanceOf, Is)):
        return f"({show_expr(e)})"
    return show_expr(e)


def show_expr(e: Expr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, This):
        return "this"
    if isinstance(e, FieldAccess):
        return f"{_show_operand(e.receiver)}.{e.name}"
    if isinstance(e, Call):
        if e.implicit:
            return f"{e.name}({_show_args(e.args)})"
        return f"{_show_operand(e.receiver)}.{e.name}({_show_args(e.args)})"
    if isinstance(e, New):
        return f"new {e.cls}({_show_args(e.args)})"
    if isinstance(e, InstanceOf):
        return f"{_show_operand(e.expr)} instanceof {e.cls}"
    if isinstance(e, Is):
        return f"{_show_operand(e.expr)} is {e.cls}"
    if isinstance(e, Cast):
        return f"({e.cls}){_show_operand(e.expr)}"
    if isinstance(e, And):
        right = show_expr(e.right)
        if isinstance(e.right, And):
            right = f"({right})"
        return f"{show_expr(e.left)} && {right}"
    raise TypeError(f"not an expression: {e!r}")


def _show_body(body: Body, indent: str) -> Iterator[str]:
    if isinstance(body, IfReturn):
        yield f"{indent}if ({show_expr(body.cond)})"
        yield f"{indent}  return {show_expr(body.then.expr)};"
        yield f"{indent}return {show_expr(body.otherwise.expr)};"
    else:
        yield f"{indent}return {show_expr(body.expr)};"


def show_program(decls) -> str:
    lines = []
    for d in decls:
        head = f"class {d.name}"
        if d.supers:
            head += " extends " + ", ".join(d.supers)
        lines.append(head + " {")
        for m in d.members or (*d.fields, *d.methods):
            if isinstance(m, FieldAst):
                lines.append(f"  {m.type} {m.name};")
            else:
                params = ", ".join(f"{p.type} {p.name}" for p in m.params)
                lines.append(f"  {m.return_type} {m.name}({params}) {{")
                lines.extend(_show_body(m.body, "    "))
                lines.append("  }")
        lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")
