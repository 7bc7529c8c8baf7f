"""Text format for knowledge bases.

Grammar (clauses end with "."; "%" starts a line comment)::

    program   := (section | clause)*
    section   := "[IDB]" | "[EDB]" | "[IC]" | "[ABDUCIBLES]"
                 | "[IMMUTABLE]" | "[UPDATABLE]" | "[CONSTRAINTS]"
    clause    := atom "." | atom ":-" body "." | ":-" body "."
    body      := literal ("," literal)*
    literal   := "not" atom | term "!=" term | atom
    atom      := ident ["(" term ("," term)* ")"]
    term      := ident | number          (uppercase or "_" initial = variable)
    abducible := ident ["/" number] "."  (inside [ABDUCIBLES] only)

Clauses outside any section are placed by shape: rules go to IDB, facts to
EDB, denials to IC.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (
    Atom,
    HkbError,
    HornClause,
    KbStructureError,
    KnowledgeBase,
    Literal,
    PredicateSymbol,
    Term,
    neq,
    _is_var_name,
)


class ParseError(HkbError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


SECTIONS = {
    "IDB": "idb",
    "IMMUTABLE": "idb",
    "EDB": "edb",
    "UPDATABLE": "edb",
    "IC": "ic",
    "CONSTRAINTS": "ic",
    "ABDUCIBLES": "ab",
}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>%[^\n]*)"
    r"|(?P<section>\[[A-Za-z]+\])"
    r"|(?P<if>:-)|(?P<neq>!=)"
    r"|(?P<ident>[A-Za-z_@][A-Za-z0-9_@]*|[0-9]+)"
    r"|(?P<punct>[(),./])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tok_kind = "punct" if kind == "punct" else kind
            out.append(Token(tok_kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        shown = tok.text or "end of input"
        return ParseError(f"{msg} at {shown!r}", tok.line, tok.column)

    def expect(self, kind, text=None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise self.error(f"expected {want!r}")
        return self.next()

    def at(self, kind, text=None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def term(self) -> Term:
        tok = self.expect("ident")
        if tok.text == "not":
            raise self.error("'not' cannot be a term", tok)
        return Term("variable" if _is_var_name(tok.text) else "constant", tok.text)

    def atom(self) -> Atom:
        tok = self.expect("ident")
        if _is_var_name(tok.text) or tok.text[0].isdigit():
            raise self.error("predicate names must start with a lowercase letter", tok)
        args = []
        if self.at("punct", "("):
            self.next()
            args.append(self.term())
            while self.at("punct", ","):
                self.next()
                args.append(self.term())
            self.expect("punct", ")")
        return Atom(PredicateSymbol(tok.text, len(args)), tuple(args))

    def literal(self) -> Literal:
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "not":
            self.next()
            return Literal(self.atom(), True)
        if tok.kind == "ident" and (
            _is_var_name(tok.text) or tok.text[0].isdigit() or self.tokens[self.i + 1].kind == "neq"
        ):
            left = self.term()
            self.expect("neq")
            right = self.term()
            return Literal(neq(left, right))
        return Literal(self.atom())

    def body(self) -> tuple:
        lits = [self.literal()]
        while self.at("punct", ","):
            self.next()
            lits.append(self.literal())
        return tuple(lits)

    def clause(self) -> tuple:
        start = self.peek()
        if self.at("if"):
            self.next()
            body = self.body()
            self.expect("punct", ".")
            return HornClause(None, body), start
        head = self.atom()
        body = ()
        if self.at("if"):
            self.next()
            body = self.body()
        self.expect("punct", ".")
        return HornClause(head, body), start

    def abducible(self) -> PredicateSymbol:
        tok = self.expect("ident")
        arity = 0
        if self.at("punct", "/"):
            self.next()
            num = self.expect("ident")
            if not num.text.isdigit():
                raise self.error("expected an arity", num)
            arity = int(num.text)
        self.expect("punct", ".")
        return PredicateSymbol(tok.text, arity)


def parse_program(text: str, ddb: bool = False) -> KnowledgeBase:
    """Parse the text format into a KnowledgeBase, with line/column diagnostics."""
    p = _Parser(text)
    idb, edb, ic, ab = [], [], [], None
    section = None
    arities = {}
    while not p.at("eof"):
        if p.at("section"):
            tok = p.next()
            name = tok.text[1:-1].upper()
            if name not in SECTIONS:
                raise p.error("unknown section", tok)
            section = SECTIONS[name]
            if section == "ab" and ab is None:
                ab = []
            continue
        if section == "ab":
            ab.append(p.abducible())
            continue
        clause, start = p.clause()
        for a in clause.atoms():
            if a.is_builtin:
                continue
            seen = arities.setdefault(a.predicate.name, a.predicate.arity)
            if seen != a.predicate.arity:
                raise ParseError(
                    f"arity conflict for {a.predicate.name}: {seen} vs {a.predicate.arity}", start.line, start.column
                )
        target = section or {"rule": "idb", "fact": "edb", "constraint": "ic"}[clause.kind]
        if target == "idb":
            if clause.kind == "constraint":
                raise ParseError("denial in the IDB section", start.line, start.column)
            if clause.kind == "fact" and ddb:
                raise ParseError("fact in the IDB section of a deductive database", start.line, start.column)
            if clause.kind == "fact" and not clause.is_ground:
                raise ParseError("non-ground fact", start.line, start.column)
            idb.append(clause)
        elif target == "edb":
            if clause.kind != "fact":
                raise ParseError("only facts are allowed in the EDB section", start.line, start.column)
            if not clause.is_ground:
                raise ParseError("non-ground fact", start.line, start.column)
            if clause not in edb:
                edb.append(clause)
        else:
            if clause.kind != "constraint":
                raise ParseError("only denials are allowed in the IC section", start.line, start.column)
            ic.append(clause)
    try:
        return KnowledgeBase(
            tuple(idb), tuple(edb), tuple(ic), frozenset(ab) if ab is not None else None, ddb
        )
    except KbStructureError as exc:
        raise ParseError(str(exc), 1, 1) from exc


def parse_atom(text: str) -> Atom:
    p = _Parser(text.strip().rstrip("."))
    a = p.atom()
    if not p.at("eof"):
        raise p.error("trailing input")
    return a


def parse_clause(text: str) -> HornClause:
    """Parse one clause; the trailing period is optional."""
    text = text.strip()
    if not text.endswith("."):
        text += "."
    p = _Parser(text)
    clause, _ = p.clause()
    if not p.at("eof"):
        raise p.error("trailing input")
    return clause


def serialize(kb: KnowledgeBase) -> str:
    lines = ["[IDB]"]
    lines += [str(c) for c in kb.immutable]
    lines.append("[EDB]")
    lines += [str(c) for c in kb.updatable]
    lines.append("[IC]")
    lines += [str(c) for c in kb.constraints]
    if kb.declared_abducibles is not None:
        lines.append("[ABDUCIBLES]")
        lines += [f"{p.name}/{p.arity}." for p in sorted(kb.declared_abducibles)]
    return "\n".join(lines) + "\n"


def load(path, ddb: bool = False) -> KnowledgeBase:
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read(), ddb=ddb)
