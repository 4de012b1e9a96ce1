"""Tokenizer shared by the query parser and the TriG reader."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional
from urllib.parse import urljoin


class ParseError(ValueError):
    """Syntax error carrying a line/column position."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    value: str
    pos: int
    end: int
    extra: Optional[str] = None  # prefix part of a PNAME


_TOKENS = [
    ("SKIP", r"[ \t\r\n\f\v ]+|#[^\n]*"),
    ("IRIREF", r"<([^<>\"{}|^`\\\x00-\x20]*)>"),
    ("STRING3D", r'"""((?:.|\n)*?)"""'),
    ("STRING3S", r"'''((?:.|\n)*?)'''"),
    ("STRINGTEX", r"``((?:.|\n)*?)''"),
    ("STRINGCURLY", "“((?:.|\\n)*?)”"),
    ("STRINGD", r'"((?:[^"\\\n]|\\.)*)"'),
    ("STRINGS", r"'((?:[^'\\\n]|\\.)*)'"),
    ("VAR", r"[?$]([A-Za-z0-9_][A-Za-z0-9_]*)"),
    ("BNODE", r"_:([A-Za-z0-9_](?:[\w.-]*[\w-])?)"),
    ("LANGTAG", r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)"),
    ("DTYPE", r"\^\^"),
    ("PNAME", r"((?:[A-Za-z][\w-]*(?:\.[\w-]+)*)?):((?:[\w-]|%[0-9A-Fa-f]{2})(?:(?:[\w.-]|%[0-9A-Fa-f]{2})*(?:[\w-]|%[0-9A-Fa-f]{2}))?)?"),
    ("NUMBER", r"[+-]?(?:\d*\.\d+|\d+)"),
    ("OP", r"&&|\|\||!=|<=|>=|[=<>!]"),
    ("PUNCT", r"[{}()\[\].;,*]"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
]

_MASTER = re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in _TOKENS))
_GROUP_OF = {name: _MASTER.groupindex[name] + 1 for name, _ in _TOKENS}

_STRING_KINDS = {"STRING3D", "STRING3S", "STRINGTEX", "STRINGCURLY", "STRINGD", "STRINGS"}

_UNESCAPE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|.)", re.S)
_SIMPLE = {"t": "\t", "n": "\n", "r": "\r", "b": "\b", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.-]*:")


def resolve_iri(base: str, ref: str) -> str:
    """Resolve ``ref`` against ``base``; absolute references pass through."""
    if _SCHEME.match(ref):
        return ref
    out = urljoin(base, ref)
    if ref.endswith("#") and not out.endswith("#"):
        out += "#"
    return out


def unescape(s: str) -> str:
    def repl(m):
        code = m.group(1)
        if code[0] in "uU" and len(code) > 1:
            return chr(int(code[1:], 16))
        if code in _SIMPLE:
            return _SIMPLE[code]
        raise ValueError(f"bad escape \\{code}")

    return _UNESCAPE.sub(repl, s)


def line_col(text: str, pos: int) -> tuple:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _MASTER.match(text, pos)
        if m is None:
            line, col = line_col(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind != "SKIP":
            if kind in _STRING_KINDS:
                raw = m.group(_GROUP_OF[kind])
                try:
                    value = unescape(raw) if kind in ("STRINGD", "STRINGS", "STRING3D", "STRING3S") else raw
                except ValueError as e:
                    raise ParseError(str(e), *line_col(text, pos)) from None
                tokens.append(Token("STRING", value, pos, m.end()))
            elif kind == "PNAME":
                prefix = m.group(_GROUP_OF["PNAME"]) or ""
                local = m.group(_GROUP_OF["PNAME"] + 1) or ""
                tokens.append(Token("PNAME", local, pos, m.end(), prefix))
            elif kind in ("IRIREF", "VAR", "BNODE", "LANGTAG"):
                tokens.append(Token(kind, m.group(_GROUP_OF[kind]), pos, m.end()))
            else:
                tokens.append(Token(kind, m.group(0), pos, m.end()))
        pos = m.end()
    tokens.append(Token("EOF", "", n, n))
    return tokens


class TokenStream:
    """Cursor over a token list with error reporting against the source."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, *line_col(self.text, tok.pos))

    def at(self, kind: str, value: Optional[str] = None) -> bool:
        tok = self.peek()
        if tok.kind != kind:
            return False
        return value is None or tok.value == value

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "NAME" and tok.value.upper() in words

    def accept(self, kind: str, value: Optional[str] = None) -> Optional[Token]:
        if self.at(kind, value):
            return self.next()
        return None

    def accept_keyword(self, word: str) -> Optional[Token]:
        if self.at_keyword(word):
            return self.next()
        return None

    def expect(self, kind: str, value: Optional[str] = None) -> Token:
        tok = self.peek()
        if not self.at(kind, value):
            want = value or kind
            raise self.error(f"expected {want!r}, found {tok.value or tok.kind!r}")
        return self.next()

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            tok = self.peek()
            raise self.error(f"expected {word}, found {tok.value or tok.kind!r}")
        return self.next()
