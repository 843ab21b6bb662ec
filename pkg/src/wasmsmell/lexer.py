"""Tolerant lexer for C/C++ source text.

Never fails: anything that is not a recognizable token becomes a
single-byte punctuator with a diagnostic attached. Token spans always
index into the original input text.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass
from typing import NamedTuple

KIND_IDENT = "identifier"
KIND_KEYWORD = "keyword"
KIND_INT = "int-literal"
KIND_STRING = "string-literal"
KIND_WSTRING = "wide-string-literal"
KIND_CHAR = "char-literal"
KIND_PUNCT = "punctuator"

KEYWORDS = frozenset(
    """
    auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    bool class namespace new delete template typename public private
    protected virtual operator using
    """.split()
)


class Span(NamedTuple):
    """Byte offset, 1-based line, 1-based column, and length in the input."""

    offset: int
    line: int
    col: int
    length: int

    @property
    def end(self) -> int:
        return self.offset + self.length


class Token(NamedTuple):
    kind: str
    lexeme: str
    span: Span


@dataclass(frozen=True)
class Diagnostic:
    span: Span
    message: str
    severity: str = "recovered"


# Multi-character punctuators must be tried longest-first.
_PUNCTS = [
    "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==",
    "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "::",
]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>/\*.*?\*/|//[^\n]*|/\*.*)            # /* unterminated too
  | (?P<wstring>L"(?:\\.|[^"\\\n])*(?:"|(?=\n)|$))
  | (?P<string>"(?:\\.|[^"\\\n])*(?:"|(?=\n)|$))
  | (?P<char>L?'(?:\\.|[^'\\\n])*(?:'|(?=\n)|$))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<num>(?:0[xX][0-9a-fA-F]+|\.?[0-9][0-9a-zA-Z_.]*(?:[eEpP][+-][0-9]+)?))
  | (?P<punct>%s|[-+*/%%=<>!&|^~?:;,.()\[\]{}#\\])
    """
    % "|".join(re.escape(p) for p in _PUNCTS),
    re.VERBOSE | re.DOTALL,
)


def decode_source(data) -> str:
    """Accept str or bytes; bytes are decoded as UTF-8 with replacement."""
    if isinstance(data, bytes):
        return data.decode("utf-8", errors="replace")
    return data


class _LineIndex:
    """Maps offsets to 1-based (line, col) positions."""

    def __init__(self, text: str):
        starts = [0]
        pos = text.find("\n")
        while pos != -1:
            starts.append(pos + 1)
            pos = text.find("\n", pos + 1)
        self._starts = starts

    def locate(self, offset: int) -> tuple[int, int]:
        i = bisect_right(self._starts, offset) - 1
        return i + 1, offset - self._starts[i] + 1

    def span(self, offset: int, length: int) -> Span:
        line, col = self.locate(offset)
        return Span(offset, line, col, length)


def lex(source) -> tuple[list[Token], list[Diagnostic]]:
    """Tokenize arbitrary input. Total: junk bytes become punctuators."""
    text = decode_source(source)
    index = _LineIndex(text)
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            # Unlexable byte: emit it as a punctuator and move on.
            span = index.span(pos, 1)
            tokens.append(Token(KIND_PUNCT, text[pos], span))
            diags.append(Diagnostic(span, f"unexpected byte {text[pos]!r}"))
            pos += 1
            continue
        kind = m.lastgroup
        lexeme = m.group()
        if kind not in ("ws", "comment"):
            span = index.span(pos, len(lexeme))
            if kind == "ident":
                tk = KIND_KEYWORD if lexeme in KEYWORDS else KIND_IDENT
            elif kind == "num":
                tk = KIND_INT
            elif kind == "string":
                tk = KIND_STRING
                if not (len(lexeme) >= 2 and lexeme.endswith('"')):
                    diags.append(Diagnostic(span, "unterminated string literal"))
            elif kind == "wstring":
                tk = KIND_WSTRING
                if not (len(lexeme) >= 3 and lexeme.endswith('"')):
                    diags.append(Diagnostic(span, "unterminated wide string literal"))
            elif kind == "char":
                tk = KIND_CHAR
                if not (len(lexeme) >= 2 and lexeme.endswith("'")):
                    diags.append(Diagnostic(span, "unterminated char literal"))
            else:
                tk = KIND_PUNCT
            tokens.append(Token(tk, lexeme, span))
        elif kind == "comment" and lexeme.startswith("/*") and not lexeme.endswith("*/"):
            diags.append(Diagnostic(index.span(pos, len(lexeme)), "unterminated comment"))
        pos = m.end()
    return tokens, diags
