"""Tokenizer for the architecture DSL text syntax."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .diagnostics import Diagnostic, SourceSpan, error

KEYWORDS = frozenset(
    {
        "system", "space", "mapping", "transformation", "adaptive", "module",
        "component", "dynamical_system", "learner", "mode", "in", "learning",
        "param", "out", "criterion", "children", "via",
    }
)


class TokenType(enum.Enum):
    KW = enum.auto()
    IDENT = enum.auto()
    INT = enum.auto()
    STRING = enum.auto()
    LBRACE = enum.auto()
    RBRACE = enum.auto()
    LPAREN = enum.auto()
    RPAREN = enum.auto()
    COLON = enum.auto()
    AT = enum.auto()
    COMMA = enum.auto()
    EOF = enum.auto()


_PUNCT = {
    "{": TokenType.LBRACE,
    "}": TokenType.RBRACE,
    "(": TokenType.LPAREN,
    ")": TokenType.RPAREN,
    ":": TokenType.COLON,
    "@": TokenType.AT,
    ",": TokenType.COMMA,
}


@dataclass(frozen=True)
class Token:
    type: TokenType
    text: str
    span: SourceSpan

    def is_kw(self, word: str) -> bool:
        return self.type is TokenType.KW and self.text == word


def tokenize(text: str, file: str = "<input>") -> tuple[list[Token], list[Diagnostic]]:
    """Scan ``text`` into tokens; never aborts, collects diagnostics instead.

    Comments run from ``//`` to end of line.  Unknown characters produce an
    E001 error and are skipped.  The token list always ends with an EOF token.
    """
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    line, col = 1, 1
    i, n = 0, len(text)

    def span(l0: int, c0: int, l1: int, c1: int) -> SourceSpan:
        return SourceSpan(file, l0, c0, l1, c1)

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, span(line, col, line, col)))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            start_col = col
            j = i
            while j < n and text[j].isdigit():
                j += 1
            lexeme = text[i:j]
            col += j - i
            tokens.append(Token(TokenType.INT, lexeme, span(line, start_col, line, col - 1)))
            i = j
            continue
        if ch.isascii() and ch.isalpha():
            start_col = col
            j = i
            while j < n and (text[j].isascii() and (text[j].isalnum() or text[j] == "_")):
                j += 1
            lexeme = text[i:j]
            col += j - i
            ttype = TokenType.KW if lexeme in KEYWORDS else TokenType.IDENT
            tokens.append(Token(ttype, lexeme, span(line, start_col, line, col - 1)))
            i = j
            continue
        if ch == '"':
            start_col = col
            j = i + 1
            col += 1
            value: list[str] = []
            closed = False
            while j < n and text[j] != "\n":
                c = text[j]
                if c == "\\" and j + 1 < n and text[j + 1] in ('"', "\\"):
                    value.append(text[j + 1])
                    j += 2
                    col += 2
                    continue
                if c == '"':
                    j += 1
                    col += 1
                    closed = True
                    break
                value.append(c)
                j += 1
                col += 1
            if closed:
                tokens.append(
                    Token(TokenType.STRING, "".join(value), span(line, start_col, line, col - 1))
                )
            else:
                diags.append(
                    error("E002", "unterminated string literal", span(line, start_col, line, max(start_col, col - 1)))
                )
            i = j
            continue
        # Anything else is not part of the language.
        diags.append(error("E001", f"unknown character {ch!r}", span(line, col, line, col)))
        i += 1
        col += 1

    tokens.append(Token(TokenType.EOF, "", SourceSpan.point(file, line, col)))
    return tokens, diags
