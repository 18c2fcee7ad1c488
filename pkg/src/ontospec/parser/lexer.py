"""Tokenizer for the ``.osp`` surface syntax."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..model import Diagnostic, Severity, SourceSpan

WORD = "WORD"
STRING = "STRING"
INT = "INT"
PUNCT = "PUNCT"
EOF = "EOF"

# Primes are glued to the word so axiom refs such as Ad2a' lex as one token.
_WORD_RE = re.compile(r"[A-Za-z](?:[A-Za-z0-9_-]*[A-Za-z0-9_])?'*")
_INT_RE = re.compile(r"[0-9]+")
_PUNCT = ("->", "{", "}", "(", ")", "[", "]", ";", ":", ",", "/", "&", "|", "*", "+", "-", "~")
_ESCAPES = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class Token:
    type: str
    value: str
    span: SourceSpan

    def is_punct(self, value: str) -> bool:
        return self.type == PUNCT and self.value == value

    def is_word(self, value: str | None = None) -> bool:
        return self.type == WORD and (value is None or self.value == value)


def tokenize(source: str, file: str = "<input>") -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def span(l0: int, c0: int, l1: int, c1: int) -> SourceSpan:
        return SourceSpan(file, l0, c0, l1, c1)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r﻿":
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch == '"':
            l0, c0 = line, col
            i, col = i + 1, col + 1
            buf = []
            closed = False
            while i < n:
                c = source[i]
                if c == '"':
                    i, col = i + 1, col + 1
                    closed = True
                    break
                if c == "\\" and i + 1 < n:
                    esc = source[i + 1]
                    if esc in _ESCAPES:
                        buf.append(_ESCAPES[esc])
                    else:
                        diags.append(Diagnostic(Severity.ERROR, "P01", f"unknown escape \\{esc}",
                                                span=span(line, col, line, col + 1)))
                        buf.append(esc)
                    i, col = i + 2, col + 2
                    continue
                if c == "\n":
                    line, col = line + 1, 1
                else:
                    col += 1
                buf.append(c)
                i += 1
            if not closed:
                diags.append(Diagnostic(Severity.ERROR, "P01", "unterminated string",
                                        span=span(l0, c0, l0, c0)))
            tokens.append(Token(STRING, "".join(buf), span(l0, c0, line, col)))
            continue
        m = _WORD_RE.match(source, i)
        if m:
            text = m.group(0)
            tokens.append(Token(WORD, text, span(line, col, line, col + len(text))))
            i, col = m.end(), col + len(text)
            continue
        m = _INT_RE.match(source, i)
        if m:
            text = m.group(0)
            tokens.append(Token(INT, text, span(line, col, line, col + len(text))))
            i, col = m.end(), col + len(text)
            continue
        for p in _PUNCT:
            if source.startswith(p, i):
                tokens.append(Token(PUNCT, p, span(line, col, line, col + len(p))))
                i, col = i + len(p), col + len(p)
                break
        else:
            diags.append(Diagnostic(Severity.ERROR, "P01", f"unexpected character {ch!r}",
                                    span=span(line, col, line, col + 1)))
            i, col = i + 1, col + 1
    tokens.append(Token(EOF, "", span(line, col, line, col)))
    return tokens, diags
