"""Lexing, parsing, name resolution and rendering of ``.osp`` documents."""

from .lexer import Token, tokenize
from .parser import ParseResult, duplicate_diagnostics, merge, parse_document
from .render import render
from .resolve import resolve_references

__all__ = [
    "ParseResult", "Token", "duplicate_diagnostics", "merge", "parse_document",
    "render", "resolve_references", "tokenize",
]
