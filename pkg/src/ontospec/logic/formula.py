"""First-order formulas with a necessity box, and their s-expression form."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


Term = Union[Var, Const]


@dataclass(frozen=True)
class Pred:
    name: str
    terms: tuple[Term, ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("predicate needs at least one term")


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    items: tuple["Formula", ...]

    def __post_init__(self) -> None:
        if len(self.items) < 2:
            raise ValueError("and needs at least two operands")


@dataclass(frozen=True)
class Or:
    items: tuple["Formula", ...]

    def __post_init__(self) -> None:
        if len(self.items) < 2:
            raise ValueError("or needs at least two operands")


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    vars: tuple[str, ...]
    body: "Formula"

    def __post_init__(self) -> None:
        if not self.vars:
            raise ValueError("quantifier needs at least one variable")


@dataclass(frozen=True)
class Exists:
    vars: tuple[str, ...]
    body: "Formula"

    def __post_init__(self) -> None:
        if not self.vars:
            raise ValueError("quantifier needs at least one variable")


@dataclass(frozen=True)
class Box:
    body: "Formula"


Formula = Union[Pred, Eq, Not, And, Or, Imp, Iff, Forall, Exists, Box]


# -- convenience constructors ------------------------------------------------

def pred(name: str, *args: str) -> Pred:
    """``pred("p", "x", "y")``; arguments starting with ``'`` are constants."""
    return Pred(name, tuple(Const(a[1:]) if a.startswith("'") else Var(a) for a in args))


def conj(*items: Formula) -> Formula:
    return items[0] if len(items) == 1 else And(tuple(items))


def disj(*items: Formula) -> Formula:
    return items[0] if len(items) == 1 else Or(tuple(items))


# -- free variables ------------------------------------------------------------

def free_variables(f: Formula) -> set[str]:
    if isinstance(f, Pred):
        return {t.name for t in f.terms if isinstance(t, Var)}
    if isinstance(f, Eq):
        return {t.name for t in (f.left, f.right) if isinstance(t, Var)}
    if isinstance(f, (Not, Box)):
        return free_variables(f.body)
    if isinstance(f, (And, Or)):
        return set().union(*(free_variables(g) for g in f.items))
    if isinstance(f, (Imp, Iff)):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, (Forall, Exists)):
        return free_variables(f.body) - set(f.vars)
    raise TypeError(f"not a formula: {f!r}")


def predicates(f: Formula) -> set[tuple[str, int]]:
    """(name, arity) of every predicate occurrence."""
    if isinstance(f, Pred):
        return {(f.name, len(f.terms))}
    if isinstance(f, Eq):
        return set()
    if isinstance(f, (Not, Box, Forall, Exists)):
        return predicates(f.body)
    if isinstance(f, (And, Or)):
        return set().union(*(predicates(g) for g in f.items))
    return predicates(f.left) | predicates(f.right)


def map_predicates(f: Formula, fn) -> Formula:
    """Rebuild ``f`` with every Pred replaced by ``fn(pred)``."""
    if isinstance(f, Pred):
        return fn(f)
    if isinstance(f, Eq):
        return f
    if isinstance(f, Not):
        return Not(map_predicates(f.body, fn))
    if isinstance(f, Box):
        return Box(map_predicates(f.body, fn))
    if isinstance(f, And):
        return And(tuple(map_predicates(g, fn) for g in f.items))
    if isinstance(f, Or):
        return Or(tuple(map_predicates(g, fn) for g in f.items))
    if isinstance(f, Imp):
        return Imp(map_predicates(f.left, fn), map_predicates(f.right, fn))
    if isinstance(f, Iff):
        return Iff(map_predicates(f.left, fn), map_predicates(f.right, fn))
    if isinstance(f, Forall):
        return Forall(f.vars, map_predicates(f.body, fn))
    if isinstance(f, Exists):
        return Exists(f.vars, map_predicates(f.body, fn))
    raise TypeError(f"not a formula: {f!r}")


# -- emission --------------------------------------------------------------------

def _term(t: Term) -> str:
    return "'" + t.name if isinstance(t, Const) else t.name


def emit_osf(f: Formula) -> str:
    """Canonical s-expression text; structure-faithful, no reordering."""
    if isinstance(f, Pred):
        return "(pred " + f.name + " " + " ".join(_term(t) for t in f.terms) + ")"
    if isinstance(f, Eq):
        return f"(eq {_term(f.left)} {_term(f.right)})"
    if isinstance(f, Not):
        return f"(not {emit_osf(f.body)})"
    if isinstance(f, Box):
        return f"(box {emit_osf(f.body)})"
    if isinstance(f, And):
        return "(and " + " ".join(emit_osf(g) for g in f.items) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(emit_osf(g) for g in f.items) + ")"
    if isinstance(f, Imp):
        return f"(imp {emit_osf(f.left)} {emit_osf(f.right)})"
    if isinstance(f, Iff):
        return f"(iff {emit_osf(f.left)} {emit_osf(f.right)})"
    if isinstance(f, Forall):
        return f"(forall ({' '.join(f.vars)}) {emit_osf(f.body)})"
    if isinstance(f, Exists):
        return f"(exists ({' '.join(f.vars)}) {emit_osf(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


# -- reading ---------------------------------------------------------------------

class OsfSyntaxError(ValueError):
    pass


_TOKEN_RE = re.compile(r"\s*(?:(\()|(\))|('?[A-Za-z_][A-Za-z0-9_'-]*))")


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise OsfSyntaxError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    return out


def parse_osf(text: str) -> Formula:
    """Inverse of :func:`emit_osf`."""
    toks = _tokens(text)
    pos = 0

    def take() -> str:
        nonlocal pos
        if pos >= len(toks):
            raise OsfSyntaxError("unexpected end of formula")
        tok = toks[pos]
        pos += 1
        return tok

    def expect(tok: str) -> None:
        got = take()
        if got != tok:
            raise OsfSyntaxError(f"expected {tok!r}, found {got!r}")

    def ident() -> str:
        tok = take()
        if tok in "()" or tok.startswith("'"):
            raise OsfSyntaxError(f"expected identifier, found {tok!r}")
        return tok

    def term() -> Term:
        tok = take()
        if tok in "()":
            raise OsfSyntaxError(f"expected term, found {tok!r}")
        return Const(tok[1:]) if tok.startswith("'") else Var(tok)

    def formulas_until_close() -> list[Formula]:
        items = []
        while pos < len(toks) and toks[pos] != ")":
            items.append(formula())
        return items

    def formula() -> Formula:
        nonlocal pos
        expect("(")
        op = take()
        if op in ("forall", "exists"):
            expect("(")
            names = []
            while pos < len(toks) and toks[pos] != ")":
                names.append(ident())
            expect(")")
            if not names:
                raise OsfSyntaxError("empty variable list")
            f = (Forall if op == "forall" else Exists)(tuple(names), formula())
        elif op in ("and", "or"):
            items = formulas_until_close()
            if len(items) < 2:
                raise OsfSyntaxError(f"{op} needs at least two operands")
            f = (And if op == "and" else Or)(tuple(items))
        elif op in ("not", "box"):
            f = (Not if op == "not" else Box)(formula())
        elif op in ("imp", "iff"):
            left = formula()
            f = (Imp if op == "imp" else Iff)(left, formula())
        elif op == "pred":
            name = ident()
            terms = []
            while pos < len(toks) and toks[pos] != ")":
                terms.append(term())
            if not terms:
                raise OsfSyntaxError("predicate without terms")
            f = Pred(name, tuple(terms))
        elif op == "eq":
            left = term()
            f = Eq(left, term())
        else:
            raise OsfSyntaxError(f"unknown operator {op!r}")
        expect(")")
        return f

    result = formula()
    if pos != len(toks):
        raise OsfSyntaxError(f"trailing input after formula: {toks[pos]!r}")
    return result
