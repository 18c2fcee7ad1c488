"""Brute-force finite-model evaluation of formulas (test-only).

Formulas are compiled to closures once and then evaluated against every
interpretation of their predicates over a small domain.  Box is read in a
single world, which is enough for the non-modal schemas under test.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterator

from ontospec.logic import (
    And, Box, Const, Eq, Exists, Forall, Iff, Imp, Not, Or, Pred, Var,
)

Interp = dict  # predicate name -> frozenset of tuples
Env = dict     # variable name -> element


def compile_formula(f, domain) -> Callable[[Interp, Env], bool]:
    if isinstance(f, Pred):
        name = f.name
        getters = [_term(t) for t in f.terms]
        return lambda i, e: tuple(g(e) for g in getters) in i[name]
    if isinstance(f, Eq):
        a, b = _term(f.left), _term(f.right)
        return lambda i, e: a(e) == b(e)
    if isinstance(f, Not):
        body = compile_formula(f.body, domain)
        return lambda i, e: not body(i, e)
    if isinstance(f, Box):
        return compile_formula(f.body, domain)
    if isinstance(f, And):
        items = [compile_formula(g, domain) for g in f.items]
        return lambda i, e: all(g(i, e) for g in items)
    if isinstance(f, Or):
        items = [compile_formula(g, domain) for g in f.items]
        return lambda i, e: any(g(i, e) for g in items)
    if isinstance(f, Imp):
        a, b = compile_formula(f.left, domain), compile_formula(f.right, domain)
        return lambda i, e: (not a(i, e)) or b(i, e)
    if isinstance(f, Iff):
        a, b = compile_formula(f.left, domain), compile_formula(f.right, domain)
        return lambda i, e: a(i, e) == b(i, e)
    if isinstance(f, (Forall, Exists)):
        body = compile_formula(f.body, domain)
        names = f.vars
        combos = list(itertools.product(domain, repeat=len(names)))
        quant = all if isinstance(f, Forall) else any

        def run(i, e):
            def one(vals):
                inner = dict(e)
                inner.update(zip(names, vals))
                return body(i, inner)
            return quant(one(v) for v in combos)
        return run
    raise TypeError(f)


def _term(t):
    if isinstance(t, Var):
        return lambda e: e[t.name]
    if isinstance(t, Const):
        return lambda e: t.name
    raise TypeError(t)


def extensions(domain, arity: int) -> list[frozenset]:
    tuples = list(itertools.product(domain, repeat=arity))
    return [frozenset(t for k, t in enumerate(tuples) if mask >> k & 1)
            for mask in range(1 << len(tuples))]


def interpretations(domain, signature: dict[str, int]) -> Iterator[Interp]:
    names = sorted(signature)
    choices = [extensions(domain, signature[n]) for n in names]
    for combo in itertools.product(*choices):
        yield dict(zip(names, combo))


def holds(f, domain, interp: Interp) -> bool:
    return compile_formula(f, domain)(interp, {})
