"""Instantiate condition and meta-property schemas as formulas."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from ..model import (
    AllOf, AnyOf, Cardinality, Condition, ConstantRestriction, Criterion, Entity,
    Existential, ExternalDependency, FreeForm, Incompatible, Inverse, IsA, Kind, One,
    Ontology, Ref, Signature, TextSpec, Universal, Unrestricted,
)
from .formula import (
    And, Box, Const, Eq, Exists, Forall, Formula, Iff, Imp, Not, OsfSyntaxError, Or, Pred,
    Var, conj, disj, emit_osf, free_variables, map_predicates, parse_osf,
)

BASE_VARS = ("x", "y", "z", "w", "t", "s")


def variables(n: int) -> tuple[str, ...]:
    """First ``n`` names of the fixed pool x, y, z, w, t, s, x1, x2, ..."""
    names = list(BASE_VARS[:n])
    i = 1
    while len(names) < n:
        names.append(f"x{i}")
        i += 1
    return tuple(names)


@dataclass(frozen=True)
class Unsupported:
    reason: str
    code: Optional[str] = None


Expansion = Union[Formula, Unsupported]


def slug(name: str) -> str:
    """Lowercase hyphen-slug: ``IsDisjointWith`` -> ``is-disjoint-with``."""
    return _CAMEL.sub("-", name).lower()


_CAMEL = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")


class PredicateNamer:
    """Injective entity -> predicate symbol map (lowercased alias, else slug)."""

    def __init__(self, o: Ontology):
        self.symbols: dict[str, str] = {}
        taken: set[str] = set()
        for e in o.entities:
            base = e.name.alias.lower() if e.name.alias else slug(e.name.canonical)
            sym = base
            n = 2
            while sym in taken:
                sym = f"{base}_{n}"
                n += 1
            taken.add(sym)
            self.symbols[e.id] = sym

    def __call__(self, entity_id: str) -> str:
        return self.symbols[entity_id]


def _p(name: str, *vs: str) -> Pred:
    return Pred(name, tuple(Var(v) for v in vs))


class _Ctx:
    def __init__(self, o: Ontology, namer: Optional[PredicateNamer]):
        self.o = o
        self.namer = namer or PredicateNamer(o)

    def sym(self, ref: Ref) -> str:
        ent = self.o.lookup(ref.target or ref.text)
        if ent is None:
            raise KeyError(ref.text)
        return self.namer(ent.id)

    def alias_sym(self, alias: str, arity: int) -> Optional[str]:
        ent = self.o.find_alias(alias, arity)
        return self.namer(ent.id) if ent is not None else None


def _ordinal(host: Entity, c: Condition) -> int:
    for i, other in enumerate(host.conditions, 1):
        if other is c:
            return i
    for i, other in enumerate(host.conditions, 1):
        if other == c:
            return i
    return len(host.conditions) + 1


def _spec_formula(ctx: _Ctx, spec, v: str, minted: str) -> Optional[Formula]:
    if isinstance(spec, Unrestricted):
        return None
    if isinstance(spec, One):
        return _p(ctx.sym(spec.ref), v)
    if isinstance(spec, AnyOf):
        return disj(*(_p(ctx.sym(r), v) for r in spec.refs))
    if isinstance(spec, AllOf):
        return conj(*(_p(ctx.sym(r), v) for r in spec.refs))
    if isinstance(spec, TextSpec):
        return _p(minted, v)
    raise TypeError(spec)


def _inline(ctx: _Ctx, text: str) -> Expansion:
    """Parse an inline formula; predicate names are entity names or aliases."""
    try:
        f = parse_osf(text)
    except (OsfSyntaxError, ValueError) as exc:
        return Unsupported(f"inline formula does not parse: {exc}", "L01")
    problems: list[str] = []

    def rename(p: Pred) -> Pred:
        ent = ctx.o.lookup(p.name)
        if ent is None:
            problems.append(f"unknown predicate {p.name!r}")
            return p
        if ent.effective_arity != len(p.terms):
            problems.append(f"predicate {p.name!r} used with {len(p.terms)} argument(s), "
                            f"arity is {ent.effective_arity}")
        return Pred(ctx.namer(ent.id), p.terms)

    f = map_predicates(f, rename)
    free = free_variables(f)
    if free:
        problems.append("free variables " + ", ".join(sorted(free)))
    if problems:
        return Unsupported("inline formula rejected: " + "; ".join(problems), "L01")
    return f


def expand_condition(host: Entity, c: Condition, o: Ontology,
                     namer: Optional[PredicateNamer] = None) -> Expansion:
    """The schema of ``c.kind`` instantiated for ``host``, or Unsupported."""
    ctx = _Ctx(o, namer)
    h = ctx.namer(host.id)
    p = c.payload
    k = c.kind
    n = host.effective_arity
    vs = variables(n)
    ordinal = _ordinal(host, c)

    if isinstance(p, FreeForm):
        if p.formula is None:
            return Unsupported("free-text condition without inline formula")
        return _inline(ctx, p.formula)

    if k in (Kind.SL, Kind.SLD):
        target = _p(ctx.sym(p.target), *vs)
        if k is Kind.SL:
            return Forall(vs, Imp(_p(h, *vs), target))
        if p.diff_predicate is not None:
            ent = o.lookup(p.diff_predicate)
            delta = ctx.namer(ent.id) if ent is not None else p.diff_predicate
        else:
            delta = f"diff_{h}_{ordinal}"
        return Forall(vs, Iff(_p(h, *vs), And((target, _p(delta, *vs)))))

    if host.kind.concept_like:
        return _concept_schema(ctx, host, h, c, ordinal)
    return _relation_schema(ctx, h, c, vs, ordinal)


def _concept_schema(ctx: _Ctx, host: Entity, h: str, c: Condition, ordinal: int) -> Expansion:
    p = c.payload
    k = c.kind
    hx = _p(h, "x")
    if isinstance(p, Existential):
        rel = ctx.sym(p.relation)
        m = len(p.targets)
        ys = variables(1 + m)[1:]
        body = conj(*(_p(ctx.sym(t), y) for t, y in zip(p.targets, ys)), _p(rel, "x", *ys))
        exist = Exists(ys, body)
        if p.cardinality is Cardinality.SOME:
            return Forall(("x",), Imp(hx, exist))
        zs = variables(1 + 2 * m)[1 + m:]
        second = conj(*(_p(ctx.sym(t), z) for t, z in zip(p.targets, zs)), _p(rel, "x", *zs))
        same = conj(*(Eq(Var(y), Var(z)) for y, z in zip(ys, zs)))
        unique = Forall(ys + zs, Imp(And(body.items + second.items), same))
        return Forall(("x",), Imp(hx, And((exist, unique))))
    if isinstance(p, Universal):
        rel_ent = ctx.o.lookup(p.relation.target or p.relation.text)
        arity = rel_ent.effective_arity
        extra = variables(arity)[2:]
        if p.target is not None:
            goal = _p(ctx.sym(p.target), "y")
        else:
            goal = _p(f"evr_{h}_{ordinal}", "y")
        inner = Forall(("y",), Imp(_p(ctx.sym(p.relation), "x", "y", *extra), goal))
        return Forall(("x",) + extra, Imp(hx, inner))
    if isinstance(p, ConstantRestriction):
        return Forall(("x",), Imp(hx, Pred(ctx.sym(p.relation), (Var("x"), Const(p.constant)))))
    if isinstance(p, Incompatible):
        return Forall(("x",), Imp(hx, Not(_p(ctx.sym(p.target), "x"))))
    if isinstance(p, Criterion):
        if p.target is None:
            return Unsupported(f"{k.value} criterion given as free text")
        rel = ctx.sym(p.target)
        if k is Kind.UC:
            return _unity(ctx, h, rel)
        both = And((hx, _p(h, "y")))
        r, eq = _p(rel, "x", "y"), Eq(Var("x"), Var("y"))
        if k is Kind.NSIC:
            tail: Formula = Iff(r, eq)
        elif k is Kind.NIC:
            tail = Imp(eq, r)
        else:
            tail = Imp(r, eq)
        return Forall(("x", "y"), Imp(both, tail))
    if isinstance(p, ExternalDependency):
        part = ctx.alias_sym("P", 2) or "p"
        const = ctx.alias_sym("K", 2) or "k"
        body = And((_p(ctx.sym(p.target), "y"), Not(_p(part, "y", "x")), Not(_p(const, "y", "x"))))
        return Forall(("x",), Box(Imp(hx, Exists(("y",), body))))
    return Unsupported(f"no schema for {k.value} on a {host.kind.value}")


def _unity(ctx: _Ctx, h: str, rel: str) -> Expansion:
    ed, pd, ab = (ctx.alias_sym(a, 1) for a in ("ED", "PD", "AB"))
    p2 = ctx.alias_sym("P", 2)
    p3 = ctx.alias_sym("P", 3) or ctx.alias_sym("P_dur", 3)
    missing = [name for name, s in (("ED", ed), ("PD", pd), ("AB", ab), ("P/2", p2), ("P/3", p3)) if s is None]
    if missing:
        return Unsupported("unity condition needs entities aliased " + ", ".join(missing), "L02")

    def whole(pos_y: Formula, pos_z: Formula) -> Formula:
        inside = Forall(("y", "z"), Imp(And((pos_y, pos_z)), _p(rel, "y", "z")))
        outside = Forall(("y", "z"), Imp(And((Not(pos_y), Not(pos_z))), Not(_p(rel, "y", "z"))))
        return And((inside, outside))

    endurant = Imp(_p(ed, "x"), whole(_p(p3, "y", "x", "t"), _p(p3, "z", "x", "t")))
    other = Imp(Or((_p(pd, "x"), _p(ab, "x"))), whole(_p(p2, "y", "x"), _p(p2, "z", "x")))
    return Forall(("x", "t"), Imp(_p(h, "x"), And((endurant, other))))


def _relation_schema(ctx: _Ctx, h: str, c: Condition, vs: tuple[str, ...], ordinal: int) -> Expansion:
    p = c.payload
    r = _p(h, *vs)
    if isinstance(p, Signature):
        parts = []
        for slot, (spec, v) in enumerate(zip(p.args, vs), 1):
            f = _spec_formula(ctx, spec, v, f"arg_{h}_{ordinal}_{slot}")
            if f is not None:
                parts.append(Imp(r, f))
        if not parts:
            return Unsupported("signature restricts no argument")
        return Forall(vs, conj(*parts))
    if isinstance(p, Incompatible):
        return Forall(vs, Imp(r, Not(_p(ctx.sym(p.target), *vs))))
    if isinstance(p, Inverse):
        swapped = (vs[1], vs[0]) + vs[2:]
        return Forall(vs, Iff(r, _p(ctx.sym(p.target), *swapped)))
    return Unsupported(f"no schema for {c.kind.value} on a relation")


# -- meta-properties ---------------------------------------------------------

@dataclass
class MetaExpansion:
    formulas: list[tuple[str, Formula]] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)


def expand_meta_items(host: Entity, o: Ontology, namer: Optional[PredicateNamer] = None) -> MetaExpansion:
    """Labelled meta formulas for ``host`` plus the statuses left unexpanded."""
    ctx = _Ctx(o, namer)
    out = MetaExpansion()
    m = host.meta
    if not host.kind.concept_like:
        out.skipped += _declared_statuses(host)
        return out
    h = ctx.namer(host.id)
    phi = lambda v: _p(h, v)  # noqa: E731

    if m.rigidity == "+R":
        out.formulas.append(("+R", Box(Forall(("x",), Imp(phi("x"), Box(phi("x")))))))
    elif m.rigidity == "-R":
        out.formulas.append(("-R", Exists(("x",), And((phi("x"), Not(Box(phi("x"))))))))
    elif m.rigidity == "~R":
        out.formulas.append(("~R", Forall(("x",), Imp(phi("x"), Not(Box(phi("x")))))))
    if m.non_empty:
        out.formulas.append(("NEP", Box(Exists(("x",), phi("x")))))

    pd = ctx.alias_sym("PD", 1)
    part = ctx.alias_sym("P", 2)
    sb = Box(Forall(("x",), Imp(phi("x"), _p(pd, "x")))) if pd else None

    def need(status: str, *syms: Optional[str]) -> bool:
        if sb is None or any(s is None for s in syms):
            out.skipped.append(status)
            return False
        return True

    apart = (Not(_p(part, "x", "y")), Not(_p(part, "y", "x"))) if part else ()
    if m.strongly_non_empty and need("NEP_S", part):
        out.formulas.append(("NEP_S", And((sb, Box(Exists(("x", "y"), And((phi("x"), phi("y")) + apart)))))))
    if m.cumulativity == "CM" and need("CM"):
        body = Forall(("x", "y"), Imp(And((phi("x"), phi("y"))),
                                      Exists(("z",), And((_p("sum", "z", "x", "y"), phi("z"))))))
        out.formulas.append(("CM", And((sb, Box(body)))))
    elif m.cumulativity == "CM~" and need("CM~", part):
        body = Forall(("x", "y"), Imp(And((phi("x"), phi("y")) + apart),
                                      Exists(("z",), And((_p("sum", "z", "x", "y"), Not(phi("z")))))))
        out.formulas.append(("CM~", And((sb, Box(body)))))
    pt = ctx.alias_sym("P_T", 2)
    if m.homeomericity == "HOM" and need("HOM", pt):
        body = Forall(("x", "y"), Imp(And((phi("x"), _p(pt, "y", "x"))), phi("y")))
        out.formulas.append(("HOM", And((sb, Box(body)))))
    elif m.homeomericity == "HOM~" and need("HOM~", pt):
        body = Forall(("x",), Imp(phi("x"), Exists(("y",), And((_p(pt, "y", "x"), Not(phi("y")))))))
        out.formulas.append(("HOM~", And((sb, Box(body)))))
    at = ctx.alias_sym("At", 1)
    if m.atomicity == "AT" and need("AT", at):
        out.formulas.append(("AT", And((sb, Box(Forall(("x",), Imp(phi("x"), _p(at, "x"))))))))
    elif m.atomicity == "AT~" and need("AT~", at):
        out.formulas.append(("AT~", And((sb, Box(Forall(("x",), Imp(phi("x"), Not(_p(at, "x")))))))))

    for pdecl in host.partitions:
        syms = [ctx.sym(r) for r in pdecl.members]
        for i in range(len(syms)):
            for j in range(i + 1, len(syms)):
                dj = Box(Not(Exists(("x",), And((_p(syms[i], "x"), _p(syms[j], "x"))))))
                out.formulas.append(("PT", dj))
        cover = Box(Forall(("x",), Iff(phi("x"), disj(*(_p(s, "x") for s in syms)))))
        out.formulas.append(("PT", cover))

    out.skipped += [s for s in _declared_statuses(host) if s not in _EXPANDED]
    return out


_EXPANDED = {"+R", "-R", "~R", "NEP", "NEP_S", "CM", "CM~", "HOM", "HOM~", "AT", "AT~"}


def _declared_statuses(host: Entity) -> list[str]:
    m = host.meta
    found = [m.rigidity, m.identity, "+O" if m.supplies_identity else None, m.unity, m.dependence,
             m.definedness, "NEP" if m.non_empty else None, "NEP_S" if m.strongly_non_empty else None,
             m.cumulativity, m.homeomericity, m.atomicity]
    out = [s for s in found if s]
    out += [f"dep {l.kind} -> {l.target.text}" for l in host.meta_links]
    if not host.kind.concept_like:
        out += ["PT"] * len(host.partitions)
    return out


def expand_meta(host: Entity, o: Ontology, namer: Optional[PredicateNamer] = None) -> list[Formula]:
    return [f for _, f in expand_meta_items(host, o, namer).formulas]


# -- file emission -------------------------------------------------------------

@dataclass
class EmitReport:
    text: str
    emitted: dict[str, int] = field(default_factory=dict)
    unsupported: dict[str, int] = field(default_factory=dict)
    failures: list[tuple[Entity, Condition, Unsupported]] = field(default_factory=list)


def emit_entities(entities, o: Ontology, title: Optional[str] = None) -> EmitReport:
    """Emit every condition and meta formula of ``entities`` as OSF text."""
    namer = PredicateNamer(o)
    lines = [f"; ontospec emit: {title if title is not None else o.title}"]
    report = EmitReport("")
    for e in entities:
        done = skipped = 0
        for c in e.conditions:
            res = expand_condition(e, c, o, namer)
            if isinstance(res, Unsupported):
                skipped += 1
                if res.code is not None:
                    report.failures.append((e, c, res))
                continue
            refs = " " + ",".join(str(r) for r in c.axiom_refs) if c.axiom_refs else ""
            lines.append(f"; src: {e.id} {c.kind.value}{refs}")
            lines.append(emit_osf(res))
            done += 1
        for status, f in expand_meta_items(e, o, namer).formulas:
            lines.append(f"; src: {e.id} meta {status}")
            lines.append(emit_osf(f))
            done += 1
        report.emitted[e.id] = done
        report.unsupported[e.id] = skipped
    report.text = "\n".join(lines) + "\n"
    return report
