"""Name resolution: bind every reference to an entity id and check its kind."""

from __future__ import annotations

from dataclasses import replace
from typing import Optional

from ..model import (
    AllOf, AnyOf, Condition, ConstantRestriction, Criterion, Diagnostic, Entity,
    Existential, ExternalDependency, Incompatible, Inverse, IsA, Kind, MetaLink, One,
    Ontology, PartitionDecl, Ref, Severity, Signature, Universal,
)


class _Resolver:
    def __init__(self, o: Ontology):
        self.o = o
        self.diags: list[Diagnostic] = []
        self.host: Optional[Entity] = None

    def error(self, code: str, msg: str, ref: Ref) -> None:
        span = ref.span or (self.host.span if self.host else None)
        self.diags.append(Diagnostic(Severity.ERROR, code, msg, self.host.id if self.host else None, span))

    def bind(self, ref: Ref, want: Optional[str] = None, arity: Optional[int] = None,
             role: str = "reference") -> Ref:
        """Bind ``ref``; ``want`` is "concept" or "relation" (concept-like / relation-like)."""
        ent = self.o.lookup(ref.text)
        if ent is None:
            self.error("R01", f"unresolved name {ref.text!r}", ref)
            return ref
        if want == "concept" and not ent.kind.concept_like:
            self.error("R02", f"{role} {ref.text!r} must be a concept, found {ent.kind.value}", ref)
        elif want == "relation" and not ent.kind.relation_like:
            self.error("R02", f"{role} {ref.text!r} must be a relation, found {ent.kind.value}", ref)
        elif arity is not None and ent.kind.relation_like and ent.effective_arity != arity:
            self.error("R02", f"{role} {ref.text!r} has arity {ent.effective_arity}, expected {arity}", ref)
        return ref.bound(ent.id)

    def condition(self, c: Condition) -> Condition:
        host = self.host
        p = c.payload
        k = c.kind
        if isinstance(p, IsA):
            target = self.bind(p.target, role="subsumer")
            ent = self.o.lookup(p.target.text)
            if ent is not None and (ent.kind is not host.kind or ent.effective_arity != host.effective_arity):
                self.error("R02", f"subsumer {p.target.text!r} is a {_describe(ent)}, "
                                  f"host is a {_describe(host)}", p.target)
            p = replace(p, target=target)
        elif isinstance(p, Existential):
            rel = self.bind(p.relation, "relation", role="relation")
            ent = self.o.lookup(p.relation.text)
            if ent is not None and ent.kind.relation_like and len(p.targets) + 1 != ent.effective_arity:
                self.error("R02", f"relation {p.relation.text!r} has arity {ent.effective_arity}, "
                                  f"but {len(p.targets)} target(s) given", p.relation)
            targets = tuple(self.bind(t, "concept", role="target") for t in p.targets)
            p = replace(p, relation=rel, targets=targets)
        elif isinstance(p, Universal):
            rel = self.bind(p.relation, "relation", role="relation")
            target = self.bind(p.target, "concept", role="target") if p.target is not None else None
            p = replace(p, relation=rel, target=target)
        elif isinstance(p, ConstantRestriction):
            p = replace(p, relation=self.bind(p.relation, "relation", 2, role="relation"))
        elif isinstance(p, Incompatible):
            if k is Kind.ICL:
                p = replace(p, target=self.bind(p.target, "concept", role="incompatible concept"))
            else:
                p = replace(p, target=self.bind(p.target, "relation", host.effective_arity,
                                                role="incompatible relation"))
        elif isinstance(p, Inverse):
            p = replace(p, target=self.bind(p.target, "relation", host.effective_arity, role="inverse"))
        elif isinstance(p, ExternalDependency):
            p = replace(p, target=self.bind(p.target, "concept", role="dependee"))
        elif isinstance(p, Criterion):
            if p.target is not None:
                p = replace(p, target=self.bind(p.target, "relation", 2, role="criterion relation"))
        elif isinstance(p, Signature):
            if len(p.args) != host.effective_arity:
                self.error("R02", f"signature has {len(p.args)} argument(s), relation arity is "
                                  f"{host.effective_arity}", Ref(host.id, c.span))
            args = []
            for spec in p.args:
                if isinstance(spec, One):
                    spec = One(self.bind(spec.ref, "concept", role="argument type"))
                elif isinstance(spec, (AnyOf, AllOf)):
                    spec = type(spec)(tuple(self.bind(r, "concept", role="argument type") for r in spec.refs))
                args.append(spec)
            p = Signature(tuple(args))
        return replace(c, payload=p)

    def entity(self, e: Entity) -> Entity:
        self.host = e
        conditions = tuple(self.condition(c) for c in e.conditions)
        links = tuple(MetaLink(l.kind, self.bind(l.target, "concept", role="dependence target"), l.axiom_refs)
                      for l in e.meta_links)
        parts = tuple(PartitionDecl(tuple(self.bind(m, "concept", role="partition member") for m in pd.members),
                                    pd.axiom_refs, pd.span)
                      for pd in e.partitions)
        self.host = None
        return replace(e, conditions=conditions, meta_links=links, partitions=parts)


def _describe(e: Entity) -> str:
    if e.kind.relation_like:
        return f"{e.kind.value} of arity {e.effective_arity}"
    return e.kind.value


def resolve_references(o: Ontology) -> tuple[Ontology, list[Diagnostic]]:
    """Return a copy of ``o`` with every reference bound, plus R01/R02 diagnostics."""
    r = _Resolver(o)
    entities = tuple(r.entity(e) for e in o.entities)
    return Ontology(o.title, entities), r.diags
