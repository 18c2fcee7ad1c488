"""Subsumption graph, inheritance closures, supply and definedness."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .model import (
    DOWNWARD_KINDS, AllOf, Condition, Diagnostic, Entity, FreeForm, Kind, Modality, One,
    Ontology, Severity, Signature, Unrestricted, condition_key, payload_key,
)

# Synthetic keys standing for meta-statuses that inherit downward.
STATUS_KEYS = ("+I", "+U", "+D")

DEFINED = "defined"
PRIMITIVE = "primitive"


class AnalysisError(Exception):
    def __init__(self, code: str, message: str, entity: Optional[str] = None):
        super().__init__(message)
        self.code = code
        self.entity = entity

    def diagnostic(self) -> Diagnostic:
        return Diagnostic(Severity.ERROR, self.code, str(self), self.entity)


class Via(str, enum.Enum):
    OWN = "Own"
    DOWN = "InheritedDown"
    UP = "InheritedUp"


@dataclass(frozen=True)
class Edge:
    child: str
    parent: str
    kind: Kind
    condition: Condition


@dataclass
class SubsumptionGraph:
    nodes: list[str] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    parents: dict[str, list[str]] = field(default_factory=dict)
    children: dict[str, list[str]] = field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def order(self, ids: Iterable[str]) -> list[str]:
        rank = {n: i for i, n in enumerate(self.nodes)}
        return sorted(ids, key=lambda n: rank.get(n, len(rank)))


def build_graph(o: Ontology) -> SubsumptionGraph:
    """One child->parent edge per SL/SLD whose target has the host's kind and arity."""
    g = SubsumptionGraph(nodes=[e.id for e in o.entities])
    for n in g.nodes:
        g.parents.setdefault(n, [])
        g.children.setdefault(n, [])
    for e in o.entities:
        for c in e.conditions:
            if c.kind not in (Kind.SL, Kind.SLD):
                continue
            target = o.lookup(c.payload.target.target or c.payload.target.text)
            if target is None or target.kind is not e.kind or target.effective_arity != e.effective_arity:
                continue
            if target.id in g.parents[e.id]:
                g.diagnostics.append(Diagnostic(
                    Severity.NOTE, "A02", f"duplicate subsumption link to {target.id} collapsed",
                    e.id, c.span))
                continue
            g.edges.append(Edge(e.id, target.id, c.kind, c))
            g.parents[e.id].append(target.id)
            g.children[target.id].append(e.id)
    for n in g.nodes:
        g.parents[n] = g.order(g.parents[n])
        g.children[n] = g.order(g.children[n])
    return g


def _bfs(start: str, step: dict[str, list[str]]) -> tuple[list[str], bool]:
    """Nodes reachable from ``start`` (excluding it) and whether ``start`` recurs."""
    seen: set[str] = set()
    out: list[str] = []
    cyclic = False
    queue = deque(step.get(start, ()))
    while queue:
        n = queue.popleft()
        if n == start:
            cyclic = True
            continue
        if n in seen:
            continue
        seen.add(n)
        out.append(n)
        queue.extend(step.get(n, ()))
    return out, cyclic


def ancestors(g: SubsumptionGraph, e: str) -> list[str]:
    """Strict ancestors, breadth-first; A01 if a cycle passes through ``e``."""
    out, cyclic = _bfs(e, g.parents)
    if cyclic:
        raise AnalysisError("A01", f"subsumption cycle through {e}", e)
    return out


def safe_ancestors(g: SubsumptionGraph, e: str) -> list[str]:
    return _bfs(e, g.parents)[0]


def descendants(g: SubsumptionGraph, e: str) -> list[str]:
    return _bfs(e, g.children)[0]


def on_cycle(g: SubsumptionGraph, e: str) -> bool:
    return _bfs(e, g.parents)[1]


# -- carried conditions ---------------------------------------------------------

@dataclass(frozen=True)
class CarriedEntry:
    key: str
    origin: str
    via: Via
    modality: Optional[Modality]
    kind: Optional[Kind]  # None for synthetic status keys


def own_entries(e: Entity) -> list[CarriedEntry]:
    out = [CarriedEntry(condition_key(c), e.id, Via.OWN, c.modality, c.kind) for c in e.conditions]
    for c in e.conditions:
        if c.kind is Kind.SLD:
            out.append(CarriedEntry(differentia_key(c), e.id, Via.OWN, c.modality, Kind.NMC))
    m = e.meta
    if m.carries_identity:
        out.append(CarriedEntry("+I", e.id, Via.OWN, None, None))
    if m.unity == "+U":
        out.append(CarriedEntry("+U", e.id, Via.OWN, None, None))
    if m.dependence == "+D":
        out.append(CarriedEntry("+D", e.id, Via.OWN, None, None))
    return out


def differentia_key(c: Condition) -> str:
    """The NMC key under which an SLD's differentia is carried."""
    return payload_key(Kind.NMC, FreeForm(c.payload.differentia))


def _inherits_down(entry: CarriedEntry) -> bool:
    return entry.kind is None or entry.kind in DOWNWARD_KINDS


@dataclass
class CarriedSet:
    entries: dict[str, list[CarriedEntry]] = field(default_factory=dict)

    def of(self, e: str) -> list[CarriedEntry]:
        return self.entries.get(e, [])

    def carries(self, e: str, key: str) -> bool:
        return any(x.key == key for x in self.of(e))

    def keys(self, e: str) -> list[str]:
        seen: dict[str, None] = {}
        for x in self.of(e):
            seen.setdefault(x.key)
        return list(seen)


def carried_closure(o: Ontology, g: SubsumptionGraph) -> CarriedSet:
    own = {e.id: own_entries(e) for e in o.entities}
    result = CarriedSet()
    for e in o.entities:
        entries = list(own[e.id])
        seen = {(x.key, x.origin) for x in entries}
        for a in safe_ancestors(g, e.id):
            for x in own.get(a, ()):
                if _inherits_down(x) and (x.key, a) not in seen:
                    seen.add((x.key, a))
                    entries.append(CarriedEntry(x.key, a, Via.DOWN, x.modality, x.kind))
        for d in descendants(g, e.id):
            for x in own.get(d, ()):
                if x.kind is Kind.SMC and (x.key, d) not in seen:
                    seen.add((x.key, d))
                    entries.append(CarriedEntry(x.key, d, Via.UP, x.modality, x.kind))
        result.entries[e.id] = entries
    return result


def supplies(o: Ontology, g: SubsumptionGraph, e: str, key: str,
             closure: Optional[CarriedSet] = None) -> bool:
    """Whether ``e`` supplies ``key``; S01 if ``e`` does not carry it."""
    closure = closure or carried_closure(o, g)
    mine = [x for x in closure.of(e) if x.key == key]
    if not mine:
        raise AnalysisError("S01", f"{e} does not carry {key}", e)
    kind = mine[0].kind
    if kind is None or kind in DOWNWARD_KINDS:
        return not any(closure.carries(a, key) for a in safe_ancestors(g, e))
    # SMC and the NSMC family: no strict descendant carries the key
    if any(closure.carries(d, key) for d in descendants(g, e)):
        return False
    if kind is Kind.SLD:
        ent = o.get(e)
        for c in ent.conditions:
            if c.kind is Kind.SLD and condition_key(c) == key:
                delta = differentia_key(c)
                target = o.lookup(c.payload.target.target or c.payload.target.text)
                if not closure.carries(e, delta):
                    return False
                if target is not None and closure.carries(target.id, delta):
                    return False
    return True


def derive_definedness(e: Entity) -> str:
    """``defined`` iff the entity declares an NSMC or an SLD of its own."""
    return DEFINED if any(c.kind in (Kind.NSMC, Kind.SLD) for c in e.conditions) else PRIMITIVE


# -- signatures -------------------------------------------------------------------

@dataclass(frozen=True)
class Meet:
    """Intersection of several heterogeneous argument specs."""

    specs: tuple

    def key(self) -> str:
        return "meet(" + "&".join(sorted(s.key() for s in self.specs)) + ")"

    def names(self) -> tuple[str, ...]:
        return tuple(n for s in self.specs for n in s.names())


def effective_signature(o: Ontology, g: SubsumptionGraph, rel: str) -> list:
    ent = o.get(rel)
    n = ent.effective_arity
    slots: list[list] = [[] for _ in range(n)]
    for node in [rel] + safe_ancestors(g, rel):
        for c in o.get(node).conditions:
            if c.kind is not Kind.SIG or not isinstance(c.payload, Signature):
                continue
            for i, spec in enumerate(c.payload.args[:n]):
                if not isinstance(spec, Unrestricted) and spec.key() not in {s.key() for s in slots[i]}:
                    slots[i].append(spec)
    out = []
    for specs in slots:
        if not specs:
            out.append(Unrestricted())
        elif len(specs) == 1:
            out.append(specs[0])
        elif all(isinstance(s, One) for s in specs):
            out.append(AllOf(tuple(s.ref for s in specs)))
        else:
            out.append(Meet(tuple(specs)))
    return out
