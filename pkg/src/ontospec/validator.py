"""Diagnostic catalog and the checks behind ``ontospec check``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .analysis import (
    AnalysisError, SubsumptionGraph, build_graph, carried_closure, derive_definedness,
    descendants, effective_signature, on_cycle, safe_ancestors, supplies,
)
from .model import (
    Diagnostic, Entity, Incompatible, Inverse, IsA, Kind, Ontology, Severity,
)


@dataclass(frozen=True)
class CatalogEntry:
    code: str
    severity: Severity
    title: str
    text: str


_E, _W, _N = Severity.ERROR, Severity.WARNING, Severity.NOTE

CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry("P01", _E, "lexical error",
                 "The input contains a character or string the tokenizer cannot read, "
                 "such as an unterminated string or a stray symbol."),
    CatalogEntry("P02", _E, "syntax error",
                 "The token sequence does not follow the document grammar. The parser "
                 "skips to the next ';' or '}' and continues."),
    CatalogEntry("P03", _E, "unknown condition kind",
                 "A condition label names a kind outside the closed vocabulary "
                 "(NMC SL ER VR EVR CR ICL SMC NSMC SLD NSIC NIC SIC UC EDC for concepts; "
                 "NMC SL SIG IL SMC NSMC SLD IVL for relations), or a kind not allowed "
                 "on the host entity."),
    CatalogEntry("P04", _E, "unknown comment tag",
                 "Comment items must be tagged SA, EX, CEX, CIT, DIV or DEF."),
    CatalogEntry("P05", _E, "malformed axiom reference",
                 "Axiom references are A, D or T, then 'd', a number, optional letters "
                 "and primes, e.g. Ad2a' or Td15c'."),
    CatalogEntry("P06", _E, "duplicate entity name",
                 "Canonical names and aliases must be unique under case-insensitive "
                 "comparison, across every merged file."),
    CatalogEntry("P07", _W, "alias applied",
                 "A known misspelling was read with a fixed meaning: MIL as IVL, NC as "
                 "NMC, PE as EP, a missing modality as EP, and Rn or DRn signature "
                 "components as value restrictions."),
    CatalogEntry("R01", _E, "unresolved name",
                 "A reference names no declared entity (name or alias)."),
    CatalogEntry("R02", _E, "kind or arity mismatch",
                 "A reference resolves to an entity of the wrong kind or arity: SL/SLD "
                 "targets must match the host, ER/VR/CR relations must be relations, "
                 "targets must be concepts, signatures must cover every argument."),
    CatalogEntry("L01", _E, "inline formula rejected",
                 "An inline formula fails to parse, uses an unknown predicate or a wrong "
                 "arity, or has free variables."),
    CatalogEntry("L02", _W, "unity schema unavailable",
                 "A unity condition expands only when entities aliased ED, PD, AB, a "
                 "binary P and a ternary part relation exist."),
    CatalogEntry("A01", _E, "cycle in ancestor query",
                 "An ancestor query reached the starting entity again."),
    CatalogEntry("A02", _N, "duplicate subsumption link",
                 "Two SL/SLD conditions link the same pair of entities; the graph keeps one edge."),
    CatalogEntry("S01", _E, "key not carried",
                 "A supply query named a condition key the entity does not carry."),
    CatalogEntry("C01", _E, "corpus unavailable",
                 "The shipped corpus files are missing or do not match the MANIFEST digests."),
    CatalogEntry("V01", _E, "subsumption cycle",
                 "The SL/SLD links form a cycle, so subsumption is not a partial order."),
    CatalogEntry("V02", _E, "subsumption kind mismatch",
                 "An SL or SLD links entities of different kind or arity. This repeats "
                 "the resolver check on merged ontologies."),
    CatalogEntry("V03", _E, "incompatible with a subsumer",
                 "An entity carries an incompatibility link (ICL or IL) toward itself or "
                 "one of its subsumers. Under SC1 the link is inherited, so the entity "
                 "could have no instances."),
    CatalogEntry("V04", _E, "ill-formed partition",
                 "A partition member is unresolved, repeated, equal to the whole, or not "
                 "subsumed by the whole. Dd13 requires that none of the members equals the whole."),
    CatalogEntry("V05", _E, "partition violated",
                 "An entity is subsumed by two members of one partition. Members of a "
                 "partition are disjoint (Dd13)."),
    CatalogEntry("V06", _E, "anti-unity above unity",
                 "An entity with anti-unity (~U) subsumes an entity declared +U. This is SC3 "
                 "read downward: taken literally, SC3 pushes anti-unity up to subsumers, which "
                 "clashes with the corpus (REGION ~U under ABSTRACT -U)."),
    CatalogEntry("V07", _E, "anti-rigid above rigid",
                 "An anti-rigid entity (~R) subsumes an entity declared +R. This is SC4 read "
                 "downward, as in standard OntoClean: taken literally, SC4 makes every subsumer "
                 "of an anti-rigid entity anti-rigid, which would forbid STUDENT under PERSON."),
    CatalogEntry("V08", _E, "identity not inherited",
                 "A subsumer carries an identity criterion (+I) but a subsumed entity declares "
                 "-I. Identity conditions are inherited (SC1)."),
    CatalogEntry("V09", _E, "dependence not inherited",
                 "A subsumer is externally dependent (+D) but a subsumed entity declares -D. "
                 "External dependence conditions are inherited (SC1)."),
    CatalogEntry("V10", _E, "supplier not rigid sortal",
                 "An entity supplying an identity criterion (+O) must be rigid (+R) and carry "
                 "an identity criterion (+I)."),
    CatalogEntry("V11", _W, "definedness mismatch",
                 "The declared defined/primitive status disagrees with the conditions: an "
                 "entity is defined exactly when it declares an NSMC or SLD."),
    CatalogEntry("V12", _E, "inverse links disagree",
                 "A relation names an inverse whose own inverse is a different relation "
                 "(error), or which declares no inverse at all (warning)."),
    CatalogEntry("V13", _W, "inverse signature mismatch",
                 "For a binary relation r with inverse s, the effective first argument of r "
                 "differs from the effective second argument of s."),
    CatalogEntry("V14", _E, "perdurant status outside PD",
                 "CM, CM~, HOM, HOM~, AT, AT~ and NEP_S are only defined for properties "
                 "subsumed by the entity aliased PD (Dd56-Dd62, SB(PD, phi))."),
    CatalogEntry("V15", _W, "declared supplier does not supply",
                 "The entity is declared +O but a subsumer already carries an identity "
                 "criterion, so it does not supply one."),
    CatalogEntry("V16", _W, "duplicate axiom reference",
                 "The same axiom reference labels two statements. The corpus keeps the "
                 "duplicated Dd31 as printed."),
    CatalogEntry("V17", _W, "several identity criteria",
                 "A concept declares more than one UC, NSIC, NIC or SIC of the same kind."),
    CatalogEntry("V18", _N, "status normalized",
                 "~R entails -R and ~U entails -U; the weaker status is recorded."),
)
_BY_CODE = {c.code: c for c in CATALOG}


class UnknownCode(KeyError):
    code = "E01"


def explain(code: str) -> str:
    """Catalog text for ``code``; raises UnknownCode (E01) if there is none."""
    entry = _BY_CODE.get(code.strip().upper().split("-", 1)[0])
    if entry is None:
        raise UnknownCode(f"E01 unknown diagnostic code {code!r}")
    return f"{entry.code} ({entry.severity.value}) {entry.title}\n{entry.text}"


# -- checks ---------------------------------------------------------------------

class _Run:
    def __init__(self, o: Ontology):
        self.o = o
        self.g: SubsumptionGraph = build_graph(o)
        self.closure = carried_closure(o, self.g)
        self.out: list[Diagnostic] = list(self.g.diagnostics)
        self.anc = {e.id: safe_ancestors(self.g, e.id) for e in o.entities}

    def emit(self, code: str, entity: Entity, message: str, span=None,
             severity: Optional[Severity] = None) -> None:
        sev = severity or _BY_CODE[code].severity
        self.out.append(Diagnostic(sev, code, message, entity.id, span or entity.span))

    def resolve(self, ref) -> Optional[Entity]:
        return self.o.lookup(ref.target or ref.text)

    def upset(self, e: str) -> set[str]:
        return {e, *self.anc[e]}

    def v01(self, e: Entity) -> None:
        if on_cycle(self.g, e.id):
            ring = [n for n in self.g.order(set(self.anc[e.id]) & set(descendants(self.g, e.id)) | {e.id})]
            self.emit("V01", e, "subsumption cycle through " + ", ".join(ring))

    def v02(self, e: Entity) -> None:
        for c in e.conditions:
            if isinstance(c.payload, IsA):
                t = self.resolve(c.payload.target)
                if t is not None and (t.kind is not e.kind or t.effective_arity != e.effective_arity):
                    self.emit("V02", e, f"{c.kind.value} links a {e.kind.value} to {t.id}, a {t.kind.value}"
                                        + (f" of arity {t.effective_arity}" if t.kind.relation_like else ""),
                              c.span)

    def _contradictions(self, e: str) -> set[tuple[str, str, str]]:
        found = set()
        up = self.upset(e)
        for node in [e] + self.anc[e]:
            for c in self.o.get(node).conditions:
                if c.kind in (Kind.ICL, Kind.IL) and isinstance(c.payload, Incompatible):
                    t = self.resolve(c.payload.target)
                    if t is not None and t.id in up:
                        found.add((node, t.id, c.kind.value))
        return found

    def v03(self, e: Entity) -> None:
        mine = self._contradictions(e.id)
        inherited = set()
        for p in self.g.parents.get(e.id, ()):
            inherited |= self._contradictions(p)
        for origin, target, kind in sorted(mine - inherited):
            where = "" if origin == e.id else f" (inherited from {origin})"
            self.emit("V03", e, f"{kind} toward {target}, which subsumes or equals {e.id}{where}")

    def v04_v05(self, e: Entity) -> None:
        for pd in e.partitions:
            seen: set[str] = set()
            below = set(descendants(self.g, e.id))
            for ref in pd.members:
                m = self.resolve(ref)
                if m is None:
                    self.emit("V04", e, f"partition member {ref.text!r} is unresolved", pd.span)
                    continue
                if m.id in seen:
                    self.emit("V04", e, f"partition member {m.id} is repeated", pd.span)
                seen.add(m.id)
                if m.id == e.id:
                    self.emit("V04", e, f"partition member {m.id} equals the whole", pd.span)
                elif m.id not in below:
                    self.emit("V04", e, f"partition member {m.id} is not subsumed by {e.id}", pd.span)
            members = [m for m in self.g.order(seen) if m != e.id]
            for x in self.o.entities:
                hit = [m for m in members if m in self.upset(x.id)]
                if len(hit) >= 2:
                    self.emit("V05", x, f"subsumed by {' and '.join(hit)}, disjoint members of the "
                                        f"partition of {e.id}")

    def status_pairs(self, code: str, e: Entity, above: Callable, below: Callable, what: str) -> None:
        if not below(e):
            return
        for a in self.anc[e.id]:
            if above(self.o.get(a)):
                self.emit(code, e, f"{what}; subsumer {a}")

    def v06_to_v09(self, e: Entity) -> None:
        self.status_pairs("V06", e, lambda a: a.meta.unity == "~U", lambda d: d.meta.unity == "+U",
                          f"{e.id} declares +U below an anti-unity (~U) entity")
        self.status_pairs("V07", e, lambda a: a.meta.rigidity == "~R", lambda d: d.meta.rigidity == "+R",
                          f"{e.id} declares +R below an anti-rigid (~R) entity")
        self.status_pairs("V08", e, lambda a: a.meta.carries_identity, lambda d: d.meta.identity == "-I",
                          f"{e.id} declares -I below an entity carrying identity (+I)")
        self.status_pairs("V09", e, lambda a: a.meta.dependence == "+D", lambda d: d.meta.dependence == "-D",
                          f"{e.id} declares -D below an externally dependent (+D) entity")

    def v10(self, e: Entity) -> None:
        m = e.meta
        if m.supplies_identity and (m.rigidity != "+R" or m.identity == "-I"):
            self.emit("V10", e, f"supplies identity (+O) with rigidity {m.rigidity or 'unspecified'} "
                                f"and identity {m.identity or '+I (implied)'}")

    def v11(self, e: Entity) -> None:
        declared = e.meta.definedness
        if declared is not None:
            derived = derive_definedness(e)
            if declared != derived:
                self.emit("V11", e, f"declared {declared} but conditions make it {derived}")

    def v12_v13(self, e: Entity) -> None:
        if not e.kind.relation_like:
            return
        for c in e.conditions:
            if c.kind is not Kind.IVL or not isinstance(c.payload, Inverse):
                continue
            s = self.resolve(c.payload.target)
            if s is None:
                continue
            back = [self.resolve(x.payload.target) for x in s.conditions
                    if x.kind is Kind.IVL and isinstance(x.payload, Inverse)]
            back_ids = [b.id for b in back if b is not None]
            if not back:
                self.emit("V12", e, f"inverse {s.id} declares no inverse", c.span, Severity.WARNING)
            elif e.id not in back_ids:
                self.emit("V12", e, f"inverse {s.id} names {', '.join(back_ids)} as its inverse", c.span)
            if e.effective_arity == 2 and s.effective_arity == 2:
                mine = effective_signature(self.o, self.g, e.id)[0]
                theirs = effective_signature(self.o, self.g, s.id)[1]
                if mine.key() != theirs.key():
                    self.emit("V13", e, f"first argument {mine.key()} differs from second argument "
                                        f"{theirs.key()} of inverse {s.id}", c.span)

    def v14(self, e: Entity) -> None:
        statuses = e.meta.perdurant_statuses
        if not statuses:
            return
        pd = self.o.find_alias("PD", 1)
        if pd is None or pd.id not in self.upset(e.id):
            self.emit("V14", e, f"{', '.join(statuses)} on an entity not subsumed by "
                                f"{pd.id if pd else 'an entity aliased PD'}")

    def v15(self, e: Entity) -> None:
        if not e.meta.supplies_identity:
            return
        try:
            ok = supplies(self.o, self.g, e.id, "+I", self.closure)
        except AnalysisError:
            ok = False
        if not ok:
            carriers = [a for a in self.anc[e.id] if self.closure.carries(a, "+I")]
            self.emit("V15", e, "declared +O but identity is already carried by " + ", ".join(carriers))

    def v16(self) -> None:
        first: dict[str, str] = {}
        for e in self.o.entities:
            for r, span in _refs_of(e):
                key = str(r)
                if key in first:
                    self.emit("V16", e, f"axiom reference {key} already used by {first[key]}", span)
                else:
                    first[key] = e.id

    def v17(self, e: Entity) -> None:
        for k in (Kind.UC, Kind.NSIC, Kind.NIC, Kind.SIC):
            n = sum(1 for c in e.conditions if c.kind is k)
            if n > 1:
                self.emit("V17", e, f"{n} {k.value} conditions")

    def v18(self, e: Entity) -> None:
        if e.meta.unity == "~U":
            self.emit("V18", e, "~U recorded as implying -U")
        if e.meta.rigidity == "~R":
            self.emit("V18", e, "~R recorded as implying -R")


def _refs_of(e: Entity) -> Iterator[tuple[object, object]]:
    for _, r in e.meta.status_refs:
        yield r, e.span
    for pd in e.partitions:
        for r in pd.axiom_refs:
            yield r, pd.span or e.span
    for link in e.meta_links:
        for r in link.axiom_refs:
            yield r, e.span
    for c in e.conditions:
        for r in c.axiom_refs:
            yield r, c.span or e.span


def validate(o: Ontology) -> list[Diagnostic]:
    """Run every check; output is ordered by entity declaration, then code."""
    run = _Run(o)
    for e in o.entities:
        run.v01(e)
        run.v02(e)
        run.v03(e)
        run.v04_v05(e)
        run.v06_to_v09(e)
        run.v10(e)
        run.v11(e)
        run.v12_v13(e)
        run.v14(e)
        run.v15(e)
        run.v17(e)
        run.v18(e)
    run.v16()
    return sort_diagnostics(run.out, o)


def sort_diagnostics(diags: list[Diagnostic], o: Ontology) -> list[Diagnostic]:
    rank = {e.id: i for i, e in enumerate(o.entities)}
    return sorted(diags, key=lambda d: (rank.get(d.entity, len(rank)), d.code))
