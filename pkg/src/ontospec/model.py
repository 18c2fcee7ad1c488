"""Data model for OntoSpec ontologies.

Entities, labeled conditions, meta-properties, comments and diagnostics.
Values are frozen dataclasses; an :class:`Ontology` is treated as immutable
once built, and resolution produces a new one.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"
    NOTE = "note"


@dataclass(frozen=True)
class SourceSpan:
    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    entity: Optional[str] = None
    span: Optional[SourceSpan] = None

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def format_text(self) -> str:
        where = str(self.span) if self.span else "-:0:0"
        return f"{self.severity.value} {self.code} {self.entity or '-'} {where} {self.message}"

    def to_json(self) -> dict:
        return {
            "severity": self.severity.value,
            "code": self.code,
            "entity": self.entity,
            "file": self.span.file if self.span else None,
            "line": self.span.start_line if self.span else None,
            "col": self.span.start_col if self.span else None,
            "message": self.message,
        }


class EntityKind(str, enum.Enum):
    CONCEPT = "concept"
    RELATION = "relation"
    METACONCEPT = "metaconcept"
    METARELATION = "metarelation"

    @property
    def concept_like(self) -> bool:
        return self in (EntityKind.CONCEPT, EntityKind.METACONCEPT)

    @property
    def relation_like(self) -> bool:
        return not self.concept_like


class Modality(str, enum.Enum):
    EP = "EP"
    CP = "CP"


class Kind(str, enum.Enum):
    NMC = "NMC"
    SL = "SL"
    ER = "ER"
    VR = "VR"
    EVR = "EVR"
    CR = "CR"
    ICL = "ICL"
    SMC = "SMC"
    NSMC = "NSMC"
    SLD = "SLD"
    NSIC = "NSIC"
    NIC = "NIC"
    SIC = "SIC"
    UC = "UC"
    EDC = "EDC"
    SIG = "SIG"
    IL = "IL"
    IVL = "IVL"


CONCEPT_KINDS = frozenset({
    Kind.NMC, Kind.SL, Kind.ER, Kind.VR, Kind.EVR, Kind.CR, Kind.ICL, Kind.SMC,
    Kind.NSMC, Kind.SLD, Kind.NSIC, Kind.NIC, Kind.SIC, Kind.UC, Kind.EDC,
})
RELATION_KINDS = frozenset({
    Kind.NMC, Kind.SL, Kind.SIG, Kind.IL, Kind.SMC, Kind.NSMC, Kind.SLD, Kind.IVL,
})
# Kinds inherited downward along subsumption links.
NMC_FAMILY = frozenset({
    Kind.NMC, Kind.SL, Kind.ER, Kind.VR, Kind.EVR, Kind.CR, Kind.ICL, Kind.SIG, Kind.IL,
})
IDENTITY_KINDS = frozenset({Kind.NSIC, Kind.NIC, Kind.SIC})
DOWNWARD_KINDS = NMC_FAMILY | IDENTITY_KINDS | {Kind.UC, Kind.EDC}
NSMC_FAMILY = frozenset({Kind.NSMC, Kind.SLD, Kind.IVL})


def kind_allowed(kind: Kind, entity_kind: EntityKind) -> bool:
    if entity_kind.concept_like:
        return kind in CONCEPT_KINDS
    return kind in RELATION_KINDS


# ---------------------------------------------------------------------------
# names and references

@dataclass(frozen=True)
class EntityName:
    canonical: str
    alias: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.canonical:
            raise ValueError("canonical name must be non-empty")
        if self.alias is not None and (not self.alias or any(ch.isspace() for ch in self.alias)):
            raise ValueError(f"invalid alias {self.alias!r}")

    def __str__(self) -> str:
        return self.canonical


@dataclass(frozen=True)
class Ref:
    """A by-name reference to an entity; ``target`` is the canonical id once resolved."""

    text: str
    span: Optional[SourceSpan] = field(default=None, compare=False)
    target: Optional[str] = field(default=None, compare=False)

    @property
    def key(self) -> str:
        return (self.target or self.text).lower()

    def bound(self, target: str) -> "Ref":
        return Ref(self.text, self.span, target)


_AXREF_RE = re.compile(r"^([ADT])d([1-9][0-9]*)([a-z]*)('*)$")


@dataclass(frozen=True, order=True)
class AxiomRef:
    family: str
    number: int
    letters: str = ""
    primes: int = 0

    def __post_init__(self) -> None:
        if self.family not in ("A", "D", "T") or self.number < 1:
            raise ValueError(f"bad axiom ref {self.family}{self.number}")

    @classmethod
    def parse(cls, text: str) -> Optional["AxiomRef"]:
        m = _AXREF_RE.match(text)
        if not m:
            return None
        return cls(m.group(1), int(m.group(2)), m.group(3), len(m.group(4)))

    def __str__(self) -> str:
        return f"{self.family}d{self.number}{self.letters}" + "'" * self.primes


# ---------------------------------------------------------------------------
# payloads

class Cardinality(str, enum.Enum):
    SOME = "some"
    EXACTLY_ONE = "exactly-one"


@dataclass(frozen=True)
class Unrestricted:
    def key(self) -> str:
        return "*"

    def names(self) -> tuple[str, ...]:
        return ()


@dataclass(frozen=True)
class One:
    ref: Ref

    def key(self) -> str:
        return self.ref.key

    def names(self) -> tuple[str, ...]:
        return (self.ref.key,)


@dataclass(frozen=True)
class AnyOf:
    refs: tuple[Ref, ...]

    def key(self) -> str:
        return "any(" + "|".join(sorted(r.key for r in self.refs)) + ")"

    def names(self) -> tuple[str, ...]:
        return tuple(r.key for r in self.refs)


@dataclass(frozen=True)
class AllOf:
    refs: tuple[Ref, ...]

    def key(self) -> str:
        return "all(" + "&".join(sorted(r.key for r in self.refs)) + ")"

    def names(self) -> tuple[str, ...]:
        return tuple(r.key for r in self.refs)


@dataclass(frozen=True)
class TextSpec:
    text: str

    def key(self) -> str:
        return "text(" + normalize_text(self.text) + ")"

    def names(self) -> tuple[str, ...]:
        return ()


ArgSpec = Union[Unrestricted, One, AnyOf, AllOf, TextSpec]


@dataclass(frozen=True)
class IsA:
    target: Ref
    differentia: Optional[str] = None
    diff_predicate: Optional[str] = None


@dataclass(frozen=True)
class Existential:
    relation: Ref
    targets: tuple[Ref, ...]
    cardinality: Cardinality = Cardinality.SOME


@dataclass(frozen=True)
class Universal:
    """Value restriction (``target``) or extended value restriction (``text``)."""

    relation: Ref
    target: Optional[Ref] = None
    text: Optional[str] = None


@dataclass(frozen=True)
class ConstantRestriction:
    relation: Ref
    constant: str


@dataclass(frozen=True)
class Incompatible:
    target: Ref


@dataclass(frozen=True)
class Signature:
    args: tuple[ArgSpec, ...]


@dataclass(frozen=True)
class Inverse:
    target: Ref


@dataclass(frozen=True)
class Criterion:
    target: Optional[Ref] = None
    text: Optional[str] = None


@dataclass(frozen=True)
class ExternalDependency:
    target: Ref


@dataclass(frozen=True)
class FreeForm:
    gloss: str
    formula: Optional[str] = None


Payload = Union[
    IsA, Existential, Universal, ConstantRestriction, Incompatible, Signature,
    Inverse, Criterion, ExternalDependency, FreeForm,
]

PAYLOAD_TYPES: dict[Kind, type] = {
    Kind.SL: IsA,
    Kind.SLD: IsA,
    Kind.ER: Existential,
    Kind.VR: Universal,
    Kind.EVR: Universal,
    Kind.CR: ConstantRestriction,
    Kind.ICL: Incompatible,
    Kind.IL: Incompatible,
    Kind.SIG: Signature,
    Kind.IVL: Inverse,
    Kind.NSIC: Criterion,
    Kind.NIC: Criterion,
    Kind.SIC: Criterion,
    Kind.UC: Criterion,
    Kind.EDC: ExternalDependency,
    Kind.NMC: FreeForm,
    Kind.SMC: FreeForm,
    Kind.NSMC: FreeForm,
}


def payload_matches(kind: Kind, payload: Payload) -> bool:
    if not isinstance(payload, PAYLOAD_TYPES[kind]):
        return False
    if kind is Kind.SL:
        return payload.differentia is None and payload.diff_predicate is None
    if kind is Kind.SLD:
        return payload.differentia is not None
    if kind is Kind.VR:
        return payload.target is not None and payload.text is None
    if kind is Kind.EVR:
        return payload.text is not None and payload.target is None
    if isinstance(payload, Criterion):
        return (payload.target is None) != (payload.text is None)
    return True


@dataclass(frozen=True)
class Condition:
    modality: Modality
    kind: Kind
    payload: Payload
    axiom_refs: tuple[AxiomRef, ...] = ()
    gloss: Optional[str] = None
    label: str = ""
    span: Optional[SourceSpan] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not payload_matches(self.kind, self.payload):
            raise ValueError(f"payload {type(self.payload).__name__} does not fit kind {self.kind.value}")
        if not self.label:
            object.__setattr__(self, "label", default_label(self.modality, self.kind, self.payload))

    @property
    def kind_label(self) -> str:
        return self.label.split("/", 1)[-1]


def default_label(modality: Modality, kind: Kind, payload: Payload) -> str:
    if kind is not Kind.SIG:
        return f"{modality.value}/{kind.value}"
    args = payload.args
    parts = []
    if len(args) == 2:
        for spec, plain in zip(args, ("DR", "RR")):
            if isinstance(spec, AnyOf):
                parts.append("D" + plain)
            elif isinstance(spec, AllOf):
                parts.append("C" + plain)
            elif not isinstance(spec, Unrestricted):
                parts.append(plain)
    else:
        parts = [f"VR{i}" for i, spec in enumerate(args, 1) if not isinstance(spec, Unrestricted)]
    return f"{modality.value}/" + (" & ".join(parts) if parts else "SIG")


# ---------------------------------------------------------------------------
# meta level

RIGIDITY = ("+R", "-R", "~R")
IDENTITY = ("+I", "-I")
UNITY = ("+U", "-U", "~U")
DEPENDENCE = ("+D", "-D")

META_LINK_KINDS = (
    "SD", "OSD", "MSD", "GD", "OGD", "MGD", "D", "OD",
    "SD_s", "OSD_s", "MSD_s", "GD_s", "OGD_s", "MGD_s", "PGD_s", "P1GD_s",
    "SK", "OSK", "MSK", "GK", "OGK", "MGK", "K",
)


@dataclass(frozen=True)
class MetaStatuses:
    rigidity: Optional[str] = None
    identity: Optional[str] = None
    supplies_identity: bool = False
    unity: Optional[str] = None
    dependence: Optional[str] = None
    definedness: Optional[str] = None  # "defined" | "primitive"
    non_empty: bool = False
    strongly_non_empty: bool = False
    cumulativity: Optional[str] = None  # "CM" | "CM~"
    homeomericity: Optional[str] = None  # "HOM" | "HOM~"
    atomicity: Optional[str] = None  # "AT" | "AT~"
    status_refs: tuple[tuple[str, AxiomRef], ...] = ()

    @property
    def carries_identity(self) -> bool:
        return self.identity == "+I" or self.supplies_identity

    @property
    def effectively_non_empty(self) -> bool:
        return self.non_empty or self.strongly_non_empty

    @property
    def perdurant_statuses(self) -> tuple[str, ...]:
        found = [s for s in (self.cumulativity, self.homeomericity, self.atomicity) if s]
        if self.strongly_non_empty:
            found.append("NEP_S")
        return tuple(found)


@dataclass(frozen=True)
class MetaLink:
    kind: str
    target: Ref
    axiom_refs: tuple[AxiomRef, ...] = ()


@dataclass(frozen=True)
class PartitionDecl:
    members: tuple[Ref, ...]
    axiom_refs: tuple[AxiomRef, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False)


COMMENT_TAGS = ("SA", "EX", "CEX", "CIT", "DIV", "DEF")


@dataclass(frozen=True)
class CommentItem:
    tag: str
    text: str
    source: Optional[str] = None


@dataclass(frozen=True)
class Entity:
    name: EntityName
    kind: EntityKind
    arity: Optional[int] = None
    meta: MetaStatuses = MetaStatuses()
    meta_links: tuple[MetaLink, ...] = ()
    partitions: tuple[PartitionDecl, ...] = ()
    conditions: tuple[Condition, ...] = ()
    comments: tuple[CommentItem, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False)

    @property
    def id(self) -> str:
        return self.name.canonical

    @property
    def effective_arity(self) -> int:
        """Number of arguments of the entity's predicate."""
        if self.kind.concept_like:
            return 1
        return self.arity or 2


# ---------------------------------------------------------------------------
# ontology

@dataclass(frozen=True)
class Ontology:
    title: str
    entities: tuple[Entity, ...] = ()
    _index: dict = field(default_factory=dict, compare=False, repr=False)
    _by_id: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        index: dict[str, Entity] = {}
        by_id: dict[str, Entity] = {}
        for ent in self.entities:
            by_id.setdefault(ent.id, ent)
            for name in (ent.name.canonical, ent.name.alias):
                if name is not None:
                    index.setdefault(name.lower(), ent)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_by_id", by_id)

    def __iter__(self) -> Iterator[Entity]:
        return iter(self.entities)

    def __len__(self) -> int:
        return len(self.entities)

    def lookup(self, name: str) -> Optional[Entity]:
        return self._index.get(name.lower())

    def get(self, entity_id: str) -> Entity:
        return self._by_id[entity_id]

    def find_alias(self, alias: str, arity: Optional[int] = None) -> Optional[Entity]:
        ent = self._index.get(alias.lower())
        if ent is None or ent.name.alias is None or ent.name.alias.lower() != alias.lower():
            return None
        if arity is not None and ent.effective_arity != arity:
            return None
        return ent

    def duplicate_names(self) -> list[tuple[Entity, str, Entity]]:
        """(entity, clashing name, earlier entity) for every name collision."""
        seen: dict[str, Entity] = {}
        clashes = []
        for ent in self.entities:
            for name in (ent.name.canonical, ent.name.alias):
                if name is None:
                    continue
                prior = seen.get(name.lower())
                if prior is not None and prior is not ent:
                    clashes.append((ent, name, prior))
                else:
                    seen[name.lower()] = ent
        return clashes


def lookup(o: Ontology, name: str) -> Optional[Entity]:
    return o.lookup(name)


# ---------------------------------------------------------------------------
# condition keys

def normalize_text(text: str) -> str:
    return " ".join(text.split()).lower()


def condition_key(c: Condition) -> str:
    """Canonical text for (kind, payload); modality, refs and gloss are ignored."""
    return payload_key(c.kind, c.payload)


def payload_key(kind: Kind, p: Payload) -> str:
    k = kind.value
    if isinstance(p, IsA):
        parts = [k, p.target.key]
        if p.differentia is not None:
            parts.append(normalize_text(p.differentia))
        if p.diff_predicate is not None:
            parts.append("as:" + p.diff_predicate.lower())
        return "|".join(parts)
    if isinstance(p, Existential):
        return "|".join([k, p.cardinality.value, p.relation.key, ",".join(t.key for t in p.targets)])
    if isinstance(p, Universal):
        tail = p.target.key if p.target is not None else "text:" + normalize_text(p.text or "")
        return "|".join([k, p.relation.key, tail])
    if isinstance(p, ConstantRestriction):
        return "|".join([k, p.relation.key, p.constant.lower()])
    if isinstance(p, (Incompatible, Inverse, ExternalDependency)):
        return f"{k}|{p.target.key}"
    if isinstance(p, Signature):
        return k + "|" + ";".join(spec.key() for spec in p.args)
    if isinstance(p, Criterion):
        tail = "rel:" + p.target.key if p.target is not None else "text:" + normalize_text(p.text or "")
        return f"{k}|{tail}"
    if isinstance(p, FreeForm):
        return "|".join([k, normalize_text(p.gloss), normalize_text(p.formula or "")])
    raise TypeError(f"unknown payload {p!r}")


def payload_refs(p: Payload) -> list[Ref]:
    """Every entity reference in a payload, in source order."""
    if isinstance(p, IsA):
        return [p.target]
    if isinstance(p, Existential):
        return [p.relation, *p.targets]
    if isinstance(p, Universal):
        return [p.relation] + ([p.target] if p.target is not None else [])
    if isinstance(p, ConstantRestriction):
        return [p.relation]
    if isinstance(p, (Incompatible, Inverse, ExternalDependency)):
        return [p.target]
    if isinstance(p, Criterion):
        return [p.target] if p.target is not None else []
    if isinstance(p, Signature):
        out: list[Ref] = []
        for spec in p.args:
            if isinstance(spec, One):
                out.append(spec.ref)
            elif isinstance(spec, (AnyOf, AllOf)):
                out.extend(spec.refs)
        return out
    return []
