"""Deterministic pretty-printer producing ``.osp`` text."""

from __future__ import annotations

from ..model import (
    AllOf, AnyOf, Condition, ConstantRestriction, Criterion, Entity, EntityKind,
    Existential, ExternalDependency, FreeForm, Incompatible, Inverse, IsA, Kind,
    MetaStatuses, One, Ontology, Signature, TextSpec, Universal, Unrestricted,
)

INDENT = "  "

# (field, keyword or None for "name: value" items) in rendering order
META_ORDER = (
    ("rigidity", None),
    ("identity", None),
    ("supplies_identity", "supplies-identity"),
    ("unity", None),
    ("dependence", None),
    ("definedness", None),
    ("non_empty", "non-empty"),
    ("strongly_non_empty", "strongly-non-empty"),
    ("cumulativity", None),
    ("homeomericity", None),
    ("atomicity", None),
)
_VALUE_KEYWORDS = {
    "defined": "defined", "primitive": "primitive",
    "CM": "cumulative", "CM~": "anti-cumulative",
    "HOM": "homeomerous", "HOM~": "anti-homeomerous",
    "AT": "atomic-prop", "AT~": "anti-atomic-prop",
}
# meta item keyword -> rendering rank, used to order status_refs
ITEM_RANK = {k: i for i, k in enumerate([
    "rigidity", "identity", "supplies-identity", "unity", "dependence", "defined", "primitive",
    "non-empty", "strongly-non-empty", "cumulative", "anti-cumulative", "homeomerous",
    "anti-homeomerous", "atomic-prop", "anti-atomic-prop",
])}


def quote(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{out}"'


def _refs(refs) -> str:
    return ", ".join(str(r) for r in refs)


def _ref_tail(refs) -> str:
    return f" ref {_refs(refs)}" if refs else ""


def meta_lines(m: MetaStatuses) -> list[str]:
    lines = []
    for fld, kw in META_ORDER:
        value = getattr(m, fld)
        if value is None or value is False:
            continue
        if kw is not None:
            key = kw
            text = kw
        elif fld in ("rigidity", "identity", "unity", "dependence"):
            key = fld
            text = f"{fld}: {value}"
        else:
            key = _VALUE_KEYWORDS[value]
            text = key
        refs = [r for k, r in m.status_refs if k == key]
        lines.append(text + _ref_tail(refs) + ";")
    return lines


def render_argspec(spec) -> str:
    if isinstance(spec, Unrestricted):
        return "*"
    if isinstance(spec, One):
        return spec.ref.text
    if isinstance(spec, AnyOf):
        return "any(" + " | ".join(r.text for r in spec.refs) + ")"
    if isinstance(spec, AllOf):
        return "all(" + " & ".join(r.text for r in spec.refs) + ")"
    if isinstance(spec, TextSpec):
        return "text " + quote(spec.text)
    raise TypeError(spec)


def render_payload(kind: Kind, p) -> str:
    if isinstance(p, IsA):
        s = f"isa {p.target.text}"
        if p.differentia is not None:
            s += f" diff {quote(p.differentia)}"
            if p.diff_predicate is not None:
                s += f" as {p.diff_predicate}"
        return s
    if isinstance(p, Existential):
        return f"{p.cardinality.value} {p.relation.text} -> " + ", ".join(t.text for t in p.targets)
    if isinstance(p, Universal):
        tail = p.target.text if p.target is not None else "text " + quote(p.text)
        return f"only {p.relation.text} -> {tail}"
    if isinstance(p, ConstantRestriction):
        return f"const {p.relation.text} -> {p.constant}"
    if isinstance(p, Incompatible):
        return ("not " if kind is Kind.ICL else "notrel ") + p.target.text
    if isinstance(p, Inverse):
        return f"inverse {p.target.text}"
    if isinstance(p, ExternalDependency):
        return f"edc {p.target.text}"
    if isinstance(p, Criterion):
        kw = "unity" if kind is Kind.UC else "id"
        tail = p.target.text if p.target is not None else "text " + quote(p.text)
        return f"{kw} {tail}"
    if isinstance(p, Signature):
        return "sig(" + ", ".join(render_argspec(a) for a in p.args) + ")"
    if isinstance(p, FreeForm):
        s = "text " + quote(p.gloss)
        if p.formula is not None:
            s += " formula " + quote(p.formula)
        return s
    raise TypeError(p)


def render_condition(c: Condition) -> str:
    head = f"{_refs(c.axiom_refs)}; " if c.axiom_refs else ""
    s = f"[{head}{c.label}] {render_payload(c.kind, c.payload)}"
    if c.gloss is not None:
        s += " gloss " + quote(c.gloss)
    return s + ";"


def render_entity(e: Entity) -> list[str]:
    if e.kind is EntityKind.RELATION or (e.kind is EntityKind.METARELATION and e.arity is not None):
        head = f"{e.kind.value}/{e.arity} {e.name.canonical}"
    else:
        head = f"{e.kind.value} {e.name.canonical}"
    if e.name.alias is not None:
        head += f" alias {e.name.alias}"
    lines = [head + " {"]
    meta = meta_lines(e.meta)
    for pd in e.partitions:
        meta.append("partition(" + ", ".join(m.text for m in pd.members) + ")" + _ref_tail(pd.axiom_refs) + ";")
    for link in e.meta_links:
        meta.append(f"dep {link.kind} -> {link.target.text}" + _ref_tail(link.axiom_refs) + ";")
    if meta:
        lines.append(INDENT + "meta {")
        lines += [INDENT * 2 + m for m in meta]
        lines.append(INDENT + "}")
    if e.conditions:
        lines.append(INDENT + "props {")
        lines += [INDENT * 2 + render_condition(c) for c in e.conditions]
        lines.append(INDENT + "}")
    if e.comments:
        lines.append(INDENT + "comment {")
        for item in e.comments:
            src = f" {quote(item.source)}" if item.source is not None else ""
            lines.append(f"{INDENT * 2}{item.tag}{src} {quote(item.text)};")
        lines.append(INDENT + "}")
    lines.append("}")
    return lines


def render(o: Ontology) -> str:
    """Pretty-print ``o`` in document order; output re-parses to an equal model."""
    lines = [f"ontology {quote(o.title)}"]
    for e in o.entities:
        lines.append("")
        lines += render_entity(e)
    return "\n".join(lines) + "\n"
