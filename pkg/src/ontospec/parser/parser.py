"""Recursive-descent parser for ``.osp`` documents.

Errors are collected rather than raised; after each error the parser
skips to the next ``;`` (consumed) or ``}`` (left for the enclosing block)
so that one run reports as many problems as possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Optional

from ..model import (
    COMMENT_TAGS, META_LINK_KINDS, AllOf, AnyOf, AxiomRef, Cardinality, CommentItem,
    Condition, ConstantRestriction, Criterion, Diagnostic, Entity, EntityKind, EntityName,
    Existential, ExternalDependency, FreeForm, Incompatible, Inverse, IsA, Kind, MetaLink,
    MetaStatuses, Modality, One, Ontology, PartitionDecl, Ref, Severity, Signature,
    SourceSpan, TextSpec, Universal, Unrestricted, kind_allowed, payload_matches,
)
from .render import ITEM_RANK
from .lexer import EOF, INT, PUNCT, STRING, WORD, Token, tokenize

ENTITY_KEYWORDS = {
    "concept": EntityKind.CONCEPT,
    "relation": EntityKind.RELATION,
    "metaconcept": EntityKind.METACONCEPT,
    "metarelation": EntityKind.METARELATION,
}

# Label spellings accepted with a P07 warning.
KIND_ALIASES = {"MIL": Kind.IVL, "NC": Kind.NMC}
MODALITY_ALIASES = {"PE": Modality.EP}
_SIG_COMPONENT = re.compile(r"^(DR|DDR|CDR|RR|DRR|CRR|SIG|VR[1-9][0-9]*)$")
_SIG_ALIAS_COMPONENT = re.compile(r"^(D?R)[1-9][0-9]*$")

# flag-like meta items: keyword -> (field, value)
_FLAG_ITEMS = {
    "supplies-identity": ("supplies_identity", True),
    "defined": ("definedness", "defined"),
    "primitive": ("definedness", "primitive"),
    "non-empty": ("non_empty", True),
    "strongly-non-empty": ("strongly_non_empty", True),
    "cumulative": ("cumulativity", "CM"),
    "anti-cumulative": ("cumulativity", "CM~"),
    "homeomerous": ("homeomericity", "HOM"),
    "anti-homeomerous": ("homeomericity", "HOM~"),
    "atomic-prop": ("atomicity", "AT"),
    "anti-atomic-prop": ("atomicity", "AT~"),
}
_STATUS_ITEMS = {
    "rigidity": ("rigidity", "R", "+-~"),
    "identity": ("identity", "I", "+-"),
    "unity": ("unity", "U", "+-~"),
    "dependence": ("dependence", "D", "+-"),
}


@dataclass
class ParseResult:
    ontology: Optional[Ontology]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.ontology is not None


class _Abort(Exception):
    def __init__(self, diag: Diagnostic):
        super().__init__(diag.message)
        self.diag = diag


class _Parser:
    def __init__(self, tokens: list[Token], file: str):
        self.toks = tokens
        self.pos = 0
        self.file = file
        self.diags: list[Diagnostic] = []
        self.entity: Optional[str] = None

    # -- token helpers -----------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        if t.type != EOF:
            self.pos += 1
        return t

    def fail(self, msg: str, tok: Optional[Token] = None, code: str = "P02") -> _Abort:
        t = tok or self.tok
        return _Abort(Diagnostic(Severity.ERROR, code, msg, self.entity, t.span))

    def warn(self, code: str, msg: str, span: SourceSpan) -> None:
        self.diags.append(Diagnostic(Severity.WARNING, code, msg, self.entity, span))

    def describe(self, t: Token) -> str:
        if t.type == EOF:
            return "end of input"
        if t.type == STRING:
            return "string"
        return repr(t.value)

    def expect_punct(self, value: str) -> Token:
        if not self.tok.is_punct(value):
            raise self.fail(f"expected {value!r}, found {self.describe(self.tok)}")
        return self.advance()

    def accept_punct(self, value: str) -> bool:
        if self.tok.is_punct(value):
            self.advance()
            return True
        return False

    def expect_keyword(self, value: str) -> Token:
        if not self.tok.is_word(value):
            raise self.fail(f"expected {value!r}, found {self.describe(self.tok)}")
        return self.advance()

    def accept_keyword(self, value: str) -> bool:
        if self.tok.is_word(value):
            self.advance()
            return True
        return False

    def expect_ident(self) -> Token:
        if self.tok.type != WORD or "'" in self.tok.value:
            raise self.fail(f"expected identifier, found {self.describe(self.tok)}")
        return self.advance()

    def expect_ref(self) -> Ref:
        t = self.expect_ident()
        return Ref(t.value, t.span)

    def expect_string(self) -> str:
        if self.tok.type != STRING:
            raise self.fail(f"expected string, found {self.describe(self.tok)}")
        return self.advance().value

    def span_from(self, start: Token) -> SourceSpan:
        end = self.toks[self.pos - 1] if self.pos > 0 else start
        return SourceSpan(self.file, start.span.start_line, start.span.start_col,
                          end.span.end_line, end.span.end_col)

    def sync(self, start: int) -> None:
        """Skip to the next ``;`` (consumed) or ``}`` (kept); always advance."""
        while self.tok.type != EOF:
            if self.tok.is_punct(";"):
                self.advance()
                break
            if self.tok.is_punct("}"):
                if self.pos == start:
                    self.advance()
                break
            self.advance()
        if self.pos == start and self.tok.type != EOF:
            self.advance()

    def axiom_ref(self) -> AxiomRef:
        t = self.tok
        if t.type not in (WORD, INT):
            raise self.fail(f"expected axiom reference, found {self.describe(t)}")
        self.advance()
        ref = AxiomRef.parse(t.value)
        if ref is None:
            raise self.fail(f"malformed axiom reference {t.value!r}", t, code="P05")
        return ref

    # -- document ----------------------------------------------------------
    def document(self) -> Optional[Ontology]:
        title = ""
        try:
            self.expect_keyword("ontology")
            title = self.expect_string()
        except _Abort as exc:
            self.diags.append(exc.diag)
        entities: list[Entity] = []
        while self.tok.type != EOF:
            if not (self.tok.type == WORD and self.tok.value in ENTITY_KEYWORDS):
                self.diags.append(self.fail(f"expected entity declaration, found {self.describe(self.tok)}").diag)
                self.skip_to_entity()
                continue
            start = self.pos
            try:
                entities.append(self.entity_decl())
            except _Abort as exc:
                self.diags.append(exc.diag)
                if self.pos == start:
                    self.advance()
                self.skip_to_entity()
            self.entity = None
        return Ontology(title, tuple(entities))

    def skip_to_entity(self) -> None:
        depth = 0
        while self.tok.type != EOF:
            t = self.tok
            if depth == 0 and t.type == WORD and t.value in ENTITY_KEYWORDS:
                return
            if t.is_punct("{"):
                depth += 1
            elif t.is_punct("}"):
                depth = max(0, depth - 1)
            self.advance()

    def entity_decl(self) -> Entity:
        start = self.tok
        kind = ENTITY_KEYWORDS[self.advance().value]
        arity: Optional[int] = None
        if kind in (EntityKind.RELATION, EntityKind.METARELATION):
            if kind is EntityKind.RELATION or self.tok.is_punct("/"):
                self.expect_punct("/")
                if self.tok.type != INT:
                    raise self.fail(f"expected arity, found {self.describe(self.tok)}")
                arity = int(self.advance().value)
                if arity < 2:
                    raise self.fail("relation arity must be at least 2", self.toks[self.pos - 1])
        name_tok = self.expect_ident()
        self.entity = name_tok.value
        alias = None
        if self.accept_keyword("alias"):
            alias = self.expect_ident().value
        self.expect_punct("{")
        meta = MetaStatuses()
        links: list[MetaLink] = []
        partitions: list[PartitionDecl] = []
        conditions: list[Condition] = []
        comments: list[CommentItem] = []
        seen_meta: set[str] = set()
        while not self.tok.is_punct("}"):
            if self.tok.type == EOF:
                raise self.fail("unexpected end of input inside entity")
            blk_start = self.pos
            try:
                if self.accept_keyword("meta"):
                    self.expect_punct("{")
                    meta = self.meta_block(meta, links, partitions, seen_meta, kind)
                elif self.accept_keyword("props"):
                    self.expect_punct("{")
                    self.props_block(conditions, kind)
                elif self.accept_keyword("comment"):
                    self.expect_punct("{")
                    self.comment_block(comments)
                else:
                    raise self.fail(f"expected 'meta', 'props' or 'comment', found {self.describe(self.tok)}")
            except _Abort as exc:
                self.diags.append(exc.diag)
                self.sync(blk_start)
        self.expect_punct("}")
        return Entity(
            name=EntityName(name_tok.value, alias),
            kind=kind,
            arity=arity,
            meta=meta,
            meta_links=tuple(links),
            partitions=tuple(partitions),
            conditions=tuple(conditions),
            comments=tuple(comments),
            span=self.span_from(start),
        )

    # -- blocks --------------------------------------------------------------
    def block_items(self, item) -> None:
        while not self.tok.is_punct("}"):
            if self.tok.type == EOF:
                raise self.fail("unexpected end of input inside block")
            start = self.pos
            try:
                item()
            except _Abort as exc:
                self.diags.append(exc.diag)
                self.sync(start)
        self.advance()

    def ref_tail(self) -> tuple[AxiomRef, ...]:
        if not self.accept_keyword("ref"):
            return ()
        refs = [self.axiom_ref()]
        while self.accept_punct(","):
            refs.append(self.axiom_ref())
        return tuple(refs)

    def meta_block(self, meta: MetaStatuses, links, partitions, seen: set[str],
                   host_kind: EntityKind) -> MetaStatuses:
        state = {"meta": meta}

        def item() -> None:
            t = self.tok
            word = t.value if t.type == WORD else None
            m = state["meta"]
            if word in _STATUS_ITEMS:
                self.advance()
                fld, letter, signs = _STATUS_ITEMS[word]
                self.expect_punct(":")
                sign = self.tok
                if sign.type != PUNCT or sign.value not in signs:
                    raise self.fail(f"expected one of {', '.join(s + letter for s in signs)}")
                self.advance()
                self.expect_keyword(letter)
                self.check_dup(word, seen, t)
                m = replace(m, **{fld: sign.value + letter})
                key = word
            elif word in _FLAG_ITEMS:
                self.advance()
                fld, value = _FLAG_ITEMS[word]
                self.check_dup(fld, seen, t)
                m = replace(m, **{fld: value})
                key = word
            elif word == "partition":
                self.advance()
                if not host_kind.concept_like:
                    raise self.fail("partitions are only allowed on concepts", t)
                self.expect_punct("(")
                members = [self.expect_ref()]
                while self.accept_punct(","):
                    members.append(self.expect_ref())
                self.expect_punct(")")
                if len(members) < 2:
                    raise self.fail("a partition needs at least two members", t)
                refs = self.ref_tail()
                partitions.append(PartitionDecl(tuple(members), refs, self.span_from(t)))
                self.accept_punct(";")
                return
            elif word == "dep":
                self.advance()
                k = self.expect_ident()
                if k.value not in META_LINK_KINDS:
                    raise self.fail(f"unknown dependence kind {k.value!r}", k)
                self.expect_punct("->")
                target = self.expect_ref()
                links.append(MetaLink(k.value, target, self.ref_tail()))
                self.accept_punct(";")
                return
            else:
                raise self.fail(f"unknown meta item {self.describe(t)}")
            refs = self.ref_tail()
            if refs:
                m = replace(m, status_refs=m.status_refs + tuple((key, r) for r in refs))
            state["meta"] = m
            self.accept_punct(";")

        self.block_items(item)
        m = state["meta"]
        ordered = tuple(sorted(m.status_refs, key=lambda kr: ITEM_RANK[kr[0]]))
        return replace(m, status_refs=ordered)

    def check_dup(self, key: str, seen: set[str], tok: Token) -> None:
        if key in seen:
            raise self.fail(f"meta item {tok.value!r} given twice", tok)
        seen.add(key)

    def comment_block(self, comments: list[CommentItem]) -> None:
        def item() -> None:
            t = self.tok
            if t.type != WORD:
                raise self.fail(f"expected comment tag, found {self.describe(t)}")
            if t.value not in COMMENT_TAGS:
                raise self.fail(f"unknown comment tag {t.value!r}", t, code="P04")
            self.advance()
            source = None
            if t.value == "CIT":
                source = self.expect_string()
            text = self.expect_string()
            self.expect_punct(";")
            comments.append(CommentItem(t.value, text, source))

        self.block_items(item)

    def props_block(self, conditions: list[Condition], host_kind: EntityKind) -> None:
        def item() -> None:
            conditions.append(self.prop(host_kind))

        self.block_items(item)

    # -- conditions ----------------------------------------------------------
    def prop(self, host_kind: EntityKind) -> Condition:
        start = self.expect_punct("[")
        inner: list[Token] = []
        while not self.tok.is_punct("]"):
            if self.tok.type == EOF or self.tok.is_punct("}"):
                raise self.fail("unterminated condition label", start)
            inner.append(self.advance())
        close = self.advance()
        refs, modality, kind, label = self.label(inner, start, close)
        if not kind_allowed(kind, host_kind):
            raise self.fail(f"condition kind {kind.value} is not allowed on a {host_kind.value}",
                            start, code="P03")
        kw = self.tok
        payload = self.payload()
        gloss = None
        if self.accept_keyword("gloss"):
            gloss = self.expect_string()
        self.expect_punct(";")
        if not payload_matches(kind, payload) or not _keyword_fits(kind, kw.value):
            raise self.fail(f"payload {kw.value!r} does not fit condition kind {kind.value}", kw)
        return Condition(modality, kind, payload, refs, gloss, label, self.span_from(start))

    def label(self, inner: list[Token], start: Token, close: Token):
        span = SourceSpan(self.file, start.span.start_line, start.span.start_col,
                          close.span.end_line, close.span.end_col)
        semis = [i for i, t in enumerate(inner) if t.is_punct(";")]
        refs: list[AxiomRef] = []
        body = inner
        if semis:
            head, body = inner[:semis[0]], inner[semis[0] + 1:]
            expect_ref = True
            for t in head:
                if expect_ref:
                    if t.type not in (WORD, INT):
                        raise self.fail(f"expected axiom reference, found {self.describe(t)}", t)
                    r = AxiomRef.parse(t.value)
                    if r is None:
                        raise self.fail(f"malformed axiom reference {t.value!r}", t, code="P05")
                    refs.append(r)
                elif not t.is_punct(","):
                    raise self.fail(f"expected ',' between axiom references, found {self.describe(t)}", t)
                expect_ref = not expect_ref
            if expect_ref:
                raise self.fail("dangling ',' in axiom references", start)
        if not body:
            raise self.fail("empty condition label", start, code="P03")
        modality = Modality.EP
        mod_text = None
        if len(body) >= 2 and body[1].is_punct("/"):
            mod_tok = body[0]
            mod_text = mod_tok.value
            if mod_text in ("EP", "CP"):
                modality = Modality(mod_text)
            elif mod_text in MODALITY_ALIASES:
                modality = MODALITY_ALIASES[mod_text]
                self.warn("P07", f"modality {mod_text!r} read as {modality.value}", span)
            else:
                raise self.fail(f"unknown modality {mod_text!r}", mod_tok, code="P03")
            body = body[2:]
        else:
            self.warn("P07", "condition label without modality read as EP", span)
        comps: list[str] = []
        expect_comp = True
        for t in body:
            if expect_comp:
                if t.type != WORD:
                    raise self.fail(f"bad condition label near {self.describe(t)}", t, code="P03")
                comps.append(t.value)
            elif not t.is_punct("&"):
                raise self.fail(f"bad condition label near {self.describe(t)}", t, code="P03")
            expect_comp = not expect_comp
        if expect_comp:
            raise self.fail("incomplete condition label", start, code="P03")
        kind = self.label_kind(comps, span)
        text = " & ".join(comps)
        label = f"{mod_text}/{text}" if mod_text is not None else text
        return tuple(refs), modality, kind, label

    def label_kind(self, comps: list[str], span: SourceSpan) -> Kind:
        if len(comps) == 1:
            c = comps[0]
            if c in Kind.__members__:
                return Kind(c)
            if c in KIND_ALIASES:
                kind = KIND_ALIASES[c]
                self.warn("P07", f"condition kind {c!r} read as {kind.value}", span)
                return kind
        if all(_SIG_COMPONENT.match(c) or _SIG_ALIAS_COMPONENT.match(c) for c in comps):
            odd = [c for c in comps if _SIG_ALIAS_COMPONENT.match(c)]
            if odd:
                self.warn("P07", f"signature components {', '.join(odd)} read as value restrictions", span)
            return Kind.SIG
        bad = next((c for c in comps if c not in Kind.__members__), comps[0])
        raise _Abort(Diagnostic(Severity.ERROR, "P03", f"unknown condition kind {bad!r}", self.entity, span))

    def target_or_text(self):
        if self.tok.is_word("text") and self.peek().type == STRING:
            self.advance()
            return None, self.expect_string()
        return self.expect_ref(), None

    def payload(self):
        t = self.tok
        if t.type != WORD:
            raise self.fail(f"expected condition payload, found {self.describe(t)}")
        kw = t.value
        self.advance()
        if kw == "isa":
            target = self.expect_ref()
            diff = pred = None
            if self.accept_keyword("diff"):
                diff = self.expect_string()
                if self.accept_keyword("as"):
                    pred = self.expect_ident().value
            return IsA(target, diff, pred)
        if kw in ("some", "exactly-one"):
            rel = self.expect_ref()
            self.expect_punct("->")
            targets = [self.expect_ref()]
            while self.accept_punct(","):
                targets.append(self.expect_ref())
            card = Cardinality.SOME if kw == "some" else Cardinality.EXACTLY_ONE
            return Existential(rel, tuple(targets), card)
        if kw == "only":
            rel = self.expect_ref()
            self.expect_punct("->")
            target, text = self.target_or_text()
            return Universal(rel, target, text)
        if kw == "const":
            rel = self.expect_ref()
            self.expect_punct("->")
            return ConstantRestriction(rel, self.expect_ident().value)
        if kw in ("not", "notrel"):
            return Incompatible(self.expect_ref())
        if kw == "inverse":
            return Inverse(self.expect_ref())
        if kw == "edc":
            return ExternalDependency(self.expect_ref())
        if kw in ("id", "unity"):
            target, text = self.target_or_text()
            return Criterion(target, text)
        if kw == "sig":
            self.expect_punct("(")
            args = [self.argspec()]
            while self.accept_punct(","):
                args.append(self.argspec())
            self.expect_punct(")")
            return Signature(tuple(args))
        if kw == "text":
            gloss = self.expect_string()
            formula = None
            if self.accept_keyword("formula"):
                formula = self.expect_string()
            return FreeForm(gloss, formula)
        raise self.fail(f"unknown payload keyword {kw!r}", t)

    def argspec(self):
        if self.accept_punct("*"):
            return Unrestricted()
        t = self.tok
        if t.is_word("text") and self.peek().type == STRING:
            self.advance()
            return TextSpec(self.expect_string())
        if t.type == WORD and t.value in ("any", "all") and self.peek().is_punct("("):
            self.advance()
            self.advance()
            sep = "|" if t.value == "any" else "&"
            refs = [self.expect_ref()]
            while self.accept_punct(sep):
                refs.append(self.expect_ref())
            self.expect_punct(")")
            return AnyOf(tuple(refs)) if t.value == "any" else AllOf(tuple(refs))
        return One(self.expect_ref())


_KEYWORDS_FOR_KIND = {
    Kind.SL: "isa", Kind.SLD: "isa", Kind.ER: ("some", "exactly-one"), Kind.VR: "only",
    Kind.EVR: "only", Kind.CR: "const", Kind.ICL: "not", Kind.IL: "notrel", Kind.SIG: "sig",
    Kind.IVL: "inverse", Kind.NSIC: "id", Kind.NIC: "id", Kind.SIC: "id", Kind.UC: "unity",
    Kind.EDC: "edc", Kind.NMC: "text", Kind.SMC: "text", Kind.NSMC: "text",
}


def _keyword_fits(kind: Kind, kw: str) -> bool:
    allowed = _KEYWORDS_FOR_KIND[kind]
    return kw == allowed if isinstance(allowed, str) else kw in allowed


def duplicate_diagnostics(o: Ontology) -> list[Diagnostic]:
    out = []
    for ent, name, prior in o.duplicate_names():
        where = f" (first declared at {prior.span})" if prior.span else ""
        out.append(Diagnostic(Severity.ERROR, "P06", f"duplicate entity name or alias {name!r}{where}",
                              ent.id, ent.span))
    return out


def parse_document(source: str, file: str = "<input>") -> ParseResult:
    """Parse one document into an unresolved ontology."""
    tokens, diags = tokenize(source, file)
    p = _Parser(tokens, file)
    o = p.document()
    diags = diags + p.diags
    if o is not None:
        diags += duplicate_diagnostics(o)
    if any(d.is_error for d in diags):
        return ParseResult(None, diags)
    return ParseResult(o, diags)


def merge(ontologies: list[Ontology], title: Optional[str] = None) -> tuple[Ontology, list[Diagnostic]]:
    """Concatenate documents into one ontology; name clashes are P06 errors."""
    if title is None:
        title = ontologies[0].title if ontologies else ""
    entities = tuple(e for o in ontologies for e in o.entities)
    merged = Ontology(title, entities)
    return merged, duplicate_diagnostics(merged)
