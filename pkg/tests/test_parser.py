import pytest

from ontospec.model import (
    AnyOf, AxiomRef, Cardinality, EntityKind, Existential, IsA, Kind, Modality, One, Signature,
    Unrestricted, Universal,
)
from ontospec.parser import parse_document, tokenize

from conftest import codes, parse_ok


def _diags(text):
    return parse_document(text, "t.osp").diagnostics


def test_minimal_document():
    o = parse_ok('ontology "T" concept A { props { [EP/SL] isa B; } }')
    (a,) = o.entities
    (c,) = a.conditions
    assert (c.modality, c.kind) == (Modality.EP, Kind.SL)
    assert c.payload.target.text == "B" and c.payload.target.target is None


def test_value_restriction_with_primed_ref():
    o = parse_ok('ontology "T" concept Perdurant { props { '
                 "[Ad2a'; EP/VR] only has-for-part -> Perdurant; } }")
    c = o.entities[0].conditions[0]
    assert c.axiom_refs == (AxiomRef("A", 2, "a", 1),)
    assert c.kind is Kind.VR
    assert isinstance(c.payload, Universal)
    assert (c.payload.relation.text, c.payload.target.text) == ("has-for-part", "Perdurant")


def test_payload_shapes():
    o = parse_ok('''ontology "T"
    concept A { props {
      [EP/ER] exactly-one r -> B, C;
      [EP/SLD] isa B diff "round" as Round;
    } }
    relation/3 r { props { [EP/SIG] sig (any(A | B), *, C); } }''')
    er, sld = o.lookup("A").conditions
    assert isinstance(er.payload, Existential)
    assert er.payload.cardinality is Cardinality.EXACTLY_ONE and len(er.payload.targets) == 2
    assert sld.payload == IsA(sld.payload.target, "round", "Round")
    r = o.lookup("r")
    assert r.kind is EntityKind.RELATION and r.arity == 3
    sig = r.conditions[0].payload
    assert isinstance(sig, Signature)
    assert isinstance(sig.args[0], AnyOf) and isinstance(sig.args[1], Unrestricted)
    assert isinstance(sig.args[2], One)


def test_meta_block():
    o = parse_ok('''ontology "T" concept A { meta {
      rigidity: ~R; identity: +I; unity: -U; dependence: +D ref Dd9;
      supplies-identity; non-empty; anti-cumulative;
      partition(B, C) ref Dd13;
      dep SD -> B ref Dd70;
    } }''')
    m = o.entities[0].meta
    assert (m.rigidity, m.identity, m.unity, m.dependence) == ("~R", "+I", "-U", "+D")
    assert m.supplies_identity and m.non_empty and m.cumulativity == "CM~"
    assert m.status_refs == (("dependence", AxiomRef("D", 9)),)
    assert [r.text for r in o.entities[0].partitions[0].members] == ["B", "C"]
    assert o.entities[0].meta_links[0].kind == "SD"


def test_comments_preserved_verbatim():
    o = parse_ok('ontology "T" concept A { comment { CIT "D18, p. 10" "quoted \\"text\\""; EX "e"; } }')
    cit, ex = o.entities[0].comments
    assert (cit.tag, cit.source, cit.text) == ("CIT", "D18, p. 10", 'quoted "text"')
    assert ex.tag == "EX"


@pytest.mark.parametrize("text, code", [
    ('ontology "T" concept A { props { [EP/SL] isa B $; } }', "P01"),
    ('ontology "T unterminated', "P01"),
    ('ontology "T" concept A { props { [EP/SL] B; } }', "P02"),
    ('ontology "T" concept A { props { [EP/XYZ] isa B; } }', "P03"),
    ('ontology "T" concept A { props { [EP/SIG] sig (*, B); } }', "P03"),
    ('ontology "T" concept A { comment { FOO "x"; } }', "P04"),
    ('ontology "T" concept A { props { [Xd1; EP/SL] isa B; } }', "P05"),
    ('ontology "T" concept A { } concept a { }', "P06"),
    ('ontology "T" concept A alias X { } concept B alias x { }', "P06"),
])
def test_error_codes(text, code):
    r = parse_document(text, "t.osp")
    assert r.ontology is None
    assert codes(r.diagnostics) == [code]


def test_unknown_kind_reported_at_label():
    (d,) = _diags('ontology "T" concept A { props { [EP/XYZ] isa B; } }')
    assert (d.span.start_line, d.span.start_col) == (1, 34)


@pytest.mark.parametrize("text, fragment", [
    ('ontology "T" relation/2 r { props { [EP/MIL] inverse s; } } relation/2 s { }', "MIL"),
    ('ontology "T" concept A { props { [EP/NC] text "t"; } }', "NC"),
    ('ontology "T" concept A { props { [PE/SL] isa B; } }', "PE"),
    ('ontology "T" relation/2 r { props { [EP/DR1 & DR2] sig (A, B); } }', "DR1"),
])
def test_corpus_typo_aliases_warn(text, fragment):
    r = parse_document(text, "t.osp")
    assert r.ontology is not None
    (d,) = r.diagnostics
    assert d.code == "P07" and fragment in d.message


def test_recovery_reports_several_errors():
    r = parse_document('ontology "T" concept A { props { [EP/XYZ] isa B; [EP/SL] B; [EP/SL] isa C; } '
                       'comment { FOO "x"; } } concept D { props { [EP/SL] isa A; } }', "t.osp")
    assert codes(r.diagnostics) == ["P03", "P02", "P04"]
    assert r.ontology is None


def test_spans_inside_document():
    text = 'ontology "T"\nconcept A {\n  props { [EP/XYZ] isa B; [Qd1; EP/SL] isa B; }\n}\nconcept'
    lines = text.split("\n")
    for d in _diags(text):
        assert 1 <= d.span.start_line <= len(lines)
        assert 1 <= d.span.start_col <= len(lines[d.span.start_line - 1]) + 1


def test_tokenize_comments_and_strings():
    toks, diags = tokenize('# note\nontology "a\\"b" ', "t.osp")
    assert not diags
    assert [t.value for t in toks[:2]] == ["ontology", 'a"b']


def test_optional_arity_for_metarelations():
    o = parse_ok('ontology "T" metarelation M { } metarelation/3 N { }')
    assert o.lookup("M").effective_arity == 2 and o.lookup("N").effective_arity == 3


def test_relation_needs_arity():
    assert codes(_diags('ontology "T" relation r { }')) == ["P02"]
