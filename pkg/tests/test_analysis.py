import pytest

from ontospec.analysis import (
    AnalysisError, Via, ancestors, build_graph, carried_closure, derive_definedness,
    effective_signature, supplies,
)
from ontospec.model import AnyOf, One, Ontology, Unrestricted

from conftest import resolve_ok


@pytest.fixture(scope="module")
def graph(corpus):
    return build_graph(corpus)


def test_corpus_edges(graph):
    pairs = {(e.child, e.parent, e.kind.value) for e in graph.edges}
    assert ("Achievement", "Event", "SLD") in pairs
    assert ("Event", "Perdurant", "SL") in pairs
    assert graph.parents["Particular"] == []


def test_empty_graph():
    g = build_graph(Ontology("E"))
    assert g.nodes == [] and g.edges == []


def test_duplicate_edge_collapses_with_note():
    o = resolve_ok('ontology "T" concept B { } concept A { props { [EP/SL] isa B; [Ad1; EP/SL] isa b; } }')
    g = build_graph(o)
    assert len(g.edges) == 1
    assert [d.code for d in g.diagnostics] == ["A02"]


@pytest.mark.parametrize("entity, expected", [
    ("Achievement", ["Event", "Perdurant", "Particular"]),
    ("Particular", []),
    ("SpaceRegion", ["PhysicalRegion", "Region", "Abstract", "Particular"]),
])
def test_ancestors(graph, entity, expected):
    assert ancestors(graph, entity) == expected


def test_ancestors_monotone(corpus, graph):
    for e in graph.edges:
        assert set(ancestors(graph, e.child)) >= set(ancestors(graph, e.parent)) | {e.parent}


def test_cycle_is_a01():
    o = resolve_ok('ontology "T" concept A { props { [EP/SL] isa B; } } concept B { props { [EP/SL] isa A; } }')
    with pytest.raises(AnalysisError) as exc:
        ancestors(build_graph(o), "A")
    assert exc.value.code == "A01"


def test_status_inherits_down(corpus, graph):
    closure = carried_closure(corpus, graph)
    origins = {(x.origin, x.via) for x in closure.of("MentalObject") if x.key == "+D"}
    assert ("NonPhysicalEndurant", Via.DOWN) in origins


def test_smc_inherits_up():
    o = resolve_ok('ontology "T" concept P { } concept C { props { [EP/SL] isa P; [EP/SMC] text "s"; } }')
    closure = carried_closure(o, build_graph(o))
    (up,) = [x for x in closure.of("P") if x.via is Via.UP]
    assert up.origin == "C"


def test_isolated_entity_carries_own_only():
    o = resolve_ok('ontology "T" concept A { props { [EP/NMC] text "a"; } }')
    closure = carried_closure(o, build_graph(o))
    assert [x.via for x in closure.of("A")] == [Via.OWN]


def test_supply_examples(corpus, graph):
    closure = carried_closure(corpus, graph)
    assert supplies(corpus, graph, "Region", "+I", closure)
    assert not supplies(corpus, graph, "AbstractRegion", "+I", closure)
    with pytest.raises(AnalysisError) as exc:
        supplies(corpus, graph, "Particular", "+I", closure)
    assert exc.value.code == "S01"


def test_root_supplies_own_keys():
    o = resolve_ok('ontology "T" concept A { props { [EP/NMC] text "a"; } }')
    g = build_graph(o)
    (key,) = carried_closure(o, g).keys("A")
    assert supplies(o, g, "A", key)


def test_smc_supply_and_nsmc_differentia():
    o = resolve_ok('''ontology "T"
    concept G { }
    concept A { props { [EP/SLD] isa G diff "red"; [EP/NMC] text "red"; } }''')
    g = build_graph(o)
    closure = carried_closure(o, g)
    sld_key = [x.key for x in closure.of("A") if x.kind and x.kind.value == "SLD"][0]
    assert supplies(o, g, "A", sld_key, closure)


def test_no_strict_ancestor_pairs_supply_same_key(corpus, graph):
    closure = carried_closure(corpus, graph)
    for e in corpus.entities:
        for key in closure.keys(e.id):
            kind = next(x.kind for x in closure.of(e.id) if x.key == key)
            if kind is not None and kind.value in ("SMC", "NSMC", "SLD", "IVL"):
                continue
            if supplies(corpus, graph, e.id, key, closure):
                for a in ancestors(graph, e.id):
                    assert not (closure.carries(a, key) and supplies(corpus, graph, a, key, closure))


def test_definedness_invariant_under_reordering(corpus):
    from dataclasses import replace
    for e in corpus.entities:
        flipped = replace(e, conditions=tuple(reversed(e.conditions)))
        assert derive_definedness(flipped) == derive_definedness(e)


def test_effective_signatures(corpus, graph):
    p = effective_signature(corpus, graph, corpus.lookup("is-a-part-of").id)
    assert all(isinstance(s, AnyOf) for s in p)
    assert [{r.target for r in s.refs} for s in p] == [{"Abstract", "Perdurant"}] * 2
    pc = effective_signature(corpus, graph, corpus.lookup("participates-in-during").id)
    assert [s.ref.target for s in pc] == ["Endurant", "Perdurant", "TimeInterval"]
    assert all(isinstance(s, One) for s in pc)


def test_signature_defaults_and_inheritance():
    o = resolve_ok('''ontology "T"
    concept A { } concept B { }
    relation/2 top { props { [EP/SIG] sig (A, *); } }
    relation/2 sub { props { [EP/SL] isa top; [EP/SIG] sig (B, *); } }
    relation/2 bare { }''')
    g = build_graph(o)
    assert effective_signature(o, g, "bare") == [Unrestricted(), Unrestricted()]
    first, second = effective_signature(o, g, "sub")
    assert {r.target for r in first.refs} == {"A", "B"} and second == Unrestricted()
