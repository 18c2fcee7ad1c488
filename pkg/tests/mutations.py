"""Single-edit corpus mutations, one per validator code V01-V17 (test-only)."""

from __future__ import annotations

from dataclasses import replace

from ontospec.corpus import FILES, corpus_dir
from ontospec.model import Condition, IsA, Kind, Modality, Ontology, Ref
from ontospec.pipeline import load_sources
from ontospec.validator import validate

C = "concepts.osp"
B = "binary-relations.osp"
EXTRA = "mutation.osp"

# code -> (file, old, new); file EXTRA appends a new document instead
MUTATIONS = {
    "V01": (EXTRA, None, 'concept Loop { props { [EP/SL] isa Loop; } }'),
    "V03": (EXTRA, None, 'concept Odd { props { [EP/SL] isa Event; [EP/ICL] not Perdurant; } }'),
    "V04": (C, "partition(Accomplishment, Achievement);", "partition(Accomplishment, Event);"),
    "V05": (EXTRA, None, 'concept Mixed { props { [EP/SL] isa AbstractRegion; [EP/SL] isa PhysicalRegion; } }'),
    "V06": (EXTRA, None, 'concept Bounded { meta { unity: +U; } props { [EP/SL] isa SpaceRegion; } }'),
    "V07": (C, "concept Event alias EV {\n  meta {\n    rigidity: +R;",
            "concept Event alias EV {\n  meta {\n    rigidity: ~R;"),
    "V08": (C, "concept AbstractRegion alias AR {\n  meta {\n    rigidity: +R;\n    identity: +I;",
            "concept AbstractRegion alias AR {\n  meta {\n    rigidity: +R;\n    identity: -I;"),
    "V09": (EXTRA, None, 'concept Idea { meta { dependence: -D; } props { [EP/SL] isa MentalObject; } }'),
    "V10": (EXTRA, None, 'concept Kindless { meta { rigidity: -R; supplies-identity; } }'),
    "V11": (EXTRA, None, 'concept Declared { meta { defined; } props { [EP/SL] isa Particular; } }'),
    "V12": (B, "[EP/IVL] inverse has-for-part gloss", "[EP/IVL] inverse has-for-proper-part gloss"),
    "V13": (B, "[EP/DDR & DRR] sig (any(Abstract | Perdurant), any(Abstract | Perdurant)) gloss "
               '"An ABSTRACT or a PERDURANT has for part',
            "[EP/DDR & RR] sig (any(Abstract | Perdurant), Perdurant) gloss "
            '"An ABSTRACT or a PERDURANT has for part'),
    "V14": (EXTRA, None, 'concept Heap { meta { cumulative; } props { [EP/SL] isa AmountOfMatter; } }'),
    "V15": (EXTRA, None, 'concept Patch { meta { rigidity: +R; supplies-identity; } '
                         'props { [EP/SL] isa SpaceRegion; } }'),
    "V16": (EXTRA, None, 'concept Echo { props { [Ad1; EP/SL] isa Particular; } }'),
    "V17": (C, '[EP/NSIC] id text "Two REGIONS are the same iff they have the same parts.";',
            '[EP/NSIC] id text "Two REGIONS are the same iff they have the same parts.";\n'
            '    [EP/NSIC] id text "Two REGIONS are the same iff they coincide.";'),
}


def corpus_sources() -> list[tuple[str, str]]:
    d = corpus_dir()
    return [((d / f).read_text(encoding="utf-8"), f) for f in FILES]


def mutated_sources(code: str) -> list[tuple[str, str]]:
    file, old, new = MUTATIONS[code]
    sources = corpus_sources()
    if file == EXTRA:
        return sources + [(f'ontology "mutation"\n{new}\n', EXTRA)]
    out = []
    for text, name in sources:
        if name == file:
            assert text.count(old) == 1, f"{code}: mutation anchor not unique in {file}"
            text = text.replace(old, new)
        out.append((text, name))
    return out


def _v02(o: Ontology) -> Ontology:
    # after resolution, Event gains an SL bound to a binary relation
    rel = o.lookup("is-a-part-of")
    event = o.lookup("Event")
    extra = Condition(Modality.EP, Kind.SL, IsA(Ref(rel.id, None, rel.id)))
    mutated = replace(event, conditions=event.conditions + (extra,))
    return Ontology(o.title, tuple(mutated if e is event else e for e in o.entities))


def mutated_diagnostics(code: str):
    """Diagnostics of the corpus with the ``code`` mutation applied (parse to validate)."""
    if code == "V02":
        loaded = load_sources(corpus_sources())
        return validate(_v02(loaded.ontology))
    loaded = load_sources(mutated_sources(code))
    assert loaded.ontology is not None, [d.format_text() for d in loaded.diagnostics]
    return loaded.diagnostics + validate(loaded.ontology)


ALL_CODES = [f"V{i:02d}" for i in range(1, 18)]
