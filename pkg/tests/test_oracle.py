"""Finite-model oracle: each emitted formula holds exactly when its extensional reading does.

Every interpretation of the involved predicates over domains of size 1 to 3 is checked.
"""

import pytest

from ontospec.logic import PredicateNamer, expand_condition

from conftest import resolve_ok
from fmodel import holds, interpretations

DOC = """ontology "O"
concept Host alias h { props { %s } }
concept Target alias t { }
concept Other alias u { }
relation/2 rel alias r { props { %s } }
relation/2 back alias b { }
"""

DOMAINS = [tuple(range(n)) for n in (1, 2, 3)]


def _formula(concept_prop="", relation_prop=""):
    o = resolve_ok(DOC % (concept_prop, relation_prop))
    host = o.lookup("Host" if concept_prop else "rel")
    return expand_condition(host, host.conditions[0], o)


def _image(r, a):
    return {b for (x, b) in r if x == a}


CASES = {
    "SL": (
        ("[EP/SL] isa Target;", ""), {"h": 1, "t": 1},
        lambda d, i: i["h"] <= i["t"]),
    "ER-some": (
        ("[EP/ER] some rel -> Target;", ""), {"h": 1, "t": 1, "r": 2},
        lambda d, i: all(_image(i["r"], a) & {y for (y,) in i["t"]} for (a,) in i["h"])),
    "ER-exactly-one": (
        ("[EP/ER] exactly-one rel -> Target;", ""), {"h": 1, "t": 1, "r": 2},
        lambda d, i: all(len(_image(i["r"], a) & {y for (y,) in i["t"]}) == 1 for (a,) in i["h"])),
    "VR": (
        ("[EP/VR] only rel -> Target;", ""), {"h": 1, "t": 1, "r": 2},
        lambda d, i: all(_image(i["r"], a) <= {y for (y,) in i["t"]} for (a,) in i["h"])),
    "ICL": (
        ("[EP/ICL] not Target;", ""), {"h": 1, "t": 1},
        lambda d, i: not (i["h"] & i["t"])),
    "IVL": (
        ("", "[EP/IVL] inverse back;"), {"r": 2, "b": 2},
        lambda d, i: i["r"] == {(y, x) for (x, y) in i["b"]}),
    "SIG": (
        ("", "[EP/SIG] sig (any(Target | Other), Target);"), {"r": 2, "t": 1, "u": 1},
        lambda d, i: all((a,) in i["t"] | i["u"] and (c,) in i["t"] for (a, c) in i["r"])),
    "NSIC": (
        ("[EP/NSIC] id rel;", ""), {"h": 1, "r": 2},
        lambda d, i: all(((a, c) in i["r"]) == (a == c) for (a,) in i["h"] for (c,) in i["h"])),
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_formula_matches_extension(name):
    props, signature, statement = CASES[name]
    f = _formula(*props)
    checked = agree = 0
    for d in DOMAINS:
        for interp in interpretations(d, signature):
            checked += 1
            agree += holds(f, d, interp) == statement(d, interp)
    assert agree == checked


def test_oracle_discriminates():
    # the reversed inclusion must disagree somewhere, else the evaluator is vacuous
    f = _formula("[EP/SL] isa Target;")
    d = DOMAINS[1]
    assert any(holds(f, d, i) != (i["t"] <= i["h"]) for i in interpretations(d, {"h": 1, "t": 1}))


def test_vr_worked_example(corpus):
    # Ad2a' on a three-element model
    pd = corpus.lookup("Perdurant")
    vr = next(c for c in pd.conditions if c.kind.value == "VR" and "Ad2a'" in map(str, c.axiom_refs))
    f = expand_condition(pd, vr, corpus)
    rel = PredicateNamer(corpus)(corpus.lookup("has-for-part").id)
    d = ("e1", "e2", "n")
    interp = {"pd": {("e1",), ("e2",)}, rel: {("e1", "e2")}}
    assert holds(f, d, interp)
    interp[rel] = {("e1", "e2"), ("e1", "n")}
    assert not holds(f, d, interp)
