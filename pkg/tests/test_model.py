import pytest

from ontospec.model import (
    AxiomRef, Condition, EntityName, FreeForm, IsA, Kind, Modality, Ref, Signature, Unrestricted,
    condition_key,
)


@pytest.mark.parametrize("text, parsed", [
    ("Ad2a'", AxiomRef("A", 2, "a", 1)),
    ("Dd31", AxiomRef("D", 31)),
    ("Td7bc''", AxiomRef("T", 7, "bc", 2)),
])
def test_axiom_ref_parse_and_str(text, parsed):
    assert AxiomRef.parse(text) == parsed
    assert str(parsed) == text


@pytest.mark.parametrize("text", ["Xd1", "Ad0", "Ad", "ad1", "Ad1A"])
def test_axiom_ref_rejects(text):
    assert AxiomRef.parse(text) is None


def test_alias_must_be_a_word():
    with pytest.raises(ValueError):
        EntityName("A", "two words")
    with pytest.raises(ValueError):
        EntityName("")


def test_payload_must_fit_kind():
    with pytest.raises(ValueError):
        Condition(Modality.EP, Kind.SL, FreeForm("x"))
    with pytest.raises(ValueError):
        Condition(Modality.EP, Kind.SLD, IsA(Ref("B")))


def test_condition_key_ignores_modality_refs_and_gloss():
    a = Condition(Modality.EP, Kind.NMC, FreeForm("Has  Parts"), (AxiomRef("A", 1),), "g1")
    b = Condition(Modality.CP, Kind.NMC, FreeForm("has parts"), (), "other")
    assert condition_key(a) == condition_key(b)


def test_condition_key_is_case_insensitive_on_refs():
    assert condition_key(Condition(Modality.EP, Kind.SL, IsA(Ref("Bird")))) == \
        condition_key(Condition(Modality.EP, Kind.SL, IsA(Ref("bird"))))


def test_sig_default_label():
    c = Condition(Modality.EP, Kind.SIG, Signature((Unrestricted(),)))
    assert c.label == "EP/SIG"
