from pathlib import Path

import pytest

from ontospec.corpus import load_corpus, load_corpus_checked
from ontospec.parser import parse_document
from ontospec.pipeline import load_sources

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_loaded():
    return load_corpus_checked()


@pytest.fixture(scope="session")
def golden():
    loaded = load_sources([((DATA / "golden.osp").read_text(), "golden.osp")])
    assert loaded.ok, loaded.errors
    return loaded.ontology


def parse_ok(text: str, file: str = "t.osp"):
    r = parse_document(text, file)
    assert r.ontology is not None, [d.format_text() for d in r.diagnostics]
    return r.ontology


def resolve_ok(text: str, file: str = "t.osp"):
    loaded = load_sources([(text, file)])
    assert loaded.ok, [d.format_text() for d in loaded.diagnostics]
    return loaded.ontology


def codes(diags):
    return [d.code for d in diags]
