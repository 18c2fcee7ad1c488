"""Parse, merge, resolve and validate a set of documents in one call."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .model import Diagnostic, Ontology
from .parser import merge, parse_document, resolve_references
from .validator import validate


@dataclass
class Loaded:
    ontology: Optional[Ontology]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.is_error]

    @property
    def ok(self) -> bool:
        return self.ontology is not None and not self.errors


def load_sources(sources: Iterable[tuple[str, str]], title: Optional[str] = None) -> Loaded:
    """Parse ``(text, file)`` pairs, merge them and resolve references.

    The ontology is None when any document fails to parse or merge.
    """
    diags: list[Diagnostic] = []
    docs = []
    failed = False
    for text, file in sources:
        r = parse_document(text, file)
        diags += r.diagnostics
        if r.ontology is None:
            failed = True
        else:
            docs.append(r.ontology)
    if failed:
        return Loaded(None, diags)
    merged, dup = merge(docs, title)
    diags += dup
    if dup:
        return Loaded(None, diags)
    resolved, rdiags = resolve_references(merged)
    return Loaded(resolved, diags + rdiags)


def load_paths(paths: Iterable[Path], title: Optional[str] = None) -> Loaded:
    """Like :func:`load_sources` for files; OSError propagates to the caller."""
    return load_sources(((Path(p).read_text(encoding="utf-8"), str(p)) for p in paths), title)


def check(loaded: Loaded) -> list[Diagnostic]:
    """All diagnostics of ``loaded`` plus the validator's, when resolution succeeded."""
    if loaded.ontology is None or loaded.errors:
        return list(loaded.diagnostics)
    return list(loaded.diagnostics) + validate(loaded.ontology)
