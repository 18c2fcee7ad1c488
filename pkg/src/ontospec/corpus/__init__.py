"""The DOLCE-OS corpus shipped with the package, its loader and statistics."""

from __future__ import annotations

import hashlib
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..model import Diagnostic, EntityKind, Ontology, Severity
from ..pipeline import Loaded, load_paths

ENV_VAR = "ONTOSPEC_CORPUS"
MANIFEST = "MANIFEST"
FILES = (
    "concepts.osp", "atom.osp", "binary-relations.osp",
    "ternary-relations.osp", "meta-concepts.osp", "meta-relations.osp",
)
TITLE = "DOLCE-OS"


class CorpusError(Exception):
    code = "C01"

    def __init__(self, message: str, diagnostics: Optional[list[Diagnostic]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []

    def diagnostic(self) -> Diagnostic:
        return Diagnostic(Severity.ERROR, self.code, str(self))


def corpus_dir() -> Path:
    """Directory holding the corpus files; ``$ONTOSPEC_CORPUS`` overrides."""
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "dolce-os"


def digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(directory: Path, files=FILES) -> Path:
    """(Re)generate the digest manifest for ``files`` in ``directory``."""
    lines = [f"{digest(directory / name)}  {name}" for name in files]
    out = directory / MANIFEST
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out


def read_manifest(directory: Path) -> list[tuple[str, str]]:
    path = directory / MANIFEST
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc.strerror or exc}") from exc
    entries = []
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2 or len(parts[0]) != 64:
            raise CorpusError(f"{path}:{n}: malformed manifest line")
        entries.append((parts[0], parts[1]))
    if not entries:
        raise CorpusError(f"{path}: empty manifest")
    return entries


def corpus_files(directory: Optional[Path] = None, verify: bool = True) -> list[Path]:
    """Corpus files in manifest order, digests checked unless ``verify`` is off."""
    directory = Path(directory) if directory is not None else corpus_dir()
    files = []
    for expected, name in read_manifest(directory):
        path = directory / name
        if not path.is_file():
            raise CorpusError(f"corpus file missing: {path}")
        if verify and digest(path) != expected:
            raise CorpusError(f"digest mismatch for {path}")
        files.append(path)
    return files


def load_corpus_checked(directory: Optional[Path] = None) -> Loaded:
    """Parsed and resolved corpus together with its parse/resolve diagnostics."""
    loaded = load_paths(corpus_files(directory), TITLE)
    if not loaded.ok:
        raise CorpusError("corpus does not parse and resolve cleanly", loaded.errors)
    return loaded


def load_corpus(directory: Optional[Path] = None) -> Ontology:
    return load_corpus_checked(directory).ontology


@dataclass
class CorpusStats:
    rigidConcepts: int = 0
    nonRigidConcepts: int = 0
    binaryRelations: int = 0
    ternaryRelations: int = 0
    metaConcepts: int = 0
    metaRelations: int = 0
    partitions: int = 0
    conditionsByKind: dict[str, int] = field(default_factory=dict)
    axiomRefsByFamily: dict[str, int] = field(default_factory=dict)

    def rows(self) -> list[tuple[str, int]]:
        out = [
            ("rigidConcepts", self.rigidConcepts),
            ("nonRigidConcepts", self.nonRigidConcepts),
            ("binaryRelations", self.binaryRelations),
            ("ternaryRelations", self.ternaryRelations),
            ("metaConcepts", self.metaConcepts),
            ("metaRelations", self.metaRelations),
            ("partitions", self.partitions),
        ]
        out += [(f"conditions.{k}", v) for k, v in self.conditionsByKind.items()]
        out += [(f"axiomRefs.{k}", v) for k, v in self.axiomRefsByFamily.items()]
        return out


def corpus_stats(o: Ontology) -> CorpusStats:
    s = CorpusStats()
    kinds: Counter = Counter()
    families: Counter = Counter()
    for e in o.entities:
        if e.kind is EntityKind.CONCEPT:
            if e.meta.rigidity == "+R":
                s.rigidConcepts += 1
            elif e.meta.rigidity in ("-R", "~R"):
                s.nonRigidConcepts += 1
        elif e.kind is EntityKind.RELATION:
            if e.effective_arity == 2:
                s.binaryRelations += 1
            elif e.effective_arity == 3:
                s.ternaryRelations += 1
        elif e.kind is EntityKind.METACONCEPT:
            s.metaConcepts += 1
        else:
            s.metaRelations += 1
        s.partitions += len(e.partitions)
        refs = [r for _, r in e.meta.status_refs]
        refs += [r for link in e.meta_links for r in link.axiom_refs]
        refs += [r for p in e.partitions for r in p.axiom_refs]
        for c in e.conditions:
            kinds[c.kind.value] += 1
            refs += c.axiom_refs
        families.update(r.family for r in refs)
    s.conditionsByKind = dict(sorted(kinds.items()))
    s.axiomRefsByFamily = {f: families.get(f, 0) for f in "ADT"}
    return s
