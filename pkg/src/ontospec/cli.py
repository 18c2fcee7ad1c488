"""Command-line front end: ``ontospec check|emit|stats|graph|supplies|explain``.

Every command takes optional ``.osp`` files.  Without files it works on the
shipped corpus.  With files, corpus entities the inputs do not redeclare are
added as a resolution baseline (``--no-corpus-baseline`` turns this off), and
output is restricted to the entities declared in the inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import corpus
from .analysis import AnalysisError, build_graph, carried_closure, supplies
from .logic import emit_entities
from .model import Diagnostic, Ontology, Severity
from .parser import merge, parse_document, resolve_references
from .pipeline import Loaded
from .validator import UnknownCode, explain, sort_diagnostics, validate

EXIT_OK, EXIT_ERRORS, EXIT_USAGE = 0, 1, 2


class _Fatal(Exception):
    """Usage or IO failure; exits 2."""


@dataclass
class Workspace:
    ontology: Optional[Ontology]
    diagnostics: list[Diagnostic] = field(default_factory=list)
    scope: list[str] = field(default_factory=list)  # entity ids to report on
    files: set[str] = field(default_factory=set)

    @property
    def has_errors(self) -> bool:
        return any(d.is_error for d in self.diagnostics)

    def in_scope(self, d: Diagnostic) -> bool:
        if d.entity is None or d.entity in self.scope:
            return True
        return d.span is not None and d.span.file in self.files


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fatal(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise _Fatal(f"cannot decode {path}: {exc}") from exc


def _corpus() -> Loaded:
    try:
        return corpus.load_corpus_checked()
    except corpus.CorpusError as exc:
        raise _Fatal(f"C01 {exc}") from exc


def load_workspace(files: Sequence[str], baseline: bool = True) -> Workspace:
    if not files:
        loaded = _corpus()
        o = loaded.ontology
        return Workspace(o, list(loaded.diagnostics), [e.id for e in o.entities])

    diags: list[Diagnostic] = []
    docs = []
    for path in files:
        r = parse_document(_read(path), path)
        diags += r.diagnostics
        if r.ontology is not None:
            docs.append(r.ontology)
    if len(docs) < len(files):
        return Workspace(None, diags, files=set(files))
    merged, dup = merge(docs)
    diags += dup
    scope = [e.id for e in merged.entities]
    if dup:
        return Workspace(None, diags, scope, set(files))
    if baseline:
        declared = {n.lower() for e in merged.entities for n in (e.name.canonical, e.name.alias) if n}
        extra = [
            e for e in _corpus().ontology.entities
            if not {n.lower() for n in (e.name.canonical, e.name.alias) if n} & declared
        ]
        merged = Ontology(merged.title, merged.entities + tuple(extra))
    resolved, rdiags = resolve_references(merged)
    return Workspace(resolved, diags + rdiags, scope, set(files))


def _validated(ws: Workspace) -> list[Diagnostic]:
    diags = list(ws.diagnostics)
    if ws.ontology is not None and not ws.has_errors:
        diags += validate(ws.ontology)
        diags = sort_diagnostics(diags, ws.ontology)
    return [d for d in diags if ws.in_scope(d)]


def _print_diagnostics(diags: list[Diagnostic], fmt: str, out) -> None:
    for d in diags:
        if fmt == "json":
            print(json.dumps(d.to_json(), ensure_ascii=False), file=out)
        else:
            print(d.format_text(), file=out)


def _scoped(ws: Workspace):
    return [ws.ontology.get(i) for i in ws.scope]


# -- commands ------------------------------------------------------------------

def cmd_check(args) -> int:
    ws = load_workspace(args.files, not args.no_corpus_baseline)
    diags = _validated(ws)
    _print_diagnostics(diags, args.format, sys.stdout)
    if any(d.is_error for d in diags) or ws.ontology is None:
        return EXIT_ERRORS
    if args.strict and any(d.severity is Severity.WARNING for d in diags):
        return EXIT_ERRORS
    return EXIT_OK


def cmd_emit(args) -> int:
    ws = load_workspace(args.files, not args.no_corpus_baseline)
    diags = _validated(ws)
    if ws.ontology is None or any(d.is_error for d in diags):
        _print_diagnostics([d for d in diags if d.is_error], "text", sys.stderr)
        return EXIT_ERRORS
    o = ws.ontology
    entities = _scoped(ws)
    # one output per source file, in input order
    groups: dict[str, list] = {}
    for e in entities:
        groups.setdefault(e.span.file if e.span else "<input>", []).append(e)
    reports = [(f, emit_entities(ents, o)) for f, ents in groups.items()]
    failed = False
    for _, report in reports:
        for e, c, u in report.failures:
            sev = Severity.ERROR if u.code == "L01" else Severity.WARNING
            failed = failed or sev is Severity.ERROR
            print(Diagnostic(sev, u.code, u.reason, e.id, c.span).format_text(), file=sys.stderr)
    if args.out:
        out = Path(args.out)
        try:
            out.mkdir(parents=True, exist_ok=True)
            for f, report in reports:
                (out / (Path(f).stem + ".osf")).write_text(report.text, encoding="utf-8")
        except OSError as exc:
            raise _Fatal(f"cannot write to {out}: {exc.strerror or exc}") from exc
        counts = sys.stdout
    else:
        for _, report in reports:
            sys.stdout.write(report.text)
        counts = sys.stderr
    for _, report in reports:
        for eid, n in report.emitted.items():
            print(f"{eid}: {n} emitted, {report.unsupported.get(eid, 0)} unsupported", file=counts)
    return EXIT_ERRORS if failed else EXIT_OK


def cmd_stats(args) -> int:
    ws = load_workspace(args.files, not args.no_corpus_baseline)
    if ws.ontology is None or ws.has_errors:
        _print_diagnostics([d for d in ws.diagnostics if d.is_error], "text", sys.stderr)
        return EXIT_ERRORS
    sub = Ontology(ws.ontology.title, tuple(_scoped(ws)))
    stats = corpus.corpus_stats(sub)
    if args.format == "json":
        print(json.dumps(stats.__dict__, sort_keys=True))
    else:
        print(f"entities {len(sub)}")
        for name, value in stats.rows():
            print(f"{name} {value}")
    return EXIT_OK


def dot_id(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(ws: Workspace) -> str:
    lines = ["digraph ontology {", "  rankdir=BT;"]
    if ws.ontology is not None:
        g = build_graph(ws.ontology)
        for eid in ws.scope:
            e = ws.ontology.get(eid)
            label = f"{e.id} ({e.name.alias})" if e.name.alias else e.id
            shape = "box" if e.kind.concept_like else "ellipse"
            lines.append(f"  {dot_id(eid)} [label={dot_id(label)}, shape={shape}];")
        for edge in g.edges:
            if edge.child in ws.scope:
                style = ' [style=dashed, label="diff"]' if edge.kind.value == "SLD" else ""
                lines.append(f"  {dot_id(edge.child)} -> {dot_id(edge.parent)}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_graph(args) -> int:
    ws = load_workspace(args.files, not args.no_corpus_baseline)
    if ws.ontology is None or ws.has_errors:
        _print_diagnostics([d for d in ws.diagnostics if d.is_error], "text", sys.stderr)
        return EXIT_ERRORS
    sys.stdout.write(render_dot(ws))
    return EXIT_OK


def cmd_supplies(args) -> int:
    ws = load_workspace(args.files, not args.no_corpus_baseline)
    if ws.ontology is None or ws.has_errors:
        _print_diagnostics([d for d in ws.diagnostics if d.is_error], "text", sys.stderr)
        return EXIT_ERRORS
    o = ws.ontology
    ent = o.lookup(args.entity)
    if ent is None:
        raise _Fatal(f"unknown entity {args.entity!r}")
    g = build_graph(o)
    closure = carried_closure(o, g)
    print(f"{ent.id}")
    for key in closure.keys(ent.id):
        try:
            flag = "supplied" if supplies(o, g, ent.id, key, closure) else "carried"
        except AnalysisError as exc:
            flag = exc.code
        for entry in (x for x in closure.of(ent.id) if x.key == key):
            print(f"  {key}\t{entry.via.value}\t{entry.origin}\t{flag}")
    return EXIT_OK


def cmd_explain(args) -> int:
    try:
        print(explain(args.code))
    except UnknownCode as exc:
        raise _Fatal(exc.args[0]) from exc
    return EXIT_OK


# -- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ontospec", description="OntoSpec ontology toolchain.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_files(name: str, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--no-corpus-baseline", action="store_true",
                        help="do not resolve names against the shipped corpus")
        return sp

    sp = with_files("check", "parse, resolve and validate")
    sp.add_argument("files", nargs="*")
    sp.add_argument("--strict", action="store_true", help="warnings also fail the run")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_check)

    sp = with_files("emit", "emit formulas as OSF s-expressions")
    sp.add_argument("files", nargs="*")
    sp.add_argument("--out", metavar="DIR", help="write one <stem>.osf per input file into DIR")
    sp.set_defaults(func=cmd_emit)

    sp = with_files("stats", "print entity and condition counts")
    sp.add_argument("files", nargs="*")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_stats)

    sp = with_files("graph", "export the subsumption graph")
    sp.add_argument("files", nargs="*")
    sp.add_argument("--dot", action="store_true", default=True, help="DOT output (the only format)")
    sp.set_defaults(func=cmd_graph)

    sp = with_files("supplies", "list carried conditions and whether the entity supplies them")
    sp.add_argument("entity")
    sp.add_argument("files", nargs="*")
    sp.set_defaults(func=cmd_supplies)

    sp = sub.add_parser("explain", help="describe a diagnostic code")
    sp.add_argument("code")
    sp.set_defaults(func=cmd_explain)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fatal as exc:
        print(f"ontospec: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
