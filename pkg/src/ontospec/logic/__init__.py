"""Formula AST, OSF text form and schema expansion."""

from .expand import (
    EmitReport, MetaExpansion, PredicateNamer, Unsupported, emit_entities, expand_condition,
    expand_meta, expand_meta_items, variables,
)
from .formula import (
    And, Box, Const, Eq, Exists, Forall, Formula, Iff, Imp, Not, Or, OsfSyntaxError, Pred, Term,
    Var, emit_osf, free_variables, parse_osf,
)

__all__ = [
    "And", "Box", "Const", "EmitReport", "Eq", "Exists", "Forall", "Formula", "Iff", "Imp",
    "MetaExpansion", "Not", "Or", "OsfSyntaxError", "Pred", "PredicateNamer", "Term",
    "Unsupported", "Var", "emit_entities", "emit_osf", "expand_condition", "expand_meta",
    "expand_meta_items", "free_variables", "parse_osf", "variables",
]
