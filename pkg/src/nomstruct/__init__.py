"""Nominal and structural typings of a small class-based language, side by side."""
from .analysis import (
    Classification,
    DiagnosticKind,
    PairVerdict,
    Report,
    TypeDiagnostic,
    classify_pair,
    full_report,
    typecheck_bodies,
)
from .classes import (
    ClassTable,
    build_class_table,
    fields_shape,
    is_supershape,
    linearized_fields,
    methods_shape,
    shape_of,
    super_classes,
)
from .nominal import (
    env_extends,
    signature_closure_of,
    signature_environment_of,
    signature_of,
    subsigns,
    super_sigs,
)
from .structural import SubtypeMode, record_type_of, render_mu, struct_equal, struct_subtype
from .syntax import SourceProgram, parse_expr, parse_program, tokenize

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "DiagnosticKind",
    "PairVerdict",
    "Report",
    "TypeDiagnostic",
    "classify_pair",
    "full_report",
    "typecheck_bodies",
    "ClassTable",
    "build_class_table",
    "fields_shape",
    "is_supershape",
    "linearized_fields",
    "methods_shape",
    "shape_of",
    "super_classes",
    "env_extends",
    "signature_closure_of",
    "signature_environment_of",
    "signature_of",
    "subsigns",
    "super_sigs",
    "SubtypeMode",
    "record_type_of",
    "render_mu",
    "struct_equal",
    "struct_subtype",
    "SourceProgram",
    "parse_expr",
    "parse_program",
    "tokenize",
    "load_source",
    "corpus_source",
]


def load_source(text: str, origin: str = "<memory>") -> ClassTable:
    """Parse ``text`` and build its class table in one step."""
    return build_class_table(parse_program(SourceProgram(text, origin)))


def corpus_source(*names: str) -> str:
    """Text of bundled example programs, e.g. ``corpus_source("object", "pair")``."""
    from importlib.resources import files

    return "".join((files(__package__) / "corpus" / f"{n}.cls").read_text() for n in names)
