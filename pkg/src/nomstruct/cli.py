"""Command-line front end.

Exit status is the only pass/fail channel: 0 success (or a true verdict),
1 type diagnostics (or a false verdict), 2 input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .analysis import Classification, Report, full_report, typecheck_bodies
from .classes import ClassTable, ClassTableError, ClassTableErrors, build_class_table, shape_of
from .nominal import NominalView, signature_of
from .structural import SubtypeMode, labelled_record_type_of, record_graph, render_mu, struct_subtype
from .syntax import LexError, ParseErrors, SourceProgram, parse_program


class InputError(Exception):
    """Parse or class-table problems; each line is already ``file:line:col``-prefixed."""

    def __init__(self, lines: list[str]):
        super().__init__("\n".join(lines))
        self.lines = lines


def load_table(paths: Sequence[str]) -> ClassTable:
    """Parse all files into one program namespace and build its class table."""
    decls, problems = [], []
    for path in paths:
        try:
            decls.extend(parse_program(SourceProgram.from_path(path)))
        except LexError as exc:
            problems.append(f"{exc.origin}:{exc.pos}: LexError: {exc.message}")
        except ParseErrors as exc:
            problems.extend(f"{e.origin}:{e.pos}: ParseError: {e.message}" for e in exc.errors)
        except OSError as exc:
            problems.append(f"{path}: {exc.strerror}")
    if problems:
        raise InputError(problems)
    try:
        return build_class_table(decls)
    except ClassTableErrors as exc:
        raise InputError([_table_error_line(e) for e in exc.errors]) from None


def _table_error_line(e: ClassTableError) -> str:
    if e.pos is None:
        return f"{e.origin}: {e.kind}: {e.message}"
    return f"{e.origin}:{e.pos}: {e.kind}: {e.message}"


@dataclass
class CliConfig:
    command: str
    paths: list[str]
    mode: SubtypeMode = SubtypeMode.WIDTH
    format: str = "text"
    inline_depth: int = 1


# ---------------------------------------------------------------- rendering

def format_shape(shape) -> str:
    return "{" + ", ".join(sorted(shape)) + "}"


def report_to_dict(report: Report) -> dict:
    return {
        "classes": [
            {"name": c, "shape": sorted(report.shapes[c]), "supers": list(report.supers[c])}
            for c in report.classes
        ],
        "pairs": [
            {
                "sub": p.sub,
                "sup": p.sup,
                "nominal": p.nominal,
                "structural": p.structural,
                "class": p.classification.value,
            }
            for p in report.pairs
        ],
        "diagnostics": [
            {"file": d.file, "line": d.pos.line, "col": d.pos.col, "kind": d.kind.value, "message": d.message}
            for d in report.diagnostics
        ],
    }


def dump_json(data: dict) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


_CELL = {
    Classification.GENUINE: "G",
    Classification.SPURIOUS: "S",
    Classification.UNRELATED: "U",
    Classification.ANOMALY: "!",
}


def report_to_text(report: Report) -> str:
    lines = [f"mode: {report.mode.value}", f"classes: {len(report.classes)}", ""]
    lines.append("shapes:")
    width = max((len(c) for c in report.classes), default=0)
    for c in report.classes:
        lines.append(f"  {c.ljust(width)}  {format_shape(report.shapes[c])}")
    lines.append("")
    lines.append("pairs (row <: column; G genuine, S spurious, U unrelated, ! anomaly):")
    cells = {(p.sub, p.sup): _CELL[p.classification] for p in report.pairs}
    col_w = [max(len(c), 1) for c in report.classes]
    header = "  " + " " * width + "  " + " ".join(c.ljust(w) for c, w in zip(report.classes, col_w))
    lines.append(header.rstrip())
    for r in report.classes:
        row = " ".join(cells.get((r, c), ".").ljust(w) for c, w in zip(report.classes, col_w))
        lines.append(f"  {r.ljust(width)}  {row}".rstrip())
    lines.append("")
    for cls, note in (
        (Classification.SPURIOUS, "unwarranted is-a"),
        (Classification.GENUINE, "genuine is-a"),
        (Classification.ANOMALY, "nominal without structural"),
    ):
        found = report.by_class(cls)
        if cls is Classification.ANOMALY and not found:
            continue
        lines.append(f"{cls.value} ({len(found)}):")
        lines.extend(f"  {p.sub} <: {p.sup}  {note}" for p in found)
        lines.append("")
    lines.append(f"diagnostics ({len(report.diagnostics)}):")
    lines.extend(f"  {d}" for d in report.diagnostics)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- commands

def cmd_check(cfg: CliConfig, out, err) -> int:
    table = load_table(cfg.paths)
    diags = typecheck_bodies(table)
    for d in diags:
        print(d, file=err)
    return 1 if diags else 0


def cmd_query(cfg: CliConfig, kind: str, cls: str, out, err) -> int:
    table = load_table(cfg.paths)
    table[cls]  # raises UnknownClass
    if kind == "shape":
        print(format_shape(shape_of(table, cls)), file=out)
    elif kind == "sig":
        print(signature_of(table, cls).render(), file=out)
    else:
        g, root, names = labelled_record_type_of(table, cls)
        print(render_mu(g, root, names, cfg.inline_depth), file=out)
    return 0


def cmd_subtype(cfg: CliConfig, relation: str, c1: str, c2: str, out, err) -> int:
    table = load_table(cfg.paths)
    table[c1], table[c2]  # raise UnknownClass
    if relation == "nominal":
        holds = NominalView(table).subsigns(c1, c2)
    else:
        g, node = record_graph(table)
        holds = struct_subtype(g, node[c1], node[c2], cfg.mode)
    print("true" if holds else "false", file=out)
    return 0 if holds else 1


def cmd_report(cfg: CliConfig, out, err) -> int:
    report = full_report(load_table(cfg.paths), cfg.mode)
    if cfg.format == "json":
        out.write(dump_json(report_to_dict(report)))
    else:
        out.write(report_to_text(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=[m.value for m in SubtypeMode], default="width",
                        help="structural subtyping rule (default: width)")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--inline-depth", type=int, default=1, metavar="N",
                        help="nesting depth up to which non-recursive record types are inlined")

    parser = argparse.ArgumentParser(prog="nomstruct",
                                     description="Compare nominal and structural typings of a class program.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="parse, resolve and typecheck")
    p.add_argument("paths", nargs="+")

    p = sub.add_parser("query", parents=[common], help="print a shape, signature or record type")
    p.add_argument("kind", choices=["shape", "sig", "rectype"])
    p.add_argument("cls", metavar="CLASS")
    p.add_argument("paths", nargs="+")

    p = sub.add_parser("subtype", parents=[common], help="decide one subtyping question")
    p.add_argument("relation", choices=["nominal", "structural"])
    p.add_argument("c1")
    p.add_argument("c2")
    p.add_argument("paths", nargs="+")

    p = sub.add_parser("report", parents=[common], help="classify every ordered class pair")
    p.add_argument("paths", nargs="+")
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    cfg = CliConfig(args.command, args.paths, SubtypeMode(args.mode), args.format, args.inline_depth)
    try:
        if cfg.command == "check":
            return cmd_check(cfg, out, err)
        if cfg.command == "query":
            return cmd_query(cfg, args.kind, args.cls, out, err)
        if cfg.command == "subtype":
            return cmd_subtype(cfg, args.relation, args.c1, args.c2, out, err)
        return cmd_report(cfg, out, err)
    except InputError as exc:
        for line in exc.lines:
            print(line, file=err)
        return 2
    except ClassTableError as exc:  # UnknownClass from a query
        print(f"error: {exc}", file=err)
        return 2


if __name__ == "__main__":
    sys.exit(main())
