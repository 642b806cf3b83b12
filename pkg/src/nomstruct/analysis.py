"""Pairwise nominal/structural comparison and nominal body typechecking."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .classes import BOOLEAN, ClassTable, FieldType, MethodType, linearized_fields, shape_of
from .nominal import NominalView
from .structural import SubtypeMode, record_graph, struct_subtype
from .syntax import And, Call, Cast, FieldAccess, IfReturn, InstanceOf, Is, New, Pos, Return, This, Var


class Classification(str, enum.Enum):
    GENUINE = "genuine"
    SPURIOUS = "spurious"
    UNRELATED = "unrelated"
    ANOMALY = "anomaly"

    @classmethod
    def of(cls, nominal: bool, structural: bool) -> "Classification":
        if nominal:
            return cls.GENUINE if structural else cls.ANOMALY
        return cls.SPURIOUS if structural else cls.UNRELATED


@dataclass(frozen=True)
class PairVerdict:
    sub: str
    sup: str
    nominal: bool
    structural: bool
    classification: Classification


class Analyzer:
    """Shared nominal closures and record graph for one table and mode."""

    def __init__(self, table: ClassTable, mode: SubtypeMode = SubtypeMode.WIDTH):
        self.table = table
        self.mode = SubtypeMode(mode)
        self.nominal = NominalView(table)
        self.graph, self.node = record_graph(table)

    def structural(self, c1: str, c2: str) -> bool:
        self.table[c1], self.table[c2]  # raise UnknownClass
        return struct_subtype(self.graph, self.node[c1], self.node[c2], self.mode)

    def verdict(self, c1: str, c2: str) -> PairVerdict:
        nom = self.nominal.subsigns(c1, c2)
        st = self.structural(c1, c2)
        return PairVerdict(c1, c2, nom, st, Classification.of(nom, st))


def classify_pair(table: ClassTable, c1: str, c2: str, mode: SubtypeMode = SubtypeMode.WIDTH) -> PairVerdict:
    return Analyzer(table, mode).verdict(c1, c2)


# ---------------------------------------------------------------- typechecking

class DiagnosticKind(str, enum.Enum):
    NO_SUCH_MEMBER = "NoSuchMember"
    ARG_ARITY_MISMATCH = "ArgArityMismatch"
    ARG_TYPE_MISMATCH = "ArgTypeMismatch"
    RETURN_TYPE_MISMATCH = "ReturnTypeMismatch"
    CAST_TO_UNRELATED = "CastToUnrelated"
    UNKNOWN_NAME = "UnknownName"
    NON_BOOLEAN_CONDITION = "NonBooleanCondition"


@dataclass(frozen=True)
class TypeDiagnostic:
    pos: Pos
    kind: DiagnosticKind
    message: str
    file: str = "<memory>"

    def __str__(self) -> str:
        return f"{self.file}:{self.pos}: {self.kind.value}: {self.message}"


# Boolean values are names of builtin constants, not literals
BOOLEAN_CONSTANTS = ("true", "false")


class _BodyChecker:
    def __init__(self, table: ClassTable, nominal: NominalView):
        self.table = table
        self.nominal = nominal
        self.out: list[TypeDiagnostic] = []

    def report(self, pos, kind, message) -> None:
        self.out.append(TypeDiagnostic(pos, kind, message, self.origin))

    def sub(self, t1: Optional[str], t2: Optional[str]) -> bool:
        # None is the type of an erroneous expression; it never cascades
        return t1 is None or t2 is None or self.nominal.subsigns(t1, t2)

    def check_class(self, name: str) -> None:
        decl = self.table[name]
        if decl.builtin:
            return
        self.origin = decl.origin
        for mname, mtype in decl.methods:
            body = decl.bodies[mname]
            self.env = dict(zip(body.param_names, mtype.params))
            self.this = name
            if isinstance(body.body, IfReturn):
                cond = self.expr(body.body.cond)
                if cond is not None and cond != BOOLEAN:
                    self.report(body.body.cond.pos, DiagnosticKind.NON_BOOLEAN_CONDITION,
                                f"condition has type {cond}, not {BOOLEAN}")
                self.ret(body.body.then, mtype.ret, mname)
                self.ret(body.body.otherwise, mtype.ret, mname)
            else:
                self.ret(body.body, mtype.ret, mname)

    def ret(self, stmt: Return, declared: str, method: str) -> None:
        t = self.expr(stmt.expr)
        if not self.sub(t, declared):
            self.report(stmt.pos, DiagnosticKind.RETURN_TYPE_MISMATCH,
                        f"{method} returns {t}, which does not subsign declared {declared}")

    def member(self, receiver: Optional[str], name: str, pos, want):
        if receiver is None:
            return None
        t = self.table.members(receiver).get(name)
        if not isinstance(t, want):
            what = "method" if want is MethodType else "field"
            self.report(pos, DiagnosticKind.NO_SUCH_MEMBER, f"{receiver} has no {what} {name}")
            return None
        return t

    def args(self, args, params, pos, what: str) -> None:
        types = [self.expr(a) for a in args]
        if len(types) != len(params):
            self.report(pos, DiagnosticKind.ARG_ARITY_MISMATCH,
                        f"{what} expects {len(params)} argument(s), got {len(types)}")
            return
        for i, (a, t, p) in enumerate(zip(args, types, params), 1):
            if not self.sub(t, p):
                self.report(a.pos, DiagnosticKind.ARG_TYPE_MISMATCH,
                            f"argument {i} of {what} has type {t}, expected {p}")

    def known_class(self, name: str, pos) -> bool:
        if name in self.table:
            return True
        self.report(pos, DiagnosticKind.UNKNOWN_NAME, f"unknown class {name}")
        return False

    def expr(self, e) -> Optional[str]:
        if isinstance(e, Var):
            if e.name in self.env:
                return self.env[e.name]
            field_t = self.table.members(self.this).get(e.name)
            if isinstance(field_t, FieldType):
                return field_t.type
            if e.name in BOOLEAN_CONSTANTS:
                return BOOLEAN
            self.report(e.pos, DiagnosticKind.UNKNOWN_NAME, f"unknown name {e.name}")
            return None
        if isinstance(e, This):
            return self.this
        if isinstance(e, FieldAccess):
            t = self.member(self.expr(e.receiver), e.name, e.pos, FieldType)
            return t.type if t else None
        if isinstance(e, Call):
            recv = self.expr(e.receiver)
            t = self.member(recv, e.name, e.pos, MethodType)
            if t is None:
                for a in e.args:
                    self.expr(a)
                return None
            self.args(e.args, t.params, e.pos, f"{recv}.{e.name}")
            return t.ret
        if isinstance(e, New):
            if not self.known_class(e.cls, e.pos):
                for a in e.args:
                    self.expr(a)
                return None
            params = [t for _, t in linearized_fields(self.table, e.cls)]
            self.args(e.args, params, e.pos, f"new {e.cls}")
            return e.cls
        if isinstance(e, (InstanceOf, Is)):
            self.expr(e.expr)
            self.known_class(e.cls, e.pos)
            return BOOLEAN
        if isinstance(e, Cast):
            t = self.expr(e.expr)
            if not self.known_class(e.cls, e.pos):
                return None
            if t is not None and not (self.nominal.subsigns(t, e.cls) or self.nominal.subsigns(e.cls, t)):
                self.report(e.pos, DiagnosticKind.CAST_TO_UNRELATED, f"cannot cast {t} to unrelated {e.cls}")
            return e.cls
        if isinstance(e, And):
            for side in (e.left, e.right):
                t = self.expr(side)
                if t is not None and t != BOOLEAN:
                    self.report(side.pos, DiagnosticKind.ARG_TYPE_MISMATCH,
                                f"operand of && has type {t}, expected {BOOLEAN}")
            return BOOLEAN
        raise TypeError(f"unexpected expression {e!r}")


def typecheck_bodies(table: ClassTable, nominal: Optional[NominalView] = None) -> list[TypeDiagnostic]:
    """Nominally typecheck every method body; an empty list means well-typed."""
    checker = _BodyChecker(table, nominal or NominalView(table))
    for name in table:
        checker.check_class(name)
    return checker.out


# ---------------------------------------------------------------- report

@dataclass
class Report:
    classes: list[str]
    shapes: dict[str, frozenset]
    supers: dict[str, tuple[str, ...]]
    pairs: list[PairVerdict]
    diagnostics: list[TypeDiagnostic] = field(default_factory=list)
    mode: SubtypeMode = SubtypeMode.WIDTH

    def by_class(self, cls: Classification) -> list[PairVerdict]:
        return [p for p in self.pairs if p.classification is cls]


def report_classes(table: ClassTable) -> list[str]:
    # the auto-injected Boolean is not part of the program being compared
    return table.user_names()


def full_report(table: ClassTable, mode: SubtypeMode = SubtypeMode.WIDTH) -> Report:
    analyzer = Analyzer(table, mode)
    classes = report_classes(table)
    pairs = [analyzer.verdict(a, b) for a in classes for b in classes if a != b]
    return Report(
        classes,
        {c: shape_of(table, c) for c in classes},
        {c: table[c].supers for c in classes},
        pairs,
        typecheck_bodies(table, analyzer.nominal),
        analyzer.mode,
    )
