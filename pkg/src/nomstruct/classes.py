"""Resolved class tables, shapes and inheritance queries."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .syntax import Body, ClassDeclAst, Pos

BOOLEAN = "Boolean"


class ClassTableError(Exception):
    kind = "ClassTableError"

    def __init__(self, message: str, pos: Optional[Pos] = None, origin: str = "<memory>"):
        super().__init__(message)
        self.message = message
        self.pos = pos
        self.origin = origin

    def __str__(self) -> str:
        where = f"{self.origin}:{self.pos}: " if self.pos else ""
        return f"{where}{self.kind}: {self.message}"


class DuplicateClass(ClassTableError):
    kind = "DuplicateClass"


class UnknownTypeName(ClassTableError):
    kind = "UnknownTypeName"

    def __init__(self, name: str, pos=None, origin="<memory>"):
        super().__init__(f"unknown type name {name}", pos, origin)
        self.name = name


class InheritanceCycle(ClassTableError):
    kind = "InheritanceCycle"

    def __init__(self, cycle: list[str], pos=None, origin="<memory>"):
        super().__init__("inheritance cycle " + " -> ".join(cycle + cycle[:1]), pos, origin)
        self.cycle = cycle


class MemberClash(ClassTableError):
    kind = "MemberClash"

    def __init__(self, cls: str, member: str, first, second, pos=None, origin="<memory>"):
        super().__init__(f"member {member} of {cls} has conflicting types {first} and {second}", pos, origin)
        self.cls, self.member, self.types = cls, member, (first, second)


class DuplicateMember(ClassTableError):
    kind = "DuplicateMember"

    def __init__(self, cls: str, member: str, pos=None, origin="<memory>"):
        super().__init__(f"member {member} declared twice in {cls}", pos, origin)
        self.cls, self.member = cls, member


class UnknownClass(ClassTableError, KeyError):
    kind = "UnknownClass"

    def __init__(self, name: str):
        ClassTableError.__init__(self, f"unknown class {name}")
        self.name = name

    __str__ = ClassTableError.__str__


class ClassTableErrors(Exception):
    def __init__(self, errors: list[ClassTableError]):
        super().__init__("\n".join(map(str, errors)))
        self.errors = errors


@dataclass(frozen=True)
class FieldType:
    type: str

    def __str__(self) -> str:
        return self.type


@dataclass(frozen=True)
class MethodType:
    params: tuple[str, ...]
    ret: str

    def __str__(self) -> str:
        if len(self.params) == 1:
            return f"{self.params[0]}->{self.ret}"
        return f"({', '.join(self.params)})->{self.ret}"


MemberType = Union[FieldType, MethodType]


@dataclass(frozen=True)
class MethodBody:
    param_names: tuple[str, ...]
    body: Optional[Body]  # None for builtins


@dataclass(frozen=True)
class ClassDecl:
    name: str
    supers: tuple[str, ...]
    fields: tuple[tuple[str, str], ...]
    methods: tuple[tuple[str, MethodType], ...]
    bodies: dict = field(default_factory=dict, compare=False, hash=False)
    builtin: bool = False
    pos: Optional[Pos] = field(default=None, compare=False)
    origin: str = field(default="<memory>", compare=False)
    # member name -> position of its declaration
    member_pos: dict = field(default_factory=dict, compare=False, hash=False)
    # own member names in source order, fields and methods interleaved
    order: tuple[str, ...] = ()

    def own_members(self) -> dict[str, MemberType]:
        out: dict[str, MemberType] = {n: FieldType(t) for n, t in self.fields}
        out.update(self.methods)
        return out

    def own_member_order(self) -> tuple[str, ...]:
        return self.order or tuple(n for n, _ in self.fields) + tuple(n for n, _ in self.methods)


def boolean_builtin() -> ClassDecl:
    b = BOOLEAN
    methods = (
        ("and", MethodType((b,), b)),
        ("or", MethodType((b,), b)),
        ("not", MethodType((), b)),
    )
    bodies = {n: MethodBody(("other",) if t.params else (), None) for n, t in methods}
    return ClassDecl(b, (), (), methods, bodies, builtin=True)


class ClassTable:
    """Immutable map from class name to :class:`ClassDecl`.

    Iteration follows declaration order; the injected ``Boolean`` builtin comes last.
    """

    def __init__(self, decls: Iterable[ClassDecl]):
        self._decls: dict[str, ClassDecl] = {}
        for d in decls:
            self._decls[d.name] = d
        self._members: dict[str, dict[str, MemberType]] = {}
        self._supers: dict[str, frozenset] = {}

    def __contains__(self, name) -> bool:
        return name in self._decls

    def __iter__(self):
        return iter(self._decls)

    def __len__(self) -> int:
        return len(self._decls)

    def __getitem__(self, name: str) -> ClassDecl:
        try:
            return self._decls[name]
        except KeyError:
            raise UnknownClass(name) from None

    def names(self) -> list[str]:
        return list(self._decls)

    def user_names(self) -> list[str]:
        return [n for n, d in self._decls.items() if not d.builtin]

    def decls(self) -> list[ClassDecl]:
        return list(self._decls.values())

    def members(self, name: str) -> dict[str, MemberType]:
        """Flattened member map: inherited members first (depth-first, left to right), then own."""
        cached = self._members.get(name)
        if cached is not None:
            return cached
        decl = self[name]
        out: dict[str, MemberType] = {}
        for s in decl.supers:
            for n, t in self.members(s).items():
                out.setdefault(n, t)
        own = decl.own_members()
        for n in decl.own_member_order():
            out.setdefault(n, own[n])
        self._members[name] = out
        return out

    def supers(self, name: str) -> frozenset:
        cached = self._supers.get(name)
        if cached is not None:
            return cached
        out = set()
        for s in self[name].supers:
            out.add(s)
            out |= self.supers(s)
        result = frozenset(out)
        self._supers[name] = result
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, ClassTable) and list(self._decls.items()) == list(other._decls.items())

    def __repr__(self) -> str:
        return f"ClassTable({', '.join(self._decls)})"


def _decl_from_ast(ast: ClassDeclAst, errors: list) -> ClassDecl:
    seen: dict[str, Pos] = {}
    fields, methods, bodies = [], [], {}
    for m in ast.members or (*ast.fields, *ast.methods):
        if m.name in seen:
            errors.append(DuplicateMember(ast.name, m.name, m.pos, ast.origin))
            continue
        seen[m.name] = m.pos
        if hasattr(m, "params"):
            methods.append((m.name, MethodType(tuple(p.type for p in m.params), m.return_type)))
            bodies[m.name] = MethodBody(tuple(p.name for p in m.params), m.body)
        else:
            fields.append((m.name, m.type))
    return ClassDecl(ast.name, ast.supers, tuple(fields), tuple(methods), bodies,
                     pos=ast.pos, origin=ast.origin, member_pos=seen, order=tuple(seen))


def build_class_table(decls: Iterable[ClassDeclAst]) -> ClassTable:
    """Resolve parsed declarations into a validated :class:`ClassTable`.

    All problems found are raised together as :class:`ClassTableErrors`.
    """
    errors: list[ClassTableError] = []
    resolved: dict[str, ClassDecl] = {}
    asts: dict[str, ClassDeclAst] = {}
    for ast in decls:
        if ast.name in resolved:
            errors.append(DuplicateClass(f"class {ast.name} declared twice", ast.pos, ast.origin))
            continue
        asts[ast.name] = ast
        resolved[ast.name] = _decl_from_ast(ast, errors)
    if BOOLEAN not in resolved:
        resolved[BOOLEAN] = boolean_builtin()

    for name, ast in asts.items():
        refs = list(zip(ast.supers, ast.super_pos or [ast.pos] * len(ast.supers)))
        for m in ast.members or (*ast.fields, *ast.methods):
            if hasattr(m, "params"):
                refs.append((m.return_type, m.type_pos))
                refs.extend((p.type, p.pos) for p in m.params)
            else:
                refs.append((m.type, m.type_pos))
        for ref, pos in refs:
            if ref not in resolved:
                errors.append(UnknownTypeName(ref, pos, ast.origin))
    if errors:
        raise ClassTableErrors(errors)

    cycle = _find_cycle(resolved)
    if cycle:
        d = resolved[cycle[0]]
        raise ClassTableErrors([InheritanceCycle(cycle, d.pos, d.origin)])

    table = ClassTable(resolved.values())
    for name in table:
        _check_members(table, table[name], errors)
    if errors:
        raise ClassTableErrors(errors)
    return table


def _find_cycle(decls: dict[str, ClassDecl]) -> Optional[list[str]]:
    state: dict[str, int] = {}
    stack: list[str] = []

    def visit(n: str) -> Optional[list[str]]:
        state[n] = 1
        stack.append(n)
        for s in decls[n].supers:
            if state.get(s) == 1:
                return stack[stack.index(s):]
            if s not in state:
                found = visit(s)
                if found:
                    return found
        stack.pop()
        state[n] = 2
        return None

    for n in decls:
        if n not in state:
            found = visit(n)
            if found:
                return found
    return None


def _check_members(table: ClassTable, decl: ClassDecl, errors: list) -> None:
    inherited: dict[str, MemberType] = {}
    for s in decl.supers:
        for n, t in table.members(s).items():
            if n in inherited and inherited[n] != t:
                errors.append(MemberClash(decl.name, n, inherited[n], t, decl.pos, decl.origin))
            inherited.setdefault(n, t)
    for n, t in decl.own_members().items():
        if n in inherited and inherited[n] != t:
            errors.append(MemberClash(decl.name, n, inherited[n], t,
                                      decl.member_pos.get(n, decl.pos), decl.origin))


# ---------------------------------------------------------------- queries

def shape_of(table: ClassTable, c: str) -> frozenset:
    return frozenset(table.members(c))


def fields_shape(table: ClassTable, c: str) -> frozenset:
    return frozenset(n for n, t in table.members(c).items() if isinstance(t, FieldType))


def methods_shape(table: ClassTable, c: str) -> frozenset:
    return frozenset(n for n, t in table.members(c).items() if isinstance(t, MethodType))


def is_supershape(s1, s2) -> bool:
    return set(s1) >= set(s2)


def super_classes(table: ClassTable, c: str) -> frozenset:
    return table.supers(c)


def linearized_fields(table: ClassTable, c: str) -> list[tuple[str, str]]:
    """Constructor parameters of ``new c(...)``: inherited fields first, first occurrence wins."""
    out: dict[str, str] = {}

    def walk(name: str) -> None:
        decl = table[name]
        for s in decl.supers:
            walk(s)
        for n, t in decl.fields:
            out.setdefault(n, t)

    walk(c)
    return list(out.items())
