"""Class signatures, signature environments and subsigning."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .classes import ClassTable, FieldType, MemberType


@dataclass(frozen=True)
class ClassSignature:
    name: str
    ext: tuple[str, ...]
    members: tuple[tuple[str, MemberType], ...]

    def member_map(self) -> dict[str, MemberType]:
        return dict(self.members)

    def referenced(self) -> set[str]:
        refs = set(self.ext)
        for _, t in self.members:
            if isinstance(t, FieldType):
                refs.add(t.type)
            else:
                refs.update(t.params)
                refs.add(t.ret)
        return refs

    def render(self) -> str:
        head = f"sig {self.name}"
        if self.ext:
            head += " ext " + ", ".join(self.ext)
        if not self.members:
            return head + " {}"
        body = ", ".join(f"{n}: {_render_member(t)}" for n, t in self.members)
        return f"{head} {{ {body} }}"

    __str__ = render


def _render_member(t: MemberType) -> str:
    if isinstance(t, FieldType):
        return t.type
    params = t.params[0] if len(t.params) == 1 else f"({', '.join(t.params)})"
    return f"{params}->{t.ret}"


class SignatureEnvironment(Mapping):
    """Name-indexed, closed collection of class signatures."""

    def __init__(self, sigs):
        self._sigs = {s.name: s for s in sigs}

    def __getitem__(self, name):
        return self._sigs[name]

    def __iter__(self):
        return iter(self._sigs)

    def __len__(self):
        return len(self._sigs)

    def __eq__(self, other):
        return isinstance(other, SignatureEnvironment) and self._sigs == other._sigs

    def __hash__(self):
        return hash(frozenset(self._sigs.items()))

    def is_closed(self) -> bool:
        return all(r in self._sigs for s in self._sigs.values() for r in s.referenced())

    def __repr__(self):
        return "{" + ", ".join(sorted(self._sigs)) + "}"


@dataclass(frozen=True)
class SignatureClosure:
    root: str
    env: SignatureEnvironment


def signature_of(table: ClassTable, c: str) -> ClassSignature:
    decl = table[c]
    return ClassSignature(c, decl.supers, tuple(table.members(c).items()))


def signature_environment_of(table: ClassTable, c: str, _memo: Optional[dict] = None) -> SignatureEnvironment:
    """Smallest closed environment containing the signature of ``c``."""
    memo = {} if _memo is None else _memo
    sigs: dict[str, ClassSignature] = {}
    todo = [c]
    while todo:
        name = todo.pop()
        if name in sigs:
            continue
        sig = memo.get(name)
        if sig is None:
            sig = memo[name] = signature_of(table, name)
        sigs[name] = sig
        todo.extend(r for r in sig.referenced() if r not in sigs)
    # keep table order so rendering is stable
    return SignatureEnvironment(sigs[n] for n in table if n in sigs)


def signature_closure_of(table: ClassTable, c: str) -> SignatureClosure:
    return SignatureClosure(c, signature_environment_of(table, c))


def env_extends(se1: SignatureEnvironment, se2: SignatureEnvironment) -> bool:
    """Every signature bound in ``se2`` is bound identically in ``se1``."""
    bound = se1._sigs
    for name, sig in se2._sigs.items():
        other = bound.get(name)
        if other is not sig and other != sig:
            return False
    return True


def super_sigs(sc: SignatureClosure) -> frozenset:
    out: set[str] = set()
    todo = list(sc.env[sc.root].ext)
    while todo:
        name = todo.pop()
        if name in out:
            continue
        out.add(name)
        todo.extend(sc.env[name].ext)
    return frozenset(out)


def subsigns(sc1: SignatureClosure, sc2: SignatureClosure) -> bool:
    if not (sc1.root == sc2.root or sc2.root in super_sigs(sc1)):
        return False
    return env_extends(sc1.env, sc2.env)


class NominalView:
    """Per-table memo of closures; results are identical to calling the functions directly."""

    def __init__(self, table: ClassTable):
        self.table = table
        self._closures: dict[str, SignatureClosure] = {}
        self._sigs: dict = {}

    def closure(self, c: str) -> SignatureClosure:
        sc = self._closures.get(c)
        if sc is None:
            sc = self._closures[c] = SignatureClosure(c, signature_environment_of(self.table, c, self._sigs))
        return sc

    def subsigns(self, c1: str, c2: str) -> bool:
        if c1 == c2:
            self.table[c1]  # raises UnknownClass
            return True
        return subsigns(self.closure(c1), self.closure(c2))
