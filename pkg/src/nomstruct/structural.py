"""Equi-recursive record types and coinductive structural subtyping.

A :class:`RecordTypeGraph` is a finite graph whose nodes are record types
(member name -> member type) and whose edges are the node references inside
member types. Class names are erased: nodes are plain integers.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from .classes import ClassTable, FieldType


class SubtypeMode(enum.Enum):
    WIDTH = "width"
    VARIANCE = "variance"


@dataclass(frozen=True)
class FieldOf:
    target: int


@dataclass(frozen=True)
class MethodOf:
    params: tuple[int, ...]
    ret: int


StructMember = Union[FieldOf, MethodOf]


class RecordTypeGraph:
    """Immutable record-type graph.

    ``nodes[i]`` is a tuple of ``(member name, FieldOf | MethodOf)`` pairs in
    member order. Deciders cache proven pairs on the instance; the cache only
    ever grows and never changes a verdict.
    """

    def __init__(self, nodes):
        self.nodes: tuple[tuple[tuple[str, StructMember], ...], ...] = tuple(tuple(n) for n in nodes)
        self._maps = [dict(n) for n in self.nodes]
        for i, m in enumerate(self._maps):
            for t in m.values():
                for ref in _refs(t):
                    if not 0 <= ref < len(self.nodes):
                        raise ValueError(f"node {i} references missing node {ref}")
        self._equal: set[tuple[int, int]] = set()
        self._sub: dict[SubtypeMode, set[tuple[int, int]]] = {m: set() for m in SubtypeMode}

    def __len__(self) -> int:
        return len(self.nodes)

    def members(self, n: int) -> dict[str, StructMember]:
        return self._maps[n]

    def successors(self, n: int) -> list[int]:
        return [r for _, t in self.nodes[n] for r in _refs(t)]

    def __eq__(self, other):
        return isinstance(other, RecordTypeGraph) and self.nodes == other.nodes

    def __hash__(self):
        return hash(self.nodes)

    def __repr__(self):
        return f"RecordTypeGraph({len(self.nodes)} nodes)"


def _refs(t: StructMember) -> tuple[int, ...]:
    if isinstance(t, FieldOf):
        return (t.target,)
    return (*t.params, t.ret)


def record_graph(table: ClassTable) -> tuple[RecordTypeGraph, dict[str, int]]:
    """One node per class of ``table``, in table order."""
    index = {c: i for i, c in enumerate(table)}
    nodes = []
    for c in table:
        node = []
        for name, t in table.members(c).items():
            if isinstance(t, FieldType):
                node.append((name, FieldOf(index[t.type])))
            else:
                node.append((name, MethodOf(tuple(index[p] for p in t.params), index[t.ret])))
        nodes.append(node)
    return RecordTypeGraph(nodes), index


def _restrict(g: RecordTypeGraph, root: int) -> tuple[RecordTypeGraph, dict[int, int]]:
    order = [root]
    seen = {root}
    i = 0
    while i < len(order):
        for s in g.successors(order[i]):
            if s not in seen:
                seen.add(s)
                order.append(s)
        i += 1
    renum = {old: new for new, old in enumerate(order)}

    def tr(t):
        if isinstance(t, FieldOf):
            return FieldOf(renum[t.target])
        return MethodOf(tuple(renum[p] for p in t.params), renum[t.ret])

    return RecordTypeGraph([[(n, tr(t)) for n, t in g.nodes[old]] for old in order]), renum


def record_type_of(table: ClassTable, c: str) -> tuple[RecordTypeGraph, int]:
    """Record type of ``c``: the graph of classes reachable from it, rooted at node 0."""
    table[c]  # raises UnknownClass
    g, index = record_graph(table)
    sub, _ = _restrict(g, index[c])
    return sub, 0


def labelled_record_type_of(table: ClassTable, c: str) -> tuple[RecordTypeGraph, int, dict[int, str]]:
    """Like :func:`record_type_of`, plus originating class names for rendering only."""
    table[c]  # raises UnknownClass
    g, index = record_graph(table)
    sub, renum = _restrict(g, index[c])
    names = {renum[i]: name for name, i in index.items() if i in renum}
    return sub, 0, names


# ---------------------------------------------------------------- deciders
#
# Both relations are greatest fixed points of rules that only conjoin
# obligations, so the hypothesis-set algorithm becomes a worklist: assume the
# goal pair, expand each assumed pair into the pairs its members require, and
# fail as soon as some pair fails its local (name set, kind, arity) check.
# The assumed set on success is a post-fixed point, so every pair in it holds.

_EQ = "eq"


def _obligations(g: RecordTypeGraph, rel, a: int, b: int):
    """Pairs required by ``(rel, a, b)``, or None if the local check fails."""
    ma, mb = g.members(a), g.members(b)
    if rel == _EQ:
        if ma.keys() != mb.keys():
            return None
    elif not mb.keys() <= ma.keys():
        return None
    # width-only subtyping demands bisimilar member types
    member_rel = _EQ if rel in (_EQ, SubtypeMode.WIDTH) else rel
    out = []
    for k, t in mb.items():
        s = ma[k]
        if isinstance(s, FieldOf) and isinstance(t, FieldOf):
            out.append((member_rel, s.target, t.target))
        elif isinstance(s, MethodOf) and isinstance(t, MethodOf):
            if len(s.params) != len(t.params):
                return None
            for p, q in zip(s.params, t.params):
                out.append((member_rel, q, p) if member_rel is SubtypeMode.VARIANCE else (member_rel, p, q))
            out.append((member_rel, s.ret, t.ret))
        else:
            return None
    return out


def _decide(g: RecordTypeGraph, rel, n1: int, n2: int) -> bool:
    goal = (rel, n1, n2)
    assumed = {goal}
    work = [goal]
    while work:
        r, a, b = work.pop()
        needed = _obligations(g, r, a, b)
        if needed is None:
            return False
        for ob in needed:
            _, x, y = ob
            if x == y or ob in assumed:
                continue
            if (ob[0] == _EQ and (x, y) in g._equal) or (ob[0] != _EQ and (x, y) in g._sub[ob[0]]):
                continue
            assumed.add(ob)
            work.append(ob)
    for r, a, b in assumed:
        if r == _EQ:
            g._equal.add((a, b))
            g._equal.add((b, a))
        else:
            g._sub[r].add((a, b))
    return True


def struct_equal(g: RecordTypeGraph, n1: int, n2: int) -> bool:
    """Bisimilarity of two nodes."""
    if n1 == n2 or (n1, n2) in g._equal:
        return True
    return _decide(g, _EQ, n1, n2)


def struct_subtype(g: RecordTypeGraph, n1: int, n2: int, mode: SubtypeMode = SubtypeMode.WIDTH) -> bool:
    """``n1 <: n2``: every member of ``n2`` is present in ``n1`` with a compatible type.

    In ``WIDTH`` mode shared members must have bisimilar types; ``VARIANCE``
    mode allows covariant fields and returns and contravariant parameters.
    """
    mode = SubtypeMode(mode)
    if n1 == n2 or (n1, n2) in g._sub[mode]:
        return True
    return _decide(g, mode, n1, n2)


# ---------------------------------------------------------------- rendering

def _cyclic_nodes(g: RecordTypeGraph, reachable: list[int]) -> set[int]:
    # Tarjan's SCC over the reachable part
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    stack: list[int] = []
    on_stack: set[int] = set()
    cyclic: set[int] = set()
    counter = [0]

    def strong(v: int) -> None:
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        for w in g.successors(v):
            if w not in index:
                strong(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                comp.append(w)
                if w == v:
                    break
            if len(comp) > 1 or v in g.successors(v):
                cyclic.update(comp)

    for v in reachable:
        if v not in index:
            strong(v)
    return cyclic


def _reachable(g: RecordTypeGraph, root: int) -> list[int]:
    order, seen = [root], {root}
    i = 0
    while i < len(order):
        for s in g.successors(order[i]):
            if s not in seen:
                seen.add(s)
                order.append(s)
        i += 1
    return order


class _MuPrinter:
    def __init__(self, g: RecordTypeGraph, names: Optional[dict[int, str]], inline_depth: int):
        self.g = g
        self.hints = names or {}
        self.inline_depth = inline_depth
        self.binders: dict[int, str] = {}
        self.used: set[str] = set()
        self.queue: list[int] = []

    def binder(self, n: int) -> str:
        name = self.binders.get(n)
        if name is None:
            hint = self.hints.get(n)
            base = hint[0] if hint else "T"
            name, k = base, 2
            while name in self.used:
                name, k = f"{base}{k}", k + 1
            self.used.add(name)
            self.binders[n] = name
            self.queue.append(n)
        return name

    def ref(self, n: int, depth: int) -> str:
        if n in self.cyclic or depth > self.inline_depth:
            return self.binder(n)
        return self.body(n, depth)

    def body(self, n: int, depth: int) -> str:
        parts = []
        for name, t in self.g.nodes[n]:
            if isinstance(t, FieldOf):
                parts.append(f"{self.ref(t.target, depth + 1)} {name}")
            else:
                params = ", ".join(self.ref(p, depth + 1) for p in t.params)
                parts.append(f"{self.ref(t.ret, depth + 1)} {name}({params})")
        return "{ " + ", ".join(parts) + " }" if parts else "{}"

    def render(self, root: int) -> str:
        self.cyclic = _cyclic_nodes(self.g, _reachable(self.g, root))
        if root in self.cyclic:
            self.binder(root)
            head = None
        else:
            head = "record_type " + self.body(root, 0)
        defs = []
        i = 0
        while i < len(self.queue):
            n = self.queue[i]
            i += 1
            sep = "μ" + self.binders[n] + "." if n in self.cyclic else self.binders[n] + " ="
            defs.append(f"{sep} {self.body(n, 0)}")
        if head is None:
            return "record_type " + " and ".join(defs)
        return " and ".join([head, *defs])


def render_mu(g: RecordTypeGraph, n: int, names: Optional[dict[int, str]] = None, inline_depth: int = 1) -> str:
    """Render node ``n`` in μ-notation.

    Recursive nodes get ``μX.`` binders; other nodes are inlined while nested
    at most ``inline_depth`` deep and otherwise defined as ``X = {...}``.
    Mutually recursive definitions are joined with ``and``. ``names`` maps
    nodes to hint names whose first letter seeds the binder.
    """
    return _MuPrinter(g, names, inline_depth).render(n)
