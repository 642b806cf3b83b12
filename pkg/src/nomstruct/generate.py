"""Random well-formed, well-typed class programs for property tests and benchmarks."""
from __future__ import annotations

import random
from typing import Optional

from .classes import BOOLEAN, ClassTable, build_class_table
from .syntax import (
    Call,
    ClassDeclAst,
    FieldAccess,
    FieldAst,
    MethodAst,
    ParamAst,
    Return,
    This,
    Var,
)


def random_program(
    rng: random.Random,
    max_classes: int = 8,
    max_members: int = 5,
    *,
    n_classes: Optional[int] = None,
    exact_members: bool = False,
    name_pool: Optional[int] = None,
    max_supers: int = 2,
    max_params: int = 2,
) -> list[ClassDeclAst]:
    """Generate declarations with acyclic inheritance and invariant overriding.

    Member names come from a small shared pool so that unrelated classes
    often end up with overlapping shapes. Type references may point at any
    class, including later ones and the class itself.
    """
    n = n_classes if n_classes is not None else rng.randint(1, max_classes)
    names = [f"K{i}" for i in range(n)]
    pool = [f"m{i}" for i in range(name_pool or max(6, max_members + 2))]
    types = names + [BOOLEAN]

    flat: dict[str, dict[str, tuple]] = {}  # class -> member -> ("f", T) | ("m", params, ret)
    supers_of: dict[str, set] = {}
    decls = []
    for i, c in enumerate(names):
        supers, inherited = [], {}
        candidates = names[:i]
        for s in rng.sample(candidates, min(len(candidates), rng.randint(0, max_supers))):
            if any(k in inherited and inherited[k] != t for k, t in flat[s].items()):
                continue
            supers.append(s)
            for k, t in flat[s].items():
                inherited.setdefault(k, t)
        ancestors = set(supers)
        for s in supers:
            ancestors |= supers_of[s]
        supers_of[c] = ancestors

        own: dict[str, tuple] = {}
        count = max_members if exact_members else rng.randint(0, max_members)
        fresh = [m for m in pool if m not in inherited]
        attempts = 0
        while len(own) < count and attempts < 4 * count + 8:
            attempts += 1
            if exact_members and fresh:
                m = fresh.pop(rng.randrange(len(fresh)))
            else:
                m = rng.choice(pool)
            if m in own:
                continue
            if m in inherited:
                if rng.random() < 0.3:
                    own[m] = inherited[m]
                continue
            if rng.random() < 0.4:
                own[m] = ("f", rng.choice(types))
            else:
                params = tuple(rng.choice(types) for _ in range(rng.randint(0, max_params)))
                own[m] = ("m", params, rng.choice(types))
        merged = dict(inherited)
        for k, t in own.items():
            merged.setdefault(k, t)
        flat[c] = merged
        decls.append((c, supers, own))

    def subsigns(a: str, b: str) -> bool:
        return a == b or b in supers_of.get(a, ())

    members_out = []
    for c, supers, own in decls:
        members = []
        for m, t in own.items():
            if t[0] == "f":
                members.append(FieldAst(t[1], m))
                continue
            params = tuple(ParamAst(pt, f"p{j}") for j, pt in enumerate(t[1]))
            members.append(MethodAst(t[2], m, params, Return(_body(c, m, params, t[2], flat[c], subsigns))))
        members_out.append(ClassDeclAst(
            c, tuple(supers),
            tuple(x for x in members if isinstance(x, FieldAst)),
            tuple(x for x in members if isinstance(x, MethodAst)),
            members=tuple(members),
        ))
    rng.shuffle(members_out)
    return members_out


def _body(cls, method, params, ret, members, subsigns):
    for p in params:
        if subsigns(p.type, ret):
            return Var(p.name)
    if subsigns(cls, ret):
        return This()
    for k, t in members.items():
        if t[0] == "f" and subsigns(t[1], ret):
            return FieldAccess(This(), k)
    # a self-call always has the declared return type
    return Call(This(), method, tuple(Var(p.name) for p in params))


def random_table(rng: random.Random, **kwargs) -> ClassTable:
    return build_class_table(random_program(rng, **kwargs))
