import random

import pytest
from hypothesis import given, settings, strategies as st

from nomstruct.classes import UnknownClass, super_classes
from nomstruct.generate import random_program, random_table
from nomstruct.classes import build_class_table
from nomstruct.nominal import (
    NominalView,
    SignatureEnvironment,
    env_extends,
    signature_closure_of,
    signature_environment_of,
    signature_of,
    subsigns,
    super_sigs,
)

from oracles import declared_ancestors


@pytest.fixture(scope="module")
def sc(figs):
    return {c: signature_closure_of(figs, c) for c in figs}


def test_rendered_signatures(figs):
    assert signature_of(figs, "Object").render() == "sig Object { equals: Object->Boolean }"
    assert signature_of(figs, "A").render() == "sig A {}"
    assert signature_of(figs, "B").render() == "sig B ext A {}"
    assert signature_of(figs, "C").render() == "sig C ext B { foo: D->D }"
    assert signature_of(figs, "E").render() == "sig E ext D { bar: ()->A, meth: ()->A }"
    assert signature_of(figs, "Pair").render() == (
        "sig Pair ext Object { equals: Object->Boolean, first: Object, second: Object, "
        "fstEqSnd: ()->Boolean, equalTo: Pair->Boolean, setFirst: Object->Pair, "
        "setSecond: Object->Pair, swap: ()->Pair }"
    )


def test_signature_of_a_has_empty_ext(figs):
    assert signature_of(figs, "A").ext == ()


def test_flattening_is_observable(figs):
    assert [n for n, _ in signature_of(figs, "E").members] == ["bar", "meth"]


@pytest.mark.parametrize("cls, env", [
    ("Object", {"Object", "Boolean"}),
    ("A", {"A"}),
    ("B", {"A", "B"}),
    ("C", {"A", "B", "C", "D"}),  # C's foo mentions D
    ("D", {"A", "D"}),
    ("E", {"A", "D", "E"}),
    ("Pair", {"Object", "Boolean", "Pair"}),
])
def test_environments(figs, cls, env):
    se = signature_environment_of(figs, cls)
    assert set(se) == env
    assert se.is_closed()


def test_closures(sc):
    assert sc["Pair"].root == "Pair" and set(sc["Pair"].env) == {"Object", "Boolean", "Pair"}
    assert set(sc["A"].env) == {"A"}
    assert set(sc["D"].env) == {"A", "D"}


def test_env_extension_listing(sc):
    env = {c: s.env for c, s in sc.items()}
    assert env_extends(env["B"], env["A"])
    assert not env_extends(env["A"], env["B"])
    assert env_extends(env["C"], env["B"])
    assert env_extends(env["E"], env["D"])
    assert env_extends(env["Pair"], env["Object"])
    assert env_extends(env["D"], env["A"])
    assert not env_extends(env["Object"], env["B"])
    assert not env_extends(env["D"], env["B"])


def test_env_extension_requires_identical_signatures(figs):
    a = signature_of(figs, "A")
    other_a = type(a)("A", (), signature_of(figs, "D").members)
    assert not env_extends(SignatureEnvironment([other_a]), SignatureEnvironment([a]))


def test_super_sigs(sc):
    assert super_sigs(sc["D"]) == set()
    assert super_sigs(sc["C"]) == {"B", "A"}
    assert super_sigs(sc["Pair"]) == {"Object"}


def test_subsigning_listing(sc):
    assert subsigns(sc["B"], sc["A"])
    assert not subsigns(sc["A"], sc["B"])
    assert subsigns(sc["C"], sc["B"])
    assert subsigns(sc["E"], sc["D"])
    assert subsigns(sc["Pair"], sc["Object"])
    assert not subsigns(sc["D"], sc["B"])
    assert not subsigns(sc["D"], sc["A"])
    assert not subsigns(sc["Object"], sc["B"])


def test_unclosed_cse_gives_same_verdicts(figs, sc):
    # the unclosed {A, B, C} environment reaches the same verdicts against A and B
    unclosed_cse = SignatureEnvironment(signature_of(figs, c) for c in "ABC")
    for other in "AB":
        assert env_extends(unclosed_cse, sc[other].env) == env_extends(sc["C"].env, sc[other].env)
    assert not unclosed_cse.is_closed()


def test_unknown_class(figs):
    with pytest.raises(UnknownClass):
        signature_of(figs, "Nope")
    with pytest.raises(UnknownClass):
        signature_environment_of(figs, "Nope")
    with pytest.raises(UnknownClass):
        NominalView(figs).subsigns("Nope", "Nope")


def test_view_matches_direct_calls(figs, sc):
    view = NominalView(figs)
    for a in figs:
        for b in figs:
            assert view.subsigns(a, b) == subsigns(sc[a], sc[b])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_subsigning_coincides_with_declared_inheritance(seed):
    decls = random_program(random.Random(seed))
    t = build_class_table(decls)
    ancestors = declared_ancestors(decls)
    closures = {c: signature_closure_of(t, c) for c in t}
    for a in t:
        assert closures[a].env.is_closed()
        for b in t:
            expected = a == b or b in ancestors.get(a, ())
            assert subsigns(closures[a], closures[b]) == expected
            assert (a == b or b in super_classes(t, a)) == expected


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_relation_laws(seed):
    t = random_table(random.Random(seed))
    closures = [signature_closure_of(t, c) for c in t]
    envs = [c.env for c in closures]
    for x in closures:
        assert subsigns(x, x)
    for x in closures:
        for y in closures:
            if not subsigns(x, y):
                continue
            for z in closures:
                if subsigns(y, z):
                    assert subsigns(x, z)
    for e in envs:
        assert env_extends(e, e)
        for f in envs:
            if env_extends(e, f) and env_extends(f, e):
                assert e == f
            for g in envs:
                if env_extends(e, f) and env_extends(f, g):
                    assert env_extends(e, g)
