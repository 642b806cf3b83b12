"""Exit criteria. Each test is one criterion; a PASS/FAIL line per criterion
is printed in the ``acceptance criteria`` section of the pytest summary."""
import io
import os
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from nomstruct import corpus_source, load_source
from nomstruct.analysis import Classification, DiagnosticKind, full_report, typecheck_bodies
from nomstruct.classes import build_class_table, is_supershape, shape_of, super_classes
from nomstruct.cli import main
from nomstruct.generate import random_program, random_table
from nomstruct.nominal import signature_closure_of, subsigns
from nomstruct.structural import SubtypeMode, record_graph, struct_equal, struct_subtype
from nomstruct.syntax import show_program

from mutations import MUTATIONS, marker_line, mutated_source
from oracles import declared_ancestors, make_bounded, unroll_depth

FIX = Path(__file__).parent / "fixtures"
MODES = list(SubtypeMode)


def tables(n, seed0):
    for seed in range(seed0, seed0 + n):
        yield random_table(random.Random(seed), max_classes=8, max_members=5)


@pytest.mark.criterion("AC1 reference-corpus conformance (exact, < 1 s)")
def test_ac1_reference_corpus_conformance(criterion):
    start = time.perf_counter()
    t = load_source(corpus_source("object", "abcde", "pair"))

    shapes = {c: shape_of(t, c) for c in ("Object", "A", "B", "C", "D", "E", "Pair")}
    assert shapes == {
        "Object": {"equals"}, "A": set(), "B": set(), "C": {"foo"}, "D": {"bar"}, "E": {"bar", "meth"},
        "Pair": {"equals", "first", "second", "fstEqSnd", "equalTo", "setFirst", "setSecond", "swap"},
    }

    g, node = record_graph(t)
    for a, b in [("B", "A"), ("A", "B"), ("C", "B"), ("D", "B"), ("E", "D"), ("Object", "B"), ("Pair", "Object")]:
        assert struct_subtype(g, node[a], node[b]), (a, b)

    sc = {c: signature_closure_of(t, c) for c in t}
    for a, b in [("B", "A"), ("C", "B"), ("E", "D"), ("Pair", "Object")]:
        assert subsigns(sc[a], sc[b]), (a, b)
    for a, b in [("A", "B"), ("D", "B"), ("D", "A"), ("Object", "B")]:
        assert not subsigns(sc[a], sc[b]), (a, b)

    verdicts = {(p.sub, p.sup): p.classification for p in full_report(t).pairs}
    for pair in [("D", "B"), ("Object", "B"), ("A", "B")]:
        assert verdicts[pair] is Classification.SPURIOUS, pair
    for pair in [("B", "A"), ("C", "B"), ("E", "D"), ("Pair", "Object")]:
        assert verdicts[pair] is Classification.GENUINE, pair

    elapsed = time.perf_counter() - start
    criterion["detail"] = f"{elapsed:.3f}s"
    assert elapsed < 1.0


@pytest.mark.criterion("AC2 soundness: no anomaly over 1000 random tables, both modes (< 60 s)")
def test_ac2_soundness(criterion):
    start = time.perf_counter()
    anomalies, pairs = [], 0
    for i, t in enumerate(tables(1000, 10_000)):
        for mode in MODES:
            r = full_report(t, mode)
            pairs += len(r.pairs)
            anomalies += [(i, mode, p) for p in r.by_class(Classification.ANOMALY)]
    elapsed = time.perf_counter() - start
    criterion["detail"] = f"{pairs} verdicts, {len(anomalies)} anomalies, {elapsed:.1f}s"
    assert not anomalies
    assert elapsed < 60


@pytest.mark.criterion("AC3 oracle equivalence with depth-bounded unrolling over 500 random tables")
def test_ac3_oracle_equivalence(criterion):
    disagreements, checked = [], 0
    for i, t in enumerate(tables(500, 20_000)):
        g, _ = record_graph(t)
        equal, sub = make_bounded(g)
        k = unroll_depth(g)
        n = len(g)
        for a in range(n):
            for b in range(n):
                checked += 1
                if struct_equal(g, a, b) != (equal(a, b, k) and equal(b, a, k)):
                    disagreements.append((i, a, b, "equal"))
                for mode in MODES:
                    if struct_subtype(g, a, b, mode) != sub(a, b, k, mode):
                        disagreements.append((i, a, b, mode))
    criterion["detail"] = f"{checked} node pairs, {len(disagreements)} disagreements"
    assert not disagreements


@pytest.mark.criterion("AC4 relation laws on random tables")
def test_ac4_relation_laws(criterion):
    count = 0
    for seed in range(30_000, 30_300):
        decls = random_program(random.Random(seed))
        t = build_class_table(decls)
        names = list(t)
        g, node = record_graph(t)
        ancestors = declared_ancestors(decls)
        sc = {c: signature_closure_of(t, c) for c in names}
        nom = {(a, b): subsigns(sc[a], sc[b]) for a in names for b in names}
        eq = {(a, b): struct_equal(g, node[a], node[b]) for a in names for b in names}
        rels = [nom] + [{(a, b): struct_subtype(g, node[a], node[b], m) for a in names for b in names}
                        for m in MODES]
        for a in names:
            assert eq[a, a] and all(r[a, a] for r in rels)
            for s in super_classes(t, a):
                assert is_supershape(shape_of(t, a), shape_of(t, s))
            for b in names:
                assert eq[a, b] == eq[b, a]
                assert nom[a, b] == (a == b or b in ancestors.get(a, ()))
                for c in names:
                    for r in rels:
                        if r[a, b] and r[b, c]:
                            assert r[a, c]
                    if eq[a, b] and eq[b, c]:
                        assert eq[a, c]
        count += 1
    criterion["detail"] = f"{count} tables"


@pytest.mark.criterion("AC5 body typechecking: clean corpus, every seeded mutation caught at its line")
def test_ac5_body_typechecking(criterion):
    assert typecheck_bodies(load_source(corpus_source("object", "abcde", "pair"))) == []
    assert len(MUTATIONS) >= 6
    for name, old, new, kind, marker in MUTATIONS:
        src = mutated_source(old, new)
        diags = typecheck_bodies(load_source(src))
        assert [(d.kind, d.pos.line) for d in diags] == [(DiagnosticKind(kind), marker_line(src, marker))], name
    criterion["detail"] = f"{len(MUTATIONS)} mutations"


@pytest.mark.criterion("AC6 determinism: report --format json byte-identical across runs")
def test_ac6_determinism(criterion):
    fixtures = sorted(p for p in FIX.glob("*.cls") if p.name not in {"cyclic.cls", "bad-syntax.cls"})
    for path in fixtures:
        for mode in MODES:
            runs = []
            for hashseed in ("0", "12345"):
                env = dict(os.environ, PYTHONHASHSEED=hashseed)
                proc = subprocess.run(
                    [sys.executable, "-m", "nomstruct", "report", "--format", "json", "--mode", mode.value, str(path)],
                    capture_output=True, env=env, check=True,
                )
                runs.append(proc.stdout)
            assert runs[0] == runs[1], path.name
    criterion["detail"] = f"{len(fixtures)} fixtures x 2 modes"


@pytest.mark.criterion("AC7 scale: report on 100 classes / 500 members in < 5 s")
def test_ac7_scale(criterion, tmp_path):
    decls = random_program(random.Random(7), n_classes=100, max_members=5, exact_members=True, name_pool=40)
    assert len(decls) == 100
    assert sum(len(d.members) for d in decls) == 500
    path = tmp_path / "big.cls"
    path.write_text(show_program(decls))
    timings = []
    for fmt in ("text", "json"):
        start = time.perf_counter()
        assert main(["report", "--format", fmt, str(path)], io.StringIO(), io.StringIO()) == 0
        timings.append(time.perf_counter() - start)
    criterion["detail"] = " / ".join(f"{x:.2f}s" for x in timings)
    assert max(timings) < 5.0
