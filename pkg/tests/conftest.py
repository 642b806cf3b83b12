import pytest

from nomstruct import corpus_source, load_source


@pytest.fixture(scope="session")
def figs_source():
    return corpus_source("object", "abcde", "pair")


@pytest.fixture(scope="session")
def figs(figs_source):
    return load_source(figs_source, "figs123.cls")


@pytest.fixture(scope="session")
def abcde():
    return load_source(corpus_source("abcde"), "abcde.cls")


@pytest.fixture(scope="session")
def objects():
    return load_source(corpus_source("object", "pair"), "objects.cls")


ACCEPTANCE_RESULTS = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's outcome for the end-of-run summary."""
    label = request.node.get_closest_marker("criterion").args[0]
    outcome = {"label": label, "ok": False, "detail": ""}
    ACCEPTANCE_RESULTS.append(outcome)
    yield outcome


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    rep = (yield).get_result()
    if rep.when == "call" and item.get_closest_marker("criterion"):
        for r in ACCEPTANCE_RESULTS:
            if r["label"] == item.get_closest_marker("criterion").args[0]:
                r["ok"] = rep.passed


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for r in ACCEPTANCE_RESULTS:
        status = "PASS" if r["ok"] else "FAIL"
        detail = f"  ({r['detail']})" if r["detail"] else ""
        terminalreporter.write_line(f"{status}  {r['label']}{detail}")
