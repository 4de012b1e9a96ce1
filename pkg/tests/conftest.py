import pytest

from rdfviews.datagen import build_corpus
from rdfviews.resources import read_data
from rdfviews.trig import parse_trig

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def small_corpus():
    ds, _ = build_corpus(10_000, seed=0)
    return ds


@pytest.fixture(scope="session")
def small_corpus_manifests():
    _, manifests = build_corpus(10_000, seed=0)
    return manifests


@pytest.fixture(scope="session")
def test2_dataset():
    ds, _ = parse_trig(read_data("test2", "dataset.trig"))
    return ds


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
