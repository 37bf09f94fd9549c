import pytest
from hypothesis import HealthCheck, settings

from perron_sft.corpus import CorpusConfig, irreducible_corpus
from perron_sft.spectral import analyze
from perron_sft.words import validate_spec

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# the four worked examples, by (q, forbidden)
EXAMPLES = {
    "golden": (3, ["01"]),
    "sqrt3": (3, ["00"]),
    "mixed": (5, ["00", "1010"]),
    "block": (5, ["0000", "0001"]),
}


@pytest.fixture(scope="session")
def example_reports():
    return {k: analyze(validate_spec(*v)) for k, v in EXAMPLES.items()}


@pytest.fixture(scope="session")
def corpus():
    return irreducible_corpus(CorpusConfig())


@pytest.fixture(scope="session")
def corpus_reports(corpus):
    return [analyze(s) for s in corpus]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
