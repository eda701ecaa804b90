import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS_DIR))

FIXTURES = TESTS_DIR.parent / "fixtures"

from askgraph.ingest import load_graph_json  # noqa: E402
from askgraph.linking import build_index  # noqa: E402
from askgraph.llm import MockLLM  # noqa: E402


@pytest.fixture(scope="session")
def usecase_graph():
    return load_graph_json(FIXTURES / "usecase_graph.json")


@pytest.fixture(scope="session")
def usecase_index(usecase_graph):
    return build_index(usecase_graph)


@pytest.fixture()
def mock_backend():
    return MockLLM(FIXTURES / "mock_llm")


@pytest.fixture()
def fixtures_dir():
    return FIXTURES
