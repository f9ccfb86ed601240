"""共享测试夹具"""

from pathlib import Path

import pytest

from sandman.llm_gateway import MockBehaviour, MockChatProvider
from sandman.persona import load_lexicon
from sandman.psychometrics import load_item_bank
from sandman.scheduler import load_catalog

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def fixture_bank():
    return load_item_bank(FIXTURES / "mpi_fixture.jsonl")


@pytest.fixture
def planner():
    return MockChatProvider(seed=0, behaviour=MockBehaviour.SCHEDULE_PLANNER)


@pytest.fixture
def answerer():
    return MockChatProvider(seed=0, behaviour=MockBehaviour.MPI_ANSWERER)
