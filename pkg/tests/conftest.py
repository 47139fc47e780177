from pathlib import Path

import pytest

CORPUS = Path(__file__).resolve().parents[1] / "src" / "gridfloer" / "corpus"


@pytest.fixture
def corpus():
    return CORPUS
