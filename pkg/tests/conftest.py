import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

CORPUS = ROOT / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"

CORPUS_NAMES = ["balance_mix", "gait_sequence", "paddling", "reaching"]


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture(scope="session", params=CORPUS_NAMES)
def corpus_file(request) -> Path:
    return CORPUS / f"{request.param}.am"


def load_corpus_model(name: str):
    """Parse and fully check one corpus file; fails the test on diagnostics."""
    from amdsl import semantics
    from amdsl.parser import parse_system

    path = CORPUS / f"{name}.am"
    model, diags = parse_system(path.read_text(encoding="utf-8"), file=str(path))
    assert model is not None, [d.render() for d in diags]
    resolved, sem_diags = semantics.analyze(model)
    assert resolved is not None, [d.render() for d in sem_diags]
    return resolved
