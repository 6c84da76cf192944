from pathlib import Path

import pytest

from cdsm import Workspace, load_workspace

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
CASE_STUDY_DIR = DATA_DIR / "case-study-t1059"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def case_study_dir() -> Path:
    return CASE_STUDY_DIR


@pytest.fixture(scope="session")
def case_study() -> Workspace:
    return load_workspace(CASE_STUDY_DIR)
