import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import schurhorn as sh


@pytest.fixture(scope="session")
def clebsch():
    return sh.gen_clebsch()


@pytest.fixture(scope="session")
def gq24():
    return sh.gen_gq24()


@pytest.fixture(scope="session")
def t8():
    return sh.gen_triangular(8)


@pytest.fixture(scope="session")
def t9():
    return sh.gen_triangular(9)


@pytest.fixture(scope="session")
def paley13():
    return sh.gen_paley(13)
