import pytest

from cahnallen.closure import run_derivation
from cahnallen.reduction import EvolutionEquation, WaveFrame, reduce_to_ode
from cahnallen.solutions import catalog_by_id, enumerate_catalog


@pytest.fixture(scope="session")
def report():
    return run_derivation(reduce_to_ode(EvolutionEquation(3), WaveFrame()))


@pytest.fixture(scope="session")
def catalog1():
    return enumerate_catalog(1.0)


@pytest.fixture(scope="session")
def table1():
    return catalog_by_id(1.0)
