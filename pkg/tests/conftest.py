import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from toricstab.catalog_io import catalog
from toricstab.soliton import solve_soliton


@pytest.fixture(scope="session")
def catalog_entries():
    return catalog()


@pytest.fixture(scope="session")
def solitons(catalog_entries):
    """Solved soliton vectors for every catalog polytope (computed once)."""
    return {e.name: solve_soliton(e.polytope) for e in catalog_entries}


def entry(entries, name):
    return next(e for e in entries if e.name == name)


@pytest.fixture(scope="session")
def seg(catalog_entries):
    return entry(catalog_entries, "CP1").polytope


@pytest.fixture(scope="session")
def cp2(catalog_entries):
    return entry(catalog_entries, "CP2").polytope


@pytest.fixture(scope="session")
def bl1(catalog_entries):
    return entry(catalog_entries, "Bl1CP2").polytope
