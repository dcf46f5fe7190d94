import pytest

from chi_forge.catalog import Catalog


@pytest.fixture(scope="session")
def catalog():
    return Catalog()


@pytest.fixture(scope="session")
def groups(catalog):
    return dict(catalog.groups())


@pytest.fixture(scope="session")
def metrics(catalog):
    return dict(catalog.metrics())


@pytest.fixture(scope="session")
def actions(catalog):
    return dict(catalog.actions())
