"""Shared fixtures: catalog instances and their filter spectra"""

import pytest
from hypothesis import settings as hypothesis_settings

from app.services.catalog_service import catalog_service
from app.services.filter_service import filter_service

hypothesis_settings.register_profile("orthodual", max_examples=60, deadline=None)
hypothesis_settings.load_profile("orthodual")

ORTHO_NAMES = [name for name, _ in catalog_service.ortholattices()]
SMALL_ORTHO_NAMES = ["O2", "TwoByTwo", "O6", "MO2", "B4", "B8", "O10"]


def builtin(name):
    return catalog_service.builtin(name)


def dual(name):
    return filter_service.dual_space(catalog_service.builtin(name))


@pytest.fixture
def two_by_two():
    return builtin("TwoByTwo")


@pytest.fixture
def o6():
    return builtin("O6")


@pytest.fixture
def o10():
    return builtin("O10")


@pytest.fixture
def mo2():
    return builtin("MO2")


@pytest.fixture
def b8():
    return builtin("B8")


@pytest.fixture
def m3():
    return builtin("M3_lattice_only")
