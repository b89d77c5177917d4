import pytest

from lrspp.materials import DielectricModel, SILVER, surface_plasma_frequency


@pytest.fixture(scope="session")
def silver() -> DielectricModel:
    return SILVER


@pytest.fixture(scope="session")
def silver_lossless() -> DielectricModel:
    return SILVER.lossless()


@pytest.fixture(scope="session")
def w_sp() -> float:
    return surface_plasma_frequency(SILVER)
