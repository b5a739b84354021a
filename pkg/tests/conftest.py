import pytest

from pytopoapal import load_jewel
from pytopoapal.testkit import GenConfig, random_model


@pytest.fixture(scope="session")
def jewel():
    return load_jewel()


@pytest.fixture(scope="session")
def theta(jewel):
    return jewel.generators["theta"]


@pytest.fixture(scope="session")
def theta_prime(jewel):
    return jewel.generators["thetaPrime"]


@pytest.fixture
def small_cfg():
    return GenConfig.from_preset("small", seed=7)


@pytest.fixture
def small_model(small_cfg):
    return random_model(small_cfg)
