import pytest

from subsym.specio import BUNDLED, bundled_substitution


@pytest.fixture(scope="session")
def tm1d():
    return bundled_substitution("tm1d")


@pytest.fixture(scope="session")
def tm2d():
    return bundled_substitution("tm2d")


@pytest.fixture(scope="session")
def tm3d():
    return bundled_substitution("tm3d")


@pytest.fixture(scope="session")
def cyc3():
    return bundled_substitution("cyc3")


@pytest.fixture(scope="session")
def rig3():
    return bundled_substitution("rig3")


@pytest.fixture(scope="session")
def dbl():
    return bundled_substitution("dbl")


@pytest.fixture(scope="session")
def corpus():
    return {name: bundled_substitution(name) for name in BUNDLED}
