import pytest
from hypothesis import settings

from pncalc.fixtures import FIXTURE_NAMES, load_fixture

settings.register_profile("pncalc", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("pncalc")


@pytest.fixture(scope="session")
def fx():
    """Built fixture structures keyed by name."""
    return {name: load_fixture(name).structure.build() for name in FIXTURE_NAMES}
