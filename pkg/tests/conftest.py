import pytest

from meanset import load_bundled
from meanset.corpus import BUNDLED


@pytest.fixture(scope="session")
def bundles():
    """Every bundled complex with its point set, loaded once per run."""
    return {name: load_bundled(name) for name in BUNDLED}
