import os

import pytest

os.environ.setdefault("RIGID_EMBED_THREADS", "4")

from rigidembed.catalog import get_entry, load_catalog  # noqa: E402
from rigidembed.solve import monodromy_solve  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: long-running numerical test (full pipeline runs)"
    )


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def g48():
    return get_entry("G_48")


@pytest.fixture(scope="session")
def g48_published(g48):
    return {p.id: p for p in g48.published}


@pytest.fixture(scope="session")
def g48_generic(g48):
    """Generic complex solution set of G_48 (48 solutions), shared."""
    solset = monodromy_solve(g48.graph, seed=0, known_count=48)
    assert len(solset) == 48
    return solset
