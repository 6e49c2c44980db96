import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from annograph import extract_profile, format_edge_list, make_fixture_graph

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def fixture_graph():
    """The bundled deterministic topology (19,036 nodes). Built once."""
    return make_fixture_graph()


@pytest.fixture(scope="session")
def fixture_profile(fixture_graph):
    return extract_profile(fixture_graph)


@pytest.fixture(scope="session")
def fixture_edge_file(fixture_graph, tmp_path_factory):
    path = tmp_path_factory.mktemp("fixture") / "fixture.txt"
    path.write_text(format_edge_list(fixture_graph))
    return path


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
