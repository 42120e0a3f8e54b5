import pytest


def pytest_addoption(parser):
    parser.addoption("--nk_samples", default=None, help="[property tests] number of random samples per test")
    parser.addoption("--nk_bound", default=None, help="[solver tests] symmetric search bound")


@pytest.fixture
def samples(request):
    raw = request.config.getoption("--nk_samples")
    return int(raw) if raw is not None else None


@pytest.fixture
def search_bound(request):
    raw = request.config.getoption("--nk_bound")
    return int(raw) if raw is not None else None
