import pytest

from hjlab import run_experiment


@pytest.fixture(scope="session")
def experiment_reports():
    """Run experiments once per session; tests share the cached reports."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = run_experiment(name)
        return cache[name]

    return get
