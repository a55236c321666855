import importlib

import numpy as np
import pytest

from har_ensemble import _kernels_py


def _backends():
    mods = [pytest.param(_kernels_py, id="python")]
    try:
        mods.append(pytest.param(importlib.import_module("har_ensemble._kernels"), id="cython"))
    except ImportError:
        mods.append(pytest.param(None, id="cython", marks=pytest.mark.skip("extension not built")))
    return mods


@pytest.fixture(params=_backends())
def kernels(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def blobs(rng, n_per_class=30, centers=((-3, -3), (3, 3), (3, -3)), spread=0.5):
    X = np.concatenate([rng.normal(c, spread, size=(n_per_class, len(c))) for c in centers])
    y = np.repeat(np.arange(len(centers)), n_per_class)
    return X, y


def xor_set(rng, n_per_cluster=25, spread=0.3):
    centers = [(-1, -1), (1, 1), (-1, 1), (1, -1)]
    X = np.concatenate([rng.normal(c, spread, size=(n_per_cluster, 2)) for c in centers])
    y = np.repeat([0, 0, 1, 1], n_per_cluster)
    return X, y


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
