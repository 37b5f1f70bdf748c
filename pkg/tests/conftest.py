import importlib

import numpy as np
import pytest

from rlpwidth import _kernels_py


def _available_backends():
    mods = [("python", _kernels_py)]
    try:
        mods.append(("cython", importlib.import_module("rlpwidth._kernels_c")))
    except ImportError:
        pass
    return mods


BACKENDS = _available_backends()


@pytest.fixture(params=[b[1] for b in BACKENDS], ids=[b[0] for b in BACKENDS])
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
