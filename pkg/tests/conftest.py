import numpy as np
import pytest

from isgsim import MediumSpec, PhaseGrid, tm_yag_isg, tm_yag_lambda, tm_yag_standard


@pytest.fixture(scope="session")
def grid():
    return PhaseGrid(256)


@pytest.fixture(scope="session")
def tm5():
    return tm_yag_isg()


@pytest.fixture(scope="session")
def standard():
    return tm_yag_standard()


@pytest.fixture(scope="session")
def lam():
    return tm_yag_lambda()


@pytest.fixture(scope="session")
def med_od2():
    return MediumSpec(alpha0=1.0, optical_depth=2.0)


@pytest.fixture(scope="session")
def od_sweep():
    return np.round(0.05 * np.arange(1, 61), 10)
