import numpy as np
import pytest

from mkpolar.kernel import builtin_kernel
from mkpolar.transform import KernelSequence


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def seq12():
    return KernelSequence.parse("2x2x3")


@pytest.fixture(scope="session")
def T2():
    return builtin_kernel("T2")


@pytest.fixture(scope="session")
def T3():
    return builtin_kernel("T3")


@pytest.fixture(scope="session")
def T5():
    return builtin_kernel("T5")
