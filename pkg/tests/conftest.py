import random

import pytest

from lhv import (
    QQ,
    AlgebraElement,
    GammaConfig,
    QuadraticField,
    TruncationBox,
)


@pytest.fixture
def cfg():
    """Rank-one integer lattice over the rationals."""
    return GammaConfig(QQ, [1])


@pytest.fixture
def box():
    return TruncationBox([(-2, 2)], (-2, 2))


@pytest.fixture
def qfield():
    return QuadraticField(2)


@pytest.fixture
def qcfg(qfield):
    """Rank-two lattice 1, sqrt(2) over Q(sqrt(2))."""
    return GammaConfig(qfield, [qfield.one, qfield.sqrt_gen()])


@pytest.fixture
def qbox():
    return TruncationBox([(-1, 1), (-1, 1)], (-1, 1))


@pytest.fixture
def rng():
    return random.Random(12345)


def make_l(cfg, g, i):
    coords = g if isinstance(g, tuple) else (g,)
    return AlgebraElement.basis_element(cfg, "L", coords, i)


def make_h(cfg, g, i):
    coords = g if isinstance(g, tuple) else (g,)
    return AlgebraElement.basis_element(cfg, "H", coords, i)
