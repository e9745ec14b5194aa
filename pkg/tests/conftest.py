"""Shared fixtures: cached operator sets, small cubed-sphere grids and seeded generators."""

import csv
from functools import lru_cache

import numpy as np
import pytest

from discretization.fields import Basis, VectorFieldV
from discretization.operators2d import Discrete2DOperators
from grid.cubed_sphere import PointSet, build_cubed_sphere
from operators.sbp1d import OperatorOrder, build_operator_set


ALL_ORDERS = list(OperatorOrder)
SPHERE_NC = 16


@lru_cache(maxsize=None)
def operator_set(order: OperatorOrder, N: int, length: float = 1.0):
    return build_operator_set(order, N, length / N)


@lru_cache(maxsize=None)
def sphere(Nc: int = SPHERE_NC):
    return build_cubed_sphere(Nc)


@lru_cache(maxsize=None)
def sphere_operators(order: OperatorOrder, Nc: int = SPHERE_NC) -> Discrete2DOperators:
    return Discrete2DOperators(sphere(Nc), order)


def read_rows(path):
    with open(path, newline="") as handle:
        return list(csv.reader(handle))


def random_covariant(grid, rng) -> VectorFieldV:
    return VectorFieldV(
        rng.standard_normal(grid.shape(PointSet.X1)),
        rng.standard_normal(grid.shape(PointSet.X2)),
        Basis.COVARIANT,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def grid16():
    return sphere(SPHERE_NC)


@pytest.fixture(params=ALL_ORDERS, ids=lambda o: o.value)
def ops16(request):
    return sphere_operators(request.param)
