"""Shared fixtures: the function families the tests keep reaching for."""

import pytest

from fracineq.funcmodel import parse_function
from fracineq.rlint import QuadratureConfig


@pytest.fixture
def u2():
    return parse_function("1*(u-0)^2 on [0,1]")


@pytest.fixture
def u2_half():
    return parse_function("0.5*(u-0)^2 on [0,1]")


@pytest.fixture
def u15():
    # f' = u^0.5, sits exactly on the s = 1/2 convexity boundary
    return parse_function("0.6666666666666666*(u-0)^1.5 on [0,1]")


@pytest.fixture
def linear():
    return parse_function("1*(u-0)^0 + 1*(u-0)^1 on [0,1]")


@pytest.fixture
def const1():
    return parse_function("1*(u-0)^0 on [0,1]")


@pytest.fixture
def sqrtu():
    # derivative is unbounded at 0
    return parse_function("1*(u-0)^0.5 on [0,1]")


@pytest.fixture
def tight_cfg():
    return QuadratureConfig(rel_tol=1e-13, abs_tol=1e-15, max_subdivisions=20000)
