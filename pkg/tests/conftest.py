import numpy as np
import pytest

from multiscale_infodyn.model_factory import ModelFactory
from multiscale_infodyn.var import VarModel, validate


@pytest.fixture
def uni():
    return ModelFactory.create_preset("uni")


@pytest.fixture
def bi():
    return ModelFactory.create_preset("bi")


@pytest.fixture
def uni_strong():
    return ModelFactory.create_preset("uni-strong")


@pytest.fixture
def ar1():
    # y_n = 0.5 y_{n-1} + u_n, var(u) = 1, so var(y) = 4/3
    return validate(VarModel(a=[[[0.5]]], sigma=[[1.0]]))


@pytest.fixture
def white_noise():
    return validate(VarModel(a=np.zeros((1, 2, 2)), sigma=np.eye(2)))
