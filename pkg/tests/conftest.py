import pytest
import torch

from src.config import FBKAN_RUN_SLOW
from src.decomposition import build_fbkan, multilevel_decomposition


def pytest_collection_modifyitems(config, items):
    if FBKAN_RUN_SLOW:
        return
    skip = pytest.mark.skip(reason="set FBKAN_RUN_SLOW=1 to run reproduction tests")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def quiet_base(model):
    """Zero every base weight so hidden activations stay inside the hidden grid range."""
    with torch.no_grad():
        for net in model.iter_networks():
            for layer in net.layers:
                layer.base_weight.zero_()
    return model


@pytest.fixture
def model_1d():
    decomposition = multilevel_decomposition([(0.0, 8.0)], [4])
    return build_fbkan(decomposition, [1, 3, 1], intervals=5, degree=3, seed=0)


@pytest.fixture
def model_2d():
    decomposition = multilevel_decomposition([(-1.0, 1.0), (-1.0, 1.0)], [1, 4])
    return build_fbkan(decomposition, [2, 3, 1], intervals=4, degree=3, seed=1)


@pytest.fixture
def tiny_document():
    return {
        "name": "tiny",
        "problem": {"name": "data1"},
        "model": {"widths": [1, 3, 1], "grid": 3, "levels": [2]},
        "training": {"iterations": 6, "eval_every": 2, "counts": {"n_data": 64}},
    }


@pytest.fixture
def quiet_model_1d(model_1d):
    return quiet_base(model_1d)
