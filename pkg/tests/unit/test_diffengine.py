import math

import pytest
import torch

from src.decomposition import build_fbkan, multilevel_decomposition
from src.diffengine import ParameterGradient, eval_jet, loss_gradient, scalar_output
from src.kan import base_function
from src.problems import physics_test_1
from src.training import LossWeights, SampleCounts, build_samples, compute_loss
from src.utils.errors import InvalidArgumentError, NumericalFailureError


def analytic(x):
    return torch.sin(x[:, 0]) * x[:, 1] ** 2


def test_jet_of_analytic_function():
    """Value, gradient and Hessian diagonal of sin(x) y^2."""
    x = torch.tensor([[0.3, 1.5], [-1.0, 0.2]], dtype=torch.float64)
    jet = eval_jet(analytic, x)
    s, c = torch.sin(x[:, 0]), torch.cos(x[:, 0])
    y = x[:, 1]
    assert torch.allclose(jet.value, s * y**2)
    assert torch.allclose(jet.first, torch.stack([c * y**2, 2 * s * y], dim=1))
    assert torch.allclose(jet.second_diag, torch.stack([-s * y**2, 2 * s], dim=1))


def test_detached_jet_in_several_dimensions():
    """Without create_graph every axis still gets its second derivative."""
    x = torch.tensor([[0.3, 1.5, -0.4], [-1.0, 0.2, 0.7]], dtype=torch.float64)

    def f(p):
        return torch.sin(p[:, 0]) * p[:, 1] ** 2 + p[:, 2] ** 3

    jet = eval_jet(f, x, order=2, create_graph=False)
    s = torch.sin(x[:, 0])
    expected = torch.stack([-s * x[:, 1] ** 2, 2 * s, 6 * x[:, 2]], dim=1)
    assert torch.allclose(jet.second_diag, expected)
    assert not jet.second_diag.requires_grad


def test_base_function_slope_at_origin():
    """b(x) = x sigmoid(x) has b'(0) = 1/2."""
    jet = eval_jet(lambda p: base_function(p[:, 0]), torch.zeros(1, 1, dtype=torch.float64), order=1)
    assert jet.first[0, 0].item() == pytest.approx(0.5, abs=1e-14)


def test_jet_orders():
    """Lower orders leave the higher fields empty."""
    x = torch.tensor([0.3, 1.5], dtype=torch.float64)
    value_only = eval_jet(analytic, x, order=0)
    assert value_only.first is None and value_only.second_diag is None
    first_only = eval_jet(analytic, x, order=1)
    assert first_only.first.shape == (1, 2) and first_only.second_diag is None
    with pytest.raises(InvalidArgumentError):
        eval_jet(analytic, x, order=3)


def test_jet_of_input_independent_model():
    """Constant models have zero derivatives."""
    jet = eval_jet(lambda x: torch.ones(x.shape[0], dtype=torch.float64), torch.rand(4, 2, dtype=torch.float64))
    assert torch.equal(jet.first, torch.zeros(4, 2, dtype=torch.float64))
    assert torch.equal(jet.second_diag, torch.zeros(4, 2, dtype=torch.float64))


def test_jet_addition():
    """Jets add componentwise."""
    x = torch.rand(3, 2, dtype=torch.float64)
    total = eval_jet(analytic, x) + eval_jet(analytic, x)
    assert torch.allclose(total.second_diag, 2 * eval_jet(analytic, x).second_diag)


def test_scalar_output_rejects_vectors():
    """Only scalar-valued models have a jet."""
    with pytest.raises(InvalidArgumentError):
        scalar_output(torch.zeros(3, 2))


@pytest.mark.parametrize("seed", range(10))
def test_fbkan_jet_matches_finite_differences(seed):
    """Model derivatives, POU weights included, match central differences."""
    gen = torch.Generator().manual_seed(100 + seed)
    totals = [[1], [4], [1, 4]][seed % 3]
    model = build_fbkan(multilevel_decomposition([(0.0, 1.0), (-1.0, 1.0)], totals), [2, 4, 1], 5, 3, seed=seed)
    x = torch.rand(8, 2, generator=gen, dtype=torch.float64) * torch.tensor([0.8, 1.6]) + torch.tensor([0.1, -0.8])
    jet = eval_jet(model, x, create_graph=False)

    def f(points):
        with torch.no_grad():
            return scalar_output(model(points))

    for axis in range(2):
        e = torch.zeros(2, dtype=torch.float64)
        h = 1e-5
        e[axis] = h
        fd_first = (f(x + e) - f(x - e)) / (2 * h)
        assert torch.allclose(jet.first[:, axis], fd_first, rtol=1e-5, atol=1e-6)
        h = 1e-4
        e[axis] = h
        fd_second = (f(x + e) - 2 * f(x) + f(x - e)) / h**2
        assert torch.allclose(jet.second_diag[:, axis], fd_second, rtol=1e-3, atol=1e-3)


def test_loss_gradient_matches_finite_differences():
    """Parameter gradients of the ODE loss match central differences."""
    problem = physics_test_1()
    model = build_fbkan(multilevel_decomposition(problem.domain.extent, [4]), [1, 3, 1], 5, 3, seed=0)
    samples = build_samples(problem, SampleCounts(n_r=60, n_ic=1), seed=0)
    weights = LossWeights(lambda_ic=1.0, lambda_r=1 / 40)

    def evaluate(m):
        return compute_loss(m, samples, weights, problem)

    grad = loss_gradient(model, evaluate)
    assert isinstance(grad, ParameterGradient)
    assert grad.values.shape == (model.param_count(),)

    base = model.flat_parameters()
    indices = torch.randperm(base.numel(), generator=torch.Generator().manual_seed(1))[:25]
    h = 1e-6
    for i in indices.tolist():
        shifted = base.clone()
        shifted[i] += h
        model.load_flat_parameters(shifted)
        up = float(evaluate(model).total)
        shifted[i] -= 2 * h
        model.load_flat_parameters(shifted)
        down = float(evaluate(model).total)
        model.load_flat_parameters(base)
        assert grad.values[i] == pytest.approx((up - down) / (2 * h), rel=1e-4, abs=1e-7)


def test_loss_gradient_of_constant_loss(model_1d):
    """Losses that ignore the parameters have zero gradient."""
    grad = loss_gradient(model_1d, lambda m: torch.tensor(2.5, dtype=torch.float64))
    assert torch.equal(grad.values, torch.zeros(model_1d.param_count(), dtype=torch.float64))
    assert grad.loss == 2.5


def test_loss_gradient_rejects_non_finite(model_1d):
    """A NaN loss is a numerical failure."""
    with pytest.raises(NumericalFailureError) as info:
        loss_gradient(model_1d, lambda m: m(torch.zeros(1, 1, dtype=torch.float64)).sum() * math.nan)
    assert info.value.term == "total"
