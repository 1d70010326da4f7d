import math

import pytest
import torch

from src.kan import (
    KanNetwork,
    base_function,
    init_network,
    kan_forward,
    network_from_document,
    network_to_document,
    param_count,
)
from src.utils.errors import InvalidArgumentError


def test_base_function_values():
    """b(x) = x * sigmoid(x), finite for large inputs."""
    assert base_function(0.0) == 0.0
    assert isinstance(base_function(1.0), float)
    assert math.isclose(base_function(1.0), 1.0 / (1.0 + math.exp(-1.0)), rel_tol=1e-12)
    assert math.isclose(base_function(800.0), 800.0)
    assert base_function(-800.0) == pytest.approx(0.0, abs=1e-300)


@pytest.mark.parametrize(
    "widths,g,k,expected",
    [([2, 10, 1], 5, 3, 300), ([1, 5, 1], 5, 3, 100), ([2, 10, 10, 1], 10, 5, 17 * 130)],
)
def test_param_count_closed_form(widths, g, k, expected):
    """Each edge owns g + k coefficients plus two weights."""
    assert param_count(init_network(widths, g, k)) == expected


def test_forward_shapes():
    """Single points and batches are both accepted."""
    net = init_network([2, 4, 3], 5, 3, input_bounds=[(0.0, 1.0), (0.0, 1.0)])
    assert kan_forward(net, torch.tensor([0.2, 0.3], dtype=torch.float64)).shape == (3,)
    assert kan_forward(net, torch.rand(7, 2, dtype=torch.float64)).shape == (7, 3)


def test_forward_rejects_wrong_dimension():
    """Inputs must match the first width."""
    net = init_network([2, 4, 1], 5, 3)
    with pytest.raises(InvalidArgumentError):
        net(torch.zeros(5, 3, dtype=torch.float64))


def test_init_rejects_bad_widths():
    """Architectures need two or more positive widths."""
    with pytest.raises(InvalidArgumentError):
        init_network([2], 5, 3)
    with pytest.raises(InvalidArgumentError):
        init_network([2, 0, 1], 5, 3)
    with pytest.raises(InvalidArgumentError):
        init_network([2, 3, 1], 5, 3, input_bounds=[(0.0, 1.0)])


def test_init_is_seeded():
    """Equal seeds give equal networks, different seeds differ."""
    a = init_network([2, 5, 1], 5, 3, seed=7).flat_parameters()
    b = init_network([2, 5, 1], 5, 3, seed=7).flat_parameters()
    c = init_network([2, 5, 1], 5, 3, seed=8).flat_parameters()
    assert torch.equal(a, b)
    assert not torch.equal(a, c)


def test_init_distribution():
    """Spline weights start at one and base weights respect their bound."""
    net = init_network([3, 4, 1], 5, 3, seed=2)
    first = net.layers[0]
    assert torch.equal(first.spline_weight, torch.ones_like(first.spline_weight))
    assert first.base_weight.abs().max() <= math.sqrt(6.0 / 7.0)
    assert first.coefficients.std() < 0.2


def test_zero_parameters_give_zero_output():
    """With no weights every edge is silent."""
    net = init_network([2, 3, 1], 5, 3)
    net.load_flat_parameters(torch.zeros(net.param_count(), dtype=torch.float64))
    assert torch.equal(net(torch.rand(4, 2, dtype=torch.float64)), torch.zeros(4, 1, dtype=torch.float64))


def test_scaling_last_layer_scales_output():
    """Doubling the base weights and coefficients of a single layer doubles its output."""
    net = init_network([2, 1], 5, 3, input_bounds=[(0.0, 1.0), (0.0, 1.0)], seed=4)
    x = torch.rand(6, 2, dtype=torch.float64)
    before = net(x)
    layer = net.layers[-1]
    with torch.no_grad():
        layer.base_weight.mul_(2)
        layer.coefficients.mul_(2)
    assert torch.allclose(net(x), 2 * before, atol=1e-14)


def test_flat_parameter_layout():
    """Flat vectors list [w_b, w_s, c...] per edge, input-major."""
    net = init_network([2, 3], 4, 2, seed=5)
    flat = net.flat_parameters()
    layer = net.layers[0]
    n = layer.basis_count
    edge = flat[(1 * 3 + 2) * (n + 2) : (1 * 3 + 2 + 1) * (n + 2)]
    assert edge[0] == layer.base_weight[1, 2]
    assert edge[1] == layer.spline_weight[1, 2]
    assert torch.equal(edge[2:], layer.coefficients[1, 2].detach())


def test_load_flat_parameters_round_trip():
    """Loading a vector and reading it back is lossless."""
    net = init_network([2, 3, 1], 5, 3)
    values = torch.randn(net.param_count(), dtype=torch.float64)
    net.load_flat_parameters(values)
    assert torch.equal(net.flat_parameters(), values)
    with pytest.raises(InvalidArgumentError):
        net.load_flat_parameters(values[:-1])


def test_flat_gradients_follow_layout():
    """Autograd gradients land at the flat positions of their parameters."""
    net = init_network([1, 2, 1], 3, 2, input_bounds=[(0.0, 1.0)], seed=6)
    loss = net(torch.rand(5, 1, dtype=torch.float64)).sum()
    params = list(net.parameters())
    grads = dict(zip(params, torch.autograd.grad(loss, params)))
    flat = net.flat_gradients(grads)
    assert flat.shape == (net.param_count(),)
    first = net.layers[0]
    assert flat[0] == grads[first.base_weight][0, 0]


def test_extend_grid_preserves_single_layer():
    """Nested refinement keeps a one-layer network's output on its input box."""
    net = init_network([2, 2], 5, 3, input_bounds=[(0.0, 1.0), (-1.0, 1.0)], seed=9)
    x = torch.stack([torch.rand(200, dtype=torch.float64), torch.rand(200, dtype=torch.float64) * 2 - 1], dim=1)
    before = net(x).detach()
    net.extend_grid(10)
    assert net.intervals == 10
    assert net.param_count() == 2 * 2 * (10 + 3 + 2)
    assert (net(x).detach() - before).abs().max() <= 1e-6


def test_layer_dimensions_must_chain():
    """A network refuses layers that do not match its widths."""
    a = init_network([2, 3], 5, 3)
    with pytest.raises(InvalidArgumentError):
        KanNetwork([2, 4], list(a.layers))


def test_network_document_round_trip():
    """Documents rebuild an identical network."""
    net = init_network([2, 3, 1], 5, 3, input_bounds=[(0.0, 2.0), (1.0, 3.0)], seed=11)
    net.extend_grid(10)
    copy = network_from_document(network_to_document(net))
    x = torch.rand(9, 2, dtype=torch.float64) * 2 + torch.tensor([0.0, 1.0], dtype=torch.float64)
    assert torch.equal(copy(x), net(x))
    assert copy.grid_bounds() == net.grid_bounds()


def spline_sum(coefficients, knots, degree, x):
    """Sum of c_i B_i(x) with B_i from the scalar Cox-de Boor recursion."""

    def basis(i, p):
        if p == 0:
            return 1.0 if knots[i] <= x < knots[i + 1] else 0.0
        value = 0.0
        if knots[i + p] != knots[i]:
            value += (x - knots[i]) / (knots[i + p] - knots[i]) * basis(i, p - 1)
        if knots[i + p + 1] != knots[i + 1]:
            value += (knots[i + p + 1] - x) / (knots[i + p + 1] - knots[i + 1]) * basis(i + 1, p - 1)
        return value

    return sum(c * basis(i, degree) for i, c in enumerate(coefficients))


def test_single_edge_is_a_spline():
    """A [1, 1] network with w_b = 0 and w_s = 1 evaluates its spline directly."""
    net = init_network([1, 1], 5, 3, input_bounds=[(0.0, 8.0)], seed=2)
    layer = net.layers[0]
    with torch.no_grad():
        layer.base_weight.zero_()
        layer.spline_weight.fill_(1.0)
    knots = layer.grids[0].knots.tolist()
    coefficients = layer.coefficients[0, 0].tolist()
    xs = [0.0, 0.37, 1.6, 3.2, 4.999, 6.5, 7.9]
    out = net(torch.tensor(xs, dtype=torch.float64).unsqueeze(1)).detach()
    for x, value in zip(xs, out[:, 0].tolist()):
        assert value == pytest.approx(spline_sum(coefficients, knots, 3, x), abs=1e-12)


def test_zero_spline_weight_silences_coefficients():
    """With w_s = 0 the coefficients no longer reach the output."""
    net = init_network([2, 3, 1], 5, 3, input_bounds=[(0.0, 1.0), (0.0, 1.0)], seed=6)
    x = torch.rand(9, 2, dtype=torch.float64)
    with torch.no_grad():
        for layer in net.layers:
            layer.spline_weight.zero_()
        before = net(x)
        for layer in net.layers:
            layer.coefficients.add_(torch.randn_like(layer.coefficients))
        after = net(x)
    assert torch.equal(after, before)
