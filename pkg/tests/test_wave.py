import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from graphpde import laplacian as lap
from graphpde.elliptic import laplacian_residual
from graphpde.errors import PreconditionError
from graphpde.generators import complete_graph, path_graph
from graphpde.graph import VertexSignal, boundary_of
from graphpde.heat import BoundarySignal
from graphpde.wave import (
    WaveKernel,
    WaveState,
    directional_derivative,
    energy,
    gradient,
    solve_wave,
    wave_kernel,
    wave_kernel_dt,
)

from conftest import dirichlet_setups, graphs, seeds


def test_kernel_zero_at_zero():
    g = path_graph(5)
    part = boundary_of(g, ["b", "c", "d"])
    assert not wave_kernel(g, part, 0.0).any()
    np.testing.assert_allclose(wave_kernel_dt(g, part, 0.0), np.eye(3), rtol=0, atol=1e-15)


@pytest.mark.parametrize("t", [0.0, 0.7, 2.0, 9.3])
def test_path3_kernel_is_sine(t):
    g = path_graph(3)
    assert abs(wave_kernel(g, boundary_of(g, ["b"]), t)[0, 0] - math.sin(t)) <= 1e-15


@pytest.mark.parametrize("t", [0.0, 0.5, 3.0])
def test_single_edge_kernel_with_zero_mode(t):
    g = path_graph(2)
    W = wave_kernel(g, boundary_of(g, g.vertices), t)
    s = math.sin(math.sqrt(2) * t) / math.sqrt(2)
    expected = 0.5 * np.array([[t + s, t - s], [t - s, t + s]])
    np.testing.assert_allclose(W, expected, rtol=0, atol=1e-15)


@pytest.mark.parametrize("t", [0.0, 0.5, 2.0, 6.0])
def test_path3_cosine_and_sine(t):
    g = path_graph(3)
    part = boundary_of(g, ["b"])
    zero = BoundarySignal.zeros(part.boundary, 6.0)
    st1 = solve_wave(g, part, [1.0], [0.0], zero, t)
    assert abs(st1.position["b"] - math.cos(t)) <= 1e-15
    assert abs(st1.velocity["b"] + math.sin(t)) <= 1e-15
    assert abs(solve_wave(g, part, [0.0], [1.0], zero, t).position["b"] - math.sin(t)) <= 1e-15


def test_piecewise_constant_boundary_exact():
    # u'' = -u + sigma_a / 2 solved piece by piece in 30-digit arithmetic
    g = path_graph(3)
    part = boundary_of(g, ["b"])
    sig = BoundarySignal(("a", "c"), [0.0, 0.25, 0.5, 0.75], [[1.0, 0.5, 2.0, 0.0], [0.0] * 4])
    st_ = solve_wave(g, part, [0.3], [-0.2], sig, 0.6)
    assert abs(st_.position["b"] - 0.21059443659238267455) <= 1e-15
    assert abs(st_.velocity["b"] - -0.062988017681670311075) <= 1e-15
    assert st_.position["a"] == 2.0 and st_.velocity["a"] == 0.0


def test_negative_time_rejected_for_solutions_only():
    g = path_graph(3)
    part = boundary_of(g, ["b"])
    with pytest.raises(PreconditionError):
        solve_wave(g, part, [0.0], [0.0], BoundarySignal.zeros(part.boundary, 1.0), -0.5)
    assert abs(wave_kernel(g, part, -0.5)[0, 0] - math.sin(-0.5)) <= 1e-15


def test_directional_derivative_examples():
    g = path_graph(2)
    assert directional_derivative(g, {"a": 0.0, "b": 1.0}, "a", "b") == 1.0
    g3 = path_graph(3)
    f = {"a": 0.0, "b": 2.0, "c": 0.0}
    assert abs(directional_derivative(g3, f, "b", "a") - -1.4142135623730950488) <= 1e-15
    np.testing.assert_array_equal(gradient(g3, {"a": 1.0, "b": 1.0, "c": 1.0}, "b"), [0.0, 0.0])
    with pytest.raises(PreconditionError):
        directional_derivative(g3, f, "a", "c")


def test_energy_examples():
    g = path_graph(3)
    part = boundary_of(g, ["b"])
    zero = VertexSignal.zeros(part.closure)
    assert energy(g, part, WaveState(zero, zero, 0.0)) == 0.0
    kick = VertexSignal(part.closure, [0.0, 1.0, 0.0])
    assert energy(g, part, WaveState(zero, kick, 0.0)) == 2.0


@given(dirichlet_setups(), seeds)
def test_energy_conserved_without_boundary_data(setup, seed):
    g, part = setup
    rng = np.random.default_rng(seed)
    f, g0 = rng.standard_normal(len(part.interior)), rng.standard_normal(len(part.interior))
    zero = BoundarySignal.zeros(part.boundary, 10.0)
    e0 = energy(g, part, solve_wave(g, part, f, g0, zero, 0.0))
    for t in np.linspace(0, 10, 25):
        e = energy(g, part, solve_wave(g, part, f, g0, zero, t))
        assert abs(e - e0) <= 1e-8 * max(1.0, e0)


@given(dirichlet_setups(), seeds)
def test_initial_conditions(setup, seed):
    g, part = setup
    rng = np.random.default_rng(seed)
    f, g0 = rng.standard_normal(len(part.interior)), rng.standard_normal(len(part.interior))
    sig = BoundarySignal.constant(part.boundary, rng.standard_normal(len(part.boundary)), 1.0)
    s0 = solve_wave(g, part, f, g0, sig, 0.0)
    np.testing.assert_allclose(s0.position.on(part.interior), f, rtol=0, atol=1e-10)
    np.testing.assert_allclose(s0.velocity.on(part.interior), g0, rtol=0, atol=1e-10)


@given(dirichlet_setups(), seeds, st.floats(0.1, 5.0))
def test_pde_residual(setup, seed, t):
    g, part = setup
    rng = np.random.default_rng(seed)
    f, g0 = rng.standard_normal(len(part.interior)), rng.standard_normal(len(part.interior))
    sig = BoundarySignal.constant(part.boundary, rng.standard_normal(len(part.boundary)), 6.0)
    h = 1e-4
    up, u0, um = (solve_wave(g, part, f, g0, sig, t + s).position for s in (h, 0.0, -h))
    utt = (up.on(part.interior) - 2 * u0.on(part.interior) + um.on(part.interior)) / h**2
    np.testing.assert_allclose(utt, -laplacian_residual(g, part, u0), rtol=0, atol=1e-3)


@given(dirichlet_setups(max_n=10), seeds, st.floats(0.0, 6.0))
def test_matches_first_order_system_exponential(setup, seed, t):
    g, part = setup
    rng = np.random.default_rng(seed)
    n = len(part.interior)
    f, g0 = rng.standard_normal(n), rng.standard_normal(n)
    DS = lap.restrict(lap.discrete_laplacian(g), part).entries
    A = np.block([[np.zeros((n, n)), np.eye(n)], [-DS, np.zeros((n, n))]])
    ref = expm(t * A) @ np.concatenate([f, g0])
    s = solve_wave(g, part, f, g0, BoundarySignal.zeros(part.boundary, 6.0), t)
    np.testing.assert_allclose(s.position.on(part.interior), ref[:n], rtol=0, atol=1e-9)
    np.testing.assert_allclose(s.velocity.on(part.interior), ref[n:], rtol=0, atol=1e-9)


@given(graphs(max_n=8), st.floats(-5.0, 5.0))
def test_time_symmetry_without_boundary(g, t):
    W = WaveKernel(g, boundary_of(g, g.vertices))
    np.testing.assert_allclose(W(-t), -W(t), rtol=0, atol=1e-12)
    np.testing.assert_allclose(W.dt(-t), W.dt(t), rtol=0, atol=1e-12)


@given(dirichlet_setups(), seeds, st.floats(-1.0, 1.0))
def test_linear_in_initial_data(setup, seed, delta):
    g, part = setup
    rng = np.random.default_rng(seed)
    n = len(part.interior)
    f, g0, h = rng.standard_normal(n), rng.standard_normal(n), rng.standard_normal(n)
    sig = BoundarySignal.constant(part.boundary, rng.standard_normal(len(part.boundary)), 3.0)
    zero = BoundarySignal.zeros(part.boundary, 3.0)
    base = solve_wave(g, part, f, g0, sig, 2.0).position.values
    moved = solve_wave(g, part, f + delta * h, g0, sig, 2.0).position.values
    resp = solve_wave(g, part, h, np.zeros(n), zero, 2.0).position.values
    np.testing.assert_allclose(moved - base, delta * resp, rtol=0, atol=1e-9)


def test_deterministic_bits():
    g = complete_graph(5)
    part = boundary_of(g, ["a", "b", "c"])
    sig = BoundarySignal.sampled(part.boundary, lambda t: [math.sin(t), math.cos(t)], 4.0, 40)
    a = solve_wave(g, part, [0.1, 0.2, 0.3], [0.0, 1.0, 0.0], sig, 3.3)
    b = solve_wave(g, part, [0.1, 0.2, 0.3], [0.0, 1.0, 0.0], sig, 3.3)
    assert a.position.values.tobytes() == b.position.values.tobytes()
    assert a.velocity.values.tobytes() == b.velocity.values.tobytes()


def test_boundaryless_zero_mode_drifts_linearly():
    g = path_graph(2)
    part = boundary_of(g, g.vertices)
    s = solve_wave(g, part, [0.0, 0.0], [1.0, 1.0], None, 2.5)
    np.testing.assert_allclose(s.position.values, [2.5, 2.5], rtol=0, atol=1e-14)
