import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from graphpde import laplacian as lap
from graphpde.elliptic import DirichletProblem, laplacian_residual, solve_laplace
from graphpde.errors import PreconditionError, SignalError
from graphpde.generators import path_graph, random_connected_graph, random_interior
from graphpde.graph import WeightedGraph, boundary_of
from graphpde.heat import BoundarySignal, HeatKernel, derived_forcing, heat_kernel, solve_heat
from graphpde.modes import boundary_coupling, modal_basis

from conftest import dirichlet_setups, graphs, seeds

times = st.floats(0.0, 8.0)


def test_kernel_identity_at_zero():
    g = path_graph(5)
    np.testing.assert_allclose(heat_kernel(g, boundary_of(g, ["b", "c", "d"]), 0.0), np.eye(3),
                               rtol=0, atol=1e-15)


@pytest.mark.parametrize("t", [0.0, 0.3, 1.0, 4.5])
def test_path3_kernel_scalar(t):
    g = path_graph(3)
    assert abs(heat_kernel(g, boundary_of(g, ["b"]), t)[0, 0] - math.exp(-t)) <= 1e-15


@pytest.mark.parametrize("t", [0.0, 0.25, 1.7])
def test_single_edge_kernel_two_modes(t):
    g = path_graph(2)
    K = heat_kernel(g, boundary_of(g, g.vertices), t)
    e = math.exp(-2 * t)
    np.testing.assert_allclose(K, 0.5 * np.array([[1 + e, 1 - e], [1 - e, 1 + e]]), rtol=0, atol=1e-15)


def test_negative_time_rejected():
    g = path_graph(3)
    with pytest.raises(ValueError):
        heat_kernel(g, boundary_of(g, ["b"]), -1.0)


def test_derived_forcing_examples():
    g = path_graph(3)
    part = boundary_of(g, ["b"])
    sig = BoundarySignal.constant(part.boundary, {"a": 1.0, "c": 0.0}, 1.0)
    assert derived_forcing(g, part, sig, 0.5)["b"] == 0.5
    zero = BoundarySignal.zeros(part.boundary, 1.0)
    assert derived_forcing(g, part, zero, 0.5)["b"] == 0.0
    g5 = path_graph(5)
    p5 = boundary_of(g5, ["b", "c", "d"])
    sig5 = BoundarySignal.constant(p5.boundary, [2.0, 2.0], 1.0)
    # c has no boundary neighbour
    assert derived_forcing(g5, p5, sig5, 0.0).as_dict() == {"b": 1.0, "c": 0.0, "d": 1.0}


@pytest.mark.parametrize("t", [0.0, 0.5, 2.0, 5.0])
def test_path3_decay_and_relaxation(t):
    g = path_graph(3)
    part = boundary_of(g, ["b"])
    zero = BoundarySignal.zeros(part.boundary, 5.0)
    ones = BoundarySignal.constant(part.boundary, 1.0, 5.0)
    assert abs(solve_heat(g, part, [1.0], zero, t)["b"] - math.exp(-t)) <= 1e-15
    assert abs(solve_heat(g, part, [0.0], ones, t)["b"] - (1 - math.exp(-t))) <= 1e-15
    assert solve_heat(g, part, [0.0], ones, t)["a"] == 1.0


def test_piecewise_constant_boundary_exact():
    # u' = -u + sigma_a / 2 solved piece by piece in 30-digit arithmetic
    g = path_graph(3)
    part = boundary_of(g, ["b"])
    sig = BoundarySignal(("a", "c"), [0.0, 0.25, 0.5, 0.75], [[1.0, 0.5, 2.0, 0.0], [0.0] * 4])
    assert abs(solve_heat(g, part, [0.3], sig, 0.6)["b"] - 0.38778163168390339219) <= 1e-15


def test_boundary_signal_validation():
    with pytest.raises(SignalError, match="start"):
        BoundarySignal(("a",), [0.1, 0.2], [[1.0, 1.0]])
    with pytest.raises(SignalError, match="uniform"):
        BoundarySignal(("a",), [0.0, 0.1, 0.3], [[1.0, 1.0, 1.0]])
    with pytest.raises(SignalError, match="increasing"):
        BoundarySignal(("a",), [0.0, 0.0], [[1.0, 1.0]])
    with pytest.raises(SignalError, match="shape"):
        BoundarySignal(("a", "b"), [0.0, 1.0], [[1.0, 1.0]])
    sig = BoundarySignal(("a",), [0.0, 0.5, 1.0], [[1.0, 2.0, 3.0]])
    assert sig.at(0.49)[0] == 1.0 and sig.at(0.5)[0] == 2.0 and sig.at(1.0)[0] == 3.0
    with pytest.raises(SignalError, match="outside"):
        sig.at(1.5)


def test_signal_must_match_boundary_and_cover_time():
    g = path_graph(3)
    part = boundary_of(g, ["b"])
    with pytest.raises(SignalError):
        solve_heat(g, part, [0.0], None, 1.0)
    with pytest.raises(SignalError):
        solve_heat(g, part, [0.0], BoundarySignal.zeros(("a",), 1.0), 0.5)
    with pytest.raises(SignalError, match="cover"):
        solve_heat(g, part, [0.0], BoundarySignal.zeros(("a", "c"), 1.0), 2.0)


def test_isolated_interior_component_rejected():
    g = WeightedGraph.from_edges([("a", "b", 1), ("c", "d", 1), ("b", "e", 1)])
    part = boundary_of(g, ["a", "c", "d"])
    with pytest.raises(PreconditionError):
        HeatKernel(g, part)


def test_boundaryless_heat_preserves_weighted_mass():
    g = random_connected_graph(8, 3)
    part = boundary_of(g, g.vertices)
    f = np.random.default_rng(1).standard_normal(8)
    u = solve_heat(g, part, f, None, 3.0).values
    assert math.isclose(g.degrees @ u, g.degrees @ f, rel_tol=1e-12, abs_tol=1e-12)


@given(dirichlet_setups(max_n=10), times)
def test_kernel_matches_matrix_exponential(setup, t):
    g, part = setup
    DS = lap.restrict(lap.discrete_laplacian(g), part).entries
    np.testing.assert_allclose(heat_kernel(g, part, t), expm(-t * DS), rtol=0, atol=1e-10)


@given(dirichlet_setups(), times, times)
def test_semigroup(setup, t1, t2):
    g, part = setup
    K = HeatKernel(g, part)
    np.testing.assert_allclose(K(t1 + t2), K(t1) @ K(t2), rtol=0, atol=1e-9)


@given(dirichlet_setups(), seeds)
def test_maximum_principle(setup, seed):
    g, part = setup
    rng = np.random.default_rng(seed)
    f = rng.uniform(0, 1, len(part.interior))
    sig = BoundarySignal.sampled(part.boundary, lambda t: rng.uniform(0, 1, len(part.boundary)), 10.0, 15)
    for t in np.linspace(0, 10, 21):
        assert solve_heat(g, part, f, sig, t).values.min() >= -1e-10


@given(graphs(), seeds, times, times)
def test_huygens_without_boundary(g, seed, t, delta):
    part = boundary_of(g, g.vertices)
    f = np.random.default_rng(seed).standard_normal(g.n)
    ut = solve_heat(g, part, f, None, t).values
    later = solve_heat(g, part, f, None, t + delta).values
    np.testing.assert_allclose(later, heat_kernel(g, part, delta) @ ut, rtol=0, atol=1e-9)


@given(dirichlet_setups(), seeds, st.floats(0.1, 5.0))
def test_pde_residual(setup, seed, t):
    g, part = setup
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(len(part.interior))
    sig = BoundarySignal.constant(part.boundary, rng.standard_normal(len(part.boundary)), 6.0)
    h = 1e-5
    up, um = (solve_heat(g, part, f, sig, t + s).on(part.interior) for s in (h, -h))
    u = solve_heat(g, part, f, sig, t)
    np.testing.assert_allclose((up - um) / (2 * h), -laplacian_residual(g, part, u), rtol=0, atol=1e-4)


@given(dirichlet_setups(), seeds)
def test_long_time_limit(setup, seed):
    g, part = setup
    rng = np.random.default_rng(seed)
    sigma = rng.standard_normal(len(part.boundary))
    lam1 = modal_basis(g, part).eigenvalues[0]
    T = 40.0 / lam1
    u = solve_heat(g, part, rng.standard_normal(len(part.interior)),
                   BoundarySignal.constant(part.boundary, sigma, T), T)
    np.testing.assert_allclose(u.values, solve_laplace(DirichletProblem(g, part, sigma)).values,
                               rtol=0, atol=1e-6)


@given(dirichlet_setups())
def test_kernel_positive_on_connected_interior(setup):
    g, part = setup
    if len(g.components(part.interior)) != 1:
        return
    assert heat_kernel(g, part, 1.0).min() >= -1e-12


def test_refinement_converges_to_continuous_boundary_data():
    # sigma(z, t) = sin(t + z-phase): sampling on finer grids converges at first order
    g = random_connected_graph(9, 11)
    part = boundary_of(g, random_interior(g, 5))
    phases = np.arange(len(part.boundary), dtype=float)
    DS = lap.restrict(lap.discrete_laplacian(g), part).entries
    C = boundary_coupling(g, part)
    f = np.linspace(-1, 1, len(part.interior))
    T = 2.0
    ref = solve_ivp(lambda t, u: -DS @ u + C @ np.sin(t + phases), (0, T), f,
                    method="DOP853", rtol=1e-12, atol=1e-12).y[:, -1]
    errors = []
    for steps in (20, 40, 80, 160):
        sig = BoundarySignal.sampled(part.boundary, lambda t: np.sin(t + phases), T, steps)
        errors.append(np.max(np.abs(solve_heat(g, part, f, sig, T).on(part.interior) - ref)))
    ratios = [a / b for a, b in zip(errors, errors[1:])]
    assert all(1.7 < r < 2.3 for r in ratios), ratios
    assert errors[-1] < 1e-2
