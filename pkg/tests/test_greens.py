import math

import numpy as np
import pytest
from hypothesis import given

from graphpde import laplacian as lap
from graphpde.errors import PreconditionError
from graphpde.generators import complete_graph, path_graph
from graphpde.graph import WeightedGraph, boundary_of
from graphpde.greens import greens_boundaryless, greens_dirichlet, heat_integral
from graphpde.modes import modal_basis

from conftest import dirichlet_setups, graphs


def test_path3_single_interior():
    g = path_graph(3)
    G = greens_dirichlet(g, boundary_of(g, ["b"]))
    np.testing.assert_allclose(G.normalized, [[1.0]], rtol=0, atol=1e-15)
    np.testing.assert_allclose(G.unnormalized, [[1.0]], rtol=0, atol=1e-15)


def test_path4_two_interior():
    g = path_graph(4)
    G = greens_dirichlet(g, boundary_of(g, ["b", "c"]))
    expected = [[4 / 3, 2 / 3], [2 / 3, 4 / 3]]
    np.testing.assert_allclose(G.normalized, expected, rtol=0, atol=1e-14)
    NS = np.array([[1.0, -0.5], [-0.5, 1.0]])
    np.testing.assert_allclose(G.normalized @ NS, np.eye(2), rtol=0, atol=1e-14)


def test_single_edge_boundaryless():
    G = greens_boundaryless(path_graph(2))
    r = 1 / math.sqrt(2)
    np.testing.assert_allclose(G.null_vector, [r, r], rtol=0, atol=1e-15)
    np.testing.assert_allclose(G.normalized, [[0.25, -0.25], [-0.25, 0.25]], rtol=0, atol=1e-15)


def test_k3_boundaryless_projector_form():
    G = greens_boundaryless(complete_graph(3))
    expected = (2 / 3) * (np.eye(3) - np.ones((3, 3)) / 3)
    np.testing.assert_allclose(G.normalized, expected, rtol=0, atol=1e-14)


def test_preconditions():
    g = path_graph(3)
    with pytest.raises(PreconditionError):
        greens_dirichlet(g, boundary_of(g, g.vertices))
    two = WeightedGraph.from_edges([("a", "b", 1), ("c", "d", 1), ("b", "e", 1)])
    with pytest.raises(PreconditionError, match="do not touch"):
        greens_dirichlet(two, boundary_of(two, ["a", "c", "d"]))
    split = WeightedGraph.from_edges([("a", "b", 1), ("c", "d", 1)])
    with pytest.raises(PreconditionError, match="disconnected"):
        greens_boundaryless(split)


def test_extended_view_pads_with_zeros():
    g = path_graph(4)
    G = greens_dirichlet(g, boundary_of(g, ["b", "c"]))
    E = G.extended(g)
    assert E.shape == (4, 4)
    np.testing.assert_array_equal(E[1:3, 1:3], G.normalized)
    assert not E[0].any() and not E[3].any()


@given(dirichlet_setups())
def test_dirichlet_inverse_and_oracle(setup):
    g, part = setup
    G = greens_dirichlet(g, part)
    NS = lap.restrict(lap.normalized_laplacian(g), part).entries
    DS = lap.restrict(lap.discrete_laplacian(g), part).entries
    I = np.eye(len(part.interior))
    assert np.max(np.abs(G.normalized @ NS - I)) <= 1e-8
    assert np.max(np.abs(G.unnormalized @ DS - I)) <= 1e-8
    np.testing.assert_allclose(G.normalized, np.linalg.inv(NS), rtol=0, atol=1e-8)
    # G = T^-1/2 Gn T^1/2 against an elimination inverse of Delta_S
    np.testing.assert_allclose(G.unnormalized, np.linalg.inv(DS), rtol=0, atol=1e-8)
    assert np.array_equal(G.normalized, G.normalized.T)


@given(graphs())
def test_boundaryless_constraint(g):
    G = greens_boundaryless(g)
    N = lap.normalized_laplacian(g).entries
    phi0 = G.null_vector
    np.testing.assert_allclose(phi0, np.sqrt(g.degrees / g.degrees.sum()), rtol=0, atol=1e-15)
    P = np.eye(g.n) - np.outer(phi0, phi0)
    assert np.max(np.abs(G.normalized @ N - P)) <= 1e-8
    assert np.max(np.abs(N @ G.normalized - P)) <= 1e-8
    assert np.max(np.abs(G.normalized @ phi0)) <= 1e-10
    np.testing.assert_allclose(G.normalized, np.linalg.pinv(N), rtol=0, atol=1e-8)


@given(dirichlet_setups())
def test_heat_integral_converges_to_greens(setup):
    g, part = setup
    G = greens_dirichlet(g, part)
    lam1 = modal_basis(g, part).eigenvalues[0]
    T = 30.0 / lam1
    err = np.max(np.abs(heat_integral(g, part, T) - G.normalized))
    assert err <= math.exp(-lam1 * T) / lam1 + 1e-12 * np.max(np.abs(G.normalized))
