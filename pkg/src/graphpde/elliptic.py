"""Closed-form Dirichlet Laplace and Poisson solvers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .graph import BoundaryPartition, VertexSignal, as_signal
from .greens import greens_dirichlet
from .modes import modal_basis


@dataclass(frozen=True)
class DirichletProblem:
    """``Delta f = source`` on the interior with ``f = boundary_values`` on the boundary.

    ``boundary_values`` and ``source`` may be VertexSignals, mappings or
    arrays ordered like ``partition.boundary`` / ``partition.interior``;
    a missing source means the Laplace equation.
    """

    graph: object
    partition: BoundaryPartition
    boundary_values: object
    source: object = None
    _sigma: np.ndarray = field(init=False, repr=False, compare=False)
    _g: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        part = self.partition
        sigma = as_signal(self.boundary_values, part.boundary, "boundary values")
        if self.source is None:
            src = np.zeros(len(part.interior))
        else:
            src = as_signal(self.source, part.interior, "source")
        object.__setattr__(self, "_sigma", sigma)
        object.__setattr__(self, "_g", src)

    @property
    def sigma(self):
        return self._sigma

    @property
    def gfun(self):
        return self._g


def _closure_signal(part, f_interior, sigma):
    values = dict(zip(part.interior, f_interior))
    values.update(zip(part.boundary, sigma))
    return VertexSignal(part.closure, np.array([values[v] for v in part.closure]))


def laplace_interior(p: DirichletProblem):
    """Harmonic extension of the boundary data, interior values only.

    Implements ``f(z) = d_z^-1/2 sum_i phi_i(z)/lambda_i sum_{x in S, y in dS}
    w(x,y) d_x^-1/2 phi_i(x) sigma(y)``. The edge weight factor reduces to 1
    on unit-weight graphs.
    """
    greens_dirichlet(p.graph, p.partition)  # precondition checks
    basis = modal_basis(p.graph, p.partition)
    s = basis.sqrt_degrees
    # flux[x] = sum over boundary neighbours y of w(x, y) sigma(y)
    flux = (basis.forcing @ p.sigma) * s**2
    inner = basis.vectors.T @ (flux / s)
    return (basis.vectors @ (inner / basis.eigenvalues)) / s


def solve_laplace(p: DirichletProblem) -> VertexSignal:
    """Solve ``Delta f = 0`` on S with ``f = sigma`` on dS; returns f on the closure."""
    return _closure_signal(p.partition, laplace_interior(p), p.sigma)


def solve_poisson(p: DirichletProblem) -> VertexSignal:
    """Harmonic part plus ``G @ source``, returned on the closure."""
    f1 = laplace_interior(p)
    G = greens_dirichlet(p.graph, p.partition)
    f2 = G.unnormalized @ p.gfun
    return _closure_signal(p.partition, f1 + f2, p.sigma)


def laplacian_residual(g, part, f: VertexSignal, source=None):
    """``Delta f - source`` on the interior for a signal on the closure."""
    vals = f.as_dict() if isinstance(f, VertexSignal) else dict(f)
    out = np.empty(len(part.interior))
    for i, x in enumerate(part.interior):
        dx = g.degree(x)
        out[i] = sum(w * (vals[x] - vals[y]) for y, w, _ in g.adjacency[x]) / dx
    if source is not None:
        out -= as_signal(source, part.interior, "source")
    return out


def poisson(g, part, sigma: Mapping | None = None, source=None) -> VertexSignal:
    """Convenience wrapper: ``sigma`` defaults to zero on the boundary."""
    if sigma is None:
        sigma = np.zeros(len(part.boundary))
    return solve_poisson(DirichletProblem(g, part, sigma, source))
