"""Discrete Green's functions assembled from the eigenbasis of ``L_S``.

``normalized`` is the inverse of ``L_S`` (or its pseudoinverse orthogonal to
the null vector when there is no boundary); ``unnormalized`` is
``T^-1/2 normalized T^1/2``, the Green's function of ``Delta_S``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .graph import BoundaryPartition, boundary_of
from .modes import modal_basis
from .spectral import Spectrum


@dataclass(frozen=True, eq=False)
class GreensFunction:
    normalized: np.ndarray
    unnormalized: np.ndarray
    partition: BoundaryPartition
    spectrum: Spectrum

    @property
    def index(self):
        return self.partition.interior

    @property
    def null_vector(self):
        return self.spectrum.null_vector

    def extended(self, g, which="normalized"):
        """The matrix as an operator on all of V, zero outside the interior."""
        M = self.normalized if which == "normalized" else self.unnormalized
        idx = g.indices(self.index)
        out = np.zeros((g.n, g.n))
        out[np.ix_(idx, idx)] = M
        return out


def _assemble(basis, part):
    vals = basis.eigenvalues
    Q = basis.vectors
    inv = np.zeros_like(vals)
    keep = ~basis.zero
    inv[keep] = 1.0 / vals[keep]
    # G(x, y) = sum_i phi_i(x) phi_i(y) / lambda_i over the nonzero modes
    Gn = (Q * inv) @ Q.T
    Gn = 0.5 * (Gn + Gn.T)
    s = basis.sqrt_degrees
    Gu = Gn * (s[None, :] / s[:, None])
    for M in (Gn, Gu):
        M.setflags(write=False)
    return GreensFunction(Gn, Gu, part, basis.spectrum)


def greens_dirichlet(g, part) -> GreensFunction:
    """Green's function of ``L_S`` for an interior whose every component meets the boundary."""
    if not part.has_boundary:
        raise PreconditionError("Dirichlet Green's function needs a nonempty boundary; "
                                "use greens_boundaryless for S = V")
    if not part.touches_boundary:
        comps = [list(c) for c in part.isolated_components]
        raise PreconditionError(f"L_S is singular: interior components {comps} do not touch the boundary")
    basis = modal_basis(g, part)
    if basis.zero.any():
        raise PreconditionError("L_S has a numerically zero eigenvalue")
    return _assemble(basis, part)


def greens_boundaryless(g) -> GreensFunction:
    """Pseudoinverse of ``L`` on a connected graph, annihilating the null vector."""
    if not g.is_connected():
        raise PreconditionError(f"graph is disconnected ({len(g.components())} components); "
                                "the null space of L is not one-dimensional")
    part = boundary_of(g, g.vertices)
    basis = modal_basis(g, part)
    if basis.zero.sum() != 1:
        raise PreconditionError(f"expected one zero eigenvalue, found {int(basis.zero.sum())}")
    return _assemble(basis, part)


def heat_integral(g, part, T):
    """``int_0^T exp(-t L_S) dt`` evaluated mode by mode in closed form."""
    basis = modal_basis(g, part)
    lam = basis.eigenvalues
    coef = np.where(lam > 0, -np.expm1(-lam * T) / np.where(lam > 0, lam, 1.0), T)
    Q = basis.vectors
    return (Q * coef) @ Q.T
