"""Eigenbasis of the Dirichlet-restricted normalized Laplacian, shared by all kernels."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import PreconditionError
from .laplacian import normalized_laplacian, restrict
from .spectral import Spectrum, eigendecompose_symmetric

ZERO_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class ModalBasis:
    """Spectrum of ``L_S`` plus the degree factors needed to move between ``Delta`` and ``L``.

    ``zero`` flags eigenvalues treated as exactly zero. When the interior has
    no boundary and is connected, the computed null vector is replaced by the
    analytic one, ``sqrt(d_k / sum d)``.
    """

    partition: object
    spectrum: Spectrum
    sqrt_degrees: np.ndarray
    zero: np.ndarray
    forcing: np.ndarray

    @property
    def eigenvalues(self):
        return self.spectrum.eigenvalues

    @property
    def vectors(self):
        return self.spectrum.eigenvectors

    @property
    def lambda_min_positive(self):
        pos = self.eigenvalues[~self.zero]
        return float(pos[0]) if pos.size else float("nan")

    def to_modes(self, x):
        """Coefficients of ``T^1/2 x`` in the eigenbasis."""
        return self.vectors.T @ (self.sqrt_degrees * x)

    def from_modes(self, c):
        """Inverse of :meth:`to_modes`."""
        return (self.vectors @ c) / self.sqrt_degrees

    def kernel(self, coefficients):
        """``T^-1/2 Phi diag(c) Phi^T T^1/2``, i.e. entries ``sum_i c_i phi_i(u) phi_i(v) sqrt(d_v/d_u)``."""
        Q = self.vectors
        M = (Q * coefficients) @ Q.T
        return M * (self.sqrt_degrees[None, :] / self.sqrt_degrees[:, None])


def boundary_coupling(g, part):
    """Matrix ``C`` with ``C[y, z] = w(y, z) / d_y`` for ``y`` in S, ``z`` in dS."""
    C = np.zeros((len(part.interior), len(part.boundary)))
    bpos = {z: j for j, z in enumerate(part.boundary)}
    for i, y in enumerate(part.interior):
        dy = g.degree(y)
        for z, w, _ in g.adjacency[y]:
            if z in bpos:
                C[i, bpos[z]] = w / dy
    return C


@lru_cache(maxsize=32)
def modal_basis(g, part) -> ModalBasis:
    if not part.interior:
        raise PreconditionError("interior set is empty")
    if part.has_boundary and not part.touches_boundary:
        comps = [list(c) for c in part.isolated_components]
        raise PreconditionError(f"interior components without boundary contact: {comps}")
    LS = restrict(normalized_laplacian(g), part)
    spec = eigendecompose_symmetric(LS.entries, index=part.interior)
    vals = spec.eigenvalues.copy()
    vecs = spec.eigenvectors.copy()
    zero = vals <= ZERO_RTOL * max(1.0, float(np.max(np.abs(vals))))
    null = None
    if zero.any():
        vals[zero] = 0.0
        d = g.degrees[g.indices(part.interior)]
        if not part.has_boundary and zero.sum() == 1 and len(g.components(part.interior)) == 1:
            null = np.sqrt(d / d.sum())
            vecs[:, np.flatnonzero(zero)[0]] = null
    spec = Spectrum(vals, vecs, null, part.interior)
    sqrt_d = np.sqrt(g.degrees[g.indices(part.interior)])
    zero.setflags(write=False)
    sqrt_d.setflags(write=False)
    C = boundary_coupling(g, part)
    C.setflags(write=False)
    return ModalBasis(part, spec, sqrt_d, zero, C)
