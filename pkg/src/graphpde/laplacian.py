"""Discrete Laplacians of a weighted graph as dense matrices.

Sign convention: every Laplacian here is positive semi-definite, so the heat
equation reads ``u_t = -Delta u``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PartitionError

KINDS = ("combinatorial", "discrete", "normalized", "normalized_adjacency")


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense operator with a recorded vertex ordering for its rows/columns."""

    kind: str
    entries: np.ndarray
    index: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        m = np.array(self.entries, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "index", tuple(self.index))

    @property
    def shape(self):
        return self.entries.shape

    def row_of(self, v):
        return self.index.index(v)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def combinatorial_laplacian(g):
    """``L = T - W``: degrees on the diagonal, ``-w(u,v)`` on edges."""
    W = g.weight_matrix()
    return OperatorMatrix("combinatorial", np.diag(W.sum(axis=1)) - W, g.vertices)


def discrete_laplacian(g):
    """``Delta = T^-1 L``, the random-walk Laplacian (not symmetric in general)."""
    W = g.weight_matrix()
    d = W.sum(axis=1)
    L = np.diag(d) - W
    return OperatorMatrix("discrete", L / d[:, None], g.vertices)


def normalized_laplacian(g):
    """``T^-1/2 L T^-1/2``."""
    W = g.weight_matrix()
    d = W.sum(axis=1)
    s = 1.0 / np.sqrt(d)
    L = np.diag(d) - W
    N = s[:, None] * L * s[None, :]
    # exact symmetry; the two products above can differ in the last bit
    N = 0.5 * (N + N.T)
    # no self-loops, so the diagonal is d_u / d_u = 1
    np.fill_diagonal(N, 1.0)
    return OperatorMatrix("normalized", N, g.vertices)


def normalized_adjacency(g):
    """Row-normalized weights ``w(u,v) / d_u``, so that ``Delta = I - A~`` exactly."""
    W = g.weight_matrix()
    return OperatorMatrix("normalized_adjacency", W / W.sum(axis=1)[:, None], g.vertices)


def laplacian(g, kind):
    builders = {
        "combinatorial": combinatorial_laplacian,
        "discrete": discrete_laplacian,
        "normalized": normalized_laplacian,
        "normalized_adjacency": normalized_adjacency,
    }
    try:
        return builders[kind](g)
    except KeyError:
        raise ValueError(f"unknown operator kind {kind!r}; choose from {KINDS}") from None


def restrict(m, part):
    """Principal submatrix on the interior vertices of ``part`` (Dirichlet restriction)."""
    if not part.interior:
        raise PartitionError("cannot restrict to an empty interior")
    pos = {v: i for i, v in enumerate(m.index)}
    try:
        idx = np.array([pos[v] for v in part.interior], dtype=int)
    except KeyError as exc:
        raise PartitionError(f"interior vertex {exc.args[0]!r} not indexed by operator") from None
    return OperatorMatrix(m.kind, m.entries[np.ix_(idx, idx)], part.interior)


def quadratic_form(g, x):
    """``sum_{(u,v) in E} w(u,v) (x_u - x_v)^2``, the Dirichlet energy of ``x``."""
    iu, iv, w, _ = g.edge_arrays()
    x = np.asarray(x, dtype=float)
    return float(np.sum(w * (x[iu] - x[iv]) ** 2))
