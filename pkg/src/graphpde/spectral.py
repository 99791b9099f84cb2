"""Dense symmetric eigendecomposition by cyclic Jacobi rotations, and Rayleigh quotients.

The sweep applies ``n/2`` disjoint rotations at a time (round-robin pair
ordering) so each round is a handful of vectorized row/column updates. The
arithmetic is fixed by the input bits, which makes the output deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, PreconditionError, SignalError
from .graph import as_signal

OFF_TOL = 1e-13
MAX_SWEEPS = 30
CLUSTER_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues with orthonormal eigenvectors stored as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    null_vector: np.ndarray | None = None
    index: tuple = ()

    def __post_init__(self):
        for name in ("eigenvalues", "eigenvectors", "null_vector"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.array(arr, dtype=float)
                arr.setflags(write=False)
                object.__setattr__(self, name, arr)

    def __len__(self):
        return len(self.eigenvalues)

    def reconstruct(self):
        Q = self.eigenvectors
        return (Q * self.eigenvalues) @ Q.T

    def eigenspaces(self, rtol=CLUSTER_RTOL):
        """Group numerically equal eigenvalues; returns ``[(mean eigenvalue, projector)]``."""
        return [
            (float(np.mean(self.eigenvalues[idx])), self.eigenvectors[:, idx] @ self.eigenvectors[:, idx].T)
            for idx in cluster_eigenvalues(self.eigenvalues, rtol)
        ]


def cluster_eigenvalues(values, rtol=CLUSTER_RTOL):
    """Index groups of consecutive sorted eigenvalues closer than ``rtol * max(1, |lambda|_max)``."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    tol = rtol * max(1.0, float(np.max(np.abs(values))))
    groups = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [np.array(g, dtype=int) for g in groups]


@lru_cache(maxsize=64)
def _round_robin(n):
    """Pairings covering every (p, q) once per sweep, in rounds of disjoint pairs."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < n and b < n]
        if pairs:
            p = np.array([a for a, _ in pairs], dtype=int)
            q = np.array([b for _, b in pairs], dtype=int)
            rounds.append((p, q))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a):
    # direct sum; subtracting the diagonal from the full norm cancels catastrophically
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def jacobi_eigh(m, tol=OFF_TOL, max_sweeps=MAX_SWEEPS):
    """Raw Jacobi iteration: returns unsorted ``(eigenvalues, eigenvectors)``."""
    a = np.array(m, dtype=float, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.linalg.norm(a))
    if n <= 1 or scale == 0.0:
        return np.diag(a).copy(), v
    rounds = _round_robin(n)
    off = _off_norm(a)
    for _ in range(max_sweeps):
        if off <= tol * scale:
            break
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            diff = a[q, q] - a[p, p]
            # tangent of the rotation angle, in a form that cannot overflow
            sgn = np.where(diff >= 0, 1.0, -1.0)
            denom = diff + sgn * np.hypot(diff, 2.0 * apq)
            t = 2.0 * apq / np.where(active, denom, 1.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            c = np.where(active, c, 1.0)
            s = np.where(active, s, 0.0)
            rp, rq = a[p, :], a[q, :]
            a[p, :], a[q, :] = c[:, None] * rp - s[:, None] * rq, s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, p], a[:, q]
            a[:, p], a[:, q] = cp * c - cq * s, cp * s + cq * c
            a[p, q] = 0.0
            a[q, p] = 0.0
            vp, vq = v[:, p], v[:, q]
            v[:, p], v[:, q] = vp * c - vq * s, vp * s + vq * c
        off = _off_norm(a)
    else:
        if off > tol * scale:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e}, "
                f"target {tol * scale:.3e})"
            )
    return np.diag(a).copy(), v


def _canonical_signs(vectors):
    vectors = vectors.copy()
    for j in range(vectors.shape[1]):
        k = int(np.argmax(np.abs(vectors[:, j])))
        if vectors[k, j] < 0:
            vectors[:, j] = -vectors[:, j]
    return vectors


def eigendecompose_symmetric(m, index=(), tol=OFF_TOL, max_sweeps=MAX_SWEEPS) -> Spectrum:
    """Full eigendecomposition of a real symmetric matrix.

    Eigenvalues are ascending. Each eigenvector is flipped so that its first
    entry of largest magnitude is nonnegative.

    Raises
    ------
    PreconditionError
        If ``m`` is not square or not symmetric to ``1e-10`` relative.
    ConvergenceError
        If the off-diagonal norm is still above target after ``max_sweeps``.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {m.shape}")
    norm = float(np.max(np.abs(m))) if m.size else 0.0
    asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asym > 1e-10 * norm:
        raise PreconditionError(f"matrix is not symmetric (max |M - M^T| = {asym:.3e})")
    vals, vecs = jacobi_eigh(0.5 * (m + m.T), tol, max_sweeps)
    order = np.argsort(vals, kind="stable")
    return Spectrum(vals[order], _canonical_signs(vecs[:, order]), index=tuple(index))


def rayleigh_quotient(g, part, f):
    """Edge-difference energy on the closure over the degree-weighted mass on the interior.

    ``f`` lives on the closure ``S + dS``; each undirected edge with both ends in
    the closure contributes once to the numerator.
    """
    vals = as_signal(f, part.closure, "f")
    pos = {v: i for i, v in enumerate(part.closure)}
    num = 0.0
    for e in g.edges:
        if e.u in pos and e.v in pos:
            num += (vals[pos[e.u]] - vals[pos[e.v]]) ** 2 * e.weight
    den = sum(vals[pos[x]] ** 2 * g.degree(x) for x in part.interior)
    if den == 0.0:
        raise SignalError("Rayleigh quotient undefined: f vanishes on the interior")
    return float(num / den)
