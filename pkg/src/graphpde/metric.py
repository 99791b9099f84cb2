"""Edge-based spectrum of a graph's geometric realization.

Each edge ``e`` is an interval ``[0, l_e]``; an eigenfunction is
``A cos(omega x + B)`` on every edge, continuous at vertices, and its vertex
values satisfy the matching condition

    sum_{e=(u,v)} (f(v) - cos(omega l_e) f(u)) / sin(omega l_e) = 0

at every vertex ``u``. For equal edge lengths the frequencies follow in
closed form from the spectrum of the normalized adjacency matrix; for general
lengths they are located as zeros of the symmetric matrix ``M(omega)`` whose
rows are the matching conditions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GraphFormatError, PoleError, PreconditionError
from .graph import VertexSignal, as_signal
from .spectral import cluster_eigenvalues, eigendecompose_symmetric

TWO_PI = 2.0 * math.pi
POLE_TOL = 1e-8
GUARD = 1e-6
BRACKET_TOL = 1e-10
CERTIFY_RTOL = 1e-7
SNAP_TOL = 1e-10


@dataclass(frozen=True)
class MetricEigenvalue:
    """One frequency ``omega = base + period * window`` with its multiplicity.

    ``family`` is ``"arccos"`` or ``"reflected"`` for the two closed-form
    branches, ``"pi"`` for multiples of pi (over the edge length), ``"secular"``
    for scanned roots and ``"pole"`` for pole locations met by a scan.
    """

    base: float
    window: int
    multiplicity: int
    family: str
    adjacency_eigenvalue: float | None = None
    residual: float | None = None
    period: float = TWO_PI

    @property
    def omega(self):
        return self.base + self.period * self.window

    @property
    def lam(self):
        return self.omega ** 2


@dataclass(frozen=True)
class MetricSpectrum:
    entries: tuple
    source: str
    excluded: tuple = ()
    diagnostics: tuple = ()

    @property
    def frequencies(self):
        return self.entries

    def omegas(self, include_excluded=False):
        """Flat ascending frequencies, each repeated by its multiplicity."""
        items = list(self.entries) + (list(self.excluded) if include_excluded else [])
        out = [e.omega for e in items for _ in range(e.multiplicity)]
        return np.array(sorted(out))

    def window(self, k):
        return tuple(e for e in self.entries if e.window == k)

    def count_up_to(self, omega_max):
        """Number of frequencies ``<= omega_max`` with multiplicity, excluded ones included."""
        return sum(e.multiplicity for e in self.entries + self.excluded if e.omega <= omega_max)


@dataclass(frozen=True)
class EdgeEigenfunction:
    """``f|_e(x) = A_e cos(omega x + B_e)`` on each edge, oriented as declared."""

    omega: float
    edges: tuple  # (u, v, length, A, B)
    trace: VertexSignal
    residual: float = field(default=0.0)

    def evaluate(self, k, x):
        _, _, _, A, B = self.edges[k]
        return A * np.cos(self.omega * np.asarray(x, dtype=float) + B)


def _edge_lengths(g, lengths):
    if lengths is None:
        return g.lengths
    ln = np.asarray(lengths, dtype=float).reshape(-1)
    if ln.shape[0] != len(g.edges):
        raise GraphFormatError(f"{ln.shape[0]} lengths for {len(g.edges)} edges")
    if np.any(ln <= 0):
        raise GraphFormatError("edge lengths must be positive")
    return ln


def _near_pi_multiple(x, tol=POLE_TOL):
    r = x / math.pi
    return np.abs(r - np.round(r)) <= tol


def _check_poles(g, ln, omega):
    bad = np.flatnonzero(_near_pi_multiple(omega * ln))
    if bad.size:
        e = g.edges[bad[0]]
        raise PoleError(f"omega * length is a multiple of pi on edge {e.u!r}-{e.v!r} "
                        f"(omega = {omega!r}, length = {ln[bad[0]]!r})", edge=(e.u, e.v))


def secular_matrix(g, lengths, omega):
    """Symmetric ``M(omega)`` with ``(M f)_u`` equal to the matching condition at ``u``."""
    ln = _edge_lengths(g, lengths)
    _check_poles(g, ln, omega)
    return _secular_unchecked(g, ln, omega)


def _secular_unchecked(g, ln, omega):
    iu, iv, _, _ = g.edge_arrays()
    s = np.sin(omega * ln)
    c = np.cos(omega * ln)
    M = np.zeros((g.n, g.n))
    M[iu, iv] = 1.0 / s
    M[iv, iu] = 1.0 / s
    diag = np.zeros(g.n)
    np.add.at(diag, iu, -c / s)
    np.add.at(diag, iv, -c / s)
    M[np.arange(g.n), np.arange(g.n)] = diag
    return M


def vertex_condition_residual(g, lengths, omega, trace):
    """Per-vertex value of the matching sum for a vertex trace (graph vertex order)."""
    ln = _edge_lengths(g, lengths)
    _check_poles(g, ln, omega)
    f = as_signal(trace, g.vertices, "trace")
    out = np.zeros(g.n)
    for e, le in zip(g.edges, ln):
        i, j = g.index(e.u), g.index(e.v)
        s, c = math.sin(omega * le), math.cos(omega * le)
        out[i] += (f[j] - c * f[i]) / s
        out[j] += (f[i] - c * f[j]) / s
    return out


def certify(g, lengths, omega, trace):
    """Max vertex-condition residual relative to ``max |trace| * ||M(omega)||_inf``.

    Scaling by the secular matrix norm keeps the measure meaningful close to
    poles, where the raw residual grows like ``1 / sin^2``.
    """
    f = as_signal(trace, g.vertices, "trace")
    scale = float(np.max(np.abs(f))) if f.size else 0.0
    if scale == 0.0:
        return 0.0
    res = vertex_condition_residual(g, lengths, omega, f)
    norm = float(np.max(np.abs(secular_matrix(g, lengths, omega)).sum(axis=1)))
    return float(np.max(np.abs(res))) / (scale * norm)


# -- equal edge lengths: closed form -----------------------------------------

def adjacency_eigenpairs(g):
    """Eigenvalues and eigenvectors of the topological normalized adjacency ``A(u,v) = 1/deg u``.

    Computed through the symmetric conjugate ``D^-1/2 A D^-1/2``; eigenvectors
    are returned as columns ``D^-1/2 psi`` normalized to unit degree-weighted
    norm. Edge weights play no role in the geometric realization.
    """
    iu, iv, _, _ = g.edge_arrays()
    A = np.zeros((g.n, g.n))
    A[iu, iv] = 1.0
    A[iv, iu] = 1.0
    deg = A.sum(axis=1)
    s = 1.0 / np.sqrt(deg)
    spec = eigendecompose_symmetric(s[:, None] * A * s[None, :], index=g.vertices)
    return spec.eigenvalues, spec.eigenvectors * s[:, None], deg


def unit_length_spectrum(g, k_max) -> MetricSpectrum:
    """Closed-form frequencies for a graph whose edges all have the same length ``l``.

    Window ``k`` covers ``omega l`` in ``[2 pi k, 2 pi (k + 1))``, for
    ``k < k_max``. Each adjacency eigenvalue ``mu`` contributes
    ``arccos(mu)`` and ``2 pi - arccos(mu)`` per window with its multiplicity;
    every positive multiple of pi gains ``|E| - |V|`` on top of what
    ``mu = +-1`` contribute there. Multiples of pi go to ``excluded``.
    """
    if int(k_max) != k_max or k_max < 1:
        raise PreconditionError(f"k_max must be a positive integer, got {k_max!r}")
    k_max = int(k_max)
    ln = g.lengths
    if np.max(np.abs(ln - ln[0])) > 1e-12 * ln[0]:
        raise PreconditionError("closed form needs equal edge lengths; use find_metric_eigenvalues")
    l0 = float(ln[0])
    period = TWO_PI / l0
    mu, vecs, _ = adjacency_eigenpairs(g)

    pi_mult = {j: 0 for j in range(2 * k_max)}  # omega l = j pi
    bases = []
    for idx in cluster_eigenvalues(mu, SNAP_TOL):
        m = float(np.mean(mu[idx]))
        mult = len(idx)
        if abs(m - 1.0) <= SNAP_TOL:
            for k in range(k_max):
                pi_mult[2 * k] += mult
                if 2 * k + 2 < 2 * k_max:
                    pi_mult[2 * k + 2] += mult
        elif abs(m + 1.0) <= SNAP_TOL:
            for k in range(k_max):
                pi_mult[2 * k + 1] += 2 * mult
        else:
            theta = math.acos(m)
            for family, x in (("arccos", theta), ("reflected", TWO_PI - theta)):
                res = max(certify(g, ln, x / l0, vecs[:, i]) for i in idx)
                bases.append((x / l0, mult, family, m, res))

    diagnostics = []
    excess = len(g.edges) - g.n
    for j in range(1, 2 * k_max):
        total = pi_mult[j] + excess
        if total < 0:
            diagnostics.append(f"multiplicity at omega*l = {j}*pi would be {total}; clamped to 0")
            total = 0
        pi_mult[j] = total

    entries = [
        MetricEigenvalue(base, k, mult, family, m, res, period)
        for base, mult, family, m, res in bases
        for k in range(k_max)
    ]
    excluded = [
        MetricEigenvalue((j % 2) * math.pi / l0, j // 2, mult, "pi", period=period)
        for j, mult in sorted(pi_mult.items()) if mult > 0
    ]
    entries.sort(key=lambda e: (e.omega, e.family))
    return MetricSpectrum(tuple(entries), "closed-form-unit", tuple(excluded), tuple(diagnostics))


# -- general lengths: secular scan -------------------------------------------

def _negative_count(g, ln, omega):
    return int(np.sum(np.linalg.eigvalsh(_secular_unchecked(g, ln, omega)) < 0.0))


def _pole_positions(ln, lo, hi):
    poles = []
    for le in np.unique(ln):
        j0 = math.ceil(lo * le / math.pi)
        j1 = math.floor(hi * le / math.pi)
        poles.extend(j * math.pi / le for j in range(max(j0, 1), j1 + 1))
    poles.sort()
    merged = []
    for p in poles:
        if not merged or p - merged[-1] > 1e-12 * max(1.0, p):
            merged.append(p)
    return merged


def _bisect_roots(count, a, ca, b, cb, out, diagnostics, depth=0):
    """Locate every drop of the negative-eigenvalue count inside ``[a, b]``."""
    if ca == cb:
        return
    if ca < cb:
        diagnostics.append(f"inertia increased on [{a!r}, {b!r}]; bracket skipped")
        return
    if b - a <= BRACKET_TOL:
        # shrink to working precision so the root certifies tightly
        for _ in range(64):
            m = 0.5 * (a + b)
            if m <= a or m >= b:
                break
            cm = count(m)
            if cm == ca:
                a = m
            elif cm == cb:
                b = m
            else:
                break
        out.append((0.5 * (a + b), ca - cb))
        return
    if depth > 200:
        diagnostics.append(f"bisection did not converge on [{a!r}, {b!r}]")
        return
    m = 0.5 * (a + b)
    cm = count(m)
    _bisect_roots(count, a, ca, m, cm, out, diagnostics, depth + 1)
    _bisect_roots(count, m, cm, b, cb, out, diagnostics, depth + 1)


def null_traces(g, lengths, omega, multiplicity):
    """Orthonormal vertex traces spanning the (numerical) null space of ``M(omega)``."""
    M = secular_matrix(g, lengths, omega)
    spec = eigendecompose_symmetric(M, index=g.vertices)
    order = np.argsort(np.abs(spec.eigenvalues), kind="stable")[:multiplicity]
    return spec.eigenvectors[:, np.sort(order)]


def find_metric_eigenvalues(g, lengths, omega_lo, omega_hi, grid_step=0.05) -> MetricSpectrum:
    """Frequencies in ``(omega_lo, omega_hi)`` for arbitrary positive edge lengths.

    ``M(omega)`` is nondecreasing in the Loewner order between consecutive
    poles, so every eigenvalue of ``M`` crosses zero upward and the number of
    negative eigenvalues drops by the multiplicity at each frequency. The scan
    evaluates that count on a grid inside each pole-free interval (pulled in
    by a guard band) and bisects each drop. Poles are listed in ``excluded``.
    """
    if not 0 < omega_lo < omega_hi:
        raise PreconditionError("need 0 < omega_lo < omega_hi")
    if grid_step <= 0:
        raise PreconditionError("grid_step must be positive")
    ln = _edge_lengths(g, lengths)

    def count(w):
        return _negative_count(g, ln, w)

    poles = _pole_positions(ln, omega_lo, omega_hi)
    edges = [omega_lo] + poles + [omega_hi]
    roots = []
    diagnostics = []
    for left, right in zip(edges[:-1], edges[1:]):
        a = left + GUARD if (left in poles or _near_pi_multiple(left * ln).any()) else left
        b = right - GUARD if (right in poles or _near_pi_multiple(right * ln).any()) else right
        if b <= a:
            continue
        n_steps = max(1, math.ceil((b - a) / grid_step))
        grid = np.linspace(a, b, n_steps + 1)
        counts = [count(w) for w in grid]
        for x0, c0, x1, c1 in zip(grid[:-1], counts[:-1], grid[1:], counts[1:]):
            _bisect_roots(count, float(x0), c0, float(x1), c1, roots, diagnostics)

    entries = []
    for omega, mult in roots:
        traces = null_traces(g, ln, omega, mult)
        res = max(certify(g, ln, omega, traces[:, i]) for i in range(mult))
        window = int(math.floor(omega / TWO_PI))
        entries.append(MetricEigenvalue(omega - TWO_PI * window, window, mult, "secular", None, res))
        if res > CERTIFY_RTOL:
            diagnostics.append(f"omega = {omega!r} certifies only to {res:.3e}")
    excluded = []
    for p in poles:
        window = int(math.floor(p / TWO_PI))
        excluded.append(MetricEigenvalue(p - TWO_PI * window, window, 0, "pole"))
    return MetricSpectrum(tuple(entries), "secular-scan", tuple(excluded), tuple(diagnostics))


def fit_edge(fu, fv, omega, length):
    """``(A, B)`` with ``A cos(omega x + B)`` equal to ``fu`` at 0 and ``fv`` at ``length``.

    ``B`` is reduced to ``[0, 2 pi)``; the zero function gets ``(0, 0)``.
    """
    s, c = math.sin(omega * length), math.cos(omega * length)
    if abs(s) <= POLE_TOL:
        raise PoleError(f"omega * length = {omega * length!r} is a multiple of pi")
    a_sin = (fu * c - fv) / s
    A = math.hypot(fu, a_sin)
    B = 0.0 if A == 0.0 else math.atan2(a_sin, fu) % TWO_PI
    if B >= TWO_PI:
        B = 0.0
    for x, want in ((0.0, fu), (length, fv)):
        got = A * math.cos(omega * x + B)
        if abs(got - want) > 1e-9 * max(1.0, abs(want)):
            raise PreconditionError(f"edge fit misses an endpoint: {got!r} vs {want!r}")
    return A, B


def reconstruct_eigenfunction(g, lengths, omega, trace, rtol=CERTIFY_RTOL) -> EdgeEigenfunction:
    """Fill in ``A cos(omega x + B)`` on every edge from certified vertex values.

    Each edge ``(u, v)`` runs from ``u`` at ``x = 0`` to ``v`` at ``x = l_e``.
    Any two endpoint values admit such a fit, so the trace is first checked
    against the matching condition; a failure means ``omega`` is not a
    frequency for this trace.
    """
    ln = _edge_lengths(g, lengths)
    f = as_signal(trace, g.vertices, "trace")
    res = certify(g, ln, omega, f)
    if res > rtol:
        raise PreconditionError(f"trace fails the vertex condition at omega = {omega!r} "
                                f"(relative residual {res:.3e})")
    pieces = []
    for e, le in zip(g.edges, ln):
        A, B = fit_edge(f[g.index(e.u)], f[g.index(e.v)], omega, le)
        pieces.append((e.u, e.v, float(le), A, B))
    return EdgeEigenfunction(float(omega), tuple(pieces), VertexSignal(g.vertices, f), res)
