"""Heat kernel ``K_S``, boundary forcing and closed-form heat-equation solutions.

Boundary data are piecewise constant in time on a uniform grid, so the
Duhamel integral is evaluated exactly mode by mode with no quadrature.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, SignalError
from .graph import VertexSignal, as_signal
from .modes import modal_basis

GRID_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class BoundarySignal:
    """Samples ``values[j, k] = sigma(vertices[j], t_k)`` on the uniform grid ``t_k = k * dt``.

    Between samples the signal is constant: on ``[t_k, t_{k+1})`` it equals
    sample ``k``. The last sample holds only at ``t_m`` itself.
    """

    vertices: tuple
    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float).reshape(-1)
        vals = np.array(self.values, dtype=float)
        vertices = tuple(self.vertices)
        if vals.ndim == 1 and len(vertices) == 0:
            vals = vals.reshape(0, grid.size)
        if vals.shape != (len(vertices), grid.size):
            raise SignalError(f"values shape {vals.shape} does not match "
                              f"{len(vertices)} vertices x {grid.size} samples")
        if grid.size == 0 or grid[0] != 0.0:
            raise SignalError("time grid must start at t = 0")
        if grid.size > 1:
            steps = np.diff(grid)
            if np.any(steps <= 0):
                raise SignalError("time grid must be strictly increasing")
            if np.max(np.abs(steps - steps[0])) > GRID_RTOL * steps[0]:
                raise SignalError("time grid must be uniform")
        grid.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, vertices, values, t_end):
        """Time-independent data covering ``[0, t_end]``."""
        vertices = tuple(vertices)
        if isinstance(values, (int, float)):
            vec = np.full(len(vertices), float(values))
        else:
            vec = as_signal(values, vertices, "boundary values")
        t_end = float(t_end)
        grid = np.array([0.0, t_end]) if t_end > 0 else np.array([0.0])
        return cls(vertices, grid, np.repeat(vec[:, None], grid.size, axis=1))

    @classmethod
    def zeros(cls, vertices, t_end):
        return cls.constant(vertices, 0.0, t_end)

    @classmethod
    def sampled(cls, vertices, fn, t_end, steps):
        """Sample ``fn(t) -> array over vertices`` at ``steps + 1`` uniform times."""
        vertices = tuple(vertices)
        grid = np.linspace(0.0, float(t_end), int(steps) + 1)
        vals = np.array([np.asarray(fn(t), dtype=float).reshape(len(vertices)) for t in grid]).T
        return cls(vertices, grid, vals.reshape(len(vertices), grid.size))

    @property
    def t_end(self):
        return float(self.grid[-1])

    def covers(self, t):
        return 0.0 <= t <= self.t_end * (1 + 1e-12)

    def sample_index(self, t):
        if not self.covers(t):
            raise SignalError(f"t = {t!r} is outside the boundary grid [0, {self.t_end!r}]")
        return int(np.clip(np.searchsorted(self.grid, t, side="right") - 1, 0, self.grid.size - 1))

    def at(self, t):
        """Right-continuous value vector at time ``t``."""
        return self.values[:, self.sample_index(t)].copy()

    def reordered(self, vertices):
        """Rows permuted to ``vertices``; the vertex set must match exactly."""
        vertices = tuple(vertices)
        if set(vertices) != set(self.vertices) or len(vertices) != len(self.vertices):
            raise SignalError(f"boundary signal must be defined on exactly {list(vertices)}, "
                              f"got {list(self.vertices)}")
        pos = {v: i for i, v in enumerate(self.vertices)}
        return BoundarySignal(vertices, self.grid, self.values[[pos[v] for v in vertices], :])

    def intervals(self, t):
        """``(start, stop, sample)`` for each constant piece of ``[0, t]`` with positive length."""
        self.sample_index(t)
        out = []
        for k in range(self.grid.size - 1):
            a = float(self.grid[k])
            if a >= t:
                break
            out.append((a, min(float(self.grid[k + 1]), t), k))
        return out


def _check_partition(part):
    if part.has_boundary and not part.touches_boundary:
        comps = [list(c) for c in part.isolated_components]
        raise PreconditionError(f"interior components {comps} do not touch the boundary")


def _prepare_sigma(part, sigma, t):
    if sigma is None:
        if part.has_boundary:
            raise SignalError("boundary signal required when the boundary is nonempty")
        return None
    sigma = sigma.reordered(part.boundary)
    if not sigma.covers(t):
        raise SignalError(f"boundary grid [0, {sigma.t_end!r}] does not cover t = {t!r}")
    return sigma


class HeatKernel:
    """Evaluator for ``K_S(u, v, t) = sum_i exp(-lambda_i t) phi_i(u) phi_i(v) sqrt(d_v / d_u)``."""

    def __init__(self, g, part):
        _check_partition(part)
        self.graph = g
        self.partition = part
        self.basis = modal_basis(g, part)

    @property
    def spectrum(self):
        return self.basis.spectrum

    def __call__(self, t):
        if t < 0:
            raise ValueError(f"heat kernel needs t >= 0, got {t!r}")
        return self.basis.kernel(np.exp(-self.basis.eigenvalues * t))


def heat_kernel(g, part, t):
    """Matrix ``K_S(., ., t)`` indexed by the interior vertices."""
    return HeatKernel(g, part)(t)


def derived_forcing(g, part, sigma: BoundarySignal, t) -> VertexSignal:
    """``B(y, t) = sum_{z in dS, (y,z) in E} sigma(z, t) w(y, z) / d_y`` on the interior."""
    basis = modal_basis(g, part)
    sig = _prepare_sigma(part, sigma, t)
    if sig is None:
        return VertexSignal.zeros(part.interior)
    return VertexSignal(part.interior, basis.forcing @ sig.at(t))


def _decay_integrals(lam, t, a, b):
    """``int_a^b exp(-lam (t - tau)) dtau`` per mode; the zero mode gives ``b - a``."""
    pos = lam > 0
    safe = np.where(pos, lam, 1.0)
    return np.where(pos, np.exp(-safe * (t - b)) * (-np.expm1(-safe * (b - a))) / safe, b - a)


def heat_modes(basis, f, sigma, t):
    """Modal coefficients of ``T^1/2 u_S(t)``."""
    lam = basis.eigenvalues
    coef = np.exp(-lam * t) * basis.to_modes(f)
    if sigma is not None and sigma.vertices:
        for a, b, k in sigma.intervals(t):
            forcing = basis.to_modes(basis.forcing @ sigma.values[:, k])
            coef = coef + _decay_integrals(lam, t, a, b) * forcing
    return coef


def solve_heat(g, part, f, sigma: BoundarySignal | None, t) -> VertexSignal:
    """Solution of ``u_t = -Delta u`` on S with ``u(0) = f`` and ``u = sigma`` on dS.

    Returns u on the closure; boundary entries carry ``sigma(., t)``.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t!r}")
    _check_partition(part)
    basis = modal_basis(g, part)
    f_vals = as_signal(f, part.interior, "f")
    sig = _prepare_sigma(part, sigma, t)
    u_S = basis.from_modes(heat_modes(basis, f_vals, sig, t))
    values = dict(zip(part.interior, u_S))
    if sig is not None:
        values.update(zip(part.boundary, sig.at(t)))
    return VertexSignal(part.closure, np.array([values[v] for v in part.closure]))


def solve_heat_series(g, part, f, sigma, times):
    """Rows of :func:`solve_heat` at each time, as an array ``(len(times), |closure|)``."""
    return np.array([solve_heat(g, part, f, sigma, float(t)).values for t in times])
