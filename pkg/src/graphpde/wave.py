"""Semi-discrete wave equation ``u_tt = -Delta u``: kernel, solutions, gradient and energy."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .graph import VertexSignal, as_signal
from .heat import BoundarySignal, _check_partition, _prepare_sigma
from .modes import modal_basis


@dataclass(frozen=True)
class WaveState:
    position: VertexSignal
    velocity: VertexSignal
    t: float


def _frequencies(lam):
    return np.sqrt(np.where(lam > 0, lam, 0.0))


def _sinc_t(lam, t):
    """``sin(sqrt(lam) t) / sqrt(lam)``, equal to ``t`` on the zero mode."""
    w = _frequencies(lam)
    safe = np.where(w > 0, w, 1.0)
    return np.where(w > 0, np.sin(safe * t) / safe, t)


class WaveKernel:
    """Evaluators for ``W_S(., ., t)`` and its time derivative.

    The ``t * phi0 phi0^T`` term is present only when the spectrum of ``L_S``
    has a zero eigenvalue, which happens exactly when the boundary is empty.
    """

    def __init__(self, g, part):
        _check_partition(part)
        self.graph = g
        self.partition = part
        self.basis = modal_basis(g, part)

    @property
    def spectrum(self):
        return self.basis.spectrum

    def __call__(self, t):
        return self.basis.kernel(_sinc_t(self.basis.eigenvalues, t))

    def dt(self, t):
        w = _frequencies(self.basis.eigenvalues)
        return self.basis.kernel(np.cos(w * t))


def wave_kernel(g, part, t):
    """``W_S(., ., t)``; defined for any real t (solvers restrict to t >= 0)."""
    return WaveKernel(g, part)(t)


def wave_kernel_dt(g, part, t):
    return WaveKernel(g, part).dt(t)


def _forced_integrals(w, t, a, b):
    """Per-mode ``int_a^b sin(w (t - tau))/w dtau`` and ``int_a^b cos(w (t - tau)) dtau``.

    Written with half-angle products to stay accurate for small ``w``.
    """
    h = b - a
    mid = t - 0.5 * (a + b)
    pos = w > 0
    safe = np.where(pos, w, 1.0)
    half = np.sin(0.5 * safe * h)
    pos_u = 2.0 * np.sin(safe * mid) * half / safe**2
    pos_v = 2.0 * np.cos(safe * mid) * half / safe
    return np.where(pos, pos_u, h * mid), np.where(pos, pos_v, h)


def wave_modes(basis, f, g0, sigma, t):
    """Modal coefficients of ``T^1/2 u`` and ``T^1/2 u_t`` at time ``t``."""
    lam = basis.eigenvalues
    w = _frequencies(lam)
    cf = basis.to_modes(f)
    cg = basis.to_modes(g0)
    pos = cf * np.cos(w * t) + cg * _sinc_t(lam, t)
    vel = cg * np.cos(w * t) - cf * w * np.sin(w * t)
    if sigma is not None and sigma.vertices:
        for a, b, k in sigma.intervals(t):
            forcing = basis.to_modes(basis.forcing @ sigma.values[:, k])
            iu, iv = _forced_integrals(w, t, a, b)
            pos = pos + iu * forcing
            vel = vel + iv * forcing
    return pos, vel


def solve_wave(g, part, f, g0, sigma: BoundarySignal | None, t) -> WaveState:
    """Closed-form solution with ``u(0) = f``, ``u_t(0) = g0`` and ``u = sigma`` on dS.

    The velocity comes from the differentiated modal formula. On the boundary
    the velocity is reported as zero, which is exact for piecewise-constant
    data away from its jump times.
    """
    if t < 0:
        raise PreconditionError(f"wave solutions are computed for t >= 0 only, got {t!r}")
    _check_partition(part)
    basis = modal_basis(g, part)
    f_vals = as_signal(f, part.interior, "f")
    g_vals = as_signal(g0, part.interior, "g")
    sig = _prepare_sigma(part, sigma, t)
    pos, vel = wave_modes(basis, f_vals, g_vals, sig, t)
    u = dict(zip(part.interior, basis.from_modes(pos)))
    ut = dict(zip(part.interior, basis.from_modes(vel)))
    if sig is not None:
        u.update(zip(part.boundary, sig.at(t)))
        ut.update((z, 0.0) for z in part.boundary)
    return WaveState(
        VertexSignal(part.closure, np.array([u[v] for v in part.closure])),
        VertexSignal(part.closure, np.array([ut[v] for v in part.closure])),
        float(t),
    )


def directional_derivative(g, f, u, v):
    """``(f(v) - f(u)) * sqrt(w(u,v) / d_u)`` for an edge ``(u, v)``."""
    if not g.has_edge(u, v):
        raise PreconditionError(f"{u!r} and {v!r} are not adjacent")
    vals = f if not isinstance(f, VertexSignal) else f.as_dict()
    return (float(vals[v]) - float(vals[u])) * np.sqrt(g.weight(u, v) / g.degree(u))


def gradient(g, f, u):
    """Directional derivatives at ``u`` toward each neighbour, neighbours in vertex order."""
    return np.array([directional_derivative(g, f, u, v) for v in g.neighbors(u)])


def energy(g, part, state: WaveState):
    """``sum_{x in closure} d_x [u_t(x)^2 + 1/2 sum_{y ~ x, y in closure} (D_y u(x))^2]``."""
    u = state.position.as_dict()
    ut = state.velocity.as_dict()
    closure = set(part.closure)
    total = 0.0
    for x in part.closure:
        grad_sq = sum(directional_derivative(g, u, x, y) ** 2 for y in g.neighbors(x) if y in closure)
        total += (ut[x] ** 2 + 0.5 * grad_sq) * g.degree(x)
    return float(total)
