"""Command-line entry point: ``graphpde <command> --graph FILE ...``.

Exit status is 0 on success, 1 on invalid input or failed preconditions and
2 when ``verify`` finds a failing invariant. Errors go to stderr as
``error[CODE]: message``.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import laplacian as lap
from .elliptic import DirichletProblem, solve_laplace, solve_poisson
from .errors import GraphPDEError, PartitionError, SignalError, UsageError
from .export import fmt, matrix_csv, table_csv, to_json
from .graph import boundary_of, load_graph
from .greens import greens_boundaryless, greens_dirichlet
from .heat import BoundarySignal, solve_heat
from .metric import find_metric_eigenvalues, unit_length_spectrum
from .spectral import eigendecompose_symmetric
from .verify import format_table, run_suite, tolerance_table
from .wave import energy, solve_wave

COMMANDS = ("spectrum", "greens", "solve-laplace", "solve-poisson", "solve-heat",
            "solve-wave", "metric-spectrum", "verify")
LAPLACIANS = ("combinatorial", "discrete", "normalized", "adjacency")


@dataclass
class RunConfig:
    command: str
    graph: str
    interior: tuple | None = None
    boundary_file: str | None = None
    f: str | None = None
    g: str | None = None
    source: str | None = None
    sigma: str | None = None
    t_start: float = 0.0
    t_end: float = 1.0
    steps: int = 11
    laplacian: str = "normalized"
    greens_kind: str = "normalized"
    omega_range: tuple | None = None
    windows: int = 1
    method: str = "auto"
    include_excluded: bool = False
    seed: int = 0
    profile: str | None = None
    tolerances: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "csv"

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not os.path.isfile(self.graph):
            raise UsageError(f"graph file not found: {self.graph}")
        for name in ("boundary_file",):
            path = getattr(self, name)
            if path is not None and not os.path.isfile(path):
                raise UsageError(f"file not found: {path}")
        if not (math.isfinite(self.t_start) and math.isfinite(self.t_end)):
            raise UsageError("time grid bounds must be finite")
        if self.t_end < self.t_start:
            raise UsageError("time grid needs t_end >= t_start")
        if self.steps < 1:
            raise UsageError("time grid needs at least one step")
        if self.steps == 1 and self.t_end != self.t_start:
            raise UsageError("a single sample cannot include both endpoints; use start == end")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown output format {self.format!r}")
        if self.laplacian not in LAPLACIANS:
            raise UsageError(f"unknown Laplacian {self.laplacian!r}")
        if self.windows < 1:
            raise UsageError("--windows must be at least 1")

    @property
    def times(self):
        return np.linspace(self.t_start, self.t_end, self.steps)


# -- argument parsing ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _time_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--t expects start:end:steps, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"--t expects start:end:steps, got {text!r}") from None


def _omega_range(text):
    parts = text.split(":")
    try:
        lo, hi = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--range expects lo:hi, got {text!r}") from None
    return lo, hi


def _tol_override(text):
    name, sep, value = text.partition("=")
    if not sep:
        raise UsageError(f"--tol expects NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise UsageError(f"--tol value is not a number: {text!r}") from None


def build_parser():
    p = _Parser(prog="graphpde", description="Spectral PDE solvers on weighted graphs.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--graph", required=True, help="graph file (JSON or TSV edge list)")
        s.add_argument("--interior", help="comma-separated interior vertices S")
        s.add_argument("--boundary", dest="boundary_file",
                       help='JSON file {"interior": [...]} or {"boundary": [...]}')
        s.add_argument("--output", help="write to this file instead of stdout")
        s.add_argument("--format", default="csv", choices=("csv", "json"))
        if name == "spectrum":
            s.add_argument("--laplacian", default="normalized", choices=LAPLACIANS)
        if name == "greens":
            s.add_argument("--kind", dest="greens_kind", default="normalized",
                           choices=("normalized", "discrete"))
        if name in ("solve-laplace", "solve-poisson", "solve-heat", "solve-wave"):
            s.add_argument("--sigma", help="const:C, inline v=x,..., or a JSON file")
        if name == "solve-poisson":
            s.add_argument("--source", help="source term: inline v=x,... or JSON map")
        if name in ("solve-heat", "solve-wave"):
            s.add_argument("--f", help="initial values: inline v=x,... or JSON map")
            s.add_argument("--t", default="0:1:11", help="start:end:steps (both endpoints included)")
        if name == "solve-wave":
            s.add_argument("--g", help="initial velocity: inline v=x,... or JSON map")
        if name == "metric-spectrum":
            s.add_argument("--method", default="auto", choices=("auto", "closed-form", "scan"))
            s.add_argument("--windows", type=int, default=1, help="closed form: number of 2 pi windows")
            s.add_argument("--range", dest="omega_range", help="scan: lo:hi (default 0.01:2pi)")
            s.add_argument("--include-excluded", action="store_true",
                           help="also list frequencies where the vertex condition is undefined")
        if name == "verify":
            s.add_argument("--seed", type=int, default=0)
            s.add_argument("--profile", help="tolerance profile: default, strict or loose")
            s.add_argument("--tol", action="append", default=[], help="override NAME=VALUE")
    return p


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    if ns.command is None:
        raise UsageError(f"missing command; choose from {', '.join(COMMANDS)}")
    cfg = RunConfig(command=ns.command, graph=ns.graph, boundary_file=ns.boundary_file,
                    output=ns.output, format=ns.format)
    if ns.interior is not None:
        cfg.interior = tuple(v.strip() for v in ns.interior.split(",") if v.strip())
    for name in ("f", "g", "source", "sigma", "laplacian", "greens_kind", "method", "windows",
                 "include_excluded", "seed", "profile"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if hasattr(ns, "t"):
        cfg.t_start, cfg.t_end, cfg.steps = _time_grid(ns.t)
    if getattr(ns, "omega_range", None):
        cfg.omega_range = _omega_range(ns.omega_range)
    if hasattr(ns, "tol"):
        cfg.tolerances = dict(_tol_override(t) for t in ns.tol)
    cfg.validate()
    return cfg


# -- input helpers ---------------------------------------------------------------

def _read_json(path, what):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SignalError(f"{what} file {path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None


def _vertex_map(text, what):
    """Inline ``v=x,w=y`` or a JSON file holding ``{vertex: value}``."""
    if text is None:
        return {}
    if os.path.isfile(text):
        doc = _read_json(text, what)
        if not isinstance(doc, dict):
            raise SignalError(f"{what} file must hold a JSON object vertex -> value")
        items = doc.items()
    else:
        items = []
        for part in text.split(","):
            key, sep, val = part.partition("=")
            if not sep or not key.strip():
                raise SignalError(f"{what}: expected v=value, got {part!r}")
            items.append((key.strip(), val))
    out = {}
    for k, v in items:
        try:
            out[str(k)] = float(v)
        except (TypeError, ValueError):
            raise SignalError(f"{what}: value for {k!r} is not a number") from None
    return out


def _interior_signal(text, part, what):
    """Values on S; vertices left unspecified take 0."""
    values = _vertex_map(text, what)
    stray = sorted(set(values) - set(part.interior))
    if stray:
        raise SignalError(f"{what} given at non-interior vertices {stray}")
    return np.array([values.get(v, 0.0) for v in part.interior])


def _partition(cfg, g, required=False):
    if cfg.interior is not None and cfg.boundary_file is not None:
        raise UsageError("give either --interior or --boundary, not both")
    if cfg.boundary_file is not None:
        doc = _read_json(cfg.boundary_file, "boundary")
        if isinstance(doc, dict) and "interior" in doc:
            interior = [str(v) for v in doc["interior"]]
        elif isinstance(doc, dict) and "boundary" in doc:
            excluded = {str(v) for v in doc["boundary"]}
            unknown = sorted(excluded - set(g.vertices))
            if unknown:
                raise PartitionError(f"unknown boundary vertices {unknown}")
            interior = [v for v in g.vertices if v not in excluded]
        else:
            raise PartitionError('boundary file must hold {"interior": [...]} or {"boundary": [...]}')
    elif cfg.interior is not None:
        interior = list(cfg.interior)
    elif required:
        raise PartitionError("this command needs an interior set (--interior or --boundary)")
    else:
        return None
    return boundary_of(g, interior)


def _sigma_signal(cfg, part, t_end, timed):
    """Boundary data as a BoundarySignal covering ``[0, t_end]``.

    ``const:C`` and inline maps are constant in time. A JSON file is either a
    map ``{vertex: value}`` or ``{"grid": {"dt": h}, "samples": {vertex: [...]}}``.
    """
    text = cfg.sigma
    if not part.has_boundary:
        if text is not None:
            raise SignalError("boundary signal given but the boundary is empty")
        return None
    if text is None:
        raise SignalError(f"boundary signal required on {list(part.boundary)} (--sigma)")
    if text.startswith("const:"):
        try:
            c = float(text[len("const:"):])
        except ValueError:
            raise SignalError(f"--sigma const: needs a number, got {text!r}") from None
        return BoundarySignal.constant(part.boundary, c, t_end)
    if os.path.isfile(text):
        doc = _read_json(text, "sigma")
        if isinstance(doc, dict) and "samples" in doc:
            if not timed:
                raise SignalError("time-dependent boundary data given to a stationary solver")
            try:
                dt = float(doc["grid"]["dt"])
            except (KeyError, TypeError, ValueError):
                raise SignalError('sigma file needs "grid": {"dt": <positive number>}') from None
            if not dt > 0:
                raise SignalError("sigma grid dt must be positive")
            samples = doc["samples"]
            if not isinstance(samples, dict):
                raise SignalError('"samples" must map vertex -> list of values')
            missing = sorted(set(part.boundary) - set(samples))
            extra = sorted(set(samples) - set(part.boundary))
            if missing or extra:
                raise SignalError(f"sigma samples must cover exactly the boundary; "
                                  f"missing {missing}, extra {extra}")
            rows = [samples[v] for v in part.boundary]
            lengths = {len(r) for r in rows}
            if len(lengths) != 1 or 0 in lengths:
                raise SignalError("every boundary vertex needs the same nonzero number of samples")
            m = lengths.pop()
            try:
                values = np.array(rows, dtype=float)
            except (TypeError, ValueError):
                raise SignalError("sigma samples must be numbers") from None
            return BoundarySignal(part.boundary, dt * np.arange(m), values)
    values = _vertex_map(text, "sigma")
    missing = sorted(set(part.boundary) - set(values))
    extra = sorted(set(values) - set(part.boundary))
    if missing or extra:
        raise SignalError(f"sigma must cover exactly the boundary; missing {missing}, extra {extra}")
    return BoundarySignal.constant(part.boundary, [values[v] for v in part.boundary], t_end)


# -- commands --------------------------------------------------------------------

def _spectrum(cfg, g):
    part = _partition(cfg, g)
    kind = cfg.laplacian
    if part is None:
        verts, sl = g.vertices, slice(None)
        d = g.degrees
    else:
        verts = part.interior
        idx = g.indices(part.interior)
        sl = np.ix_(idx, idx)
        d = g.degrees[idx]
    if kind == "combinatorial":
        spec = eigendecompose_symmetric(lap.combinatorial_laplacian(g).entries[sl])
        vals, vecs = spec.eigenvalues, spec.eigenvectors
    else:
        N = lap.normalized_laplacian(g).entries[sl]
        M = N if kind != "adjacency" else np.eye(len(verts)) - N
        spec = eigendecompose_symmetric(M)
        vals, vecs = spec.eigenvalues, spec.eigenvectors
        if kind in ("discrete", "adjacency"):
            # right eigenvectors of the non-symmetric operator, unit T-weighted norm
            vecs = vecs / np.sqrt(d)[:, None]
    if cfg.format == "json":
        return to_json({"laplacian": kind, "vertices": list(verts), "eigenvalues": vals,
                        "eigenvectors": vecs.T})
    rows = ([k, vals[k], *vecs[:, k]] for k in range(len(vals)))
    return table_csv(["k", "eigenvalue", *verts], ([str(r[0]), *r[1:]] for r in rows))


def _greens(cfg, g):
    part = _partition(cfg, g)
    G = greens_boundaryless(g) if part is None else greens_dirichlet(g, part)
    mat = G.normalized if cfg.greens_kind == "normalized" else G.unnormalized
    if cfg.format == "json":
        return to_json({"kind": cfg.greens_kind, "vertices": list(G.index), "matrix": mat})
    return matrix_csv(mat, G.index)


def _vertex_values(cfg, sig):
    if cfg.format == "json":
        return to_json({"vertices": list(sig.vertices), "values": sig.values})
    return table_csv(["vertex", "value"], zip(sig.vertices, sig.values))


def _solve_laplace(cfg, g):
    part = _partition(cfg, g, required=True)
    sigma = _sigma_signal(cfg, part, 0.0, timed=False)
    if sigma is None:
        raise PartitionError("the interior has an empty boundary; Dirichlet data cannot be imposed")
    return _vertex_values(cfg, solve_laplace(DirichletProblem(g, part, sigma.at(0.0))))


def _solve_poisson(cfg, g):
    part = _partition(cfg, g, required=True)
    sigma = _sigma_signal(cfg, part, 0.0, timed=False)
    if sigma is None:
        raise PartitionError("the interior has an empty boundary; Dirichlet data cannot be imposed")
    src = _interior_signal(cfg.source, part, "source")
    return _vertex_values(cfg, solve_poisson(DirichletProblem(g, part, sigma.at(0.0), src)))


def _default_part(cfg, g):
    part = _partition(cfg, g)
    return boundary_of(g, g.vertices) if part is None else part


def _solve_heat(cfg, g):
    part = _default_part(cfg, g)
    f = _interior_signal(cfg.f, part, "f")
    sigma = _sigma_signal(cfg, part, cfg.t_end, timed=True)
    times = cfg.times
    rows = np.array([solve_heat(g, part, f, sigma, float(t)).values for t in times])
    if cfg.format == "json":
        return to_json({"vertices": list(part.closure), "times": times, "u": rows})
    return table_csv(["t", *part.closure], ([t, *r] for t, r in zip(times, rows)))


def _solve_wave(cfg, g):
    part = _default_part(cfg, g)
    f = _interior_signal(cfg.f, part, "f")
    g0 = _interior_signal(cfg.g, part, "g")
    sigma = _sigma_signal(cfg, part, cfg.t_end, timed=True)
    times = cfg.times
    states = [solve_wave(g, part, f, g0, sigma, float(t)) for t in times]
    energies = [energy(g, part, s) for s in states]
    if cfg.format == "json":
        return to_json({"vertices": list(part.closure), "times": times,
                        "u": [s.position.values for s in states],
                        "u_t": [s.velocity.values for s in states], "energy": energies})
    rows = []
    for t, s, e in zip(times, states, energies):
        for v, u, ut in zip(part.closure, s.position.values, s.velocity.values):
            rows.append([fmt(t), v, u, ut, e])
    return table_csv(["t", "vertex", "u", "u_t", "energy"], rows)


def _metric_spectrum(cfg, g):
    ln = g.lengths
    uniform = bool(np.all(ln == ln[0]))
    method = cfg.method
    if method == "auto":
        method = "closed-form" if uniform else "scan"
    if method == "closed-form":
        if not uniform:
            raise UsageError("closed form needs all edge lengths equal; use --method scan")
        spec = unit_length_spectrum(g, cfg.windows)
    else:
        lo, hi = cfg.omega_range or (0.01, 2 * math.pi)
        spec = find_metric_eigenvalues(g, ln, lo, hi)
    entries = list(spec.entries)
    if cfg.include_excluded:
        entries += [e for e in spec.excluded if e.multiplicity > 0]
    entries.sort(key=lambda e: (e.omega, e.family))
    windowed = method == "closed-form"
    if cfg.format == "json":
        return to_json({"method": method, "diagnostics": list(spec.diagnostics), "entries": [
            {"omega": e.omega, "lambda": e.lam, "multiplicity": e.multiplicity,
             "certified_residual": e.residual, "window": e.window if windowed else None,
             "family": e.family} for e in entries]})
    rows = [[e.omega, e.lam, str(e.multiplicity), fmt(e.residual),
             str(e.window) if windowed else ""] for e in entries]
    return table_csv(["omega", "lambda", "multiplicity", "certified_residual", "window"], rows)


def _verify(cfg, g):
    try:
        tol = tolerance_table(cfg.profile, cfg.tolerances)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    part = _partition(cfg, g)
    rows = run_suite(g, None if part is None else part.interior, seed=cfg.seed, tolerances=tol)
    if cfg.format == "json":
        text = to_json([{"module": r.module, "check": r.name, "status": r.status,
                         "measured": None if r.skipped else r.measured, "tolerance": r.tolerance,
                         "property": r.statement} for r in rows])
    else:
        text = format_table(rows)
    return text, all(r.passed for r in rows)


HANDLERS = {
    "spectrum": _spectrum,
    "greens": _greens,
    "solve-laplace": _solve_laplace,
    "solve-poisson": _solve_poisson,
    "solve-heat": _solve_heat,
    "solve-wave": _solve_wave,
    "metric-spectrum": _metric_spectrum,
}


def _emit(text, output):
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def dispatch(cfg: RunConfig) -> int:
    """Run one command; returns the process exit status."""
    try:
        cfg.validate()
        g = load_graph(cfg.graph)
        if cfg.command == "verify":
            text, ok = _verify(cfg, g)
            _emit(text, cfg.output)
            return 0 if ok else 2
        _emit(HANDLERS[cfg.command](cfg, g), cfg.output)
        return 0
    except GraphPDEError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error[E_IO]: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except GraphPDEError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
