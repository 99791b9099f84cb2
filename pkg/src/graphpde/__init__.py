"""Closed-form spectral solvers for Laplace, Poisson, heat and wave equations on weighted graphs."""
from .elliptic import DirichletProblem, laplacian_residual, poisson, solve_laplace, solve_poisson
from .errors import (
    ConvergenceError,
    GraphFormatError,
    GraphPDEError,
    PartitionError,
    PoleError,
    PreconditionError,
    SignalError,
    UsageError,
)
from .graph import (
    BoundaryPartition,
    Edge,
    VertexSignal,
    WeightedGraph,
    boundary_of,
    load_graph,
    parse_graph,
    serialize_graph,
)
from .greens import GreensFunction, greens_boundaryless, greens_dirichlet, heat_integral
from .heat import BoundarySignal, HeatKernel, derived_forcing, heat_kernel, solve_heat, solve_heat_series
from .laplacian import (
    OperatorMatrix,
    combinatorial_laplacian,
    discrete_laplacian,
    normalized_adjacency,
    normalized_laplacian,
    quadratic_form,
    restrict,
)
from .metric import (
    EdgeEigenfunction,
    MetricEigenvalue,
    MetricSpectrum,
    certify,
    find_metric_eigenvalues,
    fit_edge,
    reconstruct_eigenfunction,
    secular_matrix,
    unit_length_spectrum,
    vertex_condition_residual,
)
from .spectral import Spectrum, eigendecompose_symmetric, rayleigh_quotient
from .wave import WaveKernel, WaveState, energy, solve_wave, wave_kernel, wave_kernel_dt

__version__ = "0.1.0"
