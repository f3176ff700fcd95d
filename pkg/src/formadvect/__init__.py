"""Structure-preserving spectral element advection of differential forms."""

from .advect import AdvectionProblem, AdvectionResult, AdvectionWorkspace, build_operator, mass_history, solve
from .forms import AnalyticForm, DiscreteForm, l2_error, reconstruct, reduce, total_integral
from .mesh import Mesh1D, Mesh2D, build_distorted, build_interval, build_uniform, pullback_weights
from .operators import MassMatrix, VelocityField, WedgeMatrix, interior_product, mass_matrix, wedge_matrix
from .polybasis import Basis1D, QuadratureRule, gauss_lobatto_nodes, gauss_lobatto_rule, gauss_nodes, gauss_rule
from .timestep import GaussCollocationStepper, TimeBasis, advance, build_time_basis, slab_solve_linear
from .topology import CellComplex1D, CellComplex2D, IncidenceMatrix, apply_incidence, incidence_1_0, incidence_2_1

__version__ = "0.1.0"

__all__ = [
    "AdvectionProblem",
    "AdvectionResult",
    "AdvectionWorkspace",
    "AnalyticForm",
    "Basis1D",
    "CellComplex1D",
    "CellComplex2D",
    "DiscreteForm",
    "GaussCollocationStepper",
    "IncidenceMatrix",
    "MassMatrix",
    "Mesh1D",
    "Mesh2D",
    "QuadratureRule",
    "TimeBasis",
    "VelocityField",
    "WedgeMatrix",
    "advance",
    "apply_incidence",
    "build_distorted",
    "build_interval",
    "build_operator",
    "build_time_basis",
    "build_uniform",
    "gauss_lobatto_nodes",
    "gauss_lobatto_rule",
    "gauss_nodes",
    "gauss_rule",
    "incidence_1_0",
    "incidence_2_1",
    "interior_product",
    "l2_error",
    "mass_history",
    "mass_matrix",
    "pullback_weights",
    "reconstruct",
    "reduce",
    "slab_solve_linear",
    "solve",
    "total_integral",
    "wedge_matrix",
]
