"""Space-time Petrov-Galerkin solver for the 1D wave equation.

Tensor-product B-spline trial spaces, time-derivative test spaces and an
exponentially weighted scalar product give an unconditionally stable square
linear system for the first-order-in-time formulation.
"""

from . import analysis, cli, expressions, forms, newton, problems, quadrature, splines, system
from .analysis import (
    ErrorReport,
    InfSupEstimate,
    eoc,
    error_report,
    estimate_infsup,
    infsup_lower_bound,
    stability_data_bound,
)
from .errors import (
    AssemblyError,
    ConfigError,
    DomainMismatchError,
    IntegrationError,
    InvalidRegularityError,
    InvalidSpaceError,
    InvalidTestSpaceError,
    OutOfDomainError,
    SingularSystemError,
    UnsupportedRuleError,
    XTWaveError,
)
from .problems import by_name, manufactured, singular_case, smooth_case
from .splines import KnotVector, SplineSpace, make_space, make_uniform_space, test_space_of
from .system import (
    BlockSystem,
    DiscreteSolution,
    ExactSolution,
    ProblemSpec,
    assemble,
    dump_solution,
    evaluate,
    evaluate_grid,
    load_solution,
    solve,
)

__version__ = "0.1.0"
