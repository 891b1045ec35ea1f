"""Higher-order difference equations with linear arguments over Banach algebras.

Simulation, order reduction through a common root, global-attractivity
criteria and the worked scenarios (delayed tanh model, an integral equation
on C[0,1], and the 2-cycle bifurcation of a second-order tanh model).
"""
from .algebra import (
    Algebra,
    ComplexAlgebra,
    GridAlgebra,
    MatrixAlgebra,
    RealAlgebra,
    check_axioms,
    make_algebra,
)
from .equations import (
    CoefficientSequence,
    LinearArgEquation,
    NonlinearitySpec,
    Trajectory,
    apply_nonlinearity,
    envelope_check,
    iterate,
    sigma_spot_check,
    step,
)
from .errors import ConfigError, NotAUnit, RootRejected, ShapeError
from .reduction import (
    ReductionResult,
    cofactor_reconstruct,
    eval_P,
    eval_Q,
    factor_coefficients,
    initial_t,
    reduce_order,
    split_consistency_check,
)
from .scenarios import (
    BifurcationScan,
    basin_probe,
    bifurcation_scan,
    classify_regime,
    find_tau,
    h_map,
    make_c01,
    make_dham,
    make_gla0,
    make_gla1,
    make_gla2,
    make_th,
)
from .stability import (
    StabilityReport,
    alpha_direct,
    alpha_factored,
    check,
    check_corollary1,
    check_corollary2,
    check_theorem1,
    sigma_bound_er,
    sigma_bound_wc,
    theorem2_factor,
)

__version__ = "0.1.0"
