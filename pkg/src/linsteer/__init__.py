"""Linear steering inequalities for two qubits.

Build n-setting steering operators from spin-1/2 measurement directions,
evaluate the steering functional on arbitrary states, compare against the
CHSH operator, and search over states and settings.
"""

from .errors import ConstraintError, CrossCheckError, SettingsError, StateError, SteeringError, SymmetryError
from .qubit import (
    ObservableAngles,
    OrthogonalTriad,
    SchmidtForm,
    SpectrumResult,
    anticommutator_scalar,
    canonical_triad,
    commutator_direction,
    concurrence,
    direction_from_angles,
    hermitian_spectrum,
    mes_from_parameters,
    pauli_observable,
    random_unit_vector,
    schmidt_decompose,
    tensor_product,
)
from .search import (
    CertificationReport,
    SearchConfig,
    certify_corollary2,
    certify_theorem1,
    certify_theorem2,
    max_over_all_states,
    max_over_mes,
    optimize_alice_directions,
)
from .steering import (
    AngleSettings,
    MeasurementSettings,
    SteeringOperator,
    ViolationReport,
    alpha_argmax_scan,
    build_steering_operator,
    chsh_max,
    closed_form_fn,
    corollary2_predicate,
    eval_fn,
    mu_closed_form_f2,
    operator_square_f2,
    theorem1_predicate,
)

__version__ = "0.1.0"

__all__ = [
    "AngleSettings",
    "CertificationReport",
    "ConstraintError",
    "CrossCheckError",
    "MeasurementSettings",
    "ObservableAngles",
    "OrthogonalTriad",
    "SchmidtForm",
    "SearchConfig",
    "SettingsError",
    "SpectrumResult",
    "StateError",
    "SteeringError",
    "SteeringOperator",
    "SymmetryError",
    "ViolationReport",
    "alpha_argmax_scan",
    "anticommutator_scalar",
    "build_steering_operator",
    "canonical_triad",
    "certify_corollary2",
    "certify_theorem1",
    "certify_theorem2",
    "chsh_max",
    "closed_form_fn",
    "commutator_direction",
    "concurrence",
    "corollary2_predicate",
    "direction_from_angles",
    "eval_fn",
    "hermitian_spectrum",
    "max_over_all_states",
    "max_over_mes",
    "mes_from_parameters",
    "mu_closed_form_f2",
    "operator_square_f2",
    "optimize_alice_directions",
    "pauli_observable",
    "random_unit_vector",
    "schmidt_decompose",
    "tensor_product",
    "theorem1_predicate",
]
