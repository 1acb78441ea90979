"""Exact splitting types of bundles on P^2 restricted to rational curves."""

from .exactalg import GF, QQ, HomForm, Matrix, det, kernel_basis, rank
from .panel import FiltrationData, SlopePanel, expected_panel, majorization_check, mediant_check, sup_distance
from .sheaf import (
    ChernData,
    SheafPresentation,
    chern,
    conic_example_bundle,
    euler_tangent,
    hn_filtration,
    is_stable_rank2,
    line_bundle_sum,
    named_bundle,
    schwarzenberger,
)
from .restrict import (
    InvariantViolation,
    JumpReport,
    RationalCurveMap,
    SplittingType,
    certify_bundle,
    jump_report,
    pullback,
    splitting_type,
)
from .bounds import all_bounds, p2_relcanonical_bound, zeta_prime
from .fitting import adjugate_kernel, fitting_generators
from .lab import ExperimentConfig, enumerate_lines, sample_jump_distribution, verify_conic_example

__version__ = "0.1.0"
