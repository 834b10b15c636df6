"""Exact invariant Hermitian geometry on nilpotent Lie algebras with complex structure."""

from .scalar import Scalar
from .exterior import (
    Form, alpha, alpha_bar, beta, wedge, power, conjugate, bigraded_parts, apply_J,
    exterior_d, dc, dvol0, top_coefficient,
)
from .liealg import (
    StructureEquations, validate_algebra, brackets_from_d, algebra_invariants,
    classify_complex_structure, adapted_coframe,
)
from .metrics import (
    HermitianMatrix, PositiveNNForm, metric_form, nn_form, lee_form_general, lee_form_two_step,
    classify_metric, k_gauduchon_profile, check_prop31, star_one_form, michelsohn_root,
)
from .search import (
    sample_metric, find_balanced, find_lcb, two_zero_obstruction, rigidity_experiment,
)
from .catalog import abelian, heisenberg, example_a, example_b, vaisman_candidate, catalog_get
from .dsl import parse_algebra, print_algebra, parse_metric

__version__ = "0.1.0"
