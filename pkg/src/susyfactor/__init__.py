"""Exact factorization engine for hypergeometric-like differential operators.

The package builds shape-invariant ladder factorizations of operators
H = -p(x) d^2/dx^2 - q(x) d/dx with deg p <= 2, deg q <= 1, entirely over
rational arithmetic, and cross-checks them numerically in Schrodinger form.
"""

from .core import DivisionError, Poly, Problem, QuasiFunction, Rational
from .diffop import DiffOp, apply, commutator, compose, conjugate, \
    hamiltonian, op_equals
from .principal import (
    Breakdown, DegreeError, FactorEntry, LadderPair, OracleDegenerate,
    brute_force_eigen_oracle, direct_match_table, equivalent_forms_check,
    factor_table, hypergeom_like_hl, ladder_pair, principal_eigenfunction,
    shape_invariance_check, superpotential_w0, superpotential_wl,
    three_term_check,
)
from .associated import (
    AssocEntry, AssocFunction, ClassifyError, RangeError, assoc_bottom_up,
    assoc_delta_plus, assoc_entry, assoc_hamiltonian, assoc_ladders,
    assoc_lambda, assoc_shape_invariance, assoc_three_term, assoc_top_down,
    classify_expanded, pHm_factorization, principal_form_equivalence,
    standard_hermitian_relation, verify_associated,
)
from .degenerate import (
    DegeneracyReport, collapse_check, detect, hermite_generate,
    hermite_operator, quasi_hermite_generate,
)
from .numeric import (
    Grid, NumericProfile, SingularGrid, aux_ground_check, coordinate_maps,
    orthogonality_matrix, potentials, schrodinger_residual,
    sl_full_susy_residual, sl_transform_typeI, sl_transform_typeII,
    weight_function, weight_numeric,
)

__version__ = "0.1.0"
