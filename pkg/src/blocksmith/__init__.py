"""Exact-arithmetic toolkit for Cartan matrices of blocks whose basic
algebra has small dimension: candidate enumeration, integral Gram
decompositions, contribution matrices and heights, Brauer-tree Cartan
data, and scripted per-dimension case analyses."""

from .intmat import (
    IntMatrix,
    MatrixError,
    ScaledInverse,
    SnfResult,
    adjugate,
    det,
    elementary_divisors,
    is_indecomposable,
    is_positive_definite,
    is_positive_semidefinite,
    canonical_perm_form,
    matrix_from_obj,
    matrix_to_obj,
    p_adic_valuation,
    scaled_inverse,
    smith_normal_form,
)
from .cartan import (
    CartanCandidate,
    CartanEnumError,
    FeasibilityVerdict,
    enumerate_cartan,
    filter_block_feasible,
    max_entry_sum,
)
from .gram import (
    GramInputError,
    GramProblem,
    GramSolution,
    solve,
    solve_orthogonal_column,
    verify_solution,
)
from .contrib import (
    ContributionError,
    ContributionResult,
    HeightProfile,
    complement_diag,
    contribution_matrix,
    heights_from_contribution,
)
from .brauer import (
    BrauerTree,
    BrauerTreeError,
    DefectOneMatch,
    TreeInvariants,
    cartan_of_tree,
    classify_defect1,
    dim_of_tree,
    enumerate_trees,
    invariants_of_tree,
    shape_name,
)
from .casebook import (
    CaseReport,
    CaseRule,
    CasebookError,
    LocalDatum,
    brauer_count_check,
    congruence_filter,
    det25_decomposition,
    load_local_data,
    load_realizations,
    load_rules,
    run_dimension,
)

__version__ = "0.1.0"

__all__ = [
    "IntMatrix",
    "MatrixError",
    "ScaledInverse",
    "SnfResult",
    "adjugate",
    "det",
    "elementary_divisors",
    "is_indecomposable",
    "is_positive_definite",
    "is_positive_semidefinite",
    "canonical_perm_form",
    "matrix_from_obj",
    "matrix_to_obj",
    "p_adic_valuation",
    "scaled_inverse",
    "smith_normal_form",
    "CartanCandidate",
    "CartanEnumError",
    "FeasibilityVerdict",
    "enumerate_cartan",
    "filter_block_feasible",
    "max_entry_sum",
    "GramInputError",
    "GramProblem",
    "GramSolution",
    "solve",
    "solve_orthogonal_column",
    "verify_solution",
    "ContributionError",
    "ContributionResult",
    "HeightProfile",
    "complement_diag",
    "contribution_matrix",
    "heights_from_contribution",
    "BrauerTree",
    "BrauerTreeError",
    "DefectOneMatch",
    "TreeInvariants",
    "cartan_of_tree",
    "classify_defect1",
    "dim_of_tree",
    "enumerate_trees",
    "invariants_of_tree",
    "shape_name",
    "CaseReport",
    "CaseRule",
    "CasebookError",
    "LocalDatum",
    "brauer_count_check",
    "congruence_filter",
    "det25_decomposition",
    "load_local_data",
    "load_realizations",
    "load_rules",
    "run_dimension",
    "__version__",
]
