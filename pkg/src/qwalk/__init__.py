"""Exact measure theory of the two-site quantum random walk.

Truncated decoherence matrices and their q-measures, interference
classification, preclusion search, cylinder-set measures with limit-based
extension, quadratic-algebra checking, and the quantum integral -- all in
exact integer arithmetic, with a CLI (``qwalk``) over every computation.
"""

from .cylinder import (
    ALL_ZEROS,
    AtMostKOnes,
    BlockMeasure,
    ComplementOfFinitePathSet,
    CylinderEvent,
    EventualPath,
    FinitePathSet,
    FinitelyManyOnes,
    InfinitelyManyOnes,
    LimitReport,
    LimitVerdict,
    SymbolicEvent,
    approximant,
    change_residue_profile,
    change_residue_profile_closed_form,
    classify_sequence,
    complement_of_constant_closed_form,
    elementary,
    limit_mu_hat,
    limit_term,
    mu_cyl,
    refine,
    repeated_block_measures,
    repeated_block_verdict,
    variation_lower_bound,
)
from .decoherence import DecoherenceState, Event, VectorMeasureValue
from .errors import ResourceLimitError
from .exact import Dyadic, GaussianScaled, RootTwoScaled
from .paths import (
    PathSpace,
    change_residue_counts,
    changes_count,
    changes_vector,
    ones_count,
    ones_vector,
    path_string,
    same_parity,
)
from .qintegral import (
    IntegralStrategy,
    RandomVariable,
    disjoint_support_grade2_check,
    integral,
    min_matrix_det_check,
    min_matrix_entry,
    nonadditivity_witness,
    psd_check,
)
from .qmeasure import (
    Interference,
    Strategy,
    enumerate_precluded,
    full_space_measure,
    grade2_check,
    interference,
    interference_composition_check,
    mu,
    mu_from_census,
    pair_measure,
    regularity_check,
    scaling_check,
)
from .quadratic import (
    DisjointWitness,
    QMeasureTable,
    SetSystem,
    cardinality_squared_table,
    is_q_measure,
    is_quadratic_algebra,
    odd_count_system,
    parse_system_file,
    strongly_disjoint,
    three_type_system,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_ZEROS",
    "AtMostKOnes",
    "BlockMeasure",
    "ComplementOfFinitePathSet",
    "CylinderEvent",
    "DecoherenceState",
    "DisjointWitness",
    "Dyadic",
    "Event",
    "EventualPath",
    "FinitePathSet",
    "FinitelyManyOnes",
    "GaussianScaled",
    "InfinitelyManyOnes",
    "IntegralStrategy",
    "Interference",
    "LimitReport",
    "LimitVerdict",
    "PathSpace",
    "QMeasureTable",
    "RandomVariable",
    "ResourceLimitError",
    "RootTwoScaled",
    "SetSystem",
    "Strategy",
    "SymbolicEvent",
    "VectorMeasureValue",
    "approximant",
    "cardinality_squared_table",
    "change_residue_counts",
    "change_residue_profile",
    "change_residue_profile_closed_form",
    "changes_count",
    "changes_vector",
    "classify_sequence",
    "complement_of_constant_closed_form",
    "disjoint_support_grade2_check",
    "elementary",
    "enumerate_precluded",
    "full_space_measure",
    "grade2_check",
    "integral",
    "interference",
    "interference_composition_check",
    "is_q_measure",
    "is_quadratic_algebra",
    "limit_mu_hat",
    "limit_term",
    "min_matrix_det_check",
    "min_matrix_entry",
    "mu",
    "mu_cyl",
    "mu_from_census",
    "nonadditivity_witness",
    "odd_count_system",
    "ones_count",
    "ones_vector",
    "pair_measure",
    "parse_system_file",
    "path_string",
    "psd_check",
    "refine",
    "regularity_check",
    "repeated_block_measures",
    "repeated_block_verdict",
    "same_parity",
    "scaling_check",
    "strongly_disjoint",
    "three_type_system",
    "variation_lower_bound",
]
