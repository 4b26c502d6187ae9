"""Similarity-based fuzzy inference with restricted equivalence functions."""

from .algebra import (
    Aggregation,
    Generator,
    Implication,
    Negation,
    PropertyReport,
    TNorm,
    check_property,
    residuum,
    residuum_bisect,
)
from .bench import BenchReport, SweepReport, compare_counts, count_flat, count_hier, scaling_sweep
from .counters import OpCounter
from .errors import (
    DecompositionError,
    ExplosionError,
    RefsimError,
    SemanticError,
    SystemFileError,
    UniverseMismatchError,
    UnsupportedConnectiveError,
)
from .fuzzyset import (
    FuzzyRelation,
    FuzzySet,
    Universe,
    alpha_equal,
    combine,
    complement,
    cri_compose,
    intersect,
    product_extend,
    relation_from_rule,
    similarity,
    union,
)
from .hier import (
    DistributivityReport,
    EquationReport,
    check_exchange,
    check_factorization,
    check_similarity_distributivity,
    infer_hier_conjunction,
    infer_hier_implication,
)
from .ref import (
    REF,
    Decomposition,
    RefCertificate,
    catalog_ref,
    check_ref_preconditions,
    compose_ref,
    decompose_ref,
    generated_ref,
    validate_ref,
)
from .sbar import InferenceResult, Rule, check_equality_bound, infer_flat, similarity_difference_bound
from .system import System, dump_normalized, load_system, verify_reference

__version__ = "0.1.0"
