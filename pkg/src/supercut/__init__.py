"""Bounded generalised min-cut enumeration and lower-bounded VCSP solving.

Exact rational arithmetic throughout; every fast routine has an exhaustive
reference counterpart for cross-checking.
"""
from .bgmc import (
    BGMCInstance,
    EnumerationResult,
    OptimumClass,
    brute_force_enumerate,
    classify_optimum,
    enumerate_alpha_optimal,
    enumerate_bounded,
    gmc_enumerate,
    restrict_instance,
    tau,
)
from .classify import (
    ClassReport,
    Operation,
    admits_multimorphism,
    admits_polymorphism,
    classify_boolean_s,
    classify_three_element_seds,
    language_class,
    minimal_alpha,
)
from .approx import (
    build_global_instance,
    sds_to_superadditive,
    seds_to_eds,
    solve_lower_bounded,
    solve_with_constants,
)
from .errors import (
    BudgetExceeded,
    InfeasibleBounds,
    InputError,
    LanguageError,
    ModeError,
    NormalisationError,
    PreconditionError,
    SupercutError,
)
from .ext import INF, fmt, to_ext
from .graphs import WeightedGraph, cut_weight, merge_vertices
from .reductions import (
    build_gadget_instance,
    compute_epsilon,
    compute_nu,
    compute_omega,
    find_sds_violation,
)
from .relations import WeightedRelation
from .setfunctions import (
    GeneratorSetFunction,
    KSetFunction,
    SetFunction,
    ShiftedSetFunction,
    TableSetFunction,
    approximates,
    is_increasing,
    is_normalised,
    is_superadditive,
    relation_to_ksetfn,
)
from .vcsp import (
    Language,
    Mode,
    VCSPInstance,
    brute_solve,
    evaluate,
    fix_language,
    fix_relation,
    make_rcut_language,
    negate_language,
)

__version__ = "0.1.0"
