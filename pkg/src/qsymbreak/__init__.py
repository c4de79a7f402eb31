"""Symmetry detection and lex-leader symmetry breaking for QBF.

The package reads and writes QDIMACS (plus a DNF cube sidecar format),
evaluates quantified Boolean formulas by their game semantics, detects
syntactic symmetries through a colored-graph automorphism search, and
builds Tseitin-encoded lex-leader breakers for both players, verified
against brute-force strategy enumeration at desk scale.
"""

from .benchmarks import gen_kbkf, gen_planted_qbf, gen_random_qbf, kbkf_level_symmetry
from .breakers import (
    AUGMENT_MODES,
    BreakerFormula,
    BreakerReport,
    EncodedBreaker,
    augment_instance,
    augmented_formula,
    encode_existential_cnf,
    encode_universal_dnf,
    lex_leader_formula,
    select_group_elements,
    universal_lex_leader_formula,
    verify_breaker,
)
from .detect import (
    DEFAULT_BUDGET,
    AutomorphismResult,
    ColoredGraph,
    DetectionResult,
    DetectionWarning,
    brute_force_symmetries,
    build_symmetry_graph,
    detect_symmetries,
    find_automorphisms,
    refine_colors,
    to_signed_permutations,
)
from .errors import (
    CapExceededError,
    MissingAssignmentError,
    QdimacsParseError,
    QsymbreakError,
    ValidationError,
    VerificationError,
)
from .formulas import (
    FALSE,
    TRUE,
    And,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    Xor,
    all_assignments,
    clauses_to_formula,
    cubes_to_formula,
    equivalent,
    evaluate,
    literal,
    substitute,
)
from .groups import (
    AdmissibilityReport,
    AdmissibleMap,
    SignedPermutation,
    check_admissible,
    format_generator,
    format_generators,
    group_closure,
    is_syntactic_symmetry,
    orbit_of_assignment,
    parse_generator,
    parse_generators,
)
from .qdimacs import (
    EXISTS,
    FORALL,
    Prefix,
    QbfInstance,
    QuantifierBlock,
    normalize_clause,
    parse_dnf,
    parse_qdimacs,
    serialize_dnf,
    serialize_qdimacs,
)
from .strategies import (
    EXISTENTIAL,
    UNIVERSAL,
    Strategy,
    common_path,
    count_strategies,
    enumerate_strategies,
    qbf_truth,
    random_strategy,
    semantic_orbits,
    strategy_value,
)

__version__ = "0.1.0"

__all__ = [
    "AUGMENT_MODES",
    "AdmissibilityReport",
    "AdmissibleMap",
    "And",
    "AutomorphismResult",
    "BreakerFormula",
    "BreakerReport",
    "CapExceededError",
    "ColoredGraph",
    "Const",
    "DEFAULT_BUDGET",
    "DetectionResult",
    "DetectionWarning",
    "EXISTENTIAL",
    "EXISTS",
    "EncodedBreaker",
    "FALSE",
    "FORALL",
    "Formula",
    "Iff",
    "Implies",
    "MissingAssignmentError",
    "Not",
    "Or",
    "Prefix",
    "QbfInstance",
    "QdimacsParseError",
    "QsymbreakError",
    "QuantifierBlock",
    "SignedPermutation",
    "Strategy",
    "TRUE",
    "UNIVERSAL",
    "ValidationError",
    "Var",
    "VerificationError",
    "Xor",
    "all_assignments",
    "augment_instance",
    "augmented_formula",
    "brute_force_symmetries",
    "build_symmetry_graph",
    "check_admissible",
    "clauses_to_formula",
    "common_path",
    "count_strategies",
    "cubes_to_formula",
    "detect_symmetries",
    "encode_existential_cnf",
    "encode_universal_dnf",
    "enumerate_strategies",
    "equivalent",
    "evaluate",
    "find_automorphisms",
    "format_generator",
    "format_generators",
    "gen_kbkf",
    "gen_planted_qbf",
    "gen_random_qbf",
    "group_closure",
    "is_syntactic_symmetry",
    "kbkf_level_symmetry",
    "lex_leader_formula",
    "literal",
    "normalize_clause",
    "orbit_of_assignment",
    "parse_dnf",
    "parse_generator",
    "parse_generators",
    "parse_qdimacs",
    "qbf_truth",
    "random_strategy",
    "refine_colors",
    "select_group_elements",
    "semantic_orbits",
    "serialize_dnf",
    "serialize_qdimacs",
    "strategy_value",
    "substitute",
    "to_signed_permutations",
    "universal_lex_leader_formula",
    "verify_breaker",
]
