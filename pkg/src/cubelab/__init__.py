"""cubelab: exact and Monte-Carlo study of adversarially robust learning
of Boolean concepts on the hypercube."""

from .errors import CapExceededError, CubelabError, RealizabilityError, ValidationError
from .hypercube import (
    EXACT_ORACLE_CAP,
    Point,
    PointSet,
    ball,
    ball_size,
    expand,
    hamming_distance,
)
from .concepts import (
    Clause,
    CnfFormula,
    DecisionList,
    Literal,
    MonotoneConjunction,
    PartialAssignment,
    Term,
    disagreement_cnfs,
    enumerate_assignments,
    evaluate,
    format_concept,
    maximal_disjoint_clauses,
    parse_concept,
    restrict,
    satisfying_set,
)
from .distributions import (
    Distribution,
    LabeledSample,
    condition,
    draw_labeled_sample,
    log_lipschitz_constant,
    marginal,
    mass,
    pmf,
    product,
    rng_stream,
    sample,
    table,
    to_table,
    uniform,
)
from .risk import (
    RiskReport,
    SearchResult,
    adversarial_example_search,
    constant_in_ball_risk_exact,
    robust_risk_exact,
    robust_risk_mc,
    standard_risk,
)
from .expansion import (
    ConstantsBundle,
    ExpansionCheck,
    ExpansionReport,
    certified_conjunction_length,
    expansion_constants,
    expansion_mass,
    log2_mass_threshold,
    log_adversary_radius,
    safe_conjunction_length,
    safe_disjoint_clause_count,
    verify_expansion_bound,
)
from .learners import (
    AccuracyBudget,
    LearnerConfig,
    LearnOutcome,
    learn_decision_list,
    learn_monotone_conjunction,
    pac_accuracy_for_robustness,
    robust_learn,
)
from .lowerbound import (
    MEAN_RISK_FLOOR,
    LowerBoundConfig,
    LowerBoundReport,
    TrialRecord,
    agreement_sample_threshold,
    allzero_probability,
    disjoint_conjunction_pair,
    run_lowerbound_experiment,
    simulate_allzero_frequency,
)

__version__ = "0.1.0"
