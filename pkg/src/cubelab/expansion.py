"""Satisfying-mass expansion machinery for CNF formulas.

Central quantity: the probability mass of points within Hamming distance
rho of a satisfying assignment of a formula ("expanded mass"; at rho = 0
it is just the satisfying mass).  The module provides

* exact and Monte-Carlo measurement of that mass,
* the conjunction-length and disjoint-clause-count thresholds that force
  the expanded mass below a target epsilon,
* the four-constant recurrence, in exact and dominating closed form,
  whose mass threshold guarantees a small log(n)-expansion for k-CNFs,
* an instance checker reporting pass / fail / vacuous for that guarantee.

All threshold arithmetic lives in log2 space: already at k = 2 the mass
thresholds drop below 2^-1000, far outside linear floating point.  Base-2
logarithms are used throughout (a different base only rescales exponents
by a constant); the log(n)-bounded adversary gets radius floor(log2 n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

from .concepts import CnfFormula, maximal_disjoint_clauses, satisfying_set
from .distributions import Distribution, log_lipschitz_constant, mass, rng_stream, sample
from .errors import ValidationError
from .hypercube import expand
from .risk import DEFAULT_SEARCH_BUDGET, SearchResult, _ball_search, hoeffding_radius

LOG2_E = math.log2(math.e)


def log_adversary_radius(n: int) -> int:
    """Budget of a log(n)-bounded adversary: floor(log2 n)."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    return n.bit_length() - 1


def _check_epsilon(eps: float) -> None:
    if not 0.0 < eps < 0.5:
        raise ValidationError(f"epsilon must lie in (0, 1/2), got {eps}")


@dataclass(frozen=True)
class ExpansionReport:
    """Measured satisfying mass and expanded mass of one formula."""

    mass_base: float
    mass_expanded: float
    rho: int
    mode: str  # "exact" | "monte-carlo"
    disjoint_set_size: int
    log2_assignment_bound: float | None = None
    trials: int | None = None
    confidence_radius: float = 0.0
    search_budget_exhausted: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.mass_base <= self.mass_expanded <= 1.0 + 1e-12:
            raise ValidationError(
                f"need 0 <= base {self.mass_base} <= expanded {self.mass_expanded} <= 1"
            )

    def to_dict(self) -> dict:
        return asdict(self)


def expansion_mass(phi: CnfFormula, rho: int, d: Distribution, mode: str = "exact",
                   trials: int = 10_000, delta: float = 1e-3, seed: int = 0,
                   budget: int = DEFAULT_SEARCH_BUDGET) -> ExpansionReport:
    """Satisfying mass and rho-expanded mass of phi under d."""
    if phi.n != d.n:
        raise ValidationError(f"dimension mismatch: formula n={phi.n}, distribution n={d.n}")
    if rho < 0:
        raise ValidationError(f"radius must be >= 0, got {rho}")
    m_size = len(maximal_disjoint_clauses(phi)[0])
    if mode == "exact":
        sat = satisfying_set(phi)
        return ExpansionReport(
            mass_base=mass(d, sat),
            mass_expanded=mass(d, expand(sat, rho)),
            rho=rho,
            mode="exact",
            disjoint_set_size=m_size,
        )
    if mode != "monte-carlo":
        raise ValidationError(f"unknown mode {mode!r}")
    rng = rng_stream(seed)
    xs = sample(d, trials, rng)
    base_hits = 0
    expanded_hits = 0
    truncated = False
    for x in xs:
        if phi.evaluate_bits(x.bits):
            base_hits += 1
            expanded_hits += 1
            continue
        res: SearchResult = _ball_search(x, phi.evaluate_bits, rho, budget)
        if res.found:
            expanded_hits += 1
        elif res.truncated:
            truncated = True
    return ExpansionReport(
        mass_base=base_hits / trials,
        mass_expanded=expanded_hits / trials,
        rho=rho,
        mode="monte-carlo",
        disjoint_set_size=m_size,
        trials=trials,
        confidence_radius=hoeffding_radius(trials, delta),
        search_budget_exhausted=truncated,
    )


def certified_conjunction_length(alpha: float, threshold: float) -> int:
    """Largest d such that satisfying mass below ``threshold`` certifies a
    conjunction of at least d variables.

    A conjunction on fewer than d variables has satisfying mass at least
    (1+alpha)^-(d-1) under any alpha-smooth distribution, so mass strictly
    below threshold <= (1+alpha)^-d pins the length at d or more.
    """
    if alpha < 1.0:
        raise ValidationError(f"alpha must be >= 1, got {alpha}")
    if not 0.0 < threshold < 1.0:
        raise ValidationError(f"threshold must lie in (0,1), got {threshold}")
    t = -math.log(threshold) / math.log(1.0 + alpha)
    return max(0, math.floor(t + 1e-12))


def _safe_count(eps: float, rho: int, eta: float) -> int:
    _check_epsilon(eps)
    if rho < 0:
        raise ValidationError(f"radius must be >= 0, got {rho}")
    return math.ceil(max((4.0 / eta**2) * math.log2(1.0 / eps), 2.0 * rho / eta))


def safe_conjunction_length(eps: float, rho: int, alpha: float) -> int:
    """Smallest conjunction length whose rho-expanded mass is forced <= eps.

    With eta = 1/(1+alpha), any conjunction of at least
    max((4/eta^2) log2(1/eps), 2 rho / eta) literals keeps the expanded
    mass of its satisfying set at or below eps under alpha-smooth
    distributions.
    """
    if alpha < 1.0:
        raise ValidationError(f"alpha must be >= 1, got {alpha}")
    return _safe_count(eps, rho, 1.0 / (1.0 + alpha))


def safe_disjoint_clause_count(eps: float, rho: int, k: int, alpha: float) -> int:
    """Disjoint-clause count forcing a k-CNF's rho-expanded mass <= eps.

    Same threshold shape as safe_conjunction_length but with
    eta = (1+alpha)^-k; at k = 1 the two coincide.
    """
    if alpha < 1.0:
        raise ValidationError(f"alpha must be >= 1, got {alpha}")
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    return _safe_count(eps, rho, (1.0 + alpha) ** -k)


@dataclass(frozen=True)
class ConstantsBundle:
    """The four constants of the k-CNF expansion threshold.

    The threshold on satisfying mass is c1 * eps^c2 * min(eps^c3, n^-c4);
    c1 is carried only as log2_c1 because it underflows linear floats
    already at k = 2.
    """

    k: int
    alpha: float
    eta: float
    log2_c1: float
    c2: float
    c3: float
    c4: float
    variant: str  # "recurrence" | "closed-form"

    def __post_init__(self) -> None:
        if self.variant not in ("recurrence", "closed-form"):
            raise ValidationError(f"unknown constants variant {self.variant!r}")
        if self.log2_c1 > 0.0:
            raise ValidationError(f"log2_c1 must be <= 0, got {self.log2_c1}")
        if min(self.c2, self.c3, self.c4) < 0.0:
            raise ValidationError("c2, c3, c4 must be nonnegative")
        if self.c3 < self.c2:
            raise ValidationError(f"expected c3 >= c2, got c3={self.c3}, c2={self.c2}")
        if self.c3 < 0.5 * self.eta * self.c4 * (1.0 - 1e-12):
            raise ValidationError(
                f"expected c3 >= (eta/2) c4, got c3={self.c3}, eta={self.eta}, c4={self.c4}"
            )

    @property
    def c1(self) -> float:
        """Linear-space c1, or 0.0 when it underflows float64."""
        return 2.0 ** self.log2_c1 if self.log2_c1 > -1074 else 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["c1"] = self.c1 if self.log2_c1 > -1074 else None
        return d


def expansion_constants(k: int, alpha: float, variant: str = "recurrence") -> ConstantsBundle:
    """Constants for the k-CNF expansion threshold.

    ``recurrence`` iterates the exact four-term recurrence with the
    level-i smoothness factor eta_i = (1+alpha)^-i, starting from the
    width-1 base (1, 0, 4/eta^2, 2/eta).  ``closed-form`` fixes eta at the
    top level across the whole recurrence, which dominates the exact
    variant in the threshold direction and admits the closed expressions
    c2 = 2 (8/eta^2)^(k-1), c3 = (8/eta^2)^k, c4 = (2/eta) (8/eta^2)^(k-1),
    log2 c1 = -2 sum_{i=2..k} i (8/eta^2)^(i-1).
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if alpha < 1.0:
        raise ValidationError(f"alpha must be >= 1, got {alpha}")
    eta_k = (1.0 + alpha) ** -k
    if variant == "closed-form":
        base = 8.0 / eta_k**2
        log2_c1 = -2.0 * sum(i * base ** (i - 1) for i in range(2, k + 1)) + 0.0
        return ConstantsBundle(
            k=k, alpha=alpha, eta=eta_k,
            log2_c1=log2_c1,
            c2=2.0 * base ** (k - 1),
            c3=base**k,
            c4=(2.0 / eta_k) * base ** (k - 1),
            variant="closed-form",
        )
    if variant != "recurrence":
        raise ValidationError(f"unknown constants variant {variant!r}")
    eta = 1.0 / (1.0 + alpha)
    log2_c1, c2, c3, c4 = 0.0, 0.0, 4.0 / eta**2, 2.0 / eta
    for level in range(2, k + 1):
        eta = (1.0 + alpha) ** -level
        biggest = max(c2, c3)
        log2_c1 = log2_c1 - level * (c2 + c3)
        c2, c3, c4 = c2 + c3, (8.0 / eta**2) * biggest, (2.0 / eta) * biggest
    return ConstantsBundle(k=k, alpha=alpha, eta=eta_k, log2_c1=log2_c1,
                           c2=c2, c3=c3, c4=c4, variant="recurrence")


def log2_mass_threshold(eps: float, n: int, k: int, alpha: float,
                        variant: str = "recurrence") -> float:
    """log2 of the satisfying-mass premise c1 eps^c2 min(eps^c3, n^-c4)."""
    _check_epsilon(eps)
    if n < 2:
        raise ValidationError(f"n must be >= 2, got {n}")
    c = expansion_constants(k, alpha, variant)
    log2_eps = math.log2(eps)
    return c.log2_c1 + c.c2 * log2_eps + min(c.c3 * log2_eps, -c.c4 * math.log2(n))


def log2_assignment_count_bound(eps: float, n: int, k: int, alpha: float) -> float:
    """log2 of the cap on assignments of a small disjoint-clause set:
    2^k * max((1/eps)^(4/eta^2), n^(2/eta)) with eta = (1+alpha)^-k."""
    _check_epsilon(eps)
    eta = (1.0 + alpha) ** -k
    return k + max((4.0 / eta**2) * math.log2(1.0 / eps), (2.0 / eta) * math.log2(n))


@dataclass(frozen=True)
class ExpansionCheck:
    """Instance-level verdict for the expansion guarantee.

    ``vacuous`` means the satisfying mass did not meet the premise
    threshold, so the conclusion was not exercised; at desk scale that is
    the common case for k >= 2 and is reported rather than hidden.  The
    conjunction-length and disjoint-clause-count fallbacks are checked
    whenever applicable, since they bite at realistic sizes.
    """

    verdict: str  # "pass" | "fail" | "vacuous"
    epsilon: float
    rho: int
    k: int
    alpha: float
    mass_base: float
    mass_expanded: float
    log2_mass_base: float | None
    log2_threshold: float
    premise_met: bool
    min_length_check: bool | None
    clause_count_check: bool | None
    assignment_bound_check: bool | None
    disjoint_set_size: int
    log2_assignment_count: float
    log2_assignment_bound: float

    @property
    def checks_pass(self) -> bool:
        subs = (self.min_length_check, self.clause_count_check, self.assignment_bound_check)
        return self.verdict != "fail" and all(s is not False for s in subs)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["checks_pass"] = self.checks_pass
        return d


def _is_conjunction(phi: CnfFormula) -> bool:
    return all(c.width <= 1 for c in phi.clauses)


def verify_expansion_bound(phi: CnfFormula, d: Distribution, eps: float,
                           rho: int | None = None,
                           variant: str = "recurrence") -> ExpansionCheck:
    """Check the expansion guarantee on one formula instance.

    Premise met (satisfying mass below the constants threshold): assert
    the rho-expanded mass is <= eps; otherwise report vacuous.  On top of
    that, whenever the formula is a plain conjunction of at least the safe
    length, or its maximal disjoint clause set reaches the safe count, the
    expanded mass must be <= eps regardless of the premise; and whenever
    the disjoint set is small, its assignment count must respect the
    stated cap.  All comparisons run in log2 space.
    """
    _check_epsilon(eps)
    n = phi.n
    if rho is None:
        rho = log_adversary_radius(n)
    alpha = log_lipschitz_constant(d)
    k = max(phi.k, 1)
    report = expansion_mass(phi, rho, d, mode="exact")
    s0, s_rho = report.mass_base, report.mass_expanded

    log2_threshold = log2_mass_threshold(eps, n, k, alpha, variant)
    log2_s0 = math.log2(s0) if s0 > 0.0 else None
    premise_met = s0 == 0.0 or log2_s0 < log2_threshold
    if premise_met:
        verdict = "pass" if s_rho <= eps else "fail"
    else:
        verdict = "vacuous"

    min_length_check: bool | None = None
    if _is_conjunction(phi) and not phi.is_constant_false:
        distinct = len({c.literals[0].var for c in phi.clauses if c.literals})
        if distinct >= safe_conjunction_length(eps, rho, alpha):
            min_length_check = s_rho <= eps

    m_idx, m_vars = maximal_disjoint_clauses(phi)
    clause_count_check: bool | None = None
    if len(m_idx) >= safe_disjoint_clause_count(eps, rho, k, alpha):
        clause_count_check = s_rho <= eps

    eta = (1.0 + alpha) ** -k
    count_threshold = max((4.0 / eta**2) * math.log2(1.0 / eps),
                          (2.0 / eta) * math.log2(n)) if n >= 2 else 0.0
    log2_count = float(sum(phi.clauses[i].width for i in m_idx))
    log2_bound = log2_assignment_count_bound(eps, n, k, alpha) if n >= 2 else float("inf")
    assignment_bound_check: bool | None = None
    if len(m_idx) < count_threshold:
        assignment_bound_check = log2_count <= log2_bound + 1e-9

    return ExpansionCheck(
        verdict=verdict,
        epsilon=eps,
        rho=rho,
        k=k,
        alpha=alpha,
        mass_base=s0,
        mass_expanded=s_rho,
        log2_mass_base=log2_s0,
        log2_threshold=log2_threshold,
        premise_met=premise_met,
        min_length_check=min_length_check,
        clause_count_check=clause_count_check,
        assignment_bound_check=assignment_bound_check,
        disjoint_set_size=len(m_idx),
        log2_assignment_count=log2_count,
        log2_assignment_bound=log2_bound,
    )
