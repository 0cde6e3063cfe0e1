"""Proper PAC learners and the robust-learning wrapper.

Two consistent learners are provided: the classic closure learner for
monotone conjunctions (intersect the positive examples) and a greedy
cover learner for width-k decision lists (repeatedly commit the first
term, in ascending width then lexicographic literal order, that covers
only same-labeled remaining examples).  Both are proper and achieve zero
training error whenever the sample is realizable; otherwise they raise
RealizabilityError.

``robust_learn`` turns the decision-list learner into a learner against a
log(n)-bounded adversary by tightening the accuracy it asks of the
standard learner.  In ``theory`` mode the tightened accuracy comes from
the expansion constants and is reported in log2 space together with the
implied sample-size requirement (astronomical beyond k = 1, which is the
point of reporting it); in ``direct`` mode the learner simply trains at
the requested accuracy, the optimistic reading under which PAC learners
double as robust learners.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, asdict

from .concepts import DecisionList, Literal, MonotoneConjunction, Term
from .distributions import LabeledSample
from .errors import RealizabilityError, ValidationError
from .expansion import LOG2_E, expansion_constants, _check_epsilon


@dataclass(frozen=True)
class LearnerConfig:
    k: int
    epsilon: float
    delta: float
    alpha: float = 1.0
    mode: str = "direct"  # "direct" | "theory"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValidationError(f"k must be >= 1, got {self.k}")
        _check_epsilon(self.epsilon)
        if not 0.0 < self.delta < 0.5:
            raise ValidationError(f"delta must lie in (0, 1/2), got {self.delta}")
        if self.alpha < 1.0:
            raise ValidationError(f"alpha must be >= 1, got {self.alpha}")
        if self.mode not in ("direct", "theory"):
            raise ValidationError(f"unknown learner mode {self.mode!r}")


@dataclass(frozen=True)
class LearnOutcome:
    hypothesis: DecisionList | MonotoneConjunction
    sample_size_used: int
    consistent_on_sample: bool
    mode: str
    hypothesis_items: int
    hypothesis_literals: int
    log2_pac_epsilon: float | None = None
    log2_sample_required: float | None = None
    sample_requirement_met: bool | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["hypothesis"] = str(self.hypothesis)
        return d


def learn_monotone_conjunction(s: LabeledSample) -> MonotoneConjunction:
    """The inclusion-maximal monotone conjunction consistent with s.

    Intersects the coordinates set in every positive example; with no
    positives the maximal hypothesis (all n variables) is returned.  Any
    negative example satisfying the result proves the labels are not
    monotone-conjunction realizable.
    """
    if len(s) == 0:
        raise ValidationError("cannot infer a dimension from an empty sample")
    n = s.n
    acc = (1 << n) - 1
    for p, label in zip(s.points, s.labels):
        if label:
            acc &= p.bits
    hyp = MonotoneConjunction(n, tuple(i for i in range(n) if acc >> i & 1))
    for p, label in zip(s.points, s.labels):
        if not label and hyp.evaluate_bits(p.bits):
            raise RealizabilityError(
                f"negative example {p} satisfies the maximal consistent conjunction"
            )
    return hyp


def _candidate_terms(n: int, k: int) -> list[Term]:
    # Ascending width, then lexicographic over the ordered literal list
    # x0, ~x0, x1, ~x1, ...; combinations mentioning a variable twice are
    # skipped.  This order is the greedy tie-break, so it must not change.
    literals = [Literal(v, negated) for v in range(n) for negated in (False, True)]
    out = [Term()]
    for width in range(1, k + 1):
        for combo in itertools.combinations(literals, width):
            if len({l.var for l in combo}) == width:
                out.append(Term(combo))
    return out


def learn_decision_list(s: LabeledSample, k: int) -> DecisionList:
    """Greedy cover learner for width-k decision lists.

    Repeatedly selects the first candidate term covering at least one
    remaining example such that all covered remaining examples share a
    label, emits (term, label), removes the covered examples, and stops
    when none remain.  The constant-true term is the first candidate, so
    the loop always terminates through it and the list ends in a default.
    Realizable samples always admit a consistent item; running out of
    candidates is reported as a realizability violation.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if len(s) == 0:
        return DecisionList(1, k, ((Term(), 0),))
    n = s.n
    candidates = _candidate_terms(n, k)
    remaining = list(zip((p.bits for p in s.points), s.labels))
    items: list[tuple[Term, int]] = []
    while remaining:
        for term in candidates:
            covered = [lab for bits, lab in remaining if term.satisfied_bits(bits)]
            if not covered:
                continue
            label = covered[0]
            if any(lab != label for lab in covered):
                continue
            items.append((term, label))
            remaining = [(bits, lab) for bits, lab in remaining
                         if not term.satisfied_bits(bits)]
            break
        else:
            raise RealizabilityError(
                f"no width-{k} term separates the remaining {len(remaining)} examples"
            )
    if not items or not items[-1][0].is_true:
        items.append((Term(), 0))
    return DecisionList(n, k, tuple(items))


@dataclass(frozen=True)
class AccuracyBudget:
    """Tightened accuracy for the black-box PAC learner, in log2 space.

    ``log2_pac_epsilon`` is what the standard learner must achieve so that
    every disagreement formula of the learned list stays below the
    expansion threshold; the pair-count fields record the union-bound
    count of item pairs and its crude cap.
    """

    log2_pac_epsilon: float
    log2_pair_count: float
    log2_pair_count_crude: float

    def to_dict(self) -> dict:
        return asdict(self)


def pac_accuracy_for_robustness(eps: float, n: int, k: int, alpha: float,
                                variant: str = "recurrence") -> AccuracyBudget:
    """Accuracy to request from the PAC learner to get eps robust risk.

    Evaluates c1 * r^c2 * min(r^c3, n^-c4) in log2 space, where
    r = 16 eps / (e^4 n^(2k+2)) spreads eps across the crude cap
    e^4 n^(2k+2) / 16 on pairs of decision-list items, itself an upper
    bound on (k (e n / k)^k)^2 candidate clause pairs.
    """
    _check_epsilon(eps)
    if n < 2:
        raise ValidationError(f"n must be >= 2, got {n}")
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    c = expansion_constants(k, alpha, variant)
    log2_n = math.log2(n)
    inner = math.log2(16.0 * eps) - 4.0 * LOG2_E - (2.0 * k + 2.0) * log2_n
    log2_eps0 = c.log2_c1 + c.c2 * inner + min(c.c3 * inner, -c.c4 * log2_n)
    log2_pairs = 2.0 * (math.log2(k) + k * (LOG2_E + log2_n - math.log2(k)))
    log2_crude = 4.0 * LOG2_E + (2.0 * k + 2.0) * log2_n - 4.0
    return AccuracyBudget(log2_eps0, log2_pairs, log2_crude)


def _log2_dl_class_size(n: int, k: int) -> float:
    # Finite-class count: T terms of width <= k, each absent or present
    # with either output, ordered; |class| <= 3^T * T!.
    t = sum(math.comb(n, w) * 2**w for w in range(k + 1))
    return t * math.log2(3.0) + math.lgamma(t + 1) * LOG2_E


def robust_learn(s: LabeledSample, cfg: LearnerConfig) -> LearnOutcome:
    """Train a width-k decision list as a robust learner.

    ``theory`` mode records the tightened accuracy and the sample size a
    consistent learner needs for it (via the finite-class bound
    m >= (ln|class| + ln(1/delta)) / eps0), then trains on the sample it
    was given, honestly flagging whether that size was met.  ``direct``
    mode trains at cfg.epsilon itself.  Both modes output a hypothesis
    consistent with the sample or raise RealizabilityError.
    """
    hyp = learn_decision_list(s, cfg.k)
    consistent = all(hyp.evaluate_bits(p.bits) == lab
                     for p, lab in zip(s.points, s.labels))
    literals = sum(t.width for t, _ in hyp.items)
    if cfg.mode == "direct":
        return LearnOutcome(
            hypothesis=hyp, sample_size_used=len(s), consistent_on_sample=consistent,
            mode="direct", hypothesis_items=len(hyp.items), hypothesis_literals=literals,
        )
    n = s.n if len(s) else 2
    budget = pac_accuracy_for_robustness(cfg.epsilon, n, cfg.k, cfg.alpha)
    log2_need = math.log2(_log2_dl_class_size(n, cfg.k) / LOG2_E
                          + math.log(1.0 / cfg.delta)) - budget.log2_pac_epsilon
    met = len(s) > 0 and math.log2(len(s)) >= log2_need
    return LearnOutcome(
        hypothesis=hyp, sample_size_used=len(s), consistent_on_sample=consistent,
        mode="theory", hypothesis_items=len(hyp.items), hypothesis_literals=literals,
        log2_pac_epsilon=budget.log2_pac_epsilon,
        log2_sample_required=log2_need,
        sample_requirement_met=met,
    )
