"""Standard and adversarially robust risk, exact and Monte-Carlo.

The robust notion measured here is ball disagreement with the ground
truth: x is at risk when some z within Hamming distance rho of x has
h(z) != c(z).  The constant-in-ball variant instead flags any z in the
ball with h(z) != c(x), penalizing label changes of h near x; the two
orders are incomparable in general.

Exact mode works on dense indicators (disagreement set, expanded, then
massed) and is limited to the dense-set cap.  Monte-Carlo mode samples x
and runs a nearest-first ball search for a witness; when a search hits
its point budget before exhausting the ball the estimate is flagged as a
lower bound rather than silently trusted.  Confidence radii are
Hoeffding at the stated delta, which is distribution-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Callable

import numpy as np

from .concepts import Concept, evaluate, satisfying_set
from .distributions import Distribution, mass, sample, rng_stream
from .errors import ValidationError
from .hypercube import EXACT_ORACLE_CAP, Point, ball_size, expand, ball_masks

DEFAULT_SEARCH_BUDGET = 10**6


@dataclass(frozen=True)
class RiskReport:
    """A risk estimate plus how it was obtained."""

    value: float
    mode: str  # "exact" | "monte-carlo"
    trials: int | None = None
    confidence_radius: float = 0.0
    search_budget_exhausted: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValidationError(f"risk value {self.value} outside [0,1]")
        if self.mode not in ("exact", "monte-carlo"):
            raise ValidationError(f"unknown risk mode {self.mode!r}")
        if self.mode == "exact" and self.confidence_radius != 0.0:
            raise ValidationError("exact reports carry zero confidence radius")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one adversarial ball search."""

    witness: Point | None
    examined: int
    truncated: bool

    @property
    def found(self) -> bool:
        return self.witness is not None


def _dims(h: Concept, c: Concept) -> int:
    hn, cn = getattr(h, "n", None), getattr(c, "n", None)
    if hn is None or cn is None or hn != cn:
        raise ValidationError(f"hypothesis/target dimension mismatch: {hn} vs {cn}")
    return hn


def _check_rho(rho: int, n: int) -> None:
    if not 0 <= rho <= n:
        raise ValidationError(f"radius must satisfy 0 <= rho <= n={n}, got {rho}")


def standard_risk(h: Concept, c: Concept, d: Distribution) -> RiskReport:
    """Probability under d that h and c disagree."""
    n = _dims(h, c)
    if n != d.n:
        raise ValidationError(f"distribution dimension {d.n} != concept dimension {n}")
    disagreement = satisfying_set(h) ^ satisfying_set(c)
    return RiskReport(value=mass(d, disagreement), mode="exact")


def robust_risk_exact(h: Concept, c: Concept, rho: int, d: Distribution) -> RiskReport:
    """Mass of the rho-expansion of the disagreement set."""
    n = _dims(h, c)
    _check_rho(rho, n)
    if n != d.n:
        raise ValidationError(f"distribution dimension {d.n} != concept dimension {n}")
    disagreement = satisfying_set(h) ^ satisfying_set(c)
    return RiskReport(value=mass(d, expand(disagreement, rho)), mode="exact")


def constant_in_ball_risk_exact(h: Concept, c: Concept, rho: int, d: Distribution) -> RiskReport:
    """Mass of {x : some z in B_rho(x) has h(z) != c(x)}."""
    n = _dims(h, c)
    _check_rho(rho, n)
    if n != d.n:
        raise ValidationError(f"distribution dimension {d.n} != concept dimension {n}")
    sat_h = satisfying_set(h)
    sat_c = satisfying_set(c)
    near_zero = expand(sat_h.complement(), rho)  # x can reach h(z)=0
    near_one = expand(sat_h, rho)                # x can reach h(z)=1
    risky = (sat_c & near_zero) | (sat_c.complement() & near_one)
    return RiskReport(value=mass(d, risky), mode="exact")


def _ball_search(x: Point, disagrees: Callable[[int], bool], rho: int,
                 budget: int) -> SearchResult:
    examined = 0
    total = ball_size(x.n, rho)
    for mask in ball_masks(x.n, rho):
        if examined >= budget:
            return SearchResult(None, examined, truncated=True)
        zbits = x.bits ^ mask
        examined += 1
        if disagrees(zbits):
            return SearchResult(Point(x.n, zbits), examined, truncated=False)
    return SearchResult(None, examined, truncated=examined < total)


def adversarial_example_search(x: Point, h: Concept, c: Concept, rho: int,
                               budget: int = DEFAULT_SEARCH_BUDGET) -> SearchResult:
    """Nearest-first scan of B_rho(x) for a point where h and c disagree.

    Returns the first witness in the fixed ball order (so a disagreeing x
    is returned immediately at distance 0).  Exhausting the budget without
    completing the ball is reported as truncation, not as absence.
    """
    n = _dims(h, c)
    if x.n != n:
        raise ValidationError(f"point dimension {x.n} != concept dimension {n}")
    if budget < 1:
        raise ValidationError(f"search budget must be >= 1, got {budget}")
    _check_rho(rho, n)

    def disagrees(zbits: int) -> bool:
        z = Point(n, zbits)
        return evaluate(h, z) != evaluate(c, z)

    return _ball_search(x, disagrees, rho, budget)


class _CachedPredicate:
    """Memoized h(z) != c(z) on raw vertex encodings.

    Values come from the same pointwise evaluation the public search uses;
    caching only avoids re-evaluating vertices shared between overlapping
    balls.
    """

    def __init__(self, h: Concept, c: Concept, n: int):
        self._h = h
        self._c = c
        self._n = n
        self._arr = np.full(1 << n, -1, dtype=np.int8) if n <= EXACT_ORACLE_CAP else None
        self._dict: dict[int, bool] = {}

    def __call__(self, zbits: int) -> bool:
        if self._arr is not None:
            v = self._arr[zbits]
            if v < 0:
                v = int(self._h.evaluate_bits(zbits) != self._c.evaluate_bits(zbits))
                self._arr[zbits] = v
            return bool(v)
        v = self._dict.get(zbits)
        if v is None:
            v = self._h.evaluate_bits(zbits) != self._c.evaluate_bits(zbits)
            self._dict[zbits] = v
        return v


def hoeffding_radius(trials: int, delta: float) -> float:
    """Two-sided Hoeffding deviation for a [0,1] mean at confidence 1-delta."""
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    if not 0.0 < delta < 1.0:
        raise ValidationError(f"delta must lie in (0,1), got {delta}")
    return math.sqrt(math.log(2.0 / delta) / (2.0 * trials))


def robust_risk_mc(h: Concept, c: Concept, rho: int, d: Distribution, trials: int,
                   delta: float = 1e-3, seed: int = 0,
                   budget: int = DEFAULT_SEARCH_BUDGET) -> RiskReport:
    """Monte-Carlo estimate of the ball-disagreement risk.

    Draws x from d and counts trials whose ball search finds a witness.
    Truncated searches count as failures, so under truncation the value is
    an honest lower-bound estimate and the report says so.
    """
    n = _dims(h, c)
    _check_rho(rho, n)
    radius = hoeffding_radius(trials, delta)
    pred = _CachedPredicate(h, c, n)
    rng = rng_stream(seed)
    xs = sample(d, trials, rng)
    successes = 0
    any_truncated = False
    for x in xs:
        res = _ball_search(x, pred, rho, budget)
        if res.found:
            successes += 1
        elif res.truncated:
            any_truncated = True
    return RiskReport(
        value=successes / trials,
        mode="monte-carlo",
        trials=trials,
        confidence_radius=radius,
        search_budget_exhausted=any_truncated,
    )
