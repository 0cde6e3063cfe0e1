"""Seeded random generators for concepts and distributions used in tests."""

from __future__ import annotations

import math
import random

import numpy as np

from cubelab.concepts import Clause, CnfFormula, DecisionList, Literal, MonotoneConjunction, Term
from cubelab.distributions import Distribution, table


def random_term(rnd: random.Random, n: int, k: int, min_width: int = 1) -> Term:
    width = rnd.randint(min_width, max(min_width, k))
    vs = rnd.sample(range(n), min(width, n))
    return Term(tuple(Literal(v, rnd.random() < 0.5) for v in vs))


def random_clause(rnd: random.Random, n: int, k: int) -> Clause:
    width = rnd.randint(1, k)
    vs = rnd.sample(range(n), min(width, n))
    return Clause(tuple(Literal(v, rnd.random() < 0.5) for v in vs))


def random_cnf(rnd: random.Random, n: int, k: int, clauses: int) -> CnfFormula:
    return CnfFormula(n, tuple(random_clause(rnd, n, k) for _ in range(clauses)), k)


def random_dl(rnd: random.Random, n: int, k: int, items: int) -> DecisionList:
    body = [(random_term(rnd, n, k), rnd.randint(0, 1)) for _ in range(items)]
    body.append((Term(), rnd.randint(0, 1)))
    return DecisionList(n, k, tuple(body))


def random_mconj(rnd: random.Random, n: int, max_width: int | None = None) -> MonotoneConjunction:
    width = rnd.randint(0, n if max_width is None else min(max_width, n))
    return MonotoneConjunction(n, tuple(rnd.sample(range(n), width)))


def random_positive_table(n: int, seed: int, spread: float = 1.5) -> Distribution:
    """A strictly positive random table; its smoothness constant is whatever
    the edge scan says."""
    rng = np.random.default_rng(seed)
    w = np.exp(rng.uniform(-spread, spread, size=1 << n))
    return table(w / w.sum())


def random_bounded_table(n: int, alpha: float, seed: int) -> Distribution:
    """Non-product table whose edge ratios are at most alpha by construction.

    Uses weights exp(sum_i a_i x_i + sum_{i<j} b_ij x_i x_j) with the row
    sums of |a| and |b| scaled so no single-coordinate flip can move the
    exponent by more than log(alpha).
    """
    rng = np.random.default_rng(seed)
    cap = math.log(alpha)
    a = rng.uniform(-1.0, 1.0, size=n)
    b = np.triu(rng.uniform(-1.0, 1.0, size=(n, n)), k=1)
    sym = b + b.T
    worst = np.abs(a) + np.abs(sym).sum(axis=1)
    scale = cap / worst.max() * rng.uniform(0.5, 1.0)
    a *= scale
    b *= scale
    idx = np.arange(1 << n)
    bits = (idx[:, None] >> np.arange(n)) & 1
    expo = bits @ a + np.einsum("xi,ij,xj->x", bits, b, bits)
    w = np.exp(expo)
    return table(w / w.sum())
