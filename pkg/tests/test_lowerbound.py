import math

import pytest

from cubelab.distributions import LabeledSample, uniform
from cubelab.errors import ValidationError
from cubelab.hypercube import Point
from cubelab.learners import learn_monotone_conjunction
from cubelab.lowerbound import (
    MEAN_RISK_FLOOR,
    LowerBoundConfig,
    agreement_sample_threshold,
    allzero_probability,
    disjoint_conjunction_pair,
    run_lowerbound_experiment,
    simulate_allzero_frequency,
    trial_draw,
)
from cubelab.risk import robust_risk_exact


def test_pair_construction():
    c1, c2 = disjoint_conjunction_pair(8, 2)
    assert c1.vars == (0, 1, 2, 3)
    assert c2.vars == (4, 5, 6, 7)
    for n in (8, 12, 16):
        for rho in range(1, n // 4 + 1):
            a, b = disjoint_conjunction_pair(n, rho)
            assert len(a.vars) == len(b.vars) == 2 * rho
            assert not set(a.vars) & set(b.vars)


def test_pair_validation():
    with pytest.raises(ValidationError):
        disjoint_conjunction_pair(7, 2)
    with pytest.raises(ValidationError):
        disjoint_conjunction_pair(8, 0)


def test_pair_risk_floor_exact():
    # full grid: every rho in 1..4 and every dimension from 4*rho to 20
    for rho in range(1, 5):
        for n in range(4 * rho, 21):
            c1, c2 = disjoint_conjunction_pair(n, rho)
            val = robust_risk_exact(c1, c2, rho, uniform(n)).value
            assert val >= (1 - 2.0 ** (-2 * rho)) / 2


def test_allzero_probability_values():
    assert allzero_probability(3, 0) == 1.0
    assert allzero_probability(1, 1) == pytest.approx(0.5625, abs=1e-15)
    assert allzero_probability(2, 8) == pytest.approx((15 / 16) ** 16, abs=1e-15)
    assert allzero_probability(2, 8) == pytest.approx(0.35607, abs=5e-6)


def test_agreement_sample_threshold():
    assert agreement_sample_threshold(1) == pytest.approx(1.2047, abs=2e-4)
    # every integer sample size below the threshold keeps the all-zero
    # probability at 1/2 or more
    for rho in range(1, 8):
        thr = agreement_sample_threshold(rho)
        for m in range(0, math.floor(thr) + 1):
            assert allzero_probability(rho, m) >= 0.5
        assert allzero_probability(rho, math.floor(thr) + 1) < 0.5


def test_exponent_gap_shrinks_for_kappa_below_two():
    # 2^(kappa*rho) * log(2^2rho/(2^2rho - 1)) must vanish as rho grows
    vals = []
    for rho in range(4, 21):
        m = 2.0 ** (1.5 * rho)
        vals.append(m * -math.log1p(-(2.0 ** (-2 * rho))))
    assert vals == sorted(vals, reverse=True)
    assert vals[-1] < 1e-2
    # consistency check at kappa=1.7, rho=3: the proposed sample size
    # already exceeds the agreement threshold at this small rho
    assert 2 ** (1.7 * 3) > agreement_sample_threshold(3)


def test_simulated_allzero_matches_formula():
    rho, m = 2, 8
    freq = simulate_allzero_frequency(rho, m, sims=40_000, seed=5)
    p = allzero_probability(rho, m)
    sigma = math.sqrt(p * (1 - p) / 40_000)
    assert abs(freq - p) < 3 * sigma
    assert simulate_allzero_frequency(2, 0, sims=10, seed=0) == 1.0


def test_config_validation():
    good = dict(n=12, rho=2, kappa=1.5, trials=10)
    LowerBoundConfig(**good)
    with pytest.raises(ValidationError):
        LowerBoundConfig(**{**good, "rho": 4})  # 4*rho > n
    with pytest.raises(ValidationError):
        LowerBoundConfig(**{**good, "kappa": 2.0})
    with pytest.raises(ValidationError):
        LowerBoundConfig(**{**good, "trials": 0})
    with pytest.raises(ValidationError):
        LowerBoundConfig(**{**good, "learner": "nope"})
    with pytest.raises(ValidationError):
        LowerBoundConfig(**{**good, "n": 28})


def test_sample_size_rounds_up():
    assert LowerBoundConfig(n=16, rho=3, kappa=1.5, trials=1).m == 32
    assert LowerBoundConfig(n=16, rho=2, kappa=1.5, trials=1).m == 8


def test_trial_draw_deterministic():
    cfg = LowerBoundConfig(n=12, rho=2, kappa=1.5, trials=5, seed=9)
    a = trial_draw(cfg, 3)
    b = trial_draw(cfg, 3)
    assert a == b
    c = trial_draw(cfg, 4)
    assert a != c


def test_cheat_learner_defeats_the_floor():
    cfg = LowerBoundConfig(n=12, rho=2, kappa=1.5, trials=40, learner="cheat", seed=1)
    report, records = run_lowerbound_experiment(cfg)
    assert report.mean_robust_risk == 0.0
    assert report.passed is False
    assert len(records) == 40
    assert all(rec.robust_risk == 0.0 for rec in records)


def test_experiment_report_fields_and_floor():
    cfg = LowerBoundConfig(n=12, rho=2, kappa=1.5, trials=60, learner="mon-conj", seed=2)
    report, records = run_lowerbound_experiment(cfg)
    assert report.m == 8
    assert report.risk_floor == MEAN_RISK_FLOOR == 5 / 48
    assert 0.0 <= report.allzero_freq <= 1.0
    assert report.allzero_exact == allzero_probability(2, 8)
    assert report.mean_robust_risk == pytest.approx(
        math.fsum(r.robust_risk for r in records) / len(records), abs=1e-15)
    assert report.passed == (report.mean_robust_risk > 5 / 48)
    assert report.passed  # blind learners cannot beat the floor here


def test_experiment_other_learners_run():
    for learner in ("dl", "bayes-pair"):
        cfg = LowerBoundConfig(n=8, rho=2, kappa=1.2, trials=25, learner=learner, seed=3)
        report, records = run_lowerbound_experiment(cfg)
        assert len(records) == 25
        assert 0.0 <= report.mean_robust_risk <= 1.0


def test_triangle_inequality_threads_through_trials():
    cfg = LowerBoundConfig(n=12, rho=3, kappa=1.5, trials=25, learner="mon-conj", seed=4)
    c1, c2 = disjoint_conjunction_pair(cfg.n, cfg.rho)
    d = uniform(cfg.n)
    pair_risk = robust_risk_exact(c1, c2, cfg.rho, d).value
    for t in range(cfg.trials):
        target_id, points = trial_draw(cfg, t)
        target = c1 if target_id == 1 else c2
        labels = tuple(target.evaluate_bits(p.bits) for p in points)
        hyp = learn_monotone_conjunction(LabeledSample(tuple(points), labels))
        r1 = robust_risk_exact(hyp, c1, cfg.rho, d).value
        r2 = robust_risk_exact(hyp, c2, cfg.rho, d).value
        assert pair_risk <= r1 + r2 + 1e-12


def test_allzero_trials_hide_the_target():
    # on an all-zero-labeled sample the learner's output cannot depend on
    # which target generated the labels
    cfg = LowerBoundConfig(n=12, rho=2, kappa=1.5, trials=40, learner="mon-conj", seed=6)
    c1, c2 = disjoint_conjunction_pair(cfg.n, cfg.rho)
    seen = 0
    for t in range(cfg.trials):
        _, points = trial_draw(cfg, t)
        lab1 = tuple(c1.evaluate_bits(p.bits) for p in points)
        lab2 = tuple(c2.evaluate_bits(p.bits) for p in points)
        if any(lab1) or any(lab2):
            continue
        seen += 1
        h1 = learn_monotone_conjunction(LabeledSample(tuple(points), lab1))
        h2 = learn_monotone_conjunction(LabeledSample(tuple(points), lab2))
        assert h1 == h2
    assert seen > 0
