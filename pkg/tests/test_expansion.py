import math
import random

import pytest

import helpers
from cubelab.concepts import (
    Clause,
    CnfFormula,
    MonotoneConjunction,
    constant_false,
    enumerate_assignments,
    maximal_disjoint_clauses,
    pos,
    restrict,
    satisfying_set,
)
from cubelab.distributions import mass, product, uniform
from cubelab.errors import ValidationError
from cubelab.expansion import (
    certified_conjunction_length,
    expansion_constants,
    expansion_mass,
    log2_assignment_count_bound,
    log2_mass_threshold,
    log_adversary_radius,
    safe_conjunction_length,
    safe_disjoint_clause_count,
    verify_expansion_bound,
)
from cubelab.hypercube import expand


def unit_conjunction(n: int, width: int) -> CnfFormula:
    return CnfFormula(n, tuple(Clause((pos(i),)) for i in range(width)))


def closed_form_conj_mass(width: int, rho: int) -> float:
    return 2.0**-width * sum(math.comb(width, i) for i in range(rho + 1))


def test_expansion_mass_unsatisfiable():
    rep = expansion_mass(constant_false(8), 3, uniform(8))
    assert rep.mass_base == 0.0 and rep.mass_expanded == 0.0


def test_expansion_mass_conjunction_closed_form():
    rep = expansion_mass(unit_conjunction(10, 6), 2, uniform(10))
    assert rep.mass_expanded == pytest.approx(22 / 64, abs=1e-15)
    assert rep.mass_base == pytest.approx(2**-6, abs=1e-15)


def test_expansion_mass_full_radius():
    phi = unit_conjunction(6, 4)
    rep = expansion_mass(phi, 6, uniform(6))
    assert rep.mass_expanded == 1.0


def test_expansion_mass_monotone_in_rho():
    rnd = random.Random(3)
    for _ in range(8):
        n = rnd.randint(3, 9)
        phi = helpers.random_cnf(rnd, n, 2, rnd.randint(1, 5))
        d = uniform(n)
        vals = [expansion_mass(phi, rho, d).mass_expanded for rho in range(n + 1)]
        assert vals == sorted(vals)
        at_zero = expansion_mass(phi, 0, d)
        assert at_zero.mass_expanded == at_zero.mass_base


def test_expansion_mass_monte_carlo_agrees():
    rnd = random.Random(5)
    phi = helpers.random_cnf(rnd, 8, 2, 3)
    d = uniform(8)
    exact = expansion_mass(phi, 2, d)
    mc = expansion_mass(phi, 2, d, mode="monte-carlo", trials=4000, seed=8)
    assert mc.trials == 4000
    assert abs(mc.mass_expanded - exact.mass_expanded) <= mc.confidence_radius
    assert abs(mc.mass_base - exact.mass_base) <= mc.confidence_radius
    assert mc.mass_base <= mc.mass_expanded


def test_certified_conjunction_length_values():
    assert certified_conjunction_length(1.0, 1 / 8) == 3
    assert certified_conjunction_length(1.0, 2**-10 * 0.999) == 10
    assert certified_conjunction_length(1.0, 0.9) == 0


def test_certified_conjunction_length_contrapositive():
    # a monotone conjunction on fewer than d variables keeps satisfying
    # mass >= 2^-(d-1) under uniform
    for n in range(1, 13):
        for width in range(1, n + 1):
            s0 = 2.0**-width
            d = certified_conjunction_length(1.0, s0)
            assert d == width
            assert s0 >= 2.0 ** -((width - 1) + 1)


def test_safe_conjunction_length_values():
    assert safe_conjunction_length(0.25, 1, 1.0) == 32
    eps_close = 0.4999
    assert safe_conjunction_length(eps_close, 8, 1.0) == 32  # 2 rho / eta dominates
    with pytest.raises(ValidationError):
        safe_conjunction_length(0.5, 1, 1.0)


def test_safe_conjunction_length_is_sound_under_uniform():
    for eps in (0.4, 0.25, 0.1):
        for rho in (1, 2, 3):
            d = safe_conjunction_length(eps, rho, 1.0)
            for width in range(d, d + 3):
                assert closed_form_conj_mass(width, rho) <= eps


def test_safe_disjoint_clause_count_values():
    assert safe_disjoint_clause_count(0.25, 1, 1, 1.0) == safe_conjunction_length(0.25, 1, 1.0)
    assert safe_disjoint_clause_count(0.25, 1, 2, 1.0) == 128
    counts = [safe_disjoint_clause_count(0.25, 1, k, 1.0) for k in range(1, 6)]
    assert counts == sorted(counts)


def test_constants_base_case():
    b = expansion_constants(1, 1.0)
    assert (b.c1, b.c2, b.c3, b.c4) == (1.0, 0.0, 16.0, 4.0)
    assert b.eta == 0.5
    assert b.log2_c1 == 0.0


def test_constants_recurrence_k2():
    b = expansion_constants(2, 1.0)
    assert (b.log2_c1, b.c2, b.c3, b.c4) == (-32.0, 16.0, 2048.0, 128.0)


def test_constants_closed_form_k2():
    b = expansion_constants(2, 1.0, "closed-form")
    assert (b.c2, b.c3, b.c4) == (256.0, 16384.0, 1024.0)
    assert b.log2_c1 >= -1024.0
    assert b.c1 == 2.0**-512
    assert expansion_constants(3, 1.0, "closed-form").c1 == 0.0  # below float range


def test_constants_invariants_across_grid():
    for k in range(1, 6):
        for alpha in (1.0, 1.5, 3.0):
            for variant in ("recurrence", "closed-form"):
                b = expansion_constants(k, alpha, variant)
                assert b.c3 >= b.c2
                assert b.c3 >= 0.5 * b.eta * b.c4 * (1 - 1e-12)


def test_closed_form_dominates_recurrence():
    for k in range(1, 6):
        for alpha in (1.0, 1.5, 3.0):
            rec = expansion_constants(k, alpha, "recurrence")
            cf = expansion_constants(k, alpha, "closed-form")
            assert cf.c2 >= rec.c2 and cf.c3 >= rec.c3 and cf.c4 >= rec.c4
            assert cf.log2_c1 <= rec.log2_c1
            for eps in (0.4, 0.25, 0.01):
                for n in (4, 64, 4096):
                    assert log2_mass_threshold(eps, n, k, alpha, "closed-form") <= \
                        log2_mass_threshold(eps, n, k, alpha, "recurrence") + 1e-9


def test_threshold_example_and_monotonicity():
    assert log2_mass_threshold(0.25, 16, 1, 1.0) == -32.0
    assert log2_mass_threshold(0.25, 16, 2, 1.0, "closed-form") <= -1024.0
    thresholds = [log2_mass_threshold(eps, 16, 1, 1.0) for eps in (0.05, 0.1, 0.25, 0.4)]
    assert thresholds == sorted(thresholds)
    by_n = [log2_mass_threshold(0.25, n, 1, 1.0) for n in (4, 16, 64, 256)]
    assert by_n == sorted(by_n, reverse=True)


def test_log_adversary_radius():
    assert log_adversary_radius(16) == 4
    assert log_adversary_radius(17) == 4
    assert log_adversary_radius(2) == 1


def test_verify_unsatisfiable_passes():
    check = verify_expansion_bound(constant_false(8), uniform(8), 0.25)
    assert check.verdict == "pass"
    assert check.premise_met
    assert check.mass_expanded == 0.0


def test_verify_reports_vacuous_when_premise_unmet():
    phi = unit_conjunction(8, 2)  # satisfying mass 1/4, far above threshold
    check = verify_expansion_bound(phi, uniform(8), 0.25)
    assert check.verdict == "vacuous"
    assert not check.premise_met
    assert check.checks_pass


def test_verify_assignment_count_bound():
    rnd = random.Random(7)
    for _ in range(10):
        n = rnd.randint(4, 10)
        phi = helpers.random_cnf(rnd, n, 2, rnd.randint(1, 6))
        check = verify_expansion_bound(phi, uniform(n), 0.25)
        assert check.assignment_bound_check is True
        assert check.log2_assignment_count <= check.log2_assignment_bound
        m_idx, ivars = maximal_disjoint_clauses(phi)
        assert check.disjoint_set_size == len(m_idx)
        assert check.log2_assignment_count == len(ivars)


def test_assignment_count_bound_formula():
    # 2^k * max((1/eps)^(4/eta^2), n^(2/eta)) in log2, eta = (1+alpha)^-k
    val = log2_assignment_count_bound(0.25, 16, 1, 1.0)
    assert val == pytest.approx(1 + max(16 * 2, 8 * 4), abs=1e-12)


def test_verify_safe_conjunction_path():
    # wide conjunction meets the length threshold, so the fallback check
    # must fire and pass (expanded mass provably small)
    eps, rho = 0.4, 1
    width = safe_conjunction_length(eps, rho, 1.0)
    phi = unit_conjunction(24, width)
    check = verify_expansion_bound(phi, uniform(24), eps, rho=rho)
    assert check.min_length_check is True
    assert check.mass_expanded <= eps


def test_restriction_mass_decomposition_at_radius_zero():
    # the satisfying masses of the restrictions sum exactly to the
    # formula's satisfying mass, for any distribution
    rnd = random.Random(9)
    for _ in range(10):
        n = rnd.randint(3, 9)
        phi = helpers.random_cnf(rnd, n, 2, rnd.randint(1, 5))
        d = product([rnd.uniform(0.3, 0.7) for _ in range(n)])
        _, ivars = maximal_disjoint_clauses(phi)
        total = math.fsum(
            mass(d, satisfying_set(restrict(phi, a)))
            for a in enumerate_assignments(ivars)
        )
        assert total == pytest.approx(mass(d, satisfying_set(phi)), abs=1e-12)


def test_restriction_masses_bound_expanded_mass():
    # expanded restriction masses can only overcount: their sum bounds the
    # expanded formula mass from above (the expansions overlap in general,
    # so equality is not expected; see the acceptance suite)
    rnd = random.Random(10)
    for _ in range(10):
        n = rnd.randint(3, 8)
        phi = helpers.random_cnf(rnd, n, 2, rnd.randint(1, 4))
        d = uniform(n)
        rho = rnd.randint(1, 2)
        _, ivars = maximal_disjoint_clauses(phi)
        total = math.fsum(
            mass(d, expand(satisfying_set(restrict(phi, a)), rho))
            for a in enumerate_assignments(ivars)
        )
        whole = mass(d, expand(satisfying_set(phi), rho))
        assert total >= whole - 1e-12
