from __future__ import annotations

import pytest

from jumpstat.algebra import Poly2, Series
from jumpstat.genfunc import (FirstFailure, SelfCheckError, Verdict,
                              catalan_radical, inner_radicand,
                              jumpdist_radical, jumps_radical,
                              printed_radicand, solve_catalan, solve_F,
                              solve_H, solve_Jdepth, solve_K,
                              verdict_from_residual, verify_F_closed_form,
                              verify_theorem)
from jumpstat.trees import brute_force_jumpdist_enumerator, catalan

T = Poly2.term(1, et=1)
Q = Poly2.term(1, eq=1)


def test_solve_catalan_counts_trees():
    f = solve_catalan(20)
    for n in range(21):
        assert f.coefficient(n) == catalan(n)


def test_catalan_radical_identity():
    f = solve_catalan(20)
    residual = f.shift_x() * 2 - 1 + catalan_radical(20)
    assert residual.is_zero()


def test_solve_F_small_coefficients():
    F = solve_F(8)
    assert F.coefficient(0) == Poly2.one()
    assert F.coefficient(1) == T
    assert F.coefficient(2) == Poly2({(1, 1): 1, (2, 0): 1})


def test_solve_F_depth_zero_slice_is_leaf_only():
    F = solve_F(10)
    at0 = F.substitute("t", 0)
    assert at0.coefficient(0) == Poly2.one()
    for n in range(1, 11):
        assert at0.coefficient(n).is_zero()


def test_solve_F_matches_exhaustive_counts(stat_counts_small):
    F = solve_F(8)
    for n in range(9):
        expected = {}
        for stats, mult in stat_counts_small[n].items():
            key = (stats.depth, stats.jumps)
            expected[key] = expected.get(key, 0) + mult
        assert dict(F.coefficient(n).items()) == expected


def test_radicand_factorization_is_exact():
    t_sq = Poly2({(2, 0): 1})
    assert printed_radicand(6) == inner_radicand(6) * t_sq


def test_solve_H_small_coefficients():
    H = solve_H(6)
    assert H.coefficient(2) == 1 + Q
    assert H.coefficient(3) == 1 + Q * 3 + Q * Q
    at1 = H.substitute("q", 1)
    for n in range(7):
        assert at1.coefficient(n) == catalan(n)


def test_solve_Jdepth_small_coefficients():
    J = solve_Jdepth(6)
    assert J.coefficient(0) == Poly2.one()
    assert J.coefficient(2) == T + T * T
    assert J.coefficient(3) == T * 2 + T * T * 2 + T * T * T
    # forgetting depth recovers the plain counter
    at1 = J.substitute("t", 1)
    for n in range(7):
        assert at1.coefficient(n) == catalan(n)


def test_solve_K_small_coefficients():
    K = solve_K(6)
    assert K.coefficient(2) == 1 + Q
    # the five trees of size 3 have jump distances 0, 1, 1, 2, 2: their
    # q-weights sum to 1 + 2q + 2q^2 (total jump distance 6 across all five)
    assert K.coefficient(3) == 1 + Q * 2 + Q * Q * 2
    total = K.coefficient(3).q_derivative().substitute("q", 1)
    assert total == 6


def test_solve_K_matches_exhaustive_counts():
    K = solve_K(9)
    oracle = brute_force_jumpdist_enumerator(9, cap=9)
    for n in range(10):
        assert K.coefficient(n) == oracle.coefficient(n)


def test_jumps_radical_squares_back():
    root = jumps_radical(12)
    assert root * root == inner_radicand(12)
    rootq = jumpdist_radical(12)
    assert (rootq * rootq).prefix_equal(
        Series.from_x_coefficients([Poly2.one(), Poly2.term(-4, eq=1)], 12))


@pytest.mark.parametrize("theorem", ["0", "1", "2", "3", "4", "5", "6"])
def test_verify_theorem_passes(theorem):
    verdict = verify_theorem(theorem, 18)
    assert verdict.passed
    assert verdict.first_failure is None
    assert verdict.to_json() == {
        "theorem": theorem, "order": 18, "pass": True, "first_failure": None}


@pytest.mark.parametrize("theorem", ["0", "1", "2", "3", "4", "5", "6"])
@pytest.mark.parametrize("order", [0, 1, 2])
def test_verify_theorem_low_orders(theorem, order):
    assert verify_theorem(theorem, order).passed


def test_verify_theorem_accepts_ints_and_rejects_junk():
    assert verify_theorem(0, 5).passed
    with pytest.raises(ValueError):
        verify_theorem("7", 10)
    with pytest.raises(ValueError):
        verify_theorem("2", -1)


def test_verify_oracle_cap_limits_comparison():
    # with a tiny cap only the first few coefficients are compared, so
    # this stays fast even at a large series order
    verdict = verify_theorem("1", 25, oracle_cap=5)
    assert verdict.passed


def test_verify_F_closed_form_at_zero_order():
    assert verify_F_closed_form(0).passed


def test_verify_F_closed_form_rejects_short_series():
    with pytest.raises(ValueError):
        verify_F_closed_form(10, F=solve_F(5))


def test_failing_verdict_reports_first_failure():
    residual = Series.from_x_coefficients([0, 0, Poly2.term(2, eq=1)], 4)
    verdict = verdict_from_residual("2", 4, residual)
    assert not verdict.passed
    assert verdict.first_failure == FirstFailure(2, Poly2.term(2, eq=1))
    assert verdict.to_json()["first_failure"] == {
        "n": 2, "residual_terms": [{"et": 0, "eq": 1, "num": 2, "den": 1}]}


def test_solvers_are_cached():
    assert solve_F(12) is solve_F(12)
    assert solve_catalan(15) is solve_catalan(15)


def test_verdict_is_frozen():
    verdict = Verdict("0", 4, True)
    with pytest.raises(AttributeError):
        verdict.passed = False


def test_self_check_error_is_runtime_error():
    assert issubclass(SelfCheckError, RuntimeError)
