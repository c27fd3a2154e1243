import math

import numpy as np
import pytest

from conftest import make_essential_instances
from icbargain import (
    BargainingProblem,
    ChannelParams,
    NotEssentialError,
    PowerSplit,
    RatePair,
    RatePolytope,
    build_hk_region,
    build_mac_region,
    capacity,
    disagreement_point,
    grid_oracle_nbs,
    is_essential,
    log_nash_product,
    nbs_halfplanes,
    nbs_mac,
    nbs_polytope,
    select_power_split,
    verify_kkt,
)

BIG = 100.0


def _strong_problem() -> BargainingProblem:
    params = ChannelParams(a=3.0, b=5.0, p1=100.0, p2=100.0)
    return BargainingProblem(
        build_hk_region(params, PowerSplit(0.0, 0.0)), disagreement_point(params)
    )


class TestDisagreementPoint:
    def test_strong_example(self):
        r0 = disagreement_point(ChannelParams(a=3.0, b=5.0, p1=100.0, p2=100.0))
        # oracle: direct evaluation of C(P1/(1+a*P2)), C(P2/(1+b*P1))
        assert r0.r1 == pytest.approx(0.2069193748476091, abs=1e-9)
        assert r0.r2 == pytest.approx(0.1312771937579885, abs=1e-9)

    def test_no_interference(self):
        assert disagreement_point(ChannelParams(a=0.0, b=0.0, p1=1.0, p2=1.0)) == RatePair(0.5, 0.5)

    def test_unit_mac_analog(self):
        r0 = disagreement_point(ChannelParams(a=1.0, b=1.0, p1=1.0, p2=1.0))
        assert r0.r1 == pytest.approx(0.2924812503605781, abs=1e-9)
        assert r0.r2 == pytest.approx(0.2924812503605781, abs=1e-9)


class TestIsEssential:
    def test_weak_example(self):
        params = ChannelParams(a=0.2, b=0.5, p1=100.0, p2=100.0)
        problem = BargainingProblem(
            build_hk_region(params, PowerSplit(0.02, 0.05)), disagreement_point(params)
        )
        assert is_essential(problem)

    def test_strong_example(self):
        assert is_essential(_strong_problem())

    def test_degenerate_cap_at_disagreement(self):
        r0 = RatePair(0.4, 0.3)
        poly = RatePolytope(RatePair(0.4, 0.3), (0.7, BIG, BIG))
        assert not is_essential(BargainingProblem(poly, r0))

    def test_sum_row_blocking(self):
        poly = RatePolytope(RatePair(1.0, 1.0), (0.6, BIG, BIG))
        assert not is_essential(BargainingProblem(poly, RatePair(0.3, 0.3)))
        assert is_essential(BargainingProblem(poly, RatePair(0.29, 0.29)))


class TestLogNashProduct:
    def test_values(self):
        r0 = RatePair(1.0, 1.0)
        assert log_nash_product(RatePair(2.0, 2.0), r0) == pytest.approx(0.0, abs=1e-12)
        assert log_nash_product(RatePair(1.0 + math.e, 1.0 + math.e), r0) == pytest.approx(2.0, abs=1e-12)
        assert log_nash_product(RatePair(3.0, 1.5), r0) == pytest.approx(0.0, abs=1e-12)

    def test_rejects_non_improving_pair(self):
        with pytest.raises(ValueError):
            log_nash_product(RatePair(1.0, 2.0), RatePair(1.0, 1.0))


class TestNbsMac:
    def test_unit_powers(self):
        out = nbs_mac(1.0, 1.0)
        assert out.solution.r1 == pytest.approx(0.396240625180289, abs=1e-9)
        assert out.solution.r2 == pytest.approx(0.396240625180289, abs=1e-9)
        assert out.multipliers_mu[0] == pytest.approx(
            2.0 / (capacity(2.0) - 2.0 * capacity(0.5)), abs=1e-9
        )
        assert out.multipliers_lambda == (0.0, 0.0)
        assert out.active_upper == (False, False)

    def test_symmetric_powers_equal_rates(self):
        for p in [0.3, 2.0, 75.0]:
            out = nbs_mac(p, p)
            assert out.solution.r1 == out.solution.r2

    def test_asymmetric_snr_structure(self):
        p1, p2 = 10.0 ** 1.5, 100.0
        out = nbs_mac(p1, p2)
        r0 = RatePair(capacity(p1 / (1.0 + p2)), capacity(p2 / (1.0 + p1)))
        s1 = out.solution.r1 - r0.r1
        s2 = out.solution.r2 - r0.r2
        assert s1 == pytest.approx(s2, abs=1e-9)
        assert out.solution.r1 + out.solution.r2 == pytest.approx(capacity(p1 + p2), abs=1e-9)

    def test_matches_grid_oracle(self):
        p1, p2 = 10.0 ** 1.5, 100.0
        out = nbs_mac(p1, p2)
        r0 = RatePair(capacity(p1 / (1.0 + p2)), capacity(p2 / (1.0 + p1)))
        oracle = grid_oracle_nbs(BargainingProblem(build_mac_region(p1, p2), r0), 2000)
        assert out.solution.r1 == pytest.approx(oracle.r1, abs=1e-3)
        assert out.solution.r2 == pytest.approx(oracle.r2, abs=1e-3)


class TestNbsPolytope:
    def test_strong_example(self):
        out = nbs_polytope(_strong_problem())
        # oracle: equal-surplus point on the sum face, cross-checked by grid search
        assert out.solution.r1 == pytest.approx(2.1996856971585403, abs=1e-6)
        assert out.solution.r2 == pytest.approx(2.1240435160689195, abs=1e-6)
        assert out.multipliers_mu[1] == 0.0
        assert out.multipliers_mu[2] == 0.0
        problem = _strong_problem()
        expected_mu = 2.0 / (
            problem.feasible.agg_bounds[0] - problem.disagreement.r1 - problem.disagreement.r2
        )
        assert out.multipliers_mu[0] == pytest.approx(expected_mu, abs=1e-9)
        assert not out.degenerate

    def test_matches_nbs_mac_on_pentagon(self):
        p1, p2 = 4.0, 9.0
        r0 = RatePair(capacity(p1 / (1.0 + p2)), capacity(p2 / (1.0 + p1)))
        out_poly = nbs_polytope(BargainingProblem(build_mac_region(p1, p2), r0))
        out_mac = nbs_mac(p1, p2)
        assert out_poly.solution.r1 == pytest.approx(out_mac.solution.r1, abs=1e-9)
        assert out_poly.solution.r2 == pytest.approx(out_mac.solution.r2, abs=1e-9)

    def test_symmetric_problem_equal_rates(self):
        params = ChannelParams(a=1.5, b=1.5, p1=100.0, p2=100.0)
        problem = BargainingProblem(
            build_hk_region(params, PowerSplit(0.0, 0.0)), disagreement_point(params)
        )
        out = nbs_polytope(problem)
        assert out.solution.r1 == pytest.approx(out.solution.r2, abs=1e-12)

    def test_rejects_non_essential(self):
        poly = RatePolytope(RatePair(0.4, 0.3), (0.7, BIG, BIG))
        with pytest.raises(NotEssentialError):
            nbs_polytope(BargainingProblem(poly, RatePair(0.4, 0.3)))

    def test_clipped_solution_respects_cap(self):
        # cap on user 2 binds: equal-surplus point would exceed it
        poly = RatePolytope(RatePair(2.0, 0.5), (2.2, BIG, BIG))
        problem = BargainingProblem(poly, RatePair(0.1, 0.1))
        out = nbs_polytope(problem)
        assert out.solution.r2 == pytest.approx(0.5, abs=1e-12)
        assert out.active_upper == (False, True)
        assert out.solution.r1 == pytest.approx(2.2 - 0.5, abs=1e-9)
        assert verify_kkt(problem, out).passed

    def test_individual_rationality_strict(self):
        for _, problem in make_essential_instances(seed=23, count=40):
            out = nbs_polytope(problem)
            assert out.solution.r1 > problem.disagreement.r1
            assert out.solution.r2 > problem.disagreement.r2


class TestGridOracle:
    def test_pentagon_equal_surplus(self):
        problem = BargainingProblem(
            RatePolytope(RatePair(1.0, 1.0), (1.5, BIG, BIG)), RatePair(0.2, 0.2)
        )
        oracle = grid_oracle_nbs(problem, 2000)
        assert oracle.r1 == pytest.approx(0.75, abs=1e-3)
        assert oracle.r2 == pytest.approx(0.75, abs=1e-3)

    def test_rejects_small_grid(self):
        with pytest.raises(ValueError):
            grid_oracle_nbs(_strong_problem(), 99)

    def test_rejects_non_essential(self):
        poly = RatePolytope(RatePair(0.4, 0.3), (0.7, BIG, BIG))
        with pytest.raises(ValueError):
            grid_oracle_nbs(BargainingProblem(poly, RatePair(0.4, 0.3)), 500)

    def test_agrees_with_solver(self):
        for _, problem in make_essential_instances(seed=31, count=25):
            out = nbs_polytope(problem)
            oracle = grid_oracle_nbs(problem, 2000)
            assert abs(out.solution.r1 - oracle.r1) < 1e-3
            assert abs(out.solution.r2 - oracle.r2) < 1e-3


class TestVerifyKkt:
    def test_solver_output_passes(self):
        problem = _strong_problem()
        report = verify_kkt(problem, nbs_polytope(problem))
        assert report.passed
        assert report.max_residual < 1e-7

    def test_perturbed_solution_fails(self):
        problem = _strong_problem()
        out = nbs_polytope(problem)
        bumped = RatePair(out.solution.r1 + 1e-3, out.solution.r2)
        perturbed = type(out)(
            solution=bumped,
            multipliers_mu=out.multipliers_mu,
            multipliers_lambda=out.multipliers_lambda,
            active_upper=out.active_upper,
            nash_product_value=out.nash_product_value,
        )
        report = verify_kkt(problem, perturbed)
        assert not report.passed
        assert max(report.stationarity, report.primal_feasibility) > 1e-7

    def test_flipped_multiplier_fails_dual(self):
        problem = _strong_problem()
        out = nbs_polytope(problem)
        flipped = type(out)(
            solution=out.solution,
            multipliers_mu=(-out.multipliers_mu[0], out.multipliers_mu[1], out.multipliers_mu[2]),
            multipliers_lambda=out.multipliers_lambda,
            active_upper=out.active_upper,
            nash_product_value=out.nash_product_value,
        )
        report = verify_kkt(problem, flipped)
        assert report.dual_nonnegativity > 1e-7


class TestHalfplaneSolver:
    def test_matches_polytope_path(self):
        problem = _strong_problem()
        poly, r0 = problem.feasible, problem.disagreement
        halfplanes = [
            (1.0, 0.0, poly.r_upper.r1),
            (0.0, 1.0, poly.r_upper.r2),
            (1.0, 1.0, poly.agg_bounds[0]),
            (2.0, 1.0, poly.agg_bounds[1]),
            (1.0, 2.0, poly.agg_bounds[2]),
        ]
        point, mu = nbs_halfplanes(halfplanes, (r0.r1, r0.r2))
        out = nbs_polytope(problem)
        assert point[0] == pytest.approx(out.solution.r1, abs=1e-12)
        assert point[1] == pytest.approx(out.solution.r2, abs=1e-12)
        assert mu[2] == pytest.approx(out.multipliers_mu[0], abs=1e-12)

    def test_redundant_constraint_ignored(self):
        point, _ = nbs_halfplanes([(1.0, 1.0, 2.0), (1.0, 0.0, 50.0)], (0.0, 0.0))
        assert point[0] == pytest.approx(1.0, abs=1e-12)
        assert point[1] == pytest.approx(1.0, abs=1e-12)

    def test_general_direction(self):
        # single slanted constraint: closed form gives g_i * s_i = c/2
        point, mu = nbs_halfplanes([(2.0, 3.0, 6.0)], (0.0, 0.0))
        assert point[0] == pytest.approx(6.0 / (2.0 * 2.0), abs=1e-12)
        assert point[1] == pytest.approx(6.0 / (2.0 * 3.0), abs=1e-12)
        assert mu[0] == pytest.approx(2.0 / 6.0, abs=1e-12)
