import math

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import lambertw as scipy_lambertw

from lambert.baselines import bisect_root
from lambert.core_iteration import SolveConfig, Status, quad_solve
from lambert.exceptions import ConvergenceError, DegenerateCoefficients, DomainError
from lambert.lambertw import (
    BRANCH_POINT,
    INV_E,
    M1_OVERFLOW_LIMIT,
    Branch,
    BranchResult,
    Method,
    SeedSchedule,
    asymptotic_correction_m1,
    asymptotic_correction_m1_neg,
    asymptotic_correction_m2,
    asymptotic_correction_m2_neg,
    branch_point_distance,
    branch_point_series,
    coeffs_m1_neg,
    coeffs_m1_pos,
    coeffs_m2_neg,
    coeffs_m2_pos,
    lambert_w,
    negative_schedule,
    seed_sweep,
    w0,
    w0_from_ln,
    w_negative,
)


def _rel(a, b):
    return abs(a - b) / abs(b)


def _reference(x, branch=Branch.PRINCIPAL):
    return scipy_lambertw(x, 0 if branch is Branch.PRINCIPAL else -1).real


class CoefficientTests(SimpleTestCase):
    def test_method1_from_seed_one(self):
        l, m = coeffs_m1_pos(1.0, 1e20)
        self.assertAlmostEqual(l / 5e19, 1.0, places=12)
        self.assertAlmostEqual(m / 1e20, 1.0, places=12)

    def test_method1_second_step(self):
        l, m = coeffs_m1_pos(5e19, 1e20)
        self.assertLess(_rel(l, -1.43665347e20), 1e-6)
        self.assertLess(_rel(m, -4.57768981e39), 1e-6)

    def test_method1_degenerate_at_e_minus_two(self):
        with self.assertRaises(DegenerateCoefficients):
            coeffs_m1_pos(math.exp(-2.0), 1.0)

    def test_method2(self):
        self.assertEqual(coeffs_m2_pos(1.0, 0.0), (-5.0, -2.0))

    def test_negative_forms(self):
        l, m = coeffs_m1_neg(2.0, 0.1)
        self.assertAlmostEqual(l, 20.9314718056, places=8)
        self.assertAlmostEqual(m, 19.7258872224, places=8)
        l, m = coeffs_m2_neg(1.0, -1.0)
        self.assertAlmostEqual(l, 0.0, places=15)
        self.assertAlmostEqual(m, 0.0, places=15)
        l, m = coeffs_m1_neg(math.e, INV_E)
        self.assertAlmostEqual(l, 0.0, places=12)
        self.assertAlmostEqual(m, 0.0, places=12)
        with self.assertRaises(DegenerateCoefficients):
            coeffs_m1_neg(1.0, 0.0)

    def test_small_root_matches_first_order_correction(self):
        x, X = 1e5, 0.1
        w = w0(x).value
        y_pri = -w_negative(-X, Branch.PRINCIPAL).value
        y_sec = -w_negative(-X, Branch.SECONDARY).value
        cases = (
            ("m1", math.exp(w), lambda z: coeffs_m1_pos(z, x), lambda z: asymptotic_correction_m1(z, x)),
            ("m2", w, lambda y: coeffs_m2_pos(y, math.log(x)), lambda y: asymptotic_correction_m2(y, math.log(x))),
            ("m1_neg", math.exp(y_pri), lambda z: coeffs_m1_neg(z, X), lambda z: asymptotic_correction_m1_neg(z, X)),
            ("m2_neg", y_sec, lambda y: coeffs_m2_neg(y, math.log(X)), lambda y: asymptotic_correction_m2_neg(y, math.log(X))),
        )
        for name, root, coeff_fn, linear in cases:
            for offset in (1e-6, -1e-6):
                with self.subTest(form=name, offset=offset):
                    z = root * (1.0 + offset)
                    coeffs = quad_solve(*coeff_fn(z))
                    step = min(coeffs.root_plus, coeffs.root_minus, key=abs)
                    self.assertLessEqual(abs(step), 1e-4 * abs(z))
                    self.assertLess(_rel(step, linear(z)), 1e-3)


class SeedScheduleTests(SimpleTestCase):
    def test_dedupes_in_order(self):
        self.assertEqual(SeedSchedule((1.0, 1.0, 2.0)).candidates, (1.0, 2.0))
        self.assertEqual(list(SeedSchedule((3.0,)).with_override(5.0)), [5.0, 3.0])
        self.assertEqual(SeedSchedule((3.0,)).with_override(None).candidates, (3.0,))

    def test_rejects_invalid(self):
        with self.assertRaises(ValueError):
            SeedSchedule(())
        with self.assertRaises(ValueError):
            SeedSchedule((1.0, -1.0))
        with self.assertRaises(ValueError):
            SeedSchedule((math.nan,))

    def test_series_seed_leads_near_branch_point(self):
        X = INV_E - 1e-6
        near = negative_schedule(X, Branch.SECONDARY, Method.M2).candidates
        self.assertAlmostEqual(near[0], -branch_point_series(branch_point_distance(X), Branch.SECONDARY))
        far = negative_schedule(0.1, Branch.SECONDARY, Method.M2).candidates
        self.assertEqual(far[0], 1.0)


class PrincipalTests(SimpleTestCase):
    def test_printed_method1_values(self):
        cases = (
            (1e-5, 9.9999e-6),
            (0.1, 0.09127653),
            (0.5, 0.35173371),
            (1.0, 0.56714329),
            (100.0, 3.38563014),
            (1e5, 9.2845714),
            (1e20, 42.306755092),
        )
        cfg = SolveConfig(tol_rel=1e-12)
        for x, printed in cases:
            with self.subTest(x=x):
                result = w0(x, Method.M1, cfg)
                self.assertEqual(result.status, Status.CONVERGED)
                self.assertLess(_rel(result.value, printed), 5e-7)
                self.assertLessEqual(result.iterations, 6)

    def test_printed_method2_values(self):
        cases = (
            (1e-2, 0.00990147384),
            (1e-1, 0.09127652716),
            (1.0, 0.56714329),
            (1e2, 3.3856301403),
            (1e5, 9.2845714286),
            (1e10, 20.028685413),
            (1e20, 42.306755096),
            (1e50, 110.42491883),
        )
        for x, printed in cases:
            with self.subTest(x=x):
                self.assertLess(_rel(w0(x, Method.M2).value, printed), 5e-7)

    def test_zero_is_exact(self):
        for method in (Method.M1, Method.M2):
            result = w0(0.0, method)
            self.assertEqual(result.value, 0.0)
            self.assertEqual(result.iterations, 0)
            self.assertTrue(result.converged)

    def test_x_equal_e(self):
        self.assertAlmostEqual(w0(math.e).value, 1.0, places=14)

    def test_method1_switches_to_method2_for_huge_x(self):
        with self.assertLogs("lambert.lambertw", level="INFO") as logs:
            result = w0(1e305)
        self.assertEqual(result.method, Method.M2)
        self.assertIn("switching to Method 2", logs.output[0])
        self.assertLess(_rel(result.value, _reference(1e305)), 1e-12)

    def test_method1_range_ends_before_overflow(self):
        result = w0(M1_OVERFLOW_LIMIT)
        self.assertEqual(result.method, Method.M1)
        self.assertLess(_rel(result.value, _reference(M1_OVERFLOW_LIMIT)), 1e-12)
        for x in (1.34e155, 1e200, 1e250, 1e300):
            with self.subTest(x=x):
                result = lambert_w(x)
                self.assertEqual(result.method, Method.M2)
                self.assertTrue(result.converged)
                self.assertLess(_rel(result.value, _reference(x)), 1e-12)

    def test_from_log_beyond_double_range(self):
        result = w0_from_ln(300.0 * math.log(10.0))
        self.assertLess(_rel(result.value, 684.2472086), 5e-7)
        self.assertEqual(result.log_x, 300.0 * math.log(10.0))

        ln_x = 500.0 * math.log(10.0)
        value = w0_from_ln(ln_x).value
        oracle = bisect_root(lambda y: y + math.log(y) - ln_x, 1.0, ln_x, 1e-12)
        self.assertLess(abs(value - oracle), 1e-9 * oracle)

    def test_from_log_small_arguments(self):
        self.assertAlmostEqual(w0_from_ln(0.0).value, 0.5671432904097838, places=12)
        self.assertAlmostEqual(w0_from_ln(1.0).value, 1.0, places=12)
        self.assertEqual(w0_from_ln(-710.0).value, math.exp(-710.0))

    def test_domain(self):
        with self.assertRaises(DomainError):
            w0(-1.0)
        with self.assertRaises(DomainError):
            w0(math.inf)
        with self.assertRaises(DomainError):
            w0_from_ln(math.nan)

    def test_exhausted_schedule_carries_last_attempt(self):
        with self.assertRaises(ConvergenceError) as ctx:
            w0(1e5, cfg=SolveConfig(max_iter=1))
        self.assertIsInstance(ctx.exception.result, BranchResult)
        self.assertEqual(ctx.exception.result.attempts, 3)
        self.assertEqual(ctx.exception.result.status, Status.MAX_ITER)

    def test_log_uniform_grid(self):
        xs = np.logspace(-6, 12, 1000)
        previous = -math.inf
        for x in xs:
            x = float(x)
            w1 = w0(x, Method.M1).value
            w2 = w0(x, Method.M2).value
            self.assertLessEqual(abs(w1 * math.exp(w1) - x), 1e-10 * x, msg=f"x={x!r}")
            self.assertLessEqual(abs(w2 * math.exp(w2) - x), 1e-10 * x, msg=f"x={x!r}")
            self.assertLessEqual(abs(w1 - w2), 1e-9 * max(1.0, abs(w1)), msg=f"x={x!r}")
            self.assertGreater(w1, previous)
            previous = w1

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=1e-300, max_value=1e300))
    def test_agrees_with_scipy(self, x):
        self.assertLessEqual(_rel(w0(x).value, _reference(x)), 1e-12)


class NegativeBranchTests(SimpleTestCase):
    def test_printed_method1_values(self):
        cases = (
            (0.365, Branch.SECONDARY, 1.1306553125),
            (0.365, Branch.PRINCIPAL, 0.879819986),
            (0.25, Branch.SECONDARY, 2.153292364),
            (0.25, Branch.PRINCIPAL, 0.3574029562),
            (0.1, Branch.SECONDARY, 3.577152064),
            (0.1, Branch.PRINCIPAL, 0.1118325592),
            (1e-3, Branch.SECONDARY, 9.11800647),
            (1e-3, Branch.PRINCIPAL, 0.0010010015),
        )
        for X, branch, printed in cases:
            for method in (Method.M1, Method.M2):
                with self.subTest(X=X, branch=branch, method=method):
                    value = w_negative(-X, branch, method).value
                    self.assertLess(_rel(-value, printed), 5e-6)
                    self.assertLess(abs(value - _reference(-X, branch)), 1e-9 * abs(value))

    def test_branch_point(self):
        for branch in Branch:
            self.assertEqual(lambert_w(BRANCH_POINT, branch).value, -1.0)
            self.assertEqual(w_negative(-math.exp(-1), branch).value, -1.0)

    def test_just_inside_branch_point(self):
        x = BRANCH_POINT + 1e-8
        upper = lambert_w(x, Branch.PRINCIPAL).value
        lower = lambert_w(x, Branch.SECONDARY).value
        self.assertLess(abs(upper + 1.0), 1e-3)
        self.assertLess(abs(lower + 1.0), 1e-3)
        self.assertGreater(upper, -1.0)
        self.assertLess(lower, -1.0)
        for value in (upper, lower):
            self.assertLess(abs(value * math.exp(value) - x), 1e-12)

    def test_series_value_close_to_branch_point(self):
        X = INV_E - 1e-12
        p = branch_point_distance(X)
        for branch in Branch:
            result = w_negative(-X, branch)
            self.assertEqual(result.value, branch_point_series(p, branch))
            self.assertLess(abs(result.value - _reference(-X, branch)), 1e-9)

    def test_domain(self):
        with self.assertRaisesMessage(DomainError, "No solution in real domain."):
            lambert_w(-1.0)
        with self.assertRaises(DomainError):
            lambert_w(1.0, Branch.SECONDARY)
        with self.assertRaises(DomainError):
            lambert_w(0.0, Branch.SECONDARY)
        with self.assertRaises(DomainError):
            w_negative(-0.4, Branch.PRINCIPAL)

    def test_tiny_argument_uses_method2(self):
        result = w_negative(-1e-200, Branch.SECONDARY)
        self.assertEqual(result.method, Method.M2)
        self.assertLess(_rel(result.value, _reference(-1e-200, Branch.SECONDARY)), 1e-12)
        self.assertAlmostEqual(w_negative(-1e-200, Branch.PRINCIPAL).value / -1e-200, 1.0, places=12)

    def test_log_spaced_grid_on_both_branches(self):
        for X in np.logspace(-300, math.log10(0.367), 400):
            X = float(X)
            for method in (Method.M1, Method.M2):
                upper = w_negative(-X, Branch.PRINCIPAL, method).value
                lower = w_negative(-X, Branch.SECONDARY, method).value
                msg = f"X={X!r} method={method.value}"
                self.assertLessEqual(abs(upper - _reference(-X)), 1e-9 * abs(upper), msg=msg)
                self.assertLessEqual(abs(lower - _reference(-X, Branch.SECONDARY)), 1e-9 * abs(lower), msg=msg)
                self.assertLessEqual(lower, -1.0, msg=msg)
                self.assertGreaterEqual(upper, -1.0, msg=msg)

    def test_far_schedules_leave_out_the_series_seed(self):
        self.assertEqual(negative_schedule(1e-3, Branch.PRINCIPAL, Method.M2).candidates, (1e-3, 1.0))
        for X in (1e-300, 1e-3, 0.0925, 0.2, INV_E - 1e-3):
            for branch in Branch:
                for method in (Method.M1, Method.M2):
                    with self.subTest(X=X, branch=branch, method=method):
                        seeds = negative_schedule(X, branch, method).candidates
                        self.assertTrue(all(seed > 0 for seed in seeds))

    def test_uniform_grid(self):
        rng = np.random.default_rng(20240117)
        for x in rng.uniform(BRANCH_POINT, 0.0, 500):
            x = float(x)
            if not BRANCH_POINT < x < 0:
                continue
            upper = lambert_w(x, Branch.PRINCIPAL).value
            lower = lambert_w(x, Branch.SECONDARY).value
            self.assertLessEqual(abs(upper * math.exp(upper) - x), 1e-10, msg=f"x={x!r}")
            self.assertLessEqual(abs(lower * math.exp(lower) - x), 1e-10, msg=f"x={x!r}")
            self.assertLessEqual(lower, -1.0)
            self.assertGreaterEqual(upper, -1.0)
            self.assertLessEqual(lower, upper)


class DispatchTests(SimpleTestCase):
    def test_baseline_methods(self):
        for method in (Method.NEWTON, Method.HALLEY):
            with self.subTest(method=method):
                self.assertAlmostEqual(lambert_w(1.0, method=method).value, 0.5671432904097838, places=12)
                value = lambert_w(-0.1, Branch.SECONDARY, method=method).value
                self.assertAlmostEqual(value, -3.577152063957297, places=9)

    def test_non_finite(self):
        with self.assertRaises(DomainError):
            lambert_w(math.nan)


class SeedSweepTests(SimpleTestCase):
    def test_positive_sweep(self):
        seeds = (1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6, 1e12)
        results = seed_sweep(1e5, seeds, Method.M1, Branch.PRINCIPAL)
        values = [r.value for r in results]
        self.assertEqual(len(results), len(seeds))
        for value in values:
            self.assertLess(_rel(value, 9.284571429), 5e-7)
        self.assertLessEqual((max(values) - min(values)) / max(values), 1e-8)
        self.assertTrue(all(r.trace.steps for r in results))

    def test_negative_sweeps(self):
        for branch, seeds, printed in (
            (Branch.SECONDARY, (0.3, 1e3, 1e9), 3.577152064),
            (Branch.PRINCIPAL, (0.3, 5.0), 0.1118325592),
        ):
            for result in seed_sweep(-0.1, seeds, Method.M1, branch):
                self.assertLess(_rel(-result.value, printed), 5e-7)


class ContractionTests(SimpleTestCase):
    """After the first step every correction is smaller than the one before."""

    cfg = SolveConfig(record_trace=True)

    def assertContracts(self, result, msg):
        if result.status is not Status.CONVERGED:
            return
        sizes = [abs(step.correction) for step in result.trace.steps]
        for n in range(1, len(sizes) - 1):
            self.assertLess(sizes[n + 1], sizes[n], msg=f"{msg} n={n + 1} sizes={sizes}")

    def test_principal_grid(self):
        for x in np.logspace(-6, 12, 200):
            x = float(x)
            for method in (Method.M1, Method.M2):
                self.assertContracts(w0(x, method, self.cfg), f"x={x!r} method={method.value}")

    def test_negative_grid(self):
        for X in np.logspace(-300, math.log10(0.367), 200):
            X = float(X)
            for branch in Branch:
                for method in (Method.M1, Method.M2):
                    result = w_negative(-X, branch, method, self.cfg)
                    self.assertContracts(result, f"X={X!r} branch={branch.value} method={method.value}")
