import unittest

import numpy as np

from qred.exceptions import InvalidInputException, CapacityExceededException, DomainViolationException
from qred.bounds_fitting import bound_linear, bound_arcsin, bound_degree, fit_linear, fit_arcsin, tightness_sweep, \
    linear_design, least_squares, projection_distance, linear_projection_distance, arcsin_projection_distance, \
    fit_points, coordinate_descent, coefficient_scale, arcsin_bounds
from qred.fourier_calculus import project_univariate, frequency_set, spread
from qred.arcsin_encoding import ScDictionary
from qred.pqc_core import Encoding, evaluate_encoded, random_circuit
from qred.rank_estimation import fourier_rank


def cos2(x):
    return np.cos(2 * np.pi * x) ** 2


def two_tone(x):
    return np.cos(2 * np.pi * x) + 0.5 * np.cos(4 * np.pi * x)


def cube(x):
    return x ** 3


def chebyshev2(x):
    return 2 * x ** 2 - 1


class BoundTests(unittest.TestCase):
    """
    Tests the bound arithmetic, which must be exact at powers of three
    """

    def test_linear(self):
        log, sharp = bound_linear(13)
        self.assertEqual(log.lower_bound_int, 3)
        self.assertAlmostEqual(log.lower_bound_real, np.log(14) / np.log(3), places=14)
        self.assertEqual(sharp.lower_bound_real, 3.0)
        self.assertEqual(sharp.lower_bound_int, 3)

    def test_rank_two(self):
        log, sharp = bound_linear(2)
        self.assertEqual((log.lower_bound_real, log.lower_bound_int), (1.0, 1))
        self.assertAlmostEqual(sharp.lower_bound_real, np.log(5) / np.log(3), places=14)
        self.assertEqual(sharp.lower_bound_int, 2)

    def test_rank_zero(self):
        log, sharp = bound_linear(0)
        self.assertEqual((log.lower_bound_real, log.lower_bound_int), (0.0, 0))
        self.assertEqual(sharp.lower_bound_int, 0)

    def test_infinite_rank(self):
        for r in (None, float('inf')):
            log, sharp = bound_linear(r)
            self.assertIsNone(log.lower_bound_int)
            self.assertEqual(log.lower_bound_real, float('inf'))
            self.assertEqual(sharp.flag, 'no_finite_redundancy')

    def test_negative_rank(self):
        with self.assertRaises(InvalidInputException):
            bound_linear(-1)
        with self.assertRaises(InvalidInputException):
            bound_arcsin(1.5)

    def test_arcsin(self):
        self.assertEqual(bound_arcsin(9).lower_bound_real, 2.0)
        self.assertEqual(bound_arcsin(9).lower_bound_int, 2)
        self.assertEqual(bound_arcsin(10).lower_bound_int, 3)
        self.assertEqual(bound_arcsin(1).lower_bound_int, 0)
        zero = bound_arcsin(0)
        self.assertEqual((zero.lower_bound_int, zero.flag), (0, 'zero_rank'))
        self.assertEqual(bound_arcsin(None).flag, 'no_finite_redundancy')

    def test_degree(self):
        self.assertEqual(bound_degree(3).lower_bound_int, 3)
        self.assertEqual(bound_degree(3).to_dict()['bound_kind'], 'arcsin_degree')


class OracleTests(unittest.TestCase):
    """
    Tests the projection distance oracle, which certifies failures to fit for a fixed encoding
    """

    def test_cos2_fixed_encoding(self):
        """
        cos^2 is not in the span of frequencies {-1, 0, 1} but is in the span of {-2, 0, 2}
        """
        lower, upper = linear_projection_distance(cos2, (0, 1), [1.0])
        self.assertGreater(lower, 0.3)
        self.assertGreaterEqual(upper, lower)
        lower, upper = linear_projection_distance(cos2, (0, 1), [2.0])
        self.assertLess(upper, 1e-8)

    def test_arcsin_fixed_encoding(self):
        target = lambda x: 2 * x ** 2 - 1
        lower, _ = arcsin_projection_distance(target, (-0.9, 0.9), [1.0], [0.0])
        self.assertGreater(lower, 1e-3)
        _, upper = arcsin_projection_distance(target, (-0.9, 0.9), [1.0, 1.0], [0.0, 0.0])
        self.assertLess(upper, 1e-8)

    def test_arcsin_infeasible(self):
        with self.assertRaises(DomainViolationException):
            arcsin_projection_distance(np.cos, (0, 1), [1.0, 2.0], [0.0, 0.0])

    def test_least_squares_optimality(self):
        """
        The least-squares residual is orthogonal to every column of the design
        """
        xs, _ = fit_points((0, 1), 200)
        design, ks = linear_design([1.0, 2.7], xs)
        self.assertEqual(design.shape, (200, 1 + 2 * len(ks)))
        y = np.exp(xs)
        sol, maxres = least_squares(design, y)
        r = y - design @ sol
        np.testing.assert_allclose(design.T @ r, 0, atol=1e-8)
        lower, upper = projection_distance(y, design)
        self.assertAlmostEqual(upper, maxres)
        self.assertLessEqual(lower, upper)

    def test_fit_points(self):
        xs, mids = fit_points((0, 1), 5)
        np.testing.assert_allclose(xs, [0, 0.25, 0.5, 0.75, 1])
        np.testing.assert_allclose(mids, [0.125, 0.375, 0.625, 0.875])
        with self.assertRaises(InvalidInputException):
            fit_points((1, 1))
        with self.assertRaises(InvalidInputException):
            fit_points((0, np.inf))

    def test_coordinate_descent(self):
        x, fx = coordinate_descent(lambda v: float(np.sum((v - 0.3) ** 2)), [0.9, -0.9], np.array([-1.0, -1.0]),
                                   np.array([1.0, 1.0]))
        np.testing.assert_allclose(x, [0.3, 0.3], atol=1e-6)
        self.assertLess(fx, 1e-10)


class LinearFitTests(unittest.TestCase):

    def test_cosine(self):
        fit = fit_linear(lambda x: np.cos(2 * np.pi * x), (0, 1), 1, restarts=2, n_points=128)
        self.assertLess(fit.residual, 1e-8)
        self.assertLess(fit.holdout_residual, 1e-8)
        self.assertAlmostEqual(abs(fit.a[0]), 1.0, places=6)
        self.assertEqual(len(fit.history), 2)

    def test_cos2_single_slot(self):
        """
        With a free slope a single slot reaches frequency 2
        """
        fit = fit_linear(cos2, (0, 1), 1, restarts=2, n_points=128)
        self.assertLess(fit.residual, 1e-8)
        self.assertAlmostEqual(abs(fit.a[0]), 2.0, places=6)

    def test_witness_spectrum(self):
        """
        The witness spectrum restricted to the fitted encoding line reproduces the fit
        """
        fit = fit_linear(two_tone, (0, 1), 2, restarts=4, n_points=128)
        self.assertLess(fit.residual, 1e-8)
        s = fit.witness_spectrum()
        self.assertEqual(s.n, 2)
        a, b = np.array(fit.a), np.array(fit.b)
        for x in [0.1, 0.35, 0.8]:
            self.assertAlmostEqual(s(a * x + b), two_tone(x), places=7)
        u = project_univariate(s, fit.a, fit.b)
        self.assertAlmostEqual(u(0.35), two_tone(0.35), places=7)

    def test_determinism(self):
        first = fit_linear(two_tone, (0, 1), 1, restarts=3, seed=5, n_points=64)
        second = fit_linear(two_tone, (0, 1), 1, restarts=3, seed=5, n_points=64)
        self.assertEqual(first.a, second.a)
        self.assertEqual(first.b, second.b)
        self.assertEqual(first.residual, second.residual)
        self.assertEqual(first.to_dict(), second.to_dict())

    def test_zero_slots(self):
        fit = fit_linear(lambda x: 0.25, (0, 1), 0, restarts=1, n_points=32)
        self.assertLess(fit.residual, 1e-12)

    def test_coefficient_bound(self):
        """
        Nearly equal slopes give nearly coinciding frequencies; alpha_k stays within sqrt(2) times the number of w with
        w.a = k
        """
        fit = fit_linear(cube, (0, 1), 2, restarts=1, n_points=128, init=[1.0, 1.0 + 1e-7])
        scale = coefficient_scale(cube(fit_points((0, 1), 128)[0]))
        fs = frequency_set(fit.a)
        for k, v in fit.coeffs.terms.items():
            self.assertLessEqual(abs(v), np.sqrt(2) * len(fs.multiplicity_map[abs(k)]) * scale * (1 + 1e-9), k)

    def test_capacity(self):
        with self.assertRaises(CapacityExceededException):
            fit_linear(np.cos, (0, 1), 9)
        with self.assertRaises(InvalidInputException):
            fit_linear(np.cos, (0, 1), -1)


class ArcsinFitTests(unittest.TestCase):

    def test_identity(self):
        fit = fit_arcsin(lambda x: x, (0, 1), 1, restarts=2, n_points=64)
        self.assertLess(fit.residual, 1e-8)
        for x in [0.0, 0.3, 1.0]:
            self.assertAlmostEqual(fit(x), x, places=7)
        self.assertLessEqual(abs(fit.b[0]), 1 + 1e-12)
        self.assertLessEqual(abs(fit.a[0] + fit.b[0]), 1 + 1e-12)

    def test_witness_spectrum(self):
        """
        The witness spectrum evaluated at eta = arcsin(a x + b) / (2 pi) reproduces the fit
        """
        fit = fit_arcsin(lambda x: x - 0.5 * x ** 2, (0, 1), 2, restarts=2, n_points=64)
        s = fit.witness_spectrum()
        a, b = np.array(fit.a), np.array(fit.b)
        for x in [0.1, 0.5, 0.9]:
            eta = np.arcsin(np.clip(a * x + b, -1, 1)) / (2 * np.pi)
            self.assertAlmostEqual(s(eta), fit(x), places=7)

    def test_cubic(self):
        fit = fit_arcsin(cube, (0, 1), 3, restarts=4, n_points=128)
        self.assertLess(fit.residual, 1e-8)

    def test_cubic_needs_three_slots(self):
        """
        A degree 3 polynomial is out of reach of one or two slots; near-singular encodings must not fake a fit
        """
        for n in (1, 2):
            fit = fit_arcsin(cube, (0, 1), n, restarts=4, n_points=128)
            self.assertGreater(fit.residual, 1e-3, fit)

    def test_quadratic_narrow_interval(self):
        fit = fit_arcsin(chebyshev2, (-0.6, 0.6), 1, restarts=4, n_points=128)
        self.assertGreater(fit.residual, 1e-3)
        fit = fit_arcsin(chebyshev2, (-0.6, 0.6), 2, restarts=4, n_points=128)
        self.assertLess(fit.residual, 1e-8)

    def test_coefficient_bound(self):
        """
        Every sc coefficient stays within 2^degree times the observable norm, also when the fit fails
        """
        for n in (1, 2, 3):
            fit = fit_arcsin(cube, (0, 1), n, restarts=2, n_points=128)
            for mu, v in fit.coeffs.items():
                self.assertLessEqual(abs(v), 2 ** mu.degree * (1 + 1e-9), (mu.label, v))

    def test_bounded_least_squares(self):
        """
        Slopes near zero make an ill-conditioned dictionary whose unbounded solution fits a cubic with two slots
        """
        xs, _ = fit_points((0, 1), 128)
        y = cube(xs)
        d = ScDictionary([1e-3, 2e-3], [0.0, 0.0])
        mat, norms = d.evaluation_matrix(xs, normalize=True)
        bound = arcsin_bounds(d, norms, coefficient_scale(y))
        sol, maxres = least_squares(mat, y, bound)
        self.assertTrue(np.all(np.abs(sol) <= bound * (1 + 1e-9)))
        self.assertGreater(maxres, 1e-3)
        free, _ = least_squares(mat, y)
        self.assertTrue(np.any(np.abs(free) > bound))

    def test_init(self):
        fit = fit_arcsin(lambda x: x, (0, 1), 1, restarts=1, n_points=64, init=([1.0], [0.0]))
        self.assertLess(fit.residual, 1e-8)
        with self.assertRaises(DomainViolationException):
            fit_arcsin(lambda x: x, (0, 1), 1, restarts=1, n_points=64, init=([3.0], [0.0]))


class SweepTests(unittest.TestCase):

    def test_two_tone_sweep(self):
        """
        A rank 2 target needs two linearly encoded slots
        """
        df = tightness_sweep(two_tone, (0, 1), [1, 2, 3], 'linear', restarts=8, seed=0, n_points=128)
        self.assertEqual(list(df.columns), ['n', 'best_residual', 'wall_ms', 'seed'])
        self.assertEqual(df.n.tolist(), [1, 2, 3])
        self.assertGreater(df.best_residual.iloc[0], 1e-3)
        self.assertLess(df.best_residual.iloc[1], 1e-8)
        self.assertTrue((np.diff(df.best_residual.values) <= 0).all())

    def test_arcsin_sweep(self):
        df = tightness_sweep(lambda x: x ** 2, (0, 1), [1, 2], 'arcsin', restarts=2, seed=1, n_points=64)
        self.assertLess(df.best_residual.iloc[1], 1e-8)
        self.assertGreaterEqual(df.best_residual.iloc[0], df.best_residual.iloc[1])

    def test_arcsin_cubic_sweep(self):
        """
        The first redundancy that fits a cubic with arcsine encoding is its degree
        """
        df = tightness_sweep(cube, (0, 1), [1, 2, 3, 4], 'arcsin', restarts=3, seed=0, n_points=128)
        self.assertEqual(df.n.tolist(), [1, 2, 3, 4])
        success = df[df.best_residual < 1e-8]
        self.assertEqual(success.n.iloc[0], 3)
        self.assertGreater(df.best_residual.iloc[1], 1e-3)
        self.assertLess(df.best_residual.iloc[3], 1e-8)

    def test_bad_arguments(self):
        with self.assertRaises(InvalidInputException):
            tightness_sweep(np.cos, (0, 1), [1], 'tanh')
        with self.assertRaises(InvalidInputException):
            tightness_sweep(np.cos, (0, 1), [])



class BoundConsistencyTests(unittest.TestCase):
    """
    The bound computed from the estimated rank of an encoded circuit never exceeds the number of slots it used
    """

    def test_random_circuits(self):
        rng = np.random.default_rng(17)
        for _ in range(6):
            n = int(rng.integers(1, 4))
            a = rng.integers(1, 3, n)
            e = Encoding('identity', a, rng.uniform(0, 1, n))
            c = random_circuit(int(rng.integers(1, 4)), n, rng, depth=1)
            report = fourier_rank(lambda x: evaluate_encoded(c, e, None, x), float(rng.uniform(-1, 1)), 0.5, 24)
            self.assertLessEqual(report.rank_estimate, spread([int(v) for v in a]))
            for bound in bound_linear(report.rank_estimate):
                self.assertLessEqual(bound.lower_bound_int, n, (a, report))

if __name__ == '__main__':
    unittest.main()
