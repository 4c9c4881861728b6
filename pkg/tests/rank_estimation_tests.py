import unittest

import numpy as np

from qred.exceptions import InvalidInputException, AliasingException
from qred.rank_estimation import SampleSet, fourier_rank, hankel_matrix, numerical_rank, chi_conditioning


class SampleSetTests(unittest.TestCase):

    def test_centred_grid(self):
        s = SampleSet.from_callable(lambda x: x, 1.0, 0.5, N=5)
        self.assertAlmostEqual(s.delta, 0.1)
        np.testing.assert_allclose(s.xs, np.linspace(0.5, 1.5, 11))
        np.testing.assert_allclose(s.values, s.xs)

    def test_hankel_shape(self):
        s = SampleSet.from_values(np.arange(9), 0.0, 0.5, N=4)
        h = hankel_matrix(s)
        self.assertEqual(h.shape, (5, 5))
        self.assertEqual(h[1, 3], 4)
        self.assertEqual(h[4, 4], 8)

    def test_validation(self):
        with self.assertRaises(InvalidInputException):
            SampleSet(0.0, 0.1, [1.0, 2.0], N=0)
        with self.assertRaises(InvalidInputException):
            SampleSet(0.0, 0.1, [1.0, 2.0], N=1)
        with self.assertRaises(InvalidInputException):
            SampleSet(0.0, 0.1, [1.0, np.nan, 2.0], N=1)
        with self.assertRaises(InvalidInputException):
            SampleSet(0.0, 0.0, [1.0, 1.0, 2.0], N=1)

    def test_numerical_rank(self):
        self.assertEqual(numerical_rank(np.array([1.0, 1e-3, 1e-9]), 1e-8), 2)
        self.assertEqual(numerical_rank(np.array([0.0, 0.0]), 1e-8), 0)
        self.assertEqual(numerical_rank(np.array([]), 1e-8), 0)


class FourierRankTests(unittest.TestCase):
    """
    Tests rank estimation on functions with known Fourier rank
    """

    def test_constant(self):
        report = fourier_rank(lambda x: 0.7)
        self.assertFalse(report.exceeded)
        self.assertEqual(report.fourier_rank, 0)
        self.assertEqual(fourier_rank(lambda x: 0.0).fourier_rank, 0)

    def test_single_cosines(self):
        for kappa in [1, 2, 3]:
            report = fourier_rank(lambda x: np.cos(2 * np.pi * kappa * x + 0.4), x0=0.3)
            self.assertFalse(report.exceeded)
            self.assertEqual(report.fourier_rank, 1)
            np.testing.assert_allclose(report.frequencies, [-kappa, kappa], atol=1e-6)

    def test_trig_polynomials(self):
        rng = np.random.default_rng(21)
        for d in range(1, 5):
            alpha = rng.uniform(0.5, 1.5, d + 1)
            beta = rng.uniform(0.5, 1.5, d + 1)

            def h(x):
                return alpha[0] + sum(alpha[j] * np.cos(2 * np.pi * j * x) + beta[j] * np.sin(2 * np.pi * j * x)
                                      for j in range(1, d + 1))

            report = fourier_rank(h, x0=-0.2)
            self.assertFalse(report.exceeded)
            self.assertEqual(report.fourier_rank, d)
            for x in [-0.5, 0.0, 0.1]:
                self.assertAlmostEqual(report(x), h(x), places=7)

    def test_coefficients(self):
        report = fourier_rank(lambda x: np.cos(2 * np.pi * x) + 0.5 * np.cos(4 * np.pi * x))
        self.assertEqual(report.fourier_rank, 2)
        np.testing.assert_allclose(report.frequencies, [-2, -1, 1, 2], atol=1e-6)
        np.testing.assert_allclose(report.coefficients, [0.25, 0.5, 0.5, 0.25], atol=1e-6)

    def test_identity_exceeds(self):
        """
        h(x) = x has infinite Fourier rank at every point and every budget
        """
        for N in range(1, 13):
            report = fourier_rank(lambda x: x, 0.0, 0.5, N)
            self.assertTrue(report.exceeded)
            self.assertIsNone(report.fourier_rank)
            self.assertIn(report.reason, ('saturated', 'off_circle', 'coalesced', 'residual'))

    def test_polynomial_rank_monotone(self):
        """
        Raising the budget never lowers the Hankel rank of a polynomial, which settles at degree + 1
        """
        rng = np.random.default_rng(3)
        for d in range(1, 4):
            p = np.polynomial.Polynomial(rng.uniform(0.5, 1.5, d + 1))
            reports = [fourier_rank(p, 0.2, 0.5, N) for N in range(2, 13)]
            ranks = [r.hankel_rank for r in reports]
            self.assertTrue(all(x <= y for x, y in zip(ranks, ranks[1:])), ranks)
            estimates = [r.rank_estimate for r in reports]
            self.assertEqual(estimates, sorted(estimates))
            self.assertEqual(ranks[-1], d + 1)
            self.assertTrue(all(r.exceeded for r in reports))

    def test_exponential_off_circle(self):
        report = fourier_rank(np.exp)
        self.assertTrue(report.exceeded)
        self.assertEqual(report.reason, 'off_circle')
        self.assertEqual(report.rank_estimate, 0)

    def test_sample_input(self):
        xs = np.linspace(-0.5, 0.5, 49)
        report = fourier_rank(np.sin(2 * np.pi * xs), x0=0.0, eps=0.5, N=24)
        self.assertEqual(report.fourier_rank, 1)
        self.assertEqual(report.to_dict()['N'], 24)
        self.assertAlmostEqual(report.to_dict()['eps'], 0.5)

    def test_aliasing(self):
        with self.assertRaises(AliasingException):
            fourier_rank(lambda x: np.cos(2 * np.pi * 23.8 * x))

    def test_bad_arguments(self):
        with self.assertRaises(InvalidInputException):
            fourier_rank(np.cos, rank_tol=0)
        with self.assertRaises(InvalidInputException):
            fourier_rank(np.cos, eps=-1)


class ChiConditioningTests(unittest.TestCase):

    def test_orthogonal(self):
        self.assertAlmostEqual(chi_conditioning([1, 2, 3], 0.0, 0.5, 100), 1.0, places=8)

    def test_near_duplicates(self):
        self.assertLess(chi_conditioning([1, 1.0001], 0.0, 0.5, 100), 1e-3)
        self.assertGreater(chi_conditioning([1, 1.5], 0.0, 0.1, 50), 0.0)

    def test_validation(self):
        with self.assertRaises(InvalidInputException):
            chi_conditioning([1, 1], 0.0, 0.5, 10)
        with self.assertRaises(InvalidInputException):
            chi_conditioning([], 0.0, 0.5, 10)
        with self.assertRaises(InvalidInputException):
            chi_conditioning([1, 2, 3], 0.0, 0.5, 2)


if __name__ == '__main__':
    unittest.main()
