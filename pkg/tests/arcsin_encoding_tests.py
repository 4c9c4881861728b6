import unittest

import numpy as np

from qred.exceptions import DomainViolationException, InvalidInputException, CapacityExceededException
from qred.arcsin_encoding import Interval, slot_interval, ScMonomial, ScDictionary, sc_eval, sc_interval, \
    generic_dimension, sc_dimension, sc_project, sc_rank, degree_bound, polynomial_degree, representable_analytic
from qred.pqc_core import Circuit, InputRotation, Hamiltonian, Encoding, random_circuit, evaluate_encoded
from qred.fourier_calculus import extract_spectrum, to_trig_form


class IntervalTests(unittest.TestCase):

    def test_slot_interval(self):
        self.assertEqual(slot_interval(2.0, 0.0), Interval(-0.5, 0.5))
        self.assertEqual(slot_interval(-1.0, 0.5), Interval(-0.5, 1.5))
        self.assertEqual(slot_interval(0.0, 0.5), Interval())
        self.assertTrue(slot_interval(0.0, 1.0).is_empty)

    def test_open_interval(self):
        i = Interval(-0.5, 0.5)
        self.assertIn(0.0, i)
        self.assertNotIn(0.5, i)
        self.assertTrue(i.contains_segment(-0.4, 0.4))
        self.assertFalse(i.contains_segment(-0.5, 0.4))
        self.assertTrue(i.intersection(Interval(1, 2)).is_empty)


class ScMonomialTests(unittest.TestCase):

    def test_label_and_masks(self):
        mu = ScMonomial([1], [3], [1, 1, 1], [0, 0, 0])
        self.assertEqual(mu.label, 's1*c3')
        self.assertEqual((mu.s_mask, mu.c_mask, mu.degree), (1, 4, 2))
        self.assertEqual(ScMonomial([], [], [1], [0]).label, '1')

    def test_validation(self):
        with self.assertRaises(InvalidInputException):
            ScMonomial([1], [1], [1], [0])
        with self.assertRaises(InvalidInputException):
            ScMonomial([0], [], [1], [0])
        with self.assertRaises(InvalidInputException):
            ScMonomial([], [3], [1, 1], [0, 0])

    def test_eval(self):
        mu = ScMonomial([1], [2], [1.0, 1.0], [0.0, 0.5])
        self.assertAlmostEqual(sc_eval(mu, 0.2), 0.2 * np.sqrt(1 - 0.49))
        self.assertAlmostEqual(mu(0.2), 0.2 * np.sqrt(1 - 0.49))

    def test_eval_domain(self):
        mu = ScMonomial([], [2], [1.0, 3.0], [0.0, 0.0])
        with self.assertRaises(DomainViolationException) as cm:
            sc_eval(mu, 0.5)
        self.assertEqual(cm.exception.slot, 2)

    def test_interval(self):
        mu = ScMonomial([], [1, 2], [1.0, 2.0], [0.0, 0.0])
        self.assertEqual(sc_interval(mu), Interval(-0.5, 0.5))
        self.assertEqual(sc_interval(ScMonomial([1], [], [1.0], [0.0])), Interval())

    def test_matches_circuit(self):
        """
        An arcsine-encoded circuit equals its trigonometric form with sin -> s_j and cos -> c_j
        """
        rng = np.random.default_rng(9)
        a, b = np.array([0.8, -0.6]), np.array([0.1, 0.2])
        c = random_circuit(2, 2, rng)
        coeffs = to_trig_form(extract_spectrum(c))
        e = Encoding('arcsine', a, b)
        for x in [-0.5, 0.0, 0.7]:
            total = 0.0
            for tau, v in coeffs.items():
                mu = ScMonomial([j + 1 for j, t in enumerate(tau) if t == 'sin'],
                                [j + 1 for j, t in enumerate(tau) if t == 'cos'], a, b)
                total += v * mu(x)
            self.assertAlmostEqual(total, evaluate_encoded(c, e, None, x), places=10)


class ScDictionaryTests(unittest.TestCase):
    """
    Tests the dimension of the span of sc-monomials in generic and degenerate position
    """

    def test_generic_dimension(self):
        self.assertEqual([generic_dimension(n) for n in range(4)], [1, 3, 8, 20])

    def test_size_and_order(self):
        d = ScDictionary([1.0, 2.0], [0.0, 0.0])
        self.assertEqual(len(d), 9)
        self.assertEqual(d.monomials[0].label, '1')
        self.assertEqual(d.monomials[-1].label, 'c1*c2')
        self.assertEqual(d.common_interval(), Interval(-0.5, 0.5))
        self.assertEqual(d.common_interval(0.4, 0.2), Interval(0.2, 0.5))
        df = d.to_frame()
        self.assertEqual(list(df.columns), ['monomial', 'S', 'C', 'degree', 'lo', 'hi'])
        self.assertEqual(len(df), 9)

    def test_generic_position(self):
        self.assertEqual(sc_dimension(ScDictionary([1.0], [0.0]), 0.0, 0.5), 3)
        self.assertEqual(sc_dimension(ScDictionary([1.0, np.sqrt(2)], [0.1, -0.2]), 0.0, 0.5), 8)
        d = ScDictionary([2.0, -1.9, 1.7], [0.05, -0.1, 0.2])
        self.assertEqual(sc_dimension(d, 0.0, 0.45), 20)

    def test_degenerate_position(self):
        """
        Equal slopes with b = 0 collapse the dictionary to 2n + 1 functions
        """
        self.assertEqual(sc_dimension(ScDictionary([1.0, 1.0], [0.0, 0.0]), 0.0, 0.4), 5)
        self.assertEqual(sc_dimension(ScDictionary([1.0, 1.0, 1.0], [0.0, 0.0, 0.0]), 0.0, 0.4), 7)

    def test_segment_outside_domain(self):
        d = ScDictionary([1.0, 2.0], [0.0, 0.0])
        with self.assertRaises(DomainViolationException) as cm:
            sc_dimension(d, 0.0, 0.6)
        self.assertEqual(cm.exception.slot, 2)

    def test_too_few_samples(self):
        with self.assertRaises(InvalidInputException):
            sc_dimension(ScDictionary([1.0, 1.0], [0.0, 0.0]), 0.0, 0.4, n_samples=5)

    def test_capacity(self):
        with self.assertRaises(CapacityExceededException):
            ScDictionary([0.1] * 9, [0.0] * 9)

    def test_project(self):
        d = ScDictionary([1.0, 1.0], [0.0, 0.0])
        coeffs, residual = sc_project(lambda x: 2 * x ** 2 - 1, d, 0.0, 0.5)
        self.assertLess(residual, 1e-8)
        self.assertEqual(len(coeffs), 9)
        _, residual = sc_project(np.exp, d, 0.0, 0.5)
        self.assertGreater(residual, 1e-8)


class ScRankTests(unittest.TestCase):

    def test_single_monomial(self):
        result = sc_rank(lambda x: 3 * x * np.sqrt(1 - x ** 2), 0.0, 0.5, 2, [([1.0, 1.0], [0.0, 0.0])])
        self.assertEqual(result.rank, 1)
        self.assertEqual(len(result.support), 1)
        self.assertIn(result.support[0].label, ('s1*c2', 'c1*s2'))

    def test_two_monomials(self):
        result = sc_rank(lambda x: 1 + x, 0.0, 0.5, 1, [([1.0], [0.0])])
        self.assertEqual(result.rank, 2)
        self.assertFalse(result.exceeded)
        self.assertTrue(result.to_dict()['upper_bound'])

    def test_zero(self):
        self.assertEqual(sc_rank(lambda x: 0.0, 0.0, 0.5, 1, [([1.0], [0.0])]).rank, 0)

    def test_not_representable(self):
        result = sc_rank(np.exp, 0.0, 0.5, 1, [([1.0], [0.0])])
        self.assertTrue(result.exceeded)
        self.assertIsNone(result.rank)

    def test_limits(self):
        with self.assertRaises(CapacityExceededException):
            sc_rank(np.exp, 0.0, 0.5, 4, [([1.0], [0.0])])
        with self.assertRaises(InvalidInputException):
            sc_rank(np.exp, 0.0, 0.5, 1, [])
        with self.assertRaises(InvalidInputException):
            sc_rank(np.exp, 0.0, 0.5, 1, [([1.0, 1.0], [0.0, 0.0])])
        with self.assertRaises(DomainViolationException):
            sc_rank(np.exp, 0.0, 0.5, 1, [([4.0], [0.0])])


class DegreeTests(unittest.TestCase):

    def test_degree_bound(self):
        self.assertEqual(degree_bound([0, 0, 0, 1]), 3)
        self.assertEqual(degree_bound([1, 2, 0, 0]), 1)
        self.assertEqual(degree_bound([5]), 0)
        with self.assertRaises(InvalidInputException):
            degree_bound([0, 0])

    def test_polynomial_degree(self):
        self.assertEqual(polynomial_degree(lambda x: x ** 3 - x), 3)
        self.assertEqual(polynomial_degree(lambda x: 2.0), 0)

    def test_analytic_targets(self):
        """
        sin, exp, sigmoid and arctan are not polynomials, so no arcsine-encoded circuit represents them
        """
        for h in [np.sin, np.exp, np.arctan, lambda x: 1 / (1 + np.exp(-x))]:
            self.assertFalse(representable_analytic(h))
        self.assertTrue(representable_analytic(lambda x: 1 - 3 * x ** 2))


if __name__ == '__main__':
    unittest.main()
