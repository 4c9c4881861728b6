import os
import shutil
import tempfile
import unittest

import numpy as np
import pandas as pd

from qred.exceptions import InvalidInputException, MissingFileException
from qred.targets import parse_target, load_samples, BUILTINS
from qred.rank_estimation import fourier_rank


class ParseTargetTests(unittest.TestCase):

    def test_builtins(self):
        self.assertAlmostEqual(parse_target('cos')(0.0), 1.0)
        self.assertAlmostEqual(parse_target('sin')(0.25), 1.0)
        self.assertAlmostEqual(parse_target('cos2')(0.5), 1.0)
        self.assertAlmostEqual(parse_target('abs_sin')(-0.25), 1.0)
        self.assertAlmostEqual(parse_target('semicircle')(0.6), 0.8)
        for name in BUILTINS:
            self.assertFalse(parse_target(name).is_polynomial)

    def test_poly(self):
        t = parse_target('poly:1,2,3')
        self.assertTrue(t.is_polynomial)
        self.assertEqual(t.coefficients, [1.0, 2.0, 3.0])
        self.assertAlmostEqual(t(2.0), 17.0)

    def test_trig(self):
        t = parse_target('trig:1,0.5')
        self.assertAlmostEqual(t(0.0), 1.5)
        self.assertAlmostEqual(t(0.5), -0.5)
        self.assertEqual(fourier_rank(t).fourier_rank, 2)

    def test_errors(self):
        for text in ['tan', 'poly:', 'poly:1,x', 'trig:']:
            with self.assertRaises(InvalidInputException):
                parse_target(text)


class SampleFileTests(unittest.TestCase):

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def write_frame(self, df, name='samples.csv'):
        path = os.path.join(self.tmp_dir, name)
        df.to_csv(path, index=False)
        return path

    def test_samples(self):
        xs = np.linspace(-0.5, 0.5, 61)
        path = self.write_frame(pd.DataFrame({'x': xs[::-1], 'y': np.cos(2 * np.pi * xs[::-1])}))
        t = parse_target(path)
        self.assertAlmostEqual(t(0.0), 1.0)
        with self.assertRaises(InvalidInputException):
            t(0.6)
        samples = t.sample_set(24)
        self.assertAlmostEqual(samples.x0, 0.0)
        self.assertEqual(fourier_rank(samples).fourier_rank, 1)
        with self.assertRaises(InvalidInputException):
            t.sample_set(31)

    def test_non_uniform(self):
        xs = np.array([0.0, 0.1, 0.3, 0.4, 0.5])
        t = load_samples(self.write_frame(pd.DataFrame({'x': xs, 'y': xs})))
        with self.assertRaises(InvalidInputException):
            t.sample_set(1)

    def test_missing(self):
        with self.assertRaises(MissingFileException):
            parse_target(os.path.join(self.tmp_dir, 'nope.csv'))

    def test_malformed(self):
        with self.assertRaises(InvalidInputException):
            load_samples(self.write_frame(pd.DataFrame({'t': [0, 1], 'y': [0, 1]})))
        with self.assertRaises(InvalidInputException):
            load_samples(self.write_frame(pd.DataFrame({'x': [0, 1], 'y': ['a', 'b']})))
        with self.assertRaises(InvalidInputException):
            load_samples(self.write_frame(pd.DataFrame({'x': [0, 0, 1], 'y': [0, 1, 2]})))
        with self.assertRaises(InvalidInputException):
            load_samples(self.write_frame(pd.DataFrame({'x': [0], 'y': [1]})))


if __name__ == '__main__':
    unittest.main()
