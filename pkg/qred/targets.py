"""
Target functions for the rank, bound and fit commands.

A target is given either as a builtin name

    cos, sin, cos2, abs_sin        cos(2 pi x), sin(2 pi x), cos^2(2 pi x), |sin(2 pi x)|
    semicircle                     sqrt(1 - x^2)
    exp, sigmoid, arctan           analytic non-polynomial functions
    poly:c0,c1,...                 c0 + c1 x + c2 x^2 + ...
    trig:c1,...,cd                 sum_k c_k cos(2 pi k x)

or as the path of a CSV file with columns x and y.
"""
import os

import numpy as np
import pandas as pd
from numpy.polynomial import polynomial

import tools.misc
from .exceptions import InvalidInputException, MissingFileException
from .rank_estimation import SampleSet

UNIFORM_TOL = 1e-9


class Target(object):
    """A named real function of one variable. coefficients holds the increasing-order coefficients of polynomials."""
    __slots__ = ('name', 'func', 'coefficients')

    def __init__(self, name, func, coefficients=None):
        self.name = name
        self.func = func
        self.coefficients = coefficients

    def __repr__(self):
        return 'Target({})'.format(self.name)

    def __call__(self, x):
        return float(self.func(x))

    @property
    def is_polynomial(self):
        return self.coefficients is not None


class SampledTarget(Target):
    """
    A target known only at the points of a CSV file. Calls interpolate linearly; rank estimation uses the raw samples
    and therefore needs an equispaced grid.
    """
    __slots__ = ('xs', 'ys')

    def __init__(self, name, xs, ys):
        self.xs = np.asarray(xs, dtype=float)
        self.ys = np.asarray(ys, dtype=float)
        super(SampledTarget, self).__init__(name, self._interpolate)

    def _interpolate(self, x):
        if not self.xs[0] <= x <= self.xs[-1]:
            raise InvalidInputException('{}: x = {} lies outside the sampled range [{}, {}].'.format(
                self.name, x, self.xs[0], self.xs[-1]))
        return np.interp(x, self.xs, self.ys)

    def sample_set(self, N):
        """The 2N + 1 samples centred on the middle of the file"""
        steps = np.diff(self.xs)
        if np.max(np.abs(steps - steps[0])) > UNIFORM_TOL * max(1.0, abs(steps[0])):
            raise InvalidInputException('{}: rank estimation needs equispaced x values.'.format(self.name))
        if len(self.xs) < 2 * N + 1:
            raise InvalidInputException('{}: budget N = {} needs {} samples, the file has {}.'.format(
                self.name, N, 2 * N + 1, len(self.xs)))
        mid = (len(self.xs) - 1) // 2
        return SampleSet(self.xs[mid], steps[0], self.ys[mid - N:mid + N + 1], N)


def _trig(coeffs):
    def h(x):
        return sum(c * np.cos(2 * np.pi * (k + 1) * x) for k, c in enumerate(coeffs))
    return h


BUILTINS = {
    'cos': lambda x: np.cos(2 * np.pi * x),
    'sin': lambda x: np.sin(2 * np.pi * x),
    'cos2': lambda x: np.cos(2 * np.pi * x) ** 2,
    'abs_sin': lambda x: abs(np.sin(2 * np.pi * x)),
    'semicircle': lambda x: np.sqrt(1 - x ** 2),
    'exp': np.exp,
    'sigmoid': lambda x: 1 / (1 + np.exp(-x)),
    'arctan': np.arctan,
}


def load_samples(path):
    """Reads a CSV file with columns x and y, sorted by x"""
    if not os.path.exists(path):
        raise MissingFileException('Sample file {} not found.'.format(path))
    try:
        df = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise InvalidInputException('{}: unreadable sample file: {}'.format(path, e))
    if not {'x', 'y'} <= set(df.columns):
        raise InvalidInputException('{}: expected columns x and y, found {}.'.format(path, list(df.columns)))
    try:
        df = df[['x', 'y']].astype(float)
    except ValueError as e:
        raise InvalidInputException('{}: non-numeric sample: {}'.format(path, e))
    if len(df) < 2 or not np.all(np.isfinite(df.values)):
        raise InvalidInputException('{}: need at least two finite samples.'.format(path))
    df = df.sort_values('x')
    if df.x.duplicated().any():
        raise InvalidInputException('{}: duplicate x values.'.format(path))
    return SampledTarget(path, df.x.values, df.y.values)


def parse_target(text):
    """
    :param text: builtin name, poly:/trig: form, or CSV path
    :return: Target
    """
    if text in BUILTINS:
        return Target(text, BUILTINS[text])
    if text.startswith('poly:') or text.startswith('trig:'):
        kind, body = text.split(':', 1)
        try:
            coeffs = [float(v) for v in tools.misc.parse_number_list(body)]
        except ValueError as e:
            raise InvalidInputException('Malformed coefficient list in target {!r}: {}'.format(text, e))
        if len(coeffs) == 0:
            raise InvalidInputException('Target {!r} has no coefficients.'.format(text))
        if kind == 'poly':
            return Target(text, lambda x: polynomial.polyval(x, coeffs), coeffs)
        return Target(text, _trig(coeffs))
    if os.path.exists(text) or text.endswith('.csv'):
        return load_samples(text)
    raise InvalidInputException('Unknown target {!r}; expected one of {}, poly:c0,c1,..., trig:c1,... or a CSV '
                                'file.'.format(text, ', '.join(sorted(BUILTINS))))
