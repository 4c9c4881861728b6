"""
sc-monomial algebra for arcsine input encoding.

With eta_j(x) = arcsin(s_j(x)) / (2 pi) and s_j(x) = a_j x + b_j, sin(2 pi eta_j) = s_j and
cos(2 pi eta_j) = c_j = sqrt(1 - s_j^2). A Pauli/2 expectation value function is multilinear in (1, cos, sin) per
slot, so every encoded function is a linear combination of the 3^n sc-monomials

    mu_{S,C}(x) = prod_{j in S} s_j(x) prod_{j in C} c_j(x),    S, C disjoint subsets of {1..n}

valid on the open interval I_mu where every square-root argument is positive. Slots are numbered from 1.

The 3^n monomials are not independent: the C = {} monomials are polynomials of degree <= n, and for each C the
remaining factors span polynomials of degree <= n - |C|. For (a, b) in general position the span therefore has
dimension sum_k binom(n, k) (n - k + 1) = 2^(n-1) (n + 2).
"""
import logging
import itertools

import numpy as np
import pandas as pd
import scipy.linalg
from numpy.polynomial import chebyshev

from .exceptions import DomainViolationException, InvalidInputException, CapacityExceededException, \
    DimensionMismatchException
from .rank_estimation import numerical_rank

logger = logging.getLogger('qred')

SQRT_SLACK = 1e-12
DEFAULT_SC_TOL = 1e-8
MAX_DICTIONARY_N = 8
MAX_SC_RANK_N = 3
DEFAULT_MAX_SUBSETS = 250000


class Interval(object):
    """An open interval (lo, hi). Empty when lo >= hi."""
    __slots__ = ('lo', 'hi')

    def __init__(self, lo=-np.inf, hi=np.inf):
        self.lo = float(lo)
        self.hi = float(hi)

    @classmethod
    def empty(cls):
        return cls(np.inf, -np.inf)

    def __repr__(self):
        if self.is_empty:
            return 'Interval(empty)'
        return 'Interval({}, {})'.format(self.lo, self.hi)

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        if self.is_empty and other.is_empty:
            return True
        return (self.lo, self.hi) == (other.lo, other.hi)

    def __hash__(self):
        return hash(('empty',) if self.is_empty else (self.lo, self.hi))

    def __contains__(self, x):
        return self.lo < x < self.hi

    @property
    def is_empty(self):
        return not self.lo < self.hi

    def intersection(self, other):
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def contains_segment(self, lo, hi):
        """Does the open interval contain the closed segment [lo, hi]?"""
        return self.lo < lo and hi < self.hi


def slot_interval(a_j, b_j):
    """Open interval where |a_j x + b_j| < 1. a_j = 0 gives the whole line if |b_j| < 1 and the empty set otherwise."""
    if a_j == 0:
        return Interval() if abs(b_j) < 1 else Interval.empty()
    lo, hi = (-1 - b_j) / a_j, (1 - b_j) / a_j
    return Interval(min(lo, hi), max(lo, hi))


class ScMonomial(object):
    """
    prod_{j in S} (a_j x + b_j) prod_{j in C} sqrt(1 - (a_j x + b_j)^2) with S, C disjoint sets of 1-based slots.
    """
    __slots__ = ('S', 'C', 'a', 'b')

    def __init__(self, S, C, a, b):
        self.S = frozenset(int(j) for j in S)
        self.C = frozenset(int(j) for j in C)
        self.a = tuple(float(x) for x in a)
        self.b = tuple(float(x) for x in b)
        if len(self.a) != len(self.b):
            raise DimensionMismatchException('a and b differ in length ({} vs {}).'.format(len(self.a), len(self.b)))
        if len(self.S & self.C) > 0:
            raise InvalidInputException('S and C must be disjoint, both contain {}.'.format(sorted(self.S & self.C)))
        if any(j < 1 or j > self.n for j in self.S | self.C):
            raise InvalidInputException('Slots must lie in 1..{}, got S={} C={}.'.format(
                self.n, sorted(self.S), sorted(self.C)))

    def __repr__(self):
        return 'ScMonomial({})'.format(self.label)

    def __eq__(self, other):
        return isinstance(other, ScMonomial) and (self.S, self.C, self.a, self.b) == (other.S, other.C, other.a, other.b)

    def __hash__(self):
        return hash((self.S, self.C, self.a, self.b))

    @property
    def n(self):
        return len(self.a)

    @property
    def degree(self):
        return len(self.S) + len(self.C)

    @property
    def label(self):
        parts = ['s{}'.format(j) for j in sorted(self.S)] + ['c{}'.format(j) for j in sorted(self.C)]
        return '*'.join(parts) if len(parts) > 0 else '1'

    @property
    def s_mask(self):
        return sum(1 << (j - 1) for j in self.S)

    @property
    def c_mask(self):
        return sum(1 << (j - 1) for j in self.C)

    def __call__(self, x):
        return sc_eval(self, x)


def _column(mu, xs):
    xs = np.asarray(xs, dtype=float)
    out = np.ones(xs.shape)
    for j in sorted(mu.S):
        out = out * (mu.a[j - 1] * xs + mu.b[j - 1])
    for j in sorted(mu.C):
        arg = 1 - (mu.a[j - 1] * xs + mu.b[j - 1]) ** 2
        if np.any(arg < -SQRT_SLACK):
            bad = xs[np.argmin(arg)] if xs.ndim > 0 else float(xs)
            raise DomainViolationException('sc-monomial {}: factor c{} is undefined at x = {:.12g}.'.format(
                mu.label, j, bad), slot=j)
        out = out * np.sqrt(np.maximum(arg, 0))
    return out


def sc_eval(mu, x):
    """
    Evaluates an sc-monomial at x with the nonnegative square-root branch.
    Raises DomainViolationException naming the slot j in C whose square-root argument is negative.
    """
    return float(_column(mu, float(x)))


def sc_interval(mu):
    """
    I_mu: the intersection over j in C of the open intervals where |a_j x + b_j| < 1. May be empty.
    """
    out = Interval()
    for j in mu.C:
        out = out.intersection(slot_interval(mu.a[j - 1], mu.b[j - 1]))
    return out


def generic_dimension(n):
    """Dimension of the span of the 3^n sc-monomials for (a, b) in general position: 2^(n-1) (n + 2)"""
    if n == 0:
        return 1
    return 2 ** (n - 1) * (n + 2)


class ScDictionary(object):
    """
    All 3^n sc-monomials for fixed (a, b), ordered lexicographically over the per-slot choice of 1, s, c.
    """
    __slots__ = ('n', 'a', 'b', 'monomials', 'domain')

    def __init__(self, a, b):
        self.a = tuple(float(x) for x in a)
        self.b = tuple(float(x) for x in b)
        self.n = len(self.a)
        if len(self.b) != self.n:
            raise DimensionMismatchException('a and b differ in length ({} vs {}).'.format(self.n, len(self.b)))
        if self.n > MAX_DICTIONARY_N:
            raise CapacityExceededException('sc dictionaries are limited to n <= {}, got {}.'.format(
                MAX_DICTIONARY_N, self.n))
        monomials = []
        for choice in itertools.product('1sc', repeat=self.n):
            S = [j + 1 for j, ch in enumerate(choice) if ch == 's']
            C = [j + 1 for j, ch in enumerate(choice) if ch == 'c']
            monomials.append(ScMonomial(S, C, self.a, self.b))
        self.monomials = tuple(monomials)
        domain = Interval()
        for a_j, b_j in zip(self.a, self.b):
            domain = domain.intersection(slot_interval(a_j, b_j))
        self.domain = domain

    def __repr__(self):
        return 'ScDictionary(n={}, a={}, b={})'.format(self.n, list(self.a), list(self.b))

    def __len__(self):
        return len(self.monomials)

    def common_interval(self, x0=None, eps=None):
        """The intersection of every I_mu, optionally intersected with the window (x0 - eps, x0 + eps)"""
        if x0 is None or eps is None:
            return self.domain
        return self.domain.intersection(Interval(x0 - eps, x0 + eps))

    def check_segment(self, lo, hi):
        """Raises DomainViolationException unless the closed segment [lo, hi] lies inside every I_mu"""
        for j, (a_j, b_j) in enumerate(zip(self.a, self.b)):
            if not slot_interval(a_j, b_j).contains_segment(lo, hi):
                raise DomainViolationException(
                    'Segment [{:.12g}, {:.12g}] leaves the domain of slot {} (|{:.12g} x + {:.12g}| < 1).'.format(
                        lo, hi, j + 1, a_j, b_j), slot=j + 1)

    def evaluation_matrix(self, xs, normalize=False):
        """
        Matrix with one column per monomial evaluated at xs.
        :return: ndarray, or (ndarray, column norms) when normalize is set
        """
        xs = np.asarray(xs, dtype=float)
        mat = np.column_stack([_column(mu, xs) for mu in self.monomials])
        if not normalize:
            return mat
        norms = np.linalg.norm(mat, axis=0)
        norms[norms == 0] = 1.0
        return mat / norms, norms

    def to_frame(self):
        rows = []
        for mu in self.monomials:
            interval = sc_interval(mu)
            rows.append([mu.label, mu.s_mask, mu.c_mask, mu.degree, interval.lo, interval.hi])
        return pd.DataFrame(rows, columns=['monomial', 'S', 'C', 'degree', 'lo', 'hi'])


def _sample_points(x0, eps, n_samples):
    if not eps > 0:
        raise InvalidInputException('Interval half width must be positive, got {}.'.format(eps))
    return np.linspace(x0 - eps, x0 + eps, n_samples)


def sc_dimension(d, x0, eps, n_samples=None, tol=DEFAULT_SC_TOL):
    """
    Numerical rank of the column-normalized n_samples x 3^n evaluation matrix on [x0 - eps, x0 + eps].
    :param d: ScDictionary
    :param n_samples: at least 3^n; defaults to max(4 * 3^n, 101)
    :return: int
    """
    if n_samples is None:
        n_samples = max(4 * len(d), 101)
    if n_samples < len(d):
        raise InvalidInputException('Need at least {} samples for {} monomials, got {}.'.format(
            len(d), len(d), n_samples))
    d.check_segment(x0 - eps, x0 + eps)
    mat, _ = d.evaluation_matrix(_sample_points(x0, eps, n_samples), normalize=True)
    sv = scipy.linalg.svd(mat, compute_uv=False)
    return numerical_rank(sv, tol)


def sc_project(h, d, x0, eps, n_samples=None):
    """
    Least-squares projection of h onto the span of the dictionary on [x0 - eps, x0 + eps].
    :param h: callable
    :return: tuple of (dict ScMonomial -> coefficient, max absolute residual over the samples)
    """
    if n_samples is None:
        n_samples = max(4 * len(d), 101)
    d.check_segment(x0 - eps, x0 + eps)
    xs = _sample_points(x0, eps, n_samples)
    y = np.array([h(x) for x in xs], dtype=float)
    mat, norms = d.evaluation_matrix(xs, normalize=True)
    sol, _, _, _ = scipy.linalg.lstsq(mat, y)
    residual = float(np.max(np.abs(mat @ sol - y)))
    coeffs = sol / norms
    return {mu: float(c) for mu, c in zip(d.monomials, coeffs)}, residual


class ScRankResult(object):
    """Outcome of an sc-rank search. rank is None when exceeded is set."""
    __slots__ = ('rank', 'exceeded', 'support', 'residual', 'subsets_checked')

    def __init__(self, rank, support, residual, subsets_checked):
        self.rank = rank
        self.exceeded = rank is None
        self.support = tuple(support)
        self.residual = residual
        self.subsets_checked = subsets_checked

    def __repr__(self):
        return 'ScRankResult(rank={}, exceeded={})'.format(self.rank, self.exceeded)

    def to_dict(self):
        return {'sc_rank': self.rank,
                'exceeded': self.exceeded,
                'support': [{'monomial': mu.label, 'a': list(mu.a), 'b': list(mu.b)} for mu in self.support],
                'residual': self.residual,
                'subsets_checked': self.subsets_checked,
                'upper_bound': True}


def _pool_columns(candidate_abs, xs, n_max):
    """Normalized columns of every candidate dictionary with numerically duplicate columns (up to sign) removed"""
    columns, monomials = [], []
    lo, hi = xs[0], xs[-1]
    for a, b in candidate_abs:
        if len(a) > n_max:
            raise InvalidInputException('Candidate a = {} is longer than n_max = {}.'.format(list(a), n_max))
        d = ScDictionary(a, b)
        try:
            d.check_segment(lo, hi)
        except DomainViolationException as e:
            logger.warning('Skipping candidate encoding a={} b={}: {}'.format(list(a), list(b), e))
            continue
        mat, _ = d.evaluation_matrix(xs, normalize=True)
        for mu, col in zip(d.monomials, mat.T):
            if any(abs(abs(np.dot(col, other)) - 1) < 1e-12 for other in columns):
                continue
            columns.append(col)
            monomials.append(mu)
    return columns, monomials


def sc_rank(h, x0, eps, n_max, candidate_abs, tol=DEFAULT_SC_TOL, n_samples=201, max_subsets=DEFAULT_MAX_SUBSETS):
    """
    Smallest r such that some r monomials drawn from the pooled candidate dictionaries reproduce h on
    [x0 - eps, x0 + eps] with max absolute residual below tol. Exhaustive over subsets, so the result is an upper
    bound on the sc-rank relative to the candidate pool.
    :param candidate_abs: list of (a, b) pairs, each of length at most n_max
    :return: ScRankResult
    """
    if n_max > MAX_SC_RANK_N:
        raise CapacityExceededException('sc-rank search is limited to n_max <= {}, got {}.'.format(
            MAX_SC_RANK_N, n_max))
    if len(candidate_abs) == 0:
        raise InvalidInputException('sc-rank search needs at least one candidate encoding.')
    xs = _sample_points(x0, eps, n_samples)
    y = np.array([h(x) for x in xs], dtype=float)
    if float(np.max(np.abs(y))) < tol:
        return ScRankResult(0, [], float(np.max(np.abs(y))), 0)
    columns, monomials = _pool_columns(candidate_abs, xs, n_max)
    if len(columns) == 0:
        raise DomainViolationException('No candidate encoding is defined on [{:.12g}, {:.12g}].'.format(
            xs[0], xs[-1]))
    mat = np.column_stack(columns)
    checked = 0
    for r in range(1, min(len(columns), 3 ** n_max) + 1):
        for subset in itertools.combinations(range(len(columns)), r):
            checked += 1
            if checked > max_subsets:
                raise CapacityExceededException('sc-rank search stopped after {} subsets at r = {}.'.format(
                    max_subsets, r))
            sub = mat[:, subset]
            sol, _, _, _ = scipy.linalg.lstsq(sub, y)
            residual = float(np.max(np.abs(sub @ sol - y)))
            if residual < tol:
                return ScRankResult(r, [monomials[i] for i in subset], residual, checked)
    return ScRankResult(None, [], np.nan, checked)


def degree_bound(p):
    """
    Degree of a polynomial given by coefficients in increasing order. Lower bound on the arcsine input redundancy
    needed to represent it.
    """
    p = [float(c) for c in p]
    while len(p) > 0 and p[-1] == 0:
        p.pop()
    if len(p) == 0:
        raise InvalidInputException('The zero polynomial has no degree.')
    return len(p) - 1


def polynomial_degree(h, x0=0.0, radius=8.0, max_degree=16, tol=1e-9, n_samples=257):
    """
    Smallest d <= max_degree such that a degree d Chebyshev least-squares fit reproduces h on
    [x0 - radius, x0 + radius] within tol relative to max|h|, or None if no such degree exists.
    """
    xs = np.linspace(x0 - radius, x0 + radius, n_samples)
    try:
        y = np.array([h(x) for x in xs], dtype=float)
    except (ValueError, ArithmeticError, DomainViolationException) as e:
        logger.warning('Target is not defined on [{}, {}]: {}'.format(xs[0], xs[-1], e))
        return None
    if not np.all(np.isfinite(y)):
        return None
    threshold = tol * max(1.0, float(np.max(np.abs(y))))
    for deg in range(max_degree + 1):
        fit = chebyshev.Chebyshev.fit(xs, y, deg)
        if float(np.max(np.abs(fit(xs) - y))) <= threshold:
            return deg
    return None


def representable_analytic(h, x0=0.0, radius=8.0, max_degree=16, tol=1e-9):
    """
    Could an arcsine-encoded circuit represent the analytic function h? Only polynomials qualify, so this tests
    whether h agrees with a polynomial of degree <= max_degree on a wide interval around x0.
    """
    return polynomial_degree(h, x0, radius, max_degree, tol) is not None
