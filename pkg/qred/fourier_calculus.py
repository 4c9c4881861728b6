"""
Finite Fourier structure of expectation value functions.

For Pauli/2 input Hamiltonians the expectation value f(eta) is 1-periodic in every slot with frequencies in
{-1, 0, +1}, so f(eta) = sum_w f_hat(w) exp(2 pi i w.eta) with w in Z_3^n. More generally slot j carries the integer
eigenvalue differences D_j of its Hamiltonian. Sampling f on a grid of 2 max|D_j| + 1 points per axis and taking a
discrete Fourier transform recovers f_hat exactly.

Along an encoding line eta = a x + b the spectrum collapses to frequencies K_a = {w.a}: alpha_k is the sum of
f_hat(w) exp(2 pi i w.b) over all w with w.a = k. spread(a) = (|K_a| - 1) / 2.
"""
import logging
import itertools
import fractions

import numpy as np
import pandas as pd
import scipy.fft
from frozendict import frozendict

import tools.mathOps
from .exceptions import SpectrumException, CapacityExceededException, DimensionMismatchException
from .pqc_core import evaluate

logger = logging.getLogger('qred')

ZERO_TOL = 1e-10
SYMMETRY_TOL = 1e-8
GROUPING_TOL = 1e-9
MAX_GRID = 3 ** 8
MAX_FREQUENCY_N = 12
DEFAULT_AXIS = (-1, 0, 1)
TRIG_BASIS = ('1', 'cos', 'sin')

# per-axis change of basis from (f_hat(-1), f_hat(0), f_hat(+1)) to the (1, cos, sin) coefficients
_TO_TRIG = np.array([[0, 1, 0],
                     [1, 0, 1],
                     [-1j, 0, 1j]])
_FROM_TRIG = np.array([[0, 0.5, 0.5j],
                       [1, 0, 0],
                       [0, 0.5, -0.5j]])


def _check_axis_sets(axis_sets, n):
    if axis_sets is None:
        return (DEFAULT_AXIS,) * n
    if len(axis_sets) != n:
        raise DimensionMismatchException('Expected {} axis sets, got {}.'.format(n, len(axis_sets)))
    out = []
    for j, d in enumerate(axis_sets):
        if any(int(v) != v for v in d):
            raise SpectrumException('Axis set {} of slot {} is not integer-valued.'.format(list(d), j + 1))
        d = tuple(sorted(set(int(v) for v in d)))
        if 0 not in d or any(-v not in d for v in d):
            raise SpectrumException('Axis set {} of slot {} must contain 0 and be symmetric.'.format(list(d), j + 1))
        out.append(d)
    return tuple(out)


class MultiSpectrum(object):
    """
    Fourier coefficients f_hat(w) of a real function on the n-torus, indexed by w in the product of the axis sets.
    """
    __slots__ = ('n', 'axis_sets', 'coeffs')

    def __init__(self, axis_sets, coeffs):
        self.axis_sets = _check_axis_sets(axis_sets, len(axis_sets))
        self.n = len(self.axis_sets)
        self.coeffs = frozendict({tuple(int(x) for x in w): complex(v) for w, v in coeffs.items()})

    def __repr__(self):
        return 'MultiSpectrum(n={}, support={})'.format(self.n, len(self.support()))

    def __getitem__(self, w):
        return self.coeffs.get(tuple(w), 0j)

    def __call__(self, eta):
        """Reconstructs f at eta from the coefficients"""
        eta = np.asarray(eta, dtype=float).ravel()
        if len(eta) != self.n:
            raise DimensionMismatchException('Spectrum has {} axes, got a point of length {}.'.format(
                self.n, len(eta)))
        ws = np.array(list(self.coeffs.keys()), dtype=float).reshape(len(self.coeffs), self.n)
        vals = np.array(list(self.coeffs.values()))
        return float(np.real(np.sum(vals * np.exp(2j * np.pi * (ws @ eta)))))

    def is_numerically_zero(self, w):
        return abs(self[w]) < ZERO_TOL

    def support(self, tol=ZERO_TOL):
        """frequency vectors whose coefficient is not numerically zero"""
        return sorted(w for w, v in self.coeffs.items() if abs(v) >= tol)

    def symmetry_error(self):
        """max |f_hat(-w) - conj(f_hat(w))|"""
        return max(abs(self[tuple(-x for x in w)] - v.conjugate()) for w, v in self.coeffs.items())

    def check_symmetry(self, tol=SYMMETRY_TOL):
        err = self.symmetry_error()
        if err > tol:
            raise SpectrumException('Spectrum violates Hermitian symmetry by {:.3e}.'.format(err))

    def to_frame(self, full=False):
        """
        Spectrum table with columns w1..wn, re, im, numerically_zero. Unless full is set, numerically zero
        coefficients are dropped except at w = 0, which is always reported.
        """
        zero = (0,) * self.n
        rows = []
        for w in sorted(self.coeffs):
            v = self.coeffs[w]
            flag = abs(v) < ZERO_TOL
            if flag and not full and w != zero:
                continue
            rows.append(list(w) + [v.real, v.imag, flag])
        cols = ['w{}'.format(j + 1) for j in range(self.n)] + ['re', 'im', 'numerically_zero']
        return pd.DataFrame(rows, columns=cols)


class FrequencySet(object):
    """
    The distinct values K_a of w.a together with the frequency vectors that produce each value.
    """
    __slots__ = ('values', 'multiplicity_map', 'exact')

    def __init__(self, values, multiplicity_map, exact=False):
        self.values = tuple(values)
        self.multiplicity_map = frozendict((k, tuple(ws)) for k, ws in multiplicity_map.items())
        self.exact = exact

    def __repr__(self):
        return 'FrequencySet(|K|={}, spread={})'.format(len(self.values), self.spread)

    def __len__(self):
        return len(self.values)

    @property
    def spread(self):
        return (len(self.values) - 1) // 2

    def to_frame(self):
        return pd.DataFrame([[k, len(self.multiplicity_map[k])] for k in self.values], columns=['k', 'multiplicity'])


class UnivariateSpectrum(object):
    """h(x) = sum_k alpha_k exp(2 pi i k x)"""
    __slots__ = ('terms',)

    def __init__(self, terms):
        self.terms = frozendict({float(k): complex(v) for k, v in terms.items()})

    def __repr__(self):
        return 'UnivariateSpectrum(rank={})'.format(self.rank())

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for k, v in self.terms.items():
            out = out + v * np.exp(2j * np.pi * k * x)
        out = np.real(out)
        return float(out) if out.ndim == 0 else out

    def __getitem__(self, k):
        for key, v in self.terms.items():
            if abs(key - k) <= GROUPING_TOL:
                return v
        return 0j

    def support(self, tol=ZERO_TOL):
        return sorted(k for k, v in self.terms.items() if abs(v) >= tol)

    def rank(self, tol=ZERO_TOL):
        """half the number of nonzero frequencies other than 0"""
        return len([k for k in self.support(tol) if k != 0]) // 2

    def symmetry_error(self):
        return max([abs(self[-k] - v.conjugate()) for k, v in self.terms.items()] + [0.0])


def input_axis_sets(c):
    """Integer eigenvalue difference sets of the input Hamiltonians, ordered by slot"""
    return tuple(op.hamiltonian.integer_diffs() for op in c.input_rotations())


def extract_spectrum(c, theta=None):
    """
    Exact Fourier coefficients of eta -> evaluate(c, eta, theta) by a DFT over a grid of 2 max|D_j| + 1 points per
    slot.
    :param c: Circuit whose input Hamiltonians have integer eigenvalue differences
    :param theta: training angles
    :return: MultiSpectrum over the product of the eigenvalue difference sets
    """
    axis_sets = input_axis_sets(c)
    sizes = [2 * max(abs(v) for v in d) + 1 for d in axis_sets]
    total = int(np.prod(sizes)) if len(sizes) > 0 else 1
    if total > MAX_GRID:
        raise CapacityExceededException('Spectrum grid of {} points exceeds the limit of {}.'.format(
            total, MAX_GRID))
    values = np.empty(sizes)
    for t in itertools.product(*(range(g) for g in sizes)):
        eta = [tj / g for tj, g in zip(t, sizes)]
        values[t] = evaluate(c, eta, theta)
    spectrum_grid = scipy.fft.fftn(values) / total if len(sizes) > 0 else np.array(values, dtype=complex)
    coeffs = {}
    inside = 0.0
    for w in itertools.product(*axis_sets):
        idx = tuple(wj % g for wj, g in zip(w, sizes))
        coeffs[w] = spectrum_grid[idx]
        inside += abs(spectrum_grid[idx]) ** 2
    outside = max(float(np.sum(np.abs(spectrum_grid) ** 2)) - inside, 0.0)
    if outside > GROUPING_TOL:
        logger.warning('Spectrum carries mass {:.3e} outside the eigenvalue difference product set.'.format(outside))
    return MultiSpectrum(axis_sets, coeffs)


def _tensor_coefficients(s):
    """The spectrum as an array of shape (3,)*n indexed by w + 1"""
    if any(not set(d) <= set(DEFAULT_AXIS) for d in s.axis_sets):
        raise SpectrumException('Trigonometric form requires frequencies in {-1, 0, +1}.')
    arr = np.zeros((3,) * s.n, dtype=complex)
    for w, v in s.coeffs.items():
        arr[tuple(x + 1 for x in w)] = v
    return arr


def to_trig_form(s):
    """
    Real coefficients of f in the multilinear (1, cos, sin) basis: f(eta) = sum_tau c_tau prod_j tau_j(2 pi eta_j).
    :param s: Hermitian-symmetric MultiSpectrum over {-1, 0, 1}^n
    :return: dict mapping tuples over ('1', 'cos', 'sin') to floats
    """
    s.check_symmetry()
    arr = _tensor_coefficients(s)
    for axis in range(s.n):
        arr = np.moveaxis(np.tensordot(_TO_TRIG, arr, axes=([1], [axis])), 0, axis)
    if s.n > 0 and np.max(np.abs(arr.imag)) > SYMMETRY_TOL:
        raise SpectrumException('Trigonometric coefficients are not real ({:.3e}).'.format(np.max(np.abs(arr.imag))))
    return {tuple(TRIG_BASIS[i] for i in idx): float(arr[idx].real) for idx in np.ndindex(*arr.shape)}


def from_trig_form(n, coeffs):
    """
    Inverse of to_trig_form.
    :param n: number of axes
    :param coeffs: dict mapping tuples over ('1', 'cos', 'sin') to reals. Missing entries are zero.
    :return: MultiSpectrum over {-1, 0, 1}^n
    """
    arr = np.zeros((3,) * n, dtype=complex)
    for tau, v in coeffs.items():
        if len(tau) != n or any(t not in TRIG_BASIS for t in tau):
            raise DimensionMismatchException('Invalid trigonometric index {}.'.format(tau))
        arr[tuple(TRIG_BASIS.index(t) for t in tau)] = v
    for axis in range(n):
        arr = np.moveaxis(np.tensordot(_FROM_TRIG, arr, axes=([1], [axis])), 0, axis)
    coeffs = {tuple(i - 1 for i in idx): arr[idx] for idx in np.ndindex(*arr.shape)}
    return MultiSpectrum((DEFAULT_AXIS,) * n, coeffs)


def trig_eval(coeffs, eta):
    """Evaluates a trigonometric form at eta"""
    eta = np.asarray(eta, dtype=float)
    funcs = {'1': lambda t: 1.0, 'cos': np.cos, 'sin': np.sin}
    return float(sum(v * np.prod([funcs[t](2 * np.pi * e) for t, e in zip(tau, eta)]) for tau, v in coeffs.items()))


def frequency_set(a, axis_sets=None, tol=GROUPING_TOL):
    """
    K_a = {w.a : w in prod_j D_j}. Integer and Fraction entries of a are grouped exactly, anything else within an
    absolute tolerance.
    :param a: sequence of reals, ints or Fractions
    :param axis_sets: per-slot integer frequency sets, default {-1, 0, 1}
    :return: FrequencySet
    """
    a = list(a)
    n = len(a)
    if n > MAX_FREQUENCY_N:
        raise CapacityExceededException('Frequency enumeration is limited to n <= {}, got {}.'.format(
            MAX_FREQUENCY_N, n))
    axis_sets = _check_axis_sets(axis_sets, n)
    ws = list(itertools.product(*axis_sets))
    if tools.mathOps.is_rational_vector(a):
        ints, scale = tools.mathOps.integer_scale(a)
        groups = {}
        for w in ws:
            groups.setdefault(sum(wj * aj for wj, aj in zip(w, ints)), []).append(w)
        mult = {float(fractions.Fraction(k, scale)): groups[k] for k in sorted(groups)}
        return FrequencySet(sorted(mult), mult, exact=True)

    a_arr = np.asarray(a, dtype=float)
    dots = np.array(ws, dtype=float).reshape(len(ws), n) @ a_arr
    order = np.argsort(dots, kind='stable')
    sorted_dots = dots[order]
    groups = tools.mathOps.group_within(sorted_dots.tolist(), tol)
    mid = len(groups) // 2
    reps = [0.0] * len(groups)
    for i in range(mid + 1, len(groups)):
        reps[i] = float(np.mean(sorted_dots[groups[i]]))
        reps[len(groups) - 1 - i] = -reps[i]
    mult = {reps[i]: [ws[order[j]] for j in g] for i, g in enumerate(groups)}
    return FrequencySet(reps, mult, exact=False)


def spread(a, axis_sets=None):
    """(|K_a| - 1) / 2"""
    return frequency_set(a, axis_sets).spread


def project_univariate(s, a, b):
    """
    Restricts a multivariate spectrum to the line eta = a x + b.
    :param s: MultiSpectrum
    :param a: slopes, length n
    :param b: offsets, length n
    :return: UnivariateSpectrum with alpha_k = sum_{w.a = k} f_hat(w) exp(2 pi i w.b)
    """
    if len(a) != s.n or len(b) != s.n:
        raise DimensionMismatchException('Spectrum has {} axes but a, b have lengths {}, {}.'.format(
            s.n, len(a), len(b)))
    b = np.asarray([float(x) for x in b])
    fs = frequency_set(a, s.axis_sets)
    terms = {}
    for k in fs.values:
        terms[k] = sum(s[w] * np.exp(2j * np.pi * float(np.dot(w, b))) for w in fs.multiplicity_map[k])
    return UnivariateSpectrum(terms)
