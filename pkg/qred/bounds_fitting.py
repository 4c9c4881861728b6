"""
Input redundancy lower bounds and the variational input encoding fitter.

Bounds turn a Fourier rank or sc-rank into the smallest number of input slots that could possibly carry it. The fitters
work the other way round: for a redundancy n they search the encoding parameters (a, b) by restarted coordinate
descent, and for each candidate (a, b) solve a linear least-squares problem for the coefficients of the spectrum
(linear encoding) or of the sc-monomials (arcsine encoding). Fits happen in function space; no circuit is synthesized.
"""
import time
import logging

import numpy as np
import pandas as pd
import scipy.linalg
import scipy.optimize

import tools.mathOps
from .exceptions import InvalidInputException, CapacityExceededException, DomainViolationException
from .fourier_calculus import frequency_set, UnivariateSpectrum, MultiSpectrum, from_trig_form, DEFAULT_AXIS
from .arcsin_encoding import ScDictionary, SQRT_SLACK

logger = logging.getLogger('qred')

DEFAULT_F = 5.0
DEFAULT_RESTARTS = 8
DEFAULT_POINTS = 512
MAX_LINEAR_FIT_N = 8
MAX_ARCSIN_FIT_N = 5
GRID_POINTS = 41
MIN_STEP = 1e-10
MAX_SWEEPS = 3
CONVERGED = 1e-13
LSTSQ_COND = 1e-12


class BoundReport(object):
    """
    A lower bound on the input redundancy. lower_bound_int is None and flag is no_finite_redundancy when the rank is
    infinite; flag marks the undefined arcsine bound at rank 0.
    """
    __slots__ = ('rank_used', 'bound_kind', 'lower_bound_real', 'lower_bound_int', 'flag')

    def __init__(self, rank_used, bound_kind, lower_bound_real, lower_bound_int, flag=None):
        self.rank_used = rank_used
        self.bound_kind = bound_kind
        self.lower_bound_real = lower_bound_real
        self.lower_bound_int = lower_bound_int
        self.flag = flag

    def __repr__(self):
        return 'BoundReport({}, rank={}, bound={})'.format(self.bound_kind, self.rank_used, self.lower_bound_int)

    def to_dict(self):
        return {'rank_used': self.rank_used,
                'bound_kind': self.bound_kind,
                'lower_bound_real': self.lower_bound_real,
                'lower_bound_int': self.lower_bound_int,
                'flag': self.flag}


def _check_rank(r, what='rank'):
    if r is None or (isinstance(r, float) and np.isinf(r) and r > 0):
        return None
    if int(r) != r:
        raise InvalidInputException('{} must be an integer, got {}.'.format(what, r))
    r = int(r)
    if r < 0:
        raise InvalidInputException('{} must be nonnegative, got {}.'.format(what, r))
    return r


def _infinite(kind):
    return BoundReport(None, kind, float('inf'), None, flag='no_finite_redundancy')


def bound_linear(r):
    """
    Lower bounds for linear encoding from a Fourier rank r: log_3(r + 1) and the sharper log_3(2r + 1).
    :param r: nonnegative integer, or None / inf for infinite rank
    :return: tuple of (linear_log, linear_log_sharp) BoundReports
    """
    r = _check_rank(r)
    if r is None:
        return _infinite('linear_log'), _infinite('linear_log_sharp')
    return (BoundReport(r, 'linear_log', tools.mathOps.log_base(r + 1), tools.mathOps.ceil_log(r + 1)),
            BoundReport(r, 'linear_log_sharp', tools.mathOps.log_base(2 * r + 1), tools.mathOps.ceil_log(2 * r + 1)))


def bound_arcsin(r):
    """log_3(r) lower bound for arcsine encoding from an sc-rank r. Rank 0 gives 0 with the flag zero_rank."""
    r = _check_rank(r, 'sc-rank')
    if r is None:
        return _infinite('arcsin_log')
    if r == 0:
        return BoundReport(0, 'arcsin_log', 0.0, 0, flag='zero_rank')
    return BoundReport(r, 'arcsin_log', tools.mathOps.log_base(r), tools.mathOps.ceil_log(r))


def bound_degree(d):
    """A polynomial of degree d needs at least d arcsine-encoded slots"""
    d = _check_rank(d, 'degree')
    if d is None:
        return _infinite('arcsin_degree')
    return BoundReport(d, 'arcsin_degree', float(d), d)


class FitResult(object):
    """
    Best fit found for one redundancy n. coeffs is a UnivariateSpectrum for linear encoding and a dict mapping
    ScMonomial to float for arcsine encoding. history holds the best residual of every restart.
    """
    __slots__ = ('n', 'kind', 'a', 'b', 'coeffs', 'residual', 'history', 'holdout_residual', 'interval')

    def __init__(self, n, kind, a, b, coeffs, residual, history, holdout_residual, interval):
        self.n = n
        self.kind = kind
        self.a = tuple(float(x) for x in a)
        self.b = tuple(float(x) for x in b)
        self.coeffs = coeffs
        self.residual = float(residual)
        self.history = tuple(float(x) for x in history)
        self.holdout_residual = float(holdout_residual)
        self.interval = interval

    def __repr__(self):
        return 'FitResult({}, n={}, residual={:.3e})'.format(self.kind, self.n, self.residual)

    def __call__(self, x):
        if self.kind == 'linear':
            return self.coeffs(x)
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        d = ScDictionary(self.a, self.b)
        out = d.evaluation_matrix(xs) @ np.array([self.coeffs.get(mu, 0.0) for mu in d.monomials])
        return float(out[0]) if np.ndim(x) == 0 else out

    def witness_spectrum(self):
        """
        A MultiSpectrum over {-1, 0, 1}^n that reproduces the fit along the encoding. For linear encoding each
        alpha_k is split evenly over the w with w.a = k; for arcsine encoding the sc coefficients are the trigonometric
        form.
        """
        if self.kind == 'arcsin':
            trig = {}
            for mu, v in self.coeffs.items():
                tau = tuple('sin' if j in mu.S else 'cos' if j in mu.C else '1' for j in range(1, self.n + 1))
                trig[tau] = trig.get(tau, 0.0) + v
            return from_trig_form(self.n, trig)
        fs = frequency_set(self.a)
        b = np.asarray(self.b)
        coeffs = {}
        for k in fs.values:
            ws = fs.multiplicity_map[k]
            for w in ws:
                coeffs[w] = self.coeffs[k] * np.exp(-2j * np.pi * float(np.dot(w, b))) / len(ws)
        return MultiSpectrum((DEFAULT_AXIS,) * self.n, coeffs)

    def to_dict(self):
        if self.kind == 'linear':
            coeffs = [[k, v.real, v.imag] for k, v in sorted(self.coeffs.terms.items())]
        else:
            coeffs = [{'monomial': mu.label, 'value': v} for mu, v in self.coeffs.items()]
        return {'n': self.n,
                'kind': self.kind,
                'a': list(self.a),
                'b': list(self.b),
                'coefficients': coeffs,
                'residual': self.residual,
                'holdout_residual': self.holdout_residual,
                'history': list(self.history),
                'interval': list(self.interval)}


def fit_points(interval, n_points=DEFAULT_POINTS):
    """Equispaced fit points on the closed interval and the midpoints between them"""
    lo, hi = (float(x) for x in interval)
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise InvalidInputException('Fit interval must be finite, got [{}, {}].'.format(lo, hi))
    if not lo < hi:
        raise InvalidInputException('Fit interval [{}, {}] is empty.'.format(lo, hi))
    xs = np.linspace(lo, hi, n_points)
    return xs, (xs[:-1] + xs[1:]) / 2


def _target_values(target, xs):
    y = np.array([target(x) for x in xs], dtype=float)
    if not np.all(np.isfinite(y)):
        raise InvalidInputException('Target is not bounded on the fit interval.')
    return y


def coefficient_scale(y):
    """
    Observable norm assumed by the fitters. A circuit whose expectation value reaches the targets needs ||M|| >= max |y|,
    and every Fourier coefficient of its expectation value is bounded by ||M||.
    """
    return max(1.0, float(np.max(np.abs(y)))) if len(y) > 0 else 1.0


def _linear_model(a, xs):
    """
    Design matrix, positive frequencies and a coefficient bound per column in units of the observable norm. alpha_k
    sums one coefficient of modulus <= 1 per w with w.a = k, and the cos / sin weights are 2 Re alpha_k and
    -2 Im alpha_k.
    """
    cols = [np.ones(len(xs))]
    if len(a) == 0:
        return np.column_stack(cols), [], np.ones(1)
    fs = frequency_set(a)
    ks = [k for k in fs.values if k > 0]
    mults = [len(fs.multiplicity_map[0.0])]
    for k in ks:
        cols.append(np.cos(2 * np.pi * k * xs))
        cols.append(np.sin(2 * np.pi * k * xs))
        mults.extend([2 * len(fs.multiplicity_map[k])] * 2)
    return np.column_stack(cols), ks, np.array(mults, dtype=float)


def linear_design(a, xs):
    """
    Real design matrix [1, cos(2 pi k x), sin(2 pi k x) for k in K_a, k > 0].
    :return: tuple of (matrix, positive frequencies)
    """
    design, ks, _ = _linear_model(a, xs)
    return design, ks


def arcsin_bounds(d, norms, scale):
    """
    Coefficient bounds for the normalized sc evaluation matrix. A monomial with |S| + |C| = m collects 2^m Fourier
    coefficients of modulus <= scale.
    """
    return np.array([2.0 ** mu.degree for mu in d.monomials]) * scale * norms


def _spectrum_from_real(sol, ks):
    """alpha_0 = c_0, alpha_{+-k} = (p_k -+ i q_k) / 2"""
    terms = {0.0: complex(sol[0])}
    for i, k in enumerate(ks):
        p, q = sol[1 + 2 * i], sol[2 + 2 * i]
        terms[k] = complex(p, -q) / 2
        terms[-k] = complex(p, q) / 2
    return UnivariateSpectrum(terms)


def least_squares(design, y, bound=None):
    """
    Least-squares coefficients and the max absolute residual. With bound, coefficient i is confined to
    [-bound[i], bound[i]]; the unconstrained solution is kept when it already lies in the box.
    """
    sol, _, _, _ = scipy.linalg.lstsq(design, y, cond=LSTSQ_COND)
    if bound is not None and np.any(np.abs(sol) > bound):
        sol = scipy.optimize.lsq_linear(design, y, bounds=(-bound, bound), method='bvls').x
    return sol, float(np.max(np.abs(design @ sol - y)))


def projection_distance(values, design):
    """
    Least-squares distance oracle. lower = ||r||_2 / sqrt(m) bounds the max absolute error of every coefficient
    choice from below; upper = max |r| is attained by the least-squares solution.
    :return: tuple of (lower, upper)
    """
    values = np.asarray(values, dtype=float)
    sol, upper = least_squares(design, values)
    r = values - design @ sol
    return float(np.linalg.norm(r) / np.sqrt(len(values))), upper


def linear_projection_distance(target, interval, a, n_points=DEFAULT_POINTS):
    """Distance of the target from the span of the exponentials with frequencies in K_a"""
    xs, _ = fit_points(interval, n_points)
    return projection_distance(_target_values(target, xs), linear_design(a, xs)[0])


def _check_feasible(a, b, xs):
    for j, (a_j, b_j) in enumerate(zip(a, b)):
        if np.max(np.abs(a_j * xs + b_j)) > 1 + SQRT_SLACK:
            raise DomainViolationException('Slot {}: |{} x + {}| exceeds 1 on [{}, {}].'.format(
                j + 1, a_j, b_j, xs[0], xs[-1]), slot=j + 1)


def arcsin_projection_distance(target, interval, a, b, n_points=DEFAULT_POINTS):
    """Distance of the target from the span of the sc-monomials of (a, b)"""
    xs, _ = fit_points(interval, n_points)
    _check_feasible(a, b, xs)
    return projection_distance(_target_values(target, xs), ScDictionary(a, b).evaluation_matrix(xs, normalize=True)[0])


def coordinate_descent(objective, start, lower, upper, max_sweeps=MAX_SWEEPS, grid_points=GRID_POINTS,
                       min_step=MIN_STEP, converged=CONVERGED):
    """
    Derivative-free box-constrained minimization. Each coordinate in turn is scanned on a uniform grid, then refined
    by +-step pattern moves with halving steps.
    :return: tuple of (best point, best value)
    """
    x = np.clip(np.asarray(start, dtype=float), lower, upper)
    fx = objective(x)
    for _ in range(max_sweeps):
        if fx < converged:
            break
        before = fx
        for i in range(len(x)):
            trial = x.copy()
            for g in np.linspace(lower[i], upper[i], grid_points):
                trial[i] = g
                ft = objective(trial)
                if ft < fx:
                    x, fx = trial.copy(), ft
            step = (upper[i] - lower[i]) / (grid_points - 1) / 2
            while step > min_step and fx >= converged:
                moved = False
                for sign in (1, -1):
                    trial = x.copy()
                    trial[i] = min(max(x[i] + sign * step, lower[i]), upper[i])
                    ft = objective(trial)
                    if ft < fx:
                        x, fx, moved = trial, ft, True
                        break
                if not moved:
                    step /= 2
            if fx < converged:
                break
        if fx >= before:
            break
    return x, fx


def _restart_rngs(seed, restarts):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(restarts)]


def _best_restart(results):
    """minimum residual, lowest restart index on ties"""
    return min(range(len(results)), key=lambda i: (results[i][1], i))


def _check_n(n, cap, kind):
    if n < 0:
        raise InvalidInputException('Redundancy must be nonnegative, got {}.'.format(n))
    if n > cap:
        raise CapacityExceededException('{} fits are limited to n <= {}, got {}.'.format(kind, cap, n))


def fit_linear(target, interval, n, restarts=DEFAULT_RESTARTS, seed=0, F=DEFAULT_F, n_points=DEFAULT_POINTS,
               init=None):
    """
    Fits target on interval with n linearly encoded slots. The outer search runs over a in [-F, F]^n; for fixed a
    the Hermitian-symmetric spectrum on K_a is a real least-squares problem. The fit does not depend on b, which is
    kept at its random draw.
    :param target: callable
    :param interval: (lo, hi)
    :param init: optional starting a for the first restart
    :return: FitResult
    """
    _check_n(n, MAX_LINEAR_FIT_N, 'Linear')
    xs, mids = fit_points(interval, n_points)
    y = _target_values(target, xs)
    scale = coefficient_scale(y)
    lower, upper = np.full(n, -F), np.full(n, F)

    def objective(a):
        design, _, mults = _linear_model(a, xs)
        return least_squares(design, y, mults * scale)[1]

    results = []
    for i, rng in enumerate(_restart_rngs(seed, max(restarts, 1))):
        a0 = rng.uniform(-F, F, n)
        b0 = rng.uniform(0, 1, n)
        if i == 0 and init is not None:
            a0 = np.asarray(init, dtype=float)
        a, res = coordinate_descent(objective, a0, lower, upper)
        results.append((a, res, b0))
    best = _best_restart(results)
    a, _, b = results[best]
    design, ks, mults = _linear_model(a, xs)
    sol, residual = least_squares(design, y, mults * scale)
    spectrum = _spectrum_from_real(sol, ks)
    holdout = float(np.max(np.abs(spectrum(mids) - _target_values(target, mids))))
    logger.info('Linear fit at n = {}: residual {:.3e} (restart {}).'.format(n, residual, best))
    return FitResult(n, 'linear', a, b, spectrum, residual, [r[1] for r in results], holdout, tuple(interval))


def _endpoint_params(uv, lo, hi):
    """(u, v) = slot values at the interval ends -> (a, b)"""
    n = len(uv) // 2
    u, v = uv[:n], uv[n:]
    a = (v - u) / (hi - lo)
    return a, u - a * lo


def fit_arcsin(target, interval, n, restarts=DEFAULT_RESTARTS, seed=0, n_points=DEFAULT_POINTS, init=None):
    """
    Fits target on interval with n arcsine-encoded slots. The outer search runs over the slot values u_j, v_j in
    [-1, 1] at the two interval ends, which is exactly the set of (a, b) with |a_j x + b_j| <= 1 on the interval;
    the inner problem is least squares over the 3^n sc-monomials.
    :param init: optional starting (a, b) for the first restart
    :return: FitResult
    """
    _check_n(n, MAX_ARCSIN_FIT_N, 'Arcsine')
    xs, mids = fit_points(interval, n_points)
    lo, hi = xs[0], xs[-1]
    y = _target_values(target, xs)
    scale = coefficient_scale(y)
    lower, upper = np.full(2 * n, -1.0), np.full(2 * n, 1.0)

    def objective(uv):
        d = ScDictionary(*_endpoint_params(uv, lo, hi))
        mat, norms = d.evaluation_matrix(xs, normalize=True)
        return least_squares(mat, y, arcsin_bounds(d, norms, scale))[1]

    results = []
    for i, rng in enumerate(_restart_rngs(seed, max(restarts, 1))):
        uv0 = rng.uniform(-1, 1, 2 * n)
        if i == 0 and init is not None:
            a0, b0 = (np.asarray(v, dtype=float) for v in init)
            _check_feasible(a0, b0, xs)
            uv0 = np.concatenate([a0 * lo + b0, a0 * hi + b0])
        uv, res = coordinate_descent(objective, uv0, lower, upper)
        results.append((uv, res))
    best = _best_restart(results)
    a, b = _endpoint_params(results[best][0], lo, hi)
    d = ScDictionary(a, b)
    mat, norms = d.evaluation_matrix(xs, normalize=True)
    sol, residual = least_squares(mat, y, arcsin_bounds(d, norms, scale))
    coeffs = {mu: float(c) for mu, c in zip(d.monomials, sol / norms)}
    fit = FitResult(n, 'arcsin', a, b, coeffs, residual, [r[1] for r in results], 0.0, tuple(interval))
    fit.holdout_residual = float(np.max(np.abs(fit(mids) - _target_values(target, mids))))
    logger.info('Arcsine fit at n = {}: residual {:.3e} (restart {}).'.format(n, residual, best))
    return fit


def _padded(fit, n):
    """The fit re-expressed with n slots; the extra slots have a = b = 0 and add no new functions"""
    pad = n - fit.n
    a, b = fit.a + (0.0,) * pad, fit.b + (0.0,) * pad
    if fit.kind == 'linear':
        coeffs = fit.coeffs
    else:
        coeffs = {type(mu)(mu.S, mu.C, a, b): v for mu, v in fit.coeffs.items()}
    return FitResult(n, fit.kind, a, b, coeffs, fit.residual, fit.history, fit.holdout_residual, fit.interval)


def tightness_sweep(target, interval, n_range, kind='linear', restarts=DEFAULT_RESTARTS, seed=0, **kwargs):
    """
    Best fit residual for every redundancy in n_range. Level n starts its first restart from the level n - 1
    solution padded by a zero slot, and keeps that padded solution if the search does no better, so the residual
    column is nonincreasing.
    :return: DataFrame with columns n, best_residual, wall_ms, seed
    """
    if kind not in ('linear', 'arcsin'):
        raise InvalidInputException('Unknown encoding kind {!r}; expected linear or arcsin.'.format(kind))
    n_range = sorted(n_range)
    if len(n_range) == 0 or n_range[0] < 0:
        raise InvalidInputException('Invalid redundancy range {}.'.format(n_range))
    fitter = fit_linear if kind == 'linear' else fit_arcsin
    rows = []
    prev = None
    for n in n_range:
        start = time.perf_counter()
        init = None
        if prev is not None:
            padded = _padded(prev, n)
            init = padded.a if kind == 'linear' else (padded.a, padded.b)
        fit = fitter(target, interval, n, restarts=restarts, seed=seed, init=init, **kwargs)
        if prev is not None and fit.residual > prev.residual:
            fit = _padded(prev, n)
        wall_ms = (time.perf_counter() - start) * 1000
        rows.append([n, fit.residual, wall_ms, seed])
        prev = fit
    return pd.DataFrame(rows, columns=['n', 'best_residual', 'wall_ms', 'seed'])
