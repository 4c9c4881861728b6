"""
Fourier rank estimation by exponential-sum identification.

A function with Fourier rank r near x0 is h(x) = sum_{k in K} alpha_k exp(2 pi i k x) with |K \ {0}| = 2r. On the
uniform grid x_m = x0 + (m - N) delta, m = 0..2N, its samples are a sum of |K| geometric sequences, so the
(N+1) x (N+1) Hankel matrix H[i, j] = h(x_{i+j}) has rank |K| whenever |K| <= N. The numerical rank gives
floor(rank / 2) = r, a shift-invariance (matrix pencil) step on the leading singular vectors gives the nodes
z = exp(2 pi i k delta), and a Vandermonde least-squares fit gives the coefficients.

Functions with infinite Fourier rank either saturate the Hankel matrix or produce nodes that leave the unit circle or
coalesce (polynomials are confluent exponential sums with the node 1). All of these are reported as exceeded.
"""
import logging

import numpy as np
import scipy.linalg

from .exceptions import InvalidInputException, AliasingException

logger = logging.getLogger('qred')

DEFAULT_N = 24
DEFAULT_RANK_TOL = 1e-8
UNIT_CIRCLE_TOL = 1e-6
NODE_GAP_TOL = 1e-4
NYQUIST_MARGIN = 0.98
ZERO_SCALE = 1e-14


class SampleSet(object):
    """
    Samples h(x0 + (m - N) delta), m = 0..2N, covering the closed interval [x0 - eps, x0 + eps] with delta = eps / N.
    """
    __slots__ = ('x0', 'delta', 'values', 'N')

    def __init__(self, x0, delta, values, N):
        if not delta > 0:
            raise InvalidInputException('Sample step must be positive, got {}.'.format(delta))
        if N < 1:
            raise InvalidInputException('Sample budget N must be at least 1, got {}.'.format(N))
        values = np.asarray(values, dtype=float).ravel()
        if len(values) < 2 * N + 1:
            raise InvalidInputException('Need {} samples for budget N = {}, got {}.'.format(2 * N + 1, N, len(values)))
        if not np.all(np.isfinite(values)):
            raise InvalidInputException('Samples contain non-finite values.')
        self.x0 = float(x0)
        self.delta = float(delta)
        self.N = int(N)
        self.values = values[:2 * N + 1]

    def __repr__(self):
        return 'SampleSet(x0={}, delta={}, N={})'.format(self.x0, self.delta, self.N)

    @classmethod
    def from_callable(cls, h, x0, eps, N=DEFAULT_N):
        delta = float(eps) / N
        xs = x0 + (np.arange(2 * N + 1) - N) * delta
        return cls(x0, delta, [h(x) for x in xs], N)

    @classmethod
    def from_values(cls, values, x0, eps, N=DEFAULT_N):
        return cls(x0, float(eps) / N, values, N)

    @property
    def x_start(self):
        return self.x0 - self.N * self.delta

    @property
    def xs(self):
        return self.x_start + np.arange(2 * self.N + 1) * self.delta


class RankReport(object):
    """
    Result of a Fourier rank estimate. fourier_rank is None when exceeded is set; reason then names the failed check
    (saturated, off_circle, coalesced or residual).
    """
    __slots__ = ('hankel_rank', 'fourier_rank', 'frequencies', 'coefficients', 'residual', 'exceeded', 'reason',
                 'singular_values', 'x0', 'delta', 'N', 'rank_tol')

    def __init__(self, hankel_rank, frequencies, coefficients, residual, exceeded, reason, singular_values,
                 x0, delta, N, rank_tol):
        self.hankel_rank = int(hankel_rank)
        self.exceeded = bool(exceeded)
        self.fourier_rank = None if self.exceeded else self.hankel_rank // 2
        self.frequencies = np.asarray(frequencies, dtype=float)
        self.coefficients = np.asarray(coefficients, dtype=complex)
        self.residual = float(residual)
        self.reason = reason
        self.singular_values = np.asarray(singular_values, dtype=float)
        self.x0 = x0
        self.delta = delta
        self.N = N
        self.rank_tol = rank_tol

    def __repr__(self):
        return 'RankReport(hankel_rank={}, fourier_rank={}, exceeded={})'.format(
            self.hankel_rank, self.fourier_rank, self.exceeded)

    @property
    def rank_estimate(self):
        """floor(hankel_rank / 2), reported even when the budget is exceeded"""
        return self.hankel_rank // 2

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for k, alpha in zip(self.frequencies, self.coefficients):
            out = out + alpha * np.exp(2j * np.pi * k * x)
        out = np.real(out)
        return float(out) if out.ndim == 0 else out

    def to_dict(self):
        return {'hankel_rank': self.hankel_rank,
                'fourier_rank': self.fourier_rank,
                'exceeded': self.exceeded,
                'reason': self.reason,
                'frequencies': self.frequencies.tolist(),
                'coefficients': [[c.real, c.imag] for c in self.coefficients],
                'residual': self.residual,
                'x0': self.x0,
                'eps': self.delta * self.N,
                'N': self.N,
                'rank_tol': self.rank_tol}


def hankel_matrix(samples):
    """(N+1) x (N+1) Hankel matrix H[i, j] = values[i + j]"""
    v = samples.values
    return scipy.linalg.hankel(v[:samples.N + 1], v[samples.N:])


def numerical_rank(singular_values, rank_tol):
    """count of singular values above rank_tol * sigma_max"""
    if len(singular_values) == 0 or singular_values[0] == 0:
        return 0
    return int(np.sum(singular_values > rank_tol * singular_values[0]))


def pencil_nodes(u, r):
    """
    Signal-pole estimation by shift invariance of the leading r left singular vectors of the Hankel matrix.
    :return: complex nodes z
    """
    ur = u[:, :r]
    phi = np.linalg.pinv(ur[:-1]) @ ur[1:]
    return scipy.linalg.eigvals(phi)


def _min_gap(z):
    if len(z) < 2:
        return np.inf
    d = np.abs(z[:, None] - z[None, :])
    d[np.diag_indices(len(z))] = np.inf
    return float(np.min(d))


def fourier_rank(h, x0=0.0, eps=0.5, N=DEFAULT_N, rank_tol=DEFAULT_RANK_TOL):
    """
    Estimates the Fourier rank of h near x0.
    :param h: callable, a SampleSet, or a sequence of at least 2N+1 samples on the grid x0 + (m - N) eps / N
    :param x0: centre
    :param eps: half width of the sampled interval
    :param N: budget; ranks up to about N/2 - 1 are resolvable
    :param rank_tol: relative singular value threshold
    :return: RankReport
    """
    if not rank_tol > 0:
        raise InvalidInputException('rank_tol must be positive, got {}.'.format(rank_tol))
    if isinstance(h, SampleSet):
        samples = h
    elif callable(h):
        if not eps > 0:
            raise InvalidInputException('Interval half width must be positive, got {}.'.format(eps))
        samples = SampleSet.from_callable(h, x0, eps, N)
    else:
        samples = SampleSet.from_values(h, x0, eps, N)
    N = samples.N
    v = samples.values
    scale = float(np.max(np.abs(v)))

    def report(hankel_rank, freqs, coeffs, residual, exceeded, reason, sv):
        return RankReport(hankel_rank, freqs, coeffs, residual, exceeded, reason, sv, samples.x0, samples.delta, N,
                          rank_tol)

    u, sv, _ = scipy.linalg.svd(hankel_matrix(samples))
    r = numerical_rank(sv, rank_tol) if scale > ZERO_SCALE else 0
    if r == 0:
        return report(0, [], [], scale, False, None, sv)
    if r == N + 1:
        logger.info('Hankel matrix saturated at budget N = {}.'.format(N))
        return report(r, [], [], np.nan, True, 'saturated', sv)

    z = pencil_nodes(u, r)
    if np.max(np.abs(np.abs(z) - 1)) > UNIT_CIRCLE_TOL:
        return report(r, [], [], np.nan, True, 'off_circle', sv)
    if _min_gap(z) < NODE_GAP_TOL:
        return report(r, [], [], np.nan, True, 'coalesced', sv)

    z = z / np.abs(z)
    k = np.angle(z) / (2 * np.pi * samples.delta)
    nyquist = 1 / (2 * samples.delta)
    if np.max(np.abs(k)) >= NYQUIST_MARGIN * nyquist:
        raise AliasingException('Recovered frequency {:.6g} is within 2% of the Nyquist bound {:.6g}; '
                                'shrink the interval or raise N.'.format(k[np.argmax(np.abs(k))], nyquist))
    vander = np.power.outer(z, np.arange(2 * N + 1)).T
    c, _, _, _ = scipy.linalg.lstsq(vander, v.astype(complex))
    residual = float(np.max(np.abs(vander @ c - v)))
    alpha = c * np.exp(-2j * np.pi * k * samples.x_start)
    order = np.argsort(k)
    if residual >= rank_tol * scale + 1e-12:
        return report(r, k[order], alpha[order], residual, True, 'residual', sv)
    return report(r, k[order], alpha[order], residual, False, None, sv)


def chi_conditioning(K, x0, eps, n_samples):
    """
    Smallest singular value of the column-normalized matrix [exp(2 pi i k x_i)] on n_samples equispaced points in the
    open interval (x0 - eps, x0 + eps). Positive for distinct k; small values flag near dependence.
    :param K: distinct real frequencies
    :return: float
    """
    K = [float(k) for k in K]
    if len(set(K)) != len(K):
        raise InvalidInputException('Frequency set contains duplicates: {}.'.format(sorted(K)))
    if len(K) == 0:
        raise InvalidInputException('Frequency set is empty.')
    if len(K) > n_samples:
        raise InvalidInputException('Need at least {} samples for {} frequencies.'.format(len(K), len(K)))
    if not eps > 0:
        raise InvalidInputException('Interval half width must be positive, got {}.'.format(eps))
    xs = x0 - eps + (np.arange(n_samples) + 0.5) * (2 * eps / n_samples)
    chi = np.exp(2j * np.pi * np.outer(xs, K))
    chi /= np.linalg.norm(chi, axis=0)
    return float(scipy.linalg.svd(chi, compute_uv=False)[-1])
